"""Outer bound, achievable region and symmetric closed forms."""

from __future__ import annotations

from dataclasses import astuple, dataclass, fields
from functools import lru_cache
from fractions import Fraction

from ..channel import ChannelParams, parse_rational, pos
from ..gf2 import ParameterError
from .polyhedra import LinearConstraint, RateRegion, canonicalize, constraint, eliminate

RATES = ("R1", "R2")
SPLIT_RATES = ("R1", "R2", "R1p", "R1c", "R2p", "R2c")
ELIMINATION_ORDER = ("R1p", "R2p", "R1c", "R2c")


def _prob(p) -> Fraction:
    p = parse_rational(p)
    if not 0 <= p <= 1:
        raise ParameterError(f"probability out of range: {p}")
    return p


def outer_constraints(params: ChannelParams, p1, p2) -> list[LinearConstraint]:
    """The six bound families, one constraint per term of each min.

    Labels: eq1a/eq1b, eq2a/eq2b, eq3a/eq3b, eq4, eq5, eq6.
    """
    p1, p2 = _prob(p1), _prob(p2)
    n11, n12, n21, n22 = params.as_tuple()
    a1 = pos(n11 - n21)  # private levels of user 1
    a2 = pos(n22 - n12)
    hi1, lo1 = max(n12, a1), min(n12, a1)
    hi2, lo2 = max(n21, a2), min(n21, a2)
    return [
        constraint({"R1": 1}, max(n11, n12), "eq1a"),
        constraint({"R1": 1}, n11 + p2 * pos(n21 - n11), "eq1b"),
        constraint({"R2": 1}, max(n22, n21), "eq2a"),
        constraint({"R2": 1}, n22 + p1 * pos(n12 - n22), "eq2b"),
        constraint({"R1": 1, "R2": 1}, max(n11, n12) + a2, "eq3a"),
        constraint({"R1": 1, "R2": 1}, max(n22, n21) + a1, "eq3b"),
        constraint({"R1": 1, "R2": 1}, hi1 + hi2 + p1 * lo1 + p2 * lo2, "eq4"),
        constraint({"R1": 2, "R2": 1}, max(n11, n12) + hi2 + a1 + p2 * lo2, "eq5"),
        constraint({"R1": 1, "R2": 2}, max(n22, n21) + hi1 + a2 + p1 * lo1, "eq6"),
    ]


def outer_region(params: ChannelParams, p1, p2, canonical: bool = True) -> RateRegion:
    region = RateRegion(RATES, tuple(outer_constraints(params, p1, p2)))
    return canonicalize(region) if canonical else region


def perfect_feedback_region(params: ChannelParams) -> RateRegion:
    """Region from the first three families only (they do not involve p)."""
    cons = [c for c in outer_constraints(params, 1, 1) if c.label[:3] in ("eq1", "eq2", "eq3")]
    return canonicalize(RateRegion(RATES, tuple(cons)))


@dataclass(frozen=True)
class SchemeConstants:
    p1c: Fraction
    s1: Fraction
    t1: Fraction
    n1: Fraction
    p2c: Fraction
    s2: Fraction
    t2: Fraction
    n2: Fraction

    def __post_init__(self):
        for f in fields(self):
            v = Fraction(getattr(self, f.name))
            if v < 0:
                raise ParameterError(f"{f.name} must be nonnegative, got {v}")
            object.__setattr__(self, f.name, v)

    def astuple(self) -> tuple[Fraction, ...]:
        return astuple(self)

    @property
    def degenerate(self) -> bool:
        return not any(self.astuple())


def scheme_constants(params: ChannelParams, p1, p2) -> SchemeConstants:
    p1, p2 = _prob(p1), _prob(p2)
    n11, n12, n21, n22 = params.as_tuple()
    a1, a2 = pos(n11 - n21), pos(n22 - n12)
    return SchemeConstants(
        p1c=a1,
        s1=max(a1, n12) + p1 * min(a1, n12),
        t1=n11 + p2 * pos(n21 - n11),
        n1=max(n11, n12),
        p2c=a2,
        s2=max(a2, n21) + p2 * min(a2, n21),
        t2=n22 + p1 * pos(n12 - n22),
        n2=max(n22, n21),
    )


def split_region(k: SchemeConstants) -> RateRegion:
    """The eight constraints on (R1p, R1c, R2p, R2c), with R_i = R_ip + R_ic as two inequalities."""
    cons = [
        constraint({"R1p": 1}, k.p1c, "R1p"),
        constraint({"R2c": 1, "R1p": 1}, k.s1, "R2c+R1p"),
        constraint({"R1": 1}, k.t1, "R1"),
        constraint({"R2c": 1, "R1": 1}, k.n1, "R2c+R1"),
        constraint({"R2p": 1}, k.p2c, "R2p"),
        constraint({"R1c": 1, "R2p": 1}, k.s2, "R1c+R2p"),
        constraint({"R2": 1}, k.t2, "R2"),
        constraint({"R1c": 1, "R2": 1}, k.n2, "R1c+R2"),
        constraint({"R1": 1, "R1p": -1, "R1c": -1}, 0, "R1=R1p+R1c"),
        constraint({"R1": -1, "R1p": 1, "R1c": 1}, 0, "R1=R1p+R1c"),
        constraint({"R2": 1, "R2p": -1, "R2c": -1}, 0, "R2=R2p+R2c"),
        constraint({"R2": -1, "R2p": 1, "R2c": 1}, 0, "R2=R2p+R2c"),
    ]
    return RateRegion(SPLIT_RATES, tuple(cons))


def origin_region() -> RateRegion:
    return RateRegion(RATES, (constraint({"R1": 1}, 0), constraint({"R2": 1}, 0)))


@lru_cache(maxsize=8192)
def inner_region(k: SchemeConstants) -> RateRegion:
    """Achievable (R1, R2) region by Fourier-Motzkin elimination of the split rates.

    Cached per constant set: many channel/probability pairs share constants.
    """
    if k.degenerate:
        return origin_region()
    return eliminate(split_region(k), ELIMINATION_ORDER)


def inner_closed_form(k: SchemeConstants) -> RateRegion:
    """The six eliminated lines written out directly."""
    cons = [
        constraint({"R1": 1}, min(k.t1, k.n1, k.p1c + k.s2)),
        constraint({"R2": 1}, min(k.t2, k.n2, k.p2c + k.s1)),
        constraint({"R1": 1, "R2": 1}, min(k.p1c + k.n2, k.p2c + k.n1)),
        constraint({"R1": 1, "R2": 1}, k.s1 + k.s2),
        constraint({"R1": 2, "R2": 1}, k.p1c + k.n1 + k.s2),
        constraint({"R1": 1, "R2": 2}, k.p2c + k.n2 + k.s1),
    ]
    return canonicalize(RateRegion(RATES, tuple(cons)))


def symmetric_params(n: int, alpha) -> ChannelParams:
    alpha = parse_rational(alpha)
    if alpha < 0:
        raise ParameterError(f"alpha must be nonnegative, got {alpha}")
    cross = alpha * n
    if cross.denominator != 1:
        raise ParameterError(f"alpha*n = {cross} is not an integer")
    return ChannelParams(n, int(cross), int(cross), n)


def sym_capacity(n: int, alpha, p) -> Fraction:
    """Symmetric capacity from the three-branch closed form."""
    symmetric_params(n, alpha)  # validates alpha*n
    alpha, p = parse_rational(alpha), _prob(p)
    half = Fraction(1, 2)
    if alpha <= half:
        per_level = min(1 - alpha / 2, 1 - (1 - p) * alpha)
    elif alpha <= 1:
        per_level = min(1 - alpha / 2, p + (1 - p) * alpha)
    else:
        per_level = min(alpha / 2, (1 - p) + p * alpha)
    return per_level * n


def perfect_feedback_sym_capacity(n: int, alpha) -> Fraction:
    alpha = parse_rational(alpha)
    return (1 - alpha / 2 if alpha <= 1 else alpha / 2) * n


def p_star(alpha) -> Fraction:
    """Smallest symmetric on-probability reaching the perfect-feedback symmetric rate."""
    alpha = parse_rational(alpha)
    if alpha < 0:
        raise ParameterError(f"alpha must be nonnegative, got {alpha}")
    if alpha <= Fraction(1, 2):
        return Fraction(1, 2)
    if alpha == 1:
        return Fraction(0)
    if alpha < 1:
        return pos(2 - 3 * alpha) / (2 - 2 * alpha)
    return pos(alpha - 2) / (2 * alpha - 2)
