"""Exact rational polyhedra over named, implicitly nonnegative variables."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from typing import Iterable, Mapping

from ..channel import format_rational, parse_rational
from ..gf2 import ParameterError
from . import lp


class UnboundedRegionError(ValueError):
    pass


@dataclass(frozen=True)
class LinearConstraint:
    """sum_k coeffs[k] * var_k <= bound, with zero coefficients dropped."""

    coeffs: tuple[tuple[str, Fraction], ...]
    bound: Fraction
    label: str = field(default="", compare=False)

    def __post_init__(self):
        items = self.coeffs.items() if isinstance(self.coeffs, Mapping) else self.coeffs
        merged: dict[str, Fraction] = {}
        for name, v in items:
            merged[name] = merged.get(name, Fraction(0)) + parse_rational(v)
        object.__setattr__(
            self, "coeffs", tuple(sorted((k, v) for k, v in merged.items() if v != 0))
        )
        object.__setattr__(self, "bound", parse_rational(self.bound))

    def coeff(self, name: str) -> Fraction:
        for k, v in self.coeffs:
            if k == name:
                return v
        return Fraction(0)

    @property
    def degenerate(self) -> bool:
        """True for the variable-free constraint 0 <= bound."""
        return not self.coeffs

    def lhs(self, point: Mapping[str, Fraction]) -> Fraction:
        return sum((v * Fraction(point.get(k, 0)) for k, v in self.coeffs), Fraction(0))

    def satisfied(self, point: Mapping[str, Fraction]) -> bool:
        return self.lhs(point) <= self.bound

    def normalized(self) -> LinearConstraint:
        """Positive rescaling to coprime integer coefficients (same halfspace)."""
        if not self.coeffs:
            return LinearConstraint((), Fraction(self.bound > 0) - Fraction(self.bound < 0), self.label)
        den = math.lcm(*(v.denominator for _, v in self.coeffs))
        nums = [int(v * den) for _, v in self.coeffs]
        g = math.gcd(*nums)
        scale = Fraction(den, g)
        return LinearConstraint(
            tuple((k, v * scale) for k, v in self.coeffs), self.bound * scale, self.label
        )

    def row(self, variables: Iterable[str]) -> list[Fraction]:
        d = dict(self.coeffs)
        return [d.get(v, Fraction(0)) for v in variables]

    def __str__(self) -> str:
        parts = []
        for k, v in self.coeffs:
            mag = abs(v)
            term = k if mag == 1 else f"{format_rational(mag)}{k}"
            if not parts:
                parts.append(term if v > 0 else f"-{term}")
            else:
                parts.append(f"+ {term}" if v > 0 else f"- {term}")
        lhs = " ".join(parts) if parts else "0"
        return f"{lhs} <= {format_rational(self.bound)}"

    def to_dict(self) -> dict:
        return {"coeffs": {k: format_rational(v) for k, v in self.coeffs}, "bound": format_rational(self.bound)}


def constraint(coeffs: Mapping[str, object], bound, label: str = "") -> LinearConstraint:
    return LinearConstraint(tuple(coeffs.items()), bound, label)


@dataclass(frozen=True)
class RateRegion:
    """{x >= 0 : every constraint holds} over the ordered ``variables``."""

    variables: tuple[str, ...]
    constraints: tuple[LinearConstraint, ...]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        known = set(self.variables)
        for c in self.constraints:
            extra = {k for k, _ in c.coeffs} - known
            if extra:
                raise ParameterError(f"constraint {c} uses unknown variables {sorted(extra)}")

    def matrix(self, constraints=None) -> tuple[list[list[Fraction]], list[Fraction]]:
        cons = self.constraints if constraints is None else constraints
        return [c.row(self.variables) for c in cons], [c.bound for c in cons]

    def contains(self, point: Mapping[str, object]) -> bool:
        pt = {k: parse_rational(v) for k, v in point.items()}
        if any(pt.get(v, 0) < 0 for v in self.variables):
            return False
        return all(c.satisfied(pt) for c in self.constraints)

    def maximize(self, objective: Mapping[str, object], constraints=None) -> lp.LPResult:
        A, b = self.matrix(constraints)
        c = [parse_rational(objective.get(v, 0)) for v in self.variables]
        return lp.maximize(c, A, b)

    def is_empty(self) -> bool:
        A, b = self.matrix()
        return lp.feasible_point(A, b, len(self.variables)) is None

    def point(self, x) -> dict[str, Fraction]:
        return dict(zip(self.variables, x))

    def canonical(self) -> RateRegion:
        return canonicalize(self)

    def with_constraints(self, constraints) -> RateRegion:
        return RateRegion(self.variables, tuple(constraints))

    def tightened(self, index: int, amount) -> RateRegion:
        cons = list(self.constraints)
        c = cons[index]
        cons[index] = LinearConstraint(c.coeffs, c.bound - parse_rational(amount), c.label)
        return self.with_constraints(cons)

    def __str__(self) -> str:
        return "\n".join(str(c) for c in self.constraints) or "(nonnegative orthant)"

    def to_dict(self, with_vertices: bool = True) -> dict:
        out = {
            "variables": list(self.variables),
            "constraints": [c.to_dict() for c in self.constraints],
        }
        if with_vertices and len(self.variables) == 2:
            out["vertices"] = [[format_rational(a), format_rational(b)] for a, b in vertices(self)]
        return out

    @classmethod
    def from_dict(cls, data: Mapping) -> RateRegion:
        cons = [
            LinearConstraint(tuple(c["coeffs"].items()), c["bound"]) for c in data["constraints"]
        ]
        return cls(tuple(data["variables"]), tuple(cons))


_INFEASIBLE = LinearConstraint((), -1, "infeasible")


def canonicalize(region: RateRegion) -> RateRegion:
    """Drop every constraint implied by the rest, certified by exact LP.

    Constraints are visited in order and each is tested against the ones
    still kept, so the feasible set never changes. An empty region collapses
    to the single constraint ``0 <= -1``.
    """
    best: dict[tuple, LinearConstraint] = {}
    for c in region.constraints:
        c = c.normalized()
        if c.degenerate:
            if c.bound < 0:
                return region.with_constraints([_INFEASIBLE])
            continue
        prev = best.get(c.coeffs)
        if prev is None or c.bound < prev.bound:
            best[c.coeffs] = c
    cons = list(best.values())
    # cheap pass: on the nonnegative orthant a.x <= b implies a'.x <= b' when a' <= a and b <= b'
    pruned = []
    for i, c in enumerate(cons):
        dominated = False
        for j, d in enumerate(cons):
            if i == j or d.bound > c.bound:
                continue
            if _dominates(d, c, region.variables):
                dominated = True
                break
        if not dominated:
            pruned.append(c)
    cons = pruned
    A, b = region.matrix(cons)
    if lp.feasible_point(A, b, len(region.variables)) is None:
        return region.with_constraints([_INFEASIBLE])
    kept = list(range(len(cons)))
    for i in range(len(cons)):
        others = [k for k in kept if k != i]
        res = lp.maximize(A[i], [A[k] for k in others], [b[k] for k in others])
        if res.status == lp.OPTIMAL and res.value <= b[i]:
            kept.remove(i)
    return region.with_constraints([cons[k] for k in kept])


def _dominates(d: LinearConstraint, c: LinearConstraint, variables) -> bool:
    """True when d's coefficients are all >= c's (so d implies c if d.bound <= c.bound)."""
    return all(dv >= cv for dv, cv in zip(d.row(variables), c.row(variables)))


def is_redundant(region: RateRegion, c: LinearConstraint) -> bool:
    """Whether ``c`` holds on all of ``region`` (exact LP certificate)."""
    res = region.maximize(dict(c.coeffs))
    if res.status == lp.INFEASIBLE:
        return True
    return res.status == lp.OPTIMAL and res.value <= c.bound


def fourier_motzkin(region: RateRegion, var: str, canonical: bool = True) -> RateRegion:
    """Project ``region`` onto the remaining variables by eliminating ``var``."""
    if var not in region.variables:
        raise ParameterError(f"{var!r} is not a variable of this region")
    rest = tuple(v for v in region.variables if v != var)
    cons = list(region.constraints) + [LinearConstraint(((var, -1),), 0, f"{var}>=0")]
    upper, lower, free = [], [], []
    for c in cons:
        a = c.coeff(var)
        (upper if a > 0 else lower if a < 0 else free).append(c)
    out = list(free)
    for u in upper:
        au = u.coeff(var)
        for lo in lower:
            al = -lo.coeff(var)
            merged: dict[str, Fraction] = {}
            for k, v in u.coeffs:
                if k != var:
                    merged[k] = merged.get(k, Fraction(0)) + v / au
            for k, v in lo.coeffs:
                if k != var:
                    merged[k] = merged.get(k, Fraction(0)) + v / al
            out.append(LinearConstraint(tuple(merged.items()), u.bound / au + lo.bound / al))
    projected = RateRegion(rest, tuple(out))
    return canonicalize(projected) if canonical else projected


def eliminate(region: RateRegion, names: Iterable[str]) -> RateRegion:
    for name in names:
        region = fourier_motzkin(region, name)
    return region


@dataclass(frozen=True)
class EqualityReport:
    equal: bool
    witness: dict[str, Fraction] | None = None
    # "a_not_b" when the witness lies in a but not b, "b_not_a" otherwise
    side: str | None = None
    violated: LinearConstraint | None = None

    def __bool__(self) -> bool:
        return self.equal


def _escape_point(region: RateRegion, c: LinearConstraint) -> dict[str, Fraction] | None:
    """A point of ``region`` violating ``c``, or None if ``c`` is implied."""
    res = region.maximize(dict(c.coeffs))
    if res.status == lp.INFEASIBLE:
        return None
    if res.status == lp.OPTIMAL:
        return region.point(res.x) if res.value > c.bound else None
    x = region.point(res.x)
    ray = region.point(res.ray)
    slope = c.lhs(ray)
    t = max(Fraction(0), (c.bound - c.lhs(x)) / slope) + 1
    return {k: x[k] + t * ray[k] for k in region.variables}


def region_equal(a: RateRegion, b: RateRegion) -> EqualityReport:
    """Exact set equality; on failure returns a rational point in exactly one region."""
    if set(a.variables) != set(b.variables):
        raise ParameterError(f"variable sets differ: {a.variables} vs {b.variables}")
    for first, second, side in ((a, b, "a_not_b"), (b, a, "b_not_a")):
        if second.is_empty():
            continue
        if first.is_empty():
            A, bb = second.matrix()
            x = lp.feasible_point(A, bb, len(second.variables))
            return EqualityReport(False, second.point(x), "b_not_a" if side == "a_not_b" else "a_not_b")
        for c in first.constraints:
            pt = _escape_point(second, c)
            if pt is not None:
                return EqualityReport(False, pt, "b_not_a" if side == "a_not_b" else "a_not_b", c)
    return EqualityReport(True)


def region_subset(a: RateRegion, b: RateRegion) -> bool:
    """a is contained in b."""
    return all(_escape_point(a, c) is None for c in b.constraints)


def vertices(region: RateRegion) -> list[tuple[Fraction, Fraction]]:
    """Vertices of a bounded 2-d region, counter-clockwise from the lowest-left one."""
    if len(region.variables) != 2:
        raise ParameterError("vertex enumeration is only implemented for two variables")
    if region.is_empty():
        return []
    for v in region.variables:
        if region.maximize({v: 1}).status == lp.UNBOUNDED:
            raise UnboundedRegionError(f"region is unbounded in {v}")
    x, y = region.variables
    lines = [(c.coeff(x), c.coeff(y), c.bound) for c in region.constraints if not c.degenerate]
    lines += [(Fraction(1), Fraction(0), Fraction(0)), (Fraction(0), Fraction(1), Fraction(0))]
    pts = set()
    for i in range(len(lines)):
        a1, b1, c1 = lines[i]
        for j in range(i + 1, len(lines)):
            a2, b2, c2 = lines[j]
            det = a1 * b2 - a2 * b1
            if det == 0:
                continue
            px = (c1 * b2 - c2 * b1) / det
            py = (a1 * c2 - a2 * c1) / det
            if region.contains({x: px, y: py}):
                pts.add((px, py))
    pts = sorted(pts)
    if len(pts) <= 2:
        return pts
    cx = sum(p[0] for p in pts) / len(pts)
    cy = sum(p[1] for p in pts) / len(pts)

    def half(p):
        dx, dy = p[0] - cx, p[1] - cy
        return 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1

    def cmp(p, q):
        hp, hq = half(p), half(q)
        if hp != hq:
            return hp - hq
        cross = (p[0] - cx) * (q[1] - cy) - (p[1] - cy) * (q[0] - cx)
        return -1 if cross > 0 else (1 if cross < 0 else 0)

    ordered = sorted(pts, key=cmp_to_key(cmp))
    start = ordered.index(min(pts))
    return ordered[start:] + ordered[:start]


def symmetric_rate(region: RateRegion) -> Fraction | None:
    """max R with (R, R) in a two-variable region, or None if the diagonal misses it."""
    if len(region.variables) != 2:
        raise ParameterError("symmetric rate needs a two-variable region")
    x, y = region.variables
    hi, lo = None, Fraction(0)
    for c in region.constraints:
        s = c.coeff(x) + c.coeff(y)
        if s > 0:
            v = c.bound / s
            hi = v if hi is None or v < hi else hi
        elif s < 0:
            lo = max(lo, c.bound / s)
        elif c.bound < 0:
            return None
    if hi is None:
        raise UnboundedRegionError("region is unbounded along the diagonal")
    return hi if hi >= lo else None
