"""Grid-wide checks of the capacity results, shared by the CLI and the tests."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .channel import ChannelParams, FeedbackDist, format_rational
from .entropy import evaluate_scheme_bounds, verify_appendix_a
from .regions import (
    inner_region,
    outer_constraints,
    outer_region,
    p_star,
    perfect_feedback_region,
    region_equal,
    scheme_constants,
    sym_capacity,
    symmetric_params,
    symmetric_rate,
)
from .regions.polyhedra import RateRegion, is_redundant

DEFAULT_PGRID = tuple(Fraction(k, 4) for k in range(5))
HALF = Fraction(1, 2)


@dataclass
class VerifyReport:
    suite: str
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {"suite": self.suite, "passed": self.passed, "checked": self.checked, "failures": self.failures}


def channel_grid(nmax: int):
    for ns in itertools.product(range(nmax + 1), repeat=4):
        yield ChannelParams(*ns)


def _fmt_point(pt) -> dict:
    return {k: format_rational(v) for k, v in pt.items()} if pt else None


def region_equality_grid(nmax: int = 4, pgrid=DEFAULT_PGRID) -> VerifyReport:
    """The eliminated achievable region equals the outer bound at every grid point."""
    rep = VerifyReport("theorem1-grid")
    for params in channel_grid(nmax):
        for p1, p2 in itertools.product(pgrid, repeat=2):
            rep.checked += 1
            eq = region_equal(inner_region(scheme_constants(params, p1, p2)), outer_region(params, p1, p2))
            if not eq.equal:
                rep.failures.append(
                    {
                        "n": list(params.as_tuple()),
                        "p1": format_rational(p1),
                        "p2": format_rational(p2),
                        "side": eq.side,
                        "witness": _fmt_point(eq.witness),
                    }
                )
    return rep


def constant_inequality(nmax: int = 4, pgrid=DEFAULT_PGRID) -> VerifyReport:
    """t_i <= p_ic + s_j for both users."""
    rep = VerifyReport("fact1")
    for params in channel_grid(nmax):
        for p1, p2 in itertools.product(pgrid, repeat=2):
            k = scheme_constants(params, p1, p2)
            rep.checked += 1
            for user, lhs, rhs in ((1, k.t1, k.p1c + k.s2), (2, k.t2, k.p2c + k.s1)):
                if lhs > rhs:
                    rep.failures.append(
                        {
                            "n": list(params.as_tuple()),
                            "p1": format_rational(p1),
                            "p2": format_rational(p2),
                            "user": user,
                            "t": format_rational(lhs),
                            "p+s": format_rational(rhs),
                        }
                    )
    return rep


def perfect_feedback_collapse(nmax: int = 4) -> VerifyReport:
    """With both links always on, the three p-dependent families are implied by the rest."""
    rep = VerifyReport("perfect-feedback-collapse")
    for params in channel_grid(nmax):
        cons = outer_constraints(params, 1, 1)
        base = RateRegion(("R1", "R2"), tuple(c for c in cons if c.label[:3] in ("eq1", "eq2", "eq3")))
        for c in cons:
            if c.label in ("eq4", "eq5", "eq6"):
                rep.checked += 1
                if not is_redundant(base, c):
                    rep.failures.append({"n": list(params.as_tuple()), "constraint": c.label, "text": str(c)})
        if region_equal(outer_region(params, 1, 1), perfect_feedback_region(params)).equal is False:
            rep.failures.append({"n": list(params.as_tuple()), "constraint": "region"})
    return rep


def matched_joints(p1=HALF, p2=HALF) -> dict[str, FeedbackDist]:
    """Independent, maximally correlated and maximally anti-correlated laws with the given marginals."""
    p1, p2 = Fraction(p1), Fraction(p2)
    hi = min(p1, p2)
    lo = max(Fraction(0), p1 + p2 - 1)
    return {
        "independent": FeedbackDist.independent(p1, p2),
        "correlated": FeedbackDist(1 - p1 - p2 + hi, p2 - hi, p1 - hi, hi),
        "anticorrelated": FeedbackDist(1 - p1 - p2 + lo, p2 - lo, p1 - lo, lo),
    }


def entropy_bounds(nmax: int = 4, joints=None, seed: int = 0) -> VerifyReport:
    """Rank-computed bounds match the closed forms; final sets agree across joints."""
    joints = matched_joints() if joints is None else joints
    rep = VerifyReport("entropy-bounds")
    for params in channel_grid(nmax):
        finals = {}
        for name, dist in joints.items():
            rep.checked += 1
            er = evaluate_scheme_bounds(params, dist, seed)
            for e in er.entries:
                if not e.match:
                    rep.failures.append(
                        {
                            "n": list(params.as_tuple()),
                            "joint": name,
                            "user": e.user,
                            "bound": e.name,
                            "computed": format_rational(e.computed),
                            "closed_form": format_rational(e.closed_form),
                        }
                    )
            finals[name] = er.final
        if len({repr(sorted((u, sorted(d.items())) for u, d in f.items())) for f in finals.values()}) > 1:
            rep.failures.append({"n": list(params.as_tuple()), "final_sets_differ": list(finals)})
    return rep


def dominance_suite(nmax: int = 4, joints=None, seed: int = 0) -> VerifyReport:
    """Term-by-term dominance of the state-weighted bound, plus the entropy-bounds checks."""
    joints = matched_joints() if joints is None else joints
    rep = entropy_bounds(nmax, joints, seed)
    rep.suite = "appendix-a"
    for params in channel_grid(nmax):
        for name, dist in joints.items():
            dom = verify_appendix_a(params, dist, seed)
            rep.checked += 1
            for t in dom.terms:
                if not t.holds or t.computed != t.closed_form:
                    rep.failures.append(
                        {
                            "n": list(params.as_tuple()),
                            "joint": name,
                            "user": t.user,
                            "term": t.pattern,
                            "computed": format_rational(t.computed),
                            "closed_form": format_rational(t.closed_form),
                            "baseline": format_rational(t.baseline),
                        }
                    )
            for user, (weighted, plain) in dom.weighted.items():
                if weighted < plain:
                    rep.failures.append({"n": list(params.as_tuple()), "joint": name, "user": user, "weighted": "below"})
    return rep


def symmetric_closed_forms(n: int = 12, pgrid=DEFAULT_PGRID, alphas=None) -> VerifyReport:
    """Closed-form symmetric capacity equals the region's diagonal corner; p* <= 1/2.

    Default alphas: every k/n from 1/6 to 3.
    """
    rep = VerifyReport("symmetric")
    if alphas is None:
        alphas = [Fraction(k, n) for k in range(1, 3 * n + 1) if Fraction(k, n) >= Fraction(1, 6)]
    for alpha in alphas:
        params = symmetric_params(n, alpha)
        for p in pgrid:
            rep.checked += 1
            corner = symmetric_rate(outer_region(params, p, p))
            closed = sym_capacity(n, alpha, p)
            if corner != closed:
                rep.failures.append(
                    {"alpha": format_rational(alpha), "p": format_rational(p), "corner": format_rational(corner), "closed": format_rational(closed)}
                )
        ps = p_star(alpha)
        if ps > HALF:
            rep.failures.append({"alpha": format_rational(alpha), "p_star": format_rational(ps)})
    return rep


SUITES = {
    "theorem1-grid": region_equality_grid,
    "fact1": constant_inequality,
    "appendix-a": dominance_suite,
    "entropy-bounds": entropy_bounds,
}
