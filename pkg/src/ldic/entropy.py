"""Exact entropies of state-gated GF(2)-linear images of uniform bits.

Every signal of the scheme is a sum of terms ``M @ sources``, each term
switched on only when all of its gating feedback states are 1. For a fixed
state pattern the signal is a linear map of i.i.d. uniform bits, so the
entropy of a stack of signals is the rank of the stacked map. Averaging
over state patterns gives conditional entropies in bits per symbol.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .channel import ChannelParams, FeedbackDist, pos
from .gf2 import ParameterError, mat_bits, rank_bits

Gate = tuple[str, int]  # (state slot, user index) e.g. ("cur", 2) is S2 of the current symbol


@dataclass(frozen=True)
class Term:
    matrix: np.ndarray
    gates: frozenset = frozenset()


@dataclass
class SignalSystem:
    """Named uniform sources plus named gated linear signals over them."""

    sources: dict[str, int]
    dist: FeedbackDist
    slots: tuple[str, ...] = ("cur",)
    signals: dict[str, tuple[Term, ...]] = field(default_factory=dict)
    rejections: int = 0

    def __post_init__(self):
        self._offsets = {}
        off = 0
        for name, dim in self.sources.items():
            self._offsets[name] = (off, off + dim)
            off += dim
        self.width = off
        self._cache: dict = {}

    # construction helpers

    def source(self, name: str) -> tuple[Term, ...]:
        lo, hi = self._offsets[name]
        m = np.zeros((hi - lo, self.width), dtype=np.uint8)
        m[np.arange(hi - lo), np.arange(lo, hi)] = 1
        return (Term(m),)

    def define(self, name: str, terms: Sequence[Term]) -> tuple[Term, ...]:
        terms = tuple(terms)
        rows = {t.matrix.shape[0] for t in terms}
        if len(rows) > 1:
            raise ParameterError(f"terms of {name} disagree on row count: {rows}")
        for t in terms:
            if t.matrix.shape[1] != self.width:
                raise ParameterError(f"{name}: term has {t.matrix.shape[1]} columns, expected {self.width}")
            if len(t.gates) and not {g[0] for g in t.gates} <= set(self.slots):
                raise ParameterError(f"{name}: unknown state slot in {set(t.gates)}")
        self.signals[name] = terms
        self._cache.clear()
        return terms

    # evaluation

    def patterns(self):
        """Yield (pattern, weight) with pattern mapping (slot, user) -> state bit."""
        per_slot = [list(self.dist.patterns()) for _ in self.slots]
        for combo in itertools.product(*per_slot):
            weight = Fraction(1)
            pattern = {}
            for slot, ((s1, s2), w) in zip(self.slots, combo):
                weight *= w
                pattern[(slot, 1)] = s1
                pattern[(slot, 2)] = s2
            if weight:
                yield pattern, weight

    def effective(self, name: str, pattern: Mapping[Gate, int]) -> np.ndarray:
        if name not in self.signals:
            raise ParameterError(f"unknown signal {name!r}")
        key = (name, tuple(sorted(pattern.items())))
        hit = self._cache.get(key)
        if hit is None:
            terms = self.signals[name]
            hit = np.zeros_like(terms[0].matrix) if terms else np.zeros((0, self.width), np.uint8)
            for t in terms:
                if all(pattern[g] for g in t.gates):
                    hit = hit ^ t.matrix
            self._cache[key] = hit
        return hit

    def stack(self, names: Iterable[str], pattern) -> np.ndarray:
        mats = [self.effective(n, pattern) for n in names]
        if not mats:
            return np.zeros((0, self.width), dtype=np.uint8)
        return np.vstack(mats)

    def joint_rank(self, names: Iterable[str], pattern) -> int:
        return rank_bits(self.stack(list(names), pattern))


def _names(x) -> list[str]:
    return [x] if isinstance(x, str) else list(x)


def cond_entropy(sys: SignalSystem, targets, givens=()) -> Fraction:
    """H(targets | givens, states) = E_states[rank(targets, givens) - rank(givens)]."""
    targets, givens = _names(targets), _names(givens)
    for n in targets + givens:
        if n not in sys.signals:
            raise ParameterError(f"unknown signal {n!r}")
    total = Fraction(0)
    for pattern, w in sys.patterns():
        total += w * (sys.joint_rank(targets + givens, pattern) - sys.joint_rank(givens, pattern))
    return total


def entropy(sys: SignalSystem, targets) -> Fraction:
    return cond_entropy(sys, targets, ())


def mutual_info(sys: SignalSystem, a, b, givens=()) -> Fraction:
    """I(a; b | givens, states)."""
    a, b, givens = _names(a), _names(b), _names(givens)
    return cond_entropy(sys, b, givens) - cond_entropy(sys, b, a + givens)


# the scheme's single-letter system


def _levels(params: ChannelParams) -> dict[str, int]:
    n11, n12, n21, n22 = params.as_tuple()
    return {
        "c1": n21,  # common levels of X1 = levels seen at Rx2
        "p1": pos(n11 - n21),
        "c2": n12,
        "p2": pos(n22 - n12),
    }


def _embed(q: int, start: int, count: int) -> np.ndarray:
    m = np.zeros((q, count), dtype=np.uint8)
    m[np.arange(start, start + count), np.arange(count)] = 1
    return m


def _lin(m: np.ndarray, terms: Sequence[Term]) -> list[Term]:
    return [Term(mat_bits(m, t.matrix), t.gates) for t in terms]


def _gate(terms: Sequence[Term], g: Gate) -> list[Term]:
    return [Term(t.matrix, t.gates | {g}) for t in terms]


def _plus(*groups: Sequence[Term]) -> list[Term]:
    merged: dict[frozenset, np.ndarray] = {}
    for group in groups:
        for t in group:
            merged[t.gates] = merged[t.gates] ^ t.matrix if t.gates in merged else t.matrix.copy()
    return [Term(m, g) for g, m in merged.items()]


def build_scheme_system(
    params: ChannelParams,
    dist: FeedbackDist,
    seed=0,
    prior_state: str = "shared",
    max_draws: int = 200,
) -> SignalSystem:
    """Single-letter signal system of the quantize-map-and-forward scheme.

    Fresh common bits sit on the levels of X_i that reach the other receiver,
    fresh private bits on the remaining levels of supp X_i. U_i' (last
    block's quantizer output) is an independent copy of the cross signal,
    gated by the other user's state. With ``prior_state="shared"`` that gate
    is the current symbol's state; ``"independent"`` gives U' its own
    independent state pair. X_ie is a uniformly random linear map of
    (U_1', U_2') onto supp X_i, redrawn until it is generic (see
    ``is_generic``); the number of rejected draws is kept in ``rejections``.
    """
    if prior_state not in ("shared", "independent"):
        raise ParameterError(f"prior_state must be 'shared' or 'independent', got {prior_state!r}")
    rng = seed if hasattr(seed, "integers") else np.random.default_rng(seed)
    lv = _levels(params)
    sources = {"c1": lv["c1"], "p1": lv["p1"], "c2": lv["c2"], "p2": lv["p2"], "c1'": lv["c1"], "c2'": lv["c2"]}
    slots = ("cur",) if prior_state == "shared" else ("cur", "prev")
    prev = slots[-1]
    q = params.q
    H = {k: v.bits for k, v in params.H.items()}
    supp = {1: max(params.n11, params.n21), 2: max(params.n22, params.n12)}

    for attempt in range(max_draws):
        sys = SignalSystem(dict(sources), dist, slots)
        # U1' = S2 H21 (common bits of an independent symbol), U2' likewise with S1 H12
        u1p = _gate(_lin(mat_bits(H[2, 1], _embed(q, 0, lv["c1"])), sys.source("c1'")), (prev, 2))
        u2p = _gate(_lin(mat_bits(H[1, 2], _embed(q, 0, lv["c2"])), sys.source("c2'")), (prev, 1))
        sys.define("U1p", u1p)
        sys.define("U2p", u2p)
        G = {}
        for i in (1, 2):
            g = np.zeros((q, 2 * q), dtype=np.uint8)
            g[: supp[i]] = rng.integers(0, 2, size=(supp[i], 2 * q), dtype=np.uint8)
            G[i] = g
        for i, j in ((1, 2), (2, 1)):
            xe = _plus(_lin(G[i][:, :q], u1p), _lin(G[i][:, q:], u2p))
            common = _lin(_embed(q, 0, lv[f"c{i}"]), sys.source(f"c{i}"))
            private = _lin(_embed(q, lv[f"c{i}"], lv[f"p{i}"]), sys.source(f"p{i}"))
            sys.define(f"X{i}e", xe)
            sys.define(f"X{i}c", _plus(xe, common))
            sys.define(f"X{i}", _plus(xe, common, private))
            Hji = H[j, i]
            sys.define(f"V{i}", _lin(Hji, sys.signals[f"X{i}"]))
            sys.define(f"Vt{i}", _gate(sys.signals[f"V{i}"], ("cur", j)))
            sys.define(f"Vt{i}e", _gate(_lin(Hji, xe), ("cur", j)))
            sys.define(f"Vb{i}", _plus(sys.signals[f"Vt{i}"], sys.signals[f"Vt{i}e"]))
            sys.define(f"U{i}", sys.signals[f"Vb{i}"])
        for i, j in ((1, 2), (2, 1)):
            sys.define(f"Y{i}", _plus(_lin(H[i, i], sys.signals[f"X{i}"]), _lin(H[i, j], sys.signals[f"X{j}"])))
        sys.rejections = attempt
        if is_generic(sys, params):
            return sys
    raise RuntimeError(f"no generic map found in {max_draws} draws")


def is_generic(sys: SignalSystem, params: ChannelParams) -> bool:
    """Whether the random X_e maps reach full effective rank at both receivers.

    For every state pattern and receiver i, the stack (Y_i, U_1, U_2) must
    have the largest rank its structure allows: the fresh-bit rank plus the
    dimension of (U_1', U_2'), capped by rank(U_1, U_2) plus the number of
    levels Y_i occupies.
    """
    fresh_cols = []
    for name in ("c1", "p1", "c2", "p2"):
        lo, hi = sys._offsets[name]
        fresh_cols.extend(range(lo, hi))
    fresh_cols = np.asarray(fresh_cols, dtype=np.int64)
    occupied = {1: max(params.n11, params.n12), 2: max(params.n22, params.n21)}
    for pattern, _ in sys.patterns():
        u = sys.stack(["U1", "U2"], pattern)
        up = sys.joint_rank(["U1p", "U2p"], pattern)
        ru = rank_bits(u)
        for i in (1, 2):
            full = sys.stack([f"Y{i}", "U1", "U2"], pattern)
            r_fresh = rank_bits(full[:, fresh_cols]) if fresh_cols.size else 0
            target = min(r_fresh + up, ru + occupied[i])
            if rank_bits(full) != target:
                return False
    return True


# bound evaluation


BOUND_NAMES = ("Rp", "Rjc+Rp", "R", "Rjc+R:q", "r+Rjc+R", "r")


def closed_forms(params: ChannelParams, dist: FeedbackDist) -> dict[str, Fraction]:
    """Closed forms of the six bounds for user 1 (mirror the inputs for user 2)."""
    n11, n12, n21, n22 = params.as_tuple()
    p1, p2 = dist.p1, dist.p2
    a1 = pos(n11 - n21)
    return {
        "Rp": Fraction(a1),
        "Rjc+Rp": max(a1, n12) + p1 * min(a1, n12),
        "R": n11 + p2 * pos(n21 - n11),
        "Rjc+R:q": q_weighted_terms(params, dist)["total"],
        "r+Rjc+R": max(n11, n12) + p2 * n21 + p1 * n12,
        "r": p2 * n21,
    }


def q_weighted_terms(params: ChannelParams, dist: FeedbackDist) -> dict[str, Fraction]:
    n11, n12, n21, _ = params.as_tuple()
    terms = {
        "q00": Fraction(max(n11, n12)),
        "q01": Fraction(max(n11, n12 + n21)),
        "q10": Fraction(n11 + n12),
        "q11": Fraction(max(n11, n21) + n12),
    }
    terms["total"] = sum(dist.prob(int(k[1]), int(k[2])) * v for k, v in terms.items())
    return terms


def _bound_values(sys: SignalSystem, i: int) -> dict[str, Fraction]:
    j = 3 - i
    Y = [f"Y{i}", f"U{i}", f"U{j}"]
    Up = ["U1p", "U2p"]
    Xi, Xic, Xjc = f"X{i}", f"X{i}c", f"X{j}c"
    return {
        "Rp": mutual_info(sys, [Xi], Y, [Xic, Xjc] + Up),
        "Rjc+Rp": mutual_info(sys, [Xjc, Xi], Y, [Xic] + Up),
        "R": mutual_info(sys, [Xi], Y, [Xjc] + Up),
        "Rjc+R:q": mutual_info(sys, [Xjc, Xi], Y, Up),
        "r+Rjc+R": mutual_info(sys, Up + [Xjc, Xi], Y),
        "r": entropy(sys, [f"Vb{i}"]),
    }


@dataclass(frozen=True)
class BoundEntry:
    user: int
    name: str
    computed: Fraction
    closed_form: Fraction

    @property
    def match(self) -> bool:
        return self.computed == self.closed_form


@dataclass(frozen=True)
class EntropyReport:
    entries: tuple[BoundEntry, ...]
    final: dict  # user -> {bound label: value} after plugging r and dropping dominated bounds
    rejections: int

    @property
    def all_match(self) -> bool:
        return all(e.match for e in self.entries)

    def value(self, user: int, name: str) -> Fraction:
        return next(e.computed for e in self.entries if e.user == user and e.name == name)

    def to_dict(self) -> dict:
        from .channel import format_rational as fr

        return {
            "all_match": self.all_match,
            "rejections": self.rejections,
            "entries": [
                {
                    "user": e.user,
                    "bound": e.name,
                    "computed": fr(e.computed),
                    "closed_form": fr(e.closed_form),
                    "match": e.match,
                }
                for e in self.entries
            ],
            "final": {str(u): {k: fr(v) for k, v in d.items()} for u, d in self.final.items()},
        }


def evaluate_scheme_bounds(
    params: ChannelParams, dist: FeedbackDist, seed=0, prior_state: str = "shared"
) -> EntropyReport:
    sys = build_scheme_system(params, dist, seed, prior_state)
    entries = []
    final = {}
    values = {i: _bound_values(sys, i) for i in (1, 2)}
    for i in (1, 2):
        pi, di = (params, dist) if i == 1 else (params.mirrored(), dist.mirrored())
        cf = closed_forms(pi, di)
        for name in BOUND_NAMES:
            entries.append(BoundEntry(i, name, values[i][name], cf[name]))
    for i, j in ((1, 2), (2, 1)):
        v = values[i]
        # plug r_i = H(Vb_i), r_j = H(Vb_j) into the joint bound
        sum_bound = v["r+Rjc+R"] - values[1]["r"] - values[2]["r"]
        final[i] = {
            f"R{i}p": v["Rp"],
            f"R{j}c+R{i}p": v["Rjc+Rp"],
            f"R{i}": v["R"],
            f"R{j}c+R{i}": min(v["Rjc+R:q"], sum_bound),
        }
    return EntropyReport(tuple(entries), final, sys.rejections)


@dataclass(frozen=True)
class DominanceTerm:
    user: int
    pattern: str
    computed: Fraction
    closed_form: Fraction
    baseline: Fraction

    @property
    def holds(self) -> bool:
        return self.computed >= self.baseline


@dataclass(frozen=True)
class DominanceReport:
    terms: tuple[DominanceTerm, ...]
    weighted: dict  # user -> (q-weighted bound, plain bound)

    @property
    def holds(self) -> bool:
        return all(t.holds for t in self.terms) and all(a >= b for a, b in self.weighted.values())

    @property
    def closed_forms_match(self) -> bool:
        return all(t.computed == t.closed_form for t in self.terms)


def verify_appendix_a(params: ChannelParams, dist: FeedbackDist, seed=0) -> DominanceReport:
    """Term-by-term check that the state-weighted sum bound dominates max(n_ii, n_ij).

    Each term is the rank of (Y_i, U_i, U_j) given (U_1', U_2') under one
    fixed state pattern; the baseline is max(n_ii, n_ij).
    """
    sys = build_scheme_system(params, dist, seed)
    terms = []
    weighted = {}
    for i, j in ((1, 2), (2, 1)):
        pi, di = (params, dist) if i == 1 else (params.mirrored(), dist.mirrored())
        cf = q_weighted_terms(pi, di)
        baseline = Fraction(max(pi.n11, pi.n12))
        Y = [f"Y{i}", f"U{i}", f"U{j}"]
        total = Fraction(0)
        for s1 in (0, 1):
            for s2 in (0, 1):
                pattern = {("cur", 1): s1, ("cur", 2): s2}
                val = Fraction(sys.joint_rank(Y + ["U1p", "U2p"], pattern) - sys.joint_rank(["U1p", "U2p"], pattern))
                # label the pattern from user i's point of view (own state first)
                own, other = (s1, s2) if i == 1 else (s2, s1)
                label = f"q{own}{other}"
                terms.append(DominanceTerm(i, label, val, cf[label], baseline))
                total += dist.prob(s1, s2) * val
        weighted[i] = (total, baseline)
    return DominanceReport(tuple(terms), weighted)
