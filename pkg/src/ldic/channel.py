"""Linear deterministic interference channel with intermittent passive feedback."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from pathlib import Path

import numpy as np

from .gf2 import Gf2Matrix, Gf2Vector, ParameterError, shift_channel_matrix

Rational = Fraction


def parse_rational(value) -> Fraction:
    """Exact rational from an int, Fraction, or "a/b" / decimal string.

    Binary floats are rejected: ``0.1`` has no exact decimal meaning once it is
    a float, so callers must pass ``"0.1"`` or ``"1/10"``.
    """
    if isinstance(value, bool):
        raise ParameterError(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParameterError(f"not a rational: {value!r}") from exc
    raise ParameterError(f"expected an exact rational (int, Fraction or string), got {type(value).__name__}")


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def pos(x):
    """(x)^+"""
    return x if x > 0 else 0 * x


@dataclass(frozen=True)
class ChannelParams:
    n11: int
    n12: int
    n21: int
    n22: int

    def __post_init__(self):
        for name in ("n11", "n12", "n21", "n22"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 0:
                raise ParameterError(f"{name} must be a nonnegative integer, got {v!r}")
            object.__setattr__(self, name, int(v))

    @property
    def q(self) -> int:
        return max(self.n11, self.n12, self.n21, self.n22)

    def n(self, i: int, j: int) -> int:
        return getattr(self, f"n{i}{j}")

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.n11, self.n12, self.n21, self.n22)

    @cached_property
    def H(self) -> dict[tuple[int, int], Gf2Matrix]:
        """Transfer matrices keyed by (receiver, transmitter)."""
        q = self.q
        return {(i, j): shift_channel_matrix(q, self.n(i, j)) for i in (1, 2) for j in (1, 2)}

    def mirrored(self) -> ChannelParams:
        """Swap the roles of the two users."""
        return ChannelParams(self.n22, self.n21, self.n12, self.n11)


@dataclass(frozen=True)
class FeedbackDist:
    """Joint law of the feedback states, q_ab = P(S1 = a, S2 = b)."""

    q00: Fraction
    q01: Fraction
    q10: Fraction
    q11: Fraction

    def __post_init__(self):
        for name in ("q00", "q01", "q10", "q11"):
            v = parse_rational(getattr(self, name))
            if v < 0:
                raise ParameterError(f"{name} must be nonnegative, got {v}")
            object.__setattr__(self, name, v)
        total = self.q00 + self.q01 + self.q10 + self.q11
        if total != 1:
            raise ParameterError(f"state probabilities must sum to 1, got {total}")

    @property
    def p1(self) -> Fraction:
        return self.q10 + self.q11

    @property
    def p2(self) -> Fraction:
        return self.q01 + self.q11

    def prob(self, s1: int, s2: int) -> Fraction:
        return getattr(self, f"q{s1}{s2}")

    def patterns(self):
        """Yield ((s1, s2), probability) for the four state patterns."""
        for s1 in (0, 1):
            for s2 in (0, 1):
                yield (s1, s2), self.prob(s1, s2)

    @classmethod
    def independent(cls, p1, p2) -> FeedbackDist:
        p1, p2 = parse_rational(p1), parse_rational(p2)
        return cls((1 - p1) * (1 - p2), (1 - p1) * p2, p1 * (1 - p2), p1 * p2)

    @classmethod
    def correlated(cls, p) -> FeedbackDist:
        """S1 == S2 always."""
        p = parse_rational(p)
        return cls(1 - p, 0, 0, p)

    @classmethod
    def anticorrelated(cls, p1, p2) -> FeedbackDist:
        """Both links are never on together (needs p1 + p2 <= 1)."""
        p1, p2 = parse_rational(p1), parse_rational(p2)
        return cls(1 - p1 - p2, p2, p1, 0)

    def mirrored(self) -> FeedbackDist:
        return FeedbackDist(self.q00, self.q10, self.q01, self.q11)


def load_channel_file(path) -> tuple[ChannelParams, FeedbackDist]:
    """Read a channel parameter JSON file (four exponents, four state probabilities)."""
    data = json.loads(Path(path).read_text())
    return channel_from_dict(data)


def channel_from_dict(data: dict) -> tuple[ChannelParams, FeedbackDist]:
    try:
        params = ChannelParams(*(data[k] for k in ("n11", "n12", "n21", "n22")))
        dist = FeedbackDist(*(parse_rational(data[k]) for k in ("q00", "q01", "q10", "q11")))
    except KeyError as exc:
        raise ParameterError(f"missing key {exc.args[0]!r} in channel description") from exc
    return params, dist


def channel_to_dict(params: ChannelParams, dist: FeedbackDist) -> dict:
    out = {k: getattr(params, k) for k in ("n11", "n12", "n21", "n22")}
    out.update({k: format_rational(getattr(dist, k)) for k in ("q00", "q01", "q10", "q11")})
    return out


# forward channel


def _check_len(x: Gf2Vector, q: int, name: str) -> None:
    if len(x) != q:
        raise ParameterError(f"{name} has length {len(x)}, expected q={q}")


def cross_signals(x1: Gf2Vector, x2: Gf2Vector, params: ChannelParams) -> tuple[Gf2Vector, Gf2Vector]:
    """V1 = H21 x1 (seen at Rx2) and V2 = H12 x2 (seen at Rx1)."""
    q = params.q
    _check_len(x1, q, "x1")
    _check_len(x2, q, "x2")
    return params.H[2, 1] @ x1, params.H[1, 2] @ x2


def transmit(x1: Gf2Vector, x2: Gf2Vector, params: ChannelParams) -> tuple[Gf2Vector, Gf2Vector]:
    q = params.q
    _check_len(x1, q, "x1")
    _check_len(x2, q, "x2")
    H = params.H
    y1 = H[1, 1] @ x1 + H[1, 2] @ x2
    y2 = H[2, 2] @ x2 + H[2, 1] @ x1
    return y1, y2


def transmit_block(x1: np.ndarray, x2: np.ndarray, params: ChannelParams) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised ``transmit`` over rows of (N, q) bit arrays."""
    q = params.q
    x1 = np.asarray(x1, dtype=np.uint8)
    x2 = np.asarray(x2, dtype=np.uint8)
    if x1.shape != x2.shape or x1.ndim != 2 or x1.shape[1] != q:
        raise ParameterError(f"expected two (N, {q}) arrays, got {x1.shape} and {x2.shape}")
    H = {k: v.bits for k, v in params.H.items()}
    y1 = (x1 @ H[1, 1].T + x2 @ H[1, 2].T) & 1
    y2 = (x2 @ H[2, 2].T + x1 @ H[2, 1].T) & 1
    return y1.astype(np.uint8), y2.astype(np.uint8)


# feedback states


@dataclass(frozen=True)
class StateSeq:
    """Feedback states indexed [block, symbol, user]."""

    s: np.ndarray

    def __post_init__(self):
        arr = np.array(self.s, dtype=np.uint8, copy=True)
        if arr.ndim == 2:
            arr = arr[None]
        if arr.ndim != 3 or arr.shape[2] != 2:
            raise ParameterError(f"state array must have shape (blocks, N, 2), got {arr.shape}")
        if ((arr != 0) & (arr != 1)).any():
            raise ParameterError("states must be binary")
        arr.flags.writeable = False
        object.__setattr__(self, "s", arr)

    @classmethod
    def from_array(cls, arr) -> StateSeq:
        """Wrap an externally supplied state sequence."""
        return cls(np.asarray(arr))

    @property
    def blocks(self) -> int:
        return self.s.shape[0]

    @property
    def block_len(self) -> int:
        return self.s.shape[1]

    def __len__(self) -> int:
        return self.blocks * self.block_len

    def block(self, b: int) -> np.ndarray:
        return self.s[b]

    def flat(self) -> np.ndarray:
        return self.s.reshape(-1, 2)


def sample_states(dist: FeedbackDist, count: int, seed, block_len: int | None = None) -> StateSeq:
    """Draw ``count`` i.i.d. state pairs exactly from ``dist``.

    Sampling is exact: a uniform integer below the common denominator is
    compared against cumulative numerators. ``seed`` may be an int, a
    SeedSequence or a Generator.
    """
    block_len = count if block_len is None else block_len
    if block_len <= 0 and count > 0 or (block_len and count % block_len):
        raise ParameterError(f"count {count} is not a multiple of block length {block_len}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    probs = [dist.q00, dist.q01, dist.q10, dist.q11]
    den = math.lcm(*(p.denominator for p in probs))
    cum = np.cumsum([p.numerator * (den // p.denominator) for p in probs])
    draws = rng.integers(0, den, size=count)
    idx = np.searchsorted(cum, draws, side="right")
    pairs = np.stack([idx >> 1, idx & 1], axis=1).astype(np.uint8)
    blocks = count // block_len if block_len else 0
    return StateSeq(pairs.reshape(blocks, block_len, 2))


@dataclass(frozen=True)
class Feedback:
    """Punctured feedback for one symbol; ``erased`` is known to the transmitter."""

    value: Gf2Vector
    erased: bool


def feedback(y: Gf2Vector, s: int) -> Feedback:
    if s not in (0, 1):
        raise ParameterError(f"state must be 0 or 1, got {s!r}")
    if s:
        return Feedback(Gf2Vector(y), False)
    return Feedback(Gf2Vector.zeros(len(y)), True)
