"""Block-Markov quantize-map-and-forward codec with backward decoding.

Everything is linear over GF(2): overlays, binning hashes and the map from
last block's bin indices to X_ie. A transmission is B message blocks plus
one terminal block that only carries the bin indices of block B. Decoding
runs from block B down to 1 and solves one linear system per block.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .channel import (
    ChannelParams,
    FeedbackDist,
    StateSeq,
    channel_from_dict,
    channel_to_dict,
    format_rational,
    parse_rational,
    sample_states,
    transmit_block,
)
from .gf2 import ParameterError, mat_bits, rank_bits, solve_bits

RATE_NAMES = ("R1p", "R1c", "R2p", "R2c")
DEFAULT_DELTA = Fraction(1, 2)


def _bits(rate: Fraction, N: int, name: str) -> int:
    v = rate * N
    if v.denominator != 1:
        raise ParameterError(f"N*{name} = {N}*{format_rational(rate)} = {format_rational(v)} is not an integer")
    return int(v)


@dataclass(frozen=True)
class SchemeConfig:
    params: ChannelParams
    dist: FeedbackDist
    B: int
    N: int
    R1p: Fraction
    R1c: Fraction
    R2p: Fraction
    R2c: Fraction
    r1: Fraction | None = None
    r2: Fraction | None = None
    delta: Fraction = DEFAULT_DELTA

    def __post_init__(self):
        for name in ("B", "N"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 1:
                raise ParameterError(f"{name} must be a positive integer, got {v!r}")
            object.__setattr__(self, name, int(v))
        for name in RATE_NAMES + ("delta",):
            v = parse_rational(getattr(self, name))
            if v < 0:
                raise ParameterError(f"{name} must be nonnegative, got {v}")
            object.__setattr__(self, name, v)
        # default bin rate: smallest whole number of bits per block above p_j n_ji + delta
        floors = {"r1": self.dist.p2 * self.params.n21, "r2": self.dist.p1 * self.params.n12}
        for name, floor in floors.items():
            v = getattr(self, name)
            need = floor + self.delta
            v = Fraction(math.ceil(need * self.N), self.N) if v is None else parse_rational(v)
            if v < need:
                raise ParameterError(f"{name} = {format_rational(v)} is below the covering margin {format_rational(need)}")
            object.__setattr__(self, name, v)
        for name in RATE_NAMES + ("r1", "r2"):
            _bits(getattr(self, name), self.N, name)

    def k(self, name: str) -> int:
        """Bits per block of a rate, e.g. ``k("R1c")``."""
        return _bits(getattr(self, name), self.N, name)

    @property
    def rates(self) -> tuple[Fraction, Fraction]:
        return self.R1p + self.R1c, self.R2p + self.R2c

    @property
    def effective_rates(self) -> tuple[Fraction, Fraction]:
        """Rates after the terminal block's loss B/(B+1)."""
        f = Fraction(self.B, self.B + 1)
        return tuple(r * f for r in self.rates)

    def to_dict(self) -> dict:
        out = {"channel": channel_to_dict(self.params, self.dist), "B": self.B, "N": self.N}
        for name in RATE_NAMES + ("r1", "r2", "delta"):
            out[name] = format_rational(getattr(self, name))
        return out

    @classmethod
    def from_dict(cls, data: dict) -> SchemeConfig:
        try:
            params, dist = channel_from_dict(data["channel"])
            kw = {name: data[name] for name in RATE_NAMES}
            B, N = data["B"], data["N"]
        except KeyError as exc:
            raise ParameterError(f"missing key {exc.args[0]!r} in scheme config") from exc
        for name in ("r1", "r2", "delta"):
            if name in data:
                kw[name] = data[name]
        return cls(params, dist, B, N, **kw)


class Layout:
    """Level bookkeeping for one configuration."""

    def __init__(self, cfg: SchemeConfig):
        p = cfg.params
        self.q = p.q
        self.N = cfg.N
        self.sv = {1: p.n21, 2: p.n12}  # common levels = levels seen at the other receiver
        self.supp = {1: max(p.n11, p.n21), 2: max(p.n22, p.n12)}
        self.spr = {i: self.supp[i] - self.sv[i] for i in (1, 2)}
        self.kc = {1: cfg.k("R1c"), 2: cfg.k("R2c")}
        self.kp = {1: cfg.k("R1p"), 2: cfg.k("R2p")}
        self.kr = {1: cfg.k("r1"), 2: cfg.k("r2")}
        self.kq = self.kr[1] + self.kr[2]


@dataclass(frozen=True)
class CodebookSet:
    """Per-user matrices, keyed by user index.

    E: bin indices of both users -> X_ie on supp X_i
    Gc, Kc: common overlay, d_ic = Gc W_ic + Kc q'
    Gp, Kp: private overlay, d_ip = Gp W_ip + Kp [W_ic; q']
    Hash: cross-signal residual -> bin index

    The K terms make each overlay codeword depend on the cloud it sits on,
    the linear counterpart of superposition coding. Without them the bin
    indices of a block carry nothing about the previous block.
    """

    E: dict
    Gc: dict
    Kc: dict
    Gp: dict
    Kp: dict
    Hash: dict
    resampled: int = 0

    def fingerprint(self) -> str:
        import hashlib

        h = hashlib.sha256()
        for name in ("E", "Gc", "Kc", "Gp", "Kp", "Hash"):
            for i in (1, 2):
                m = getattr(self, name)[i]
                h.update(f"{name}{i}{m.shape}".encode())
                h.update(np.packbits(m).tobytes())
        return h.hexdigest()


def _rng(seed) -> np.random.Generator:
    return seed if hasattr(seed, "integers") else np.random.default_rng(seed)


def _full_rank_draw(rng, rows, cols, budget):
    for attempt in range(budget):
        m = rng.integers(0, 2, size=(rows, cols), dtype=np.uint8)
        if rank_bits(m) == min(rows, cols):
            return m, attempt
    raise RuntimeError(f"no full-rank {rows}x{cols} matrix in {budget} draws")


def generate_codebooks(cfg: SchemeConfig, seed, budget: int = 100) -> CodebookSet:
    """Draw all matrices uniformly; generators and hashes are redrawn until full rank."""
    rng = _rng(seed)
    L = Layout(cfg)
    N = L.N
    mats = {k: {} for k in ("E", "Gc", "Kc", "Gp", "Kp", "Hash")}
    resampled = 0
    for i in (1, 2):
        mats["E"][i] = rng.integers(0, 2, size=(N * L.supp[i], L.kq), dtype=np.uint8)
        mats["Gc"][i], n1 = _full_rank_draw(rng, N * L.sv[i], L.kc[i], budget)
        mats["Kc"][i] = rng.integers(0, 2, size=(N * L.sv[i], L.kq), dtype=np.uint8)
        mats["Gp"][i], n2 = _full_rank_draw(rng, N * L.spr[i], L.kp[i], budget)
        mats["Kp"][i] = rng.integers(0, 2, size=(N * L.spr[i], L.kc[i] + L.kq), dtype=np.uint8)
        mats["Hash"][i], n3 = _full_rank_draw(rng, L.kr[i], N * L.sv[i], budget)
        resampled += n1 + n2 + n3
    return CodebookSet(**mats, resampled=resampled)


# encoding


def _place(L: Layout, i: int, xe: np.ndarray, dc: np.ndarray, dp: np.ndarray) -> np.ndarray:
    """Assemble X_i as an (N, q) array from X_ie and the two overlays."""
    N, sv, supp = L.N, L.sv[i], L.supp[i]
    x = np.zeros((N, L.q), dtype=np.uint8)
    x[:, :supp] = xe.reshape(N, supp)
    x[:, :sv] ^= dc.reshape(N, sv)
    x[:, sv:supp] ^= dp.reshape(N, supp - sv)
    return x


def x_e(L: Layout, cb: CodebookSet, i: int, qprev: np.ndarray) -> np.ndarray:
    """X_ie for one block as an (N, q) array."""
    x = np.zeros((L.N, L.q), dtype=np.uint8)
    x[:, : L.supp[i]] = mat_bits(cb.E[i], qprev).reshape(L.N, L.supp[i])
    return x


def residual_cross(params: ChannelParams, user: int, x: np.ndarray, xe: np.ndarray, states: np.ndarray) -> np.ndarray:
    """V̄_i = S_j H_ji X_i - S_j H_ji X_ie of one block, as (N, n_ji) bits.

    Uses nothing but that block's codeword, cloud and states.
    """
    j = 3 - user
    n = params.n(j, user)
    gate = np.asarray(states, dtype=np.uint8)[:, j - 1 : j]
    full = gate * mat_bits(np.asarray(x, np.uint8) ^ np.asarray(xe, np.uint8), params.H[j, user].bits.T)
    return full[:, params.q - n :] if n else np.zeros((full.shape[0], 0), np.uint8)


def encode_block(
    cfg: SchemeConfig,
    cb: CodebookSet,
    user: int,
    qprev: np.ndarray,
    w_common: np.ndarray,
    w_private: np.ndarray,
    terminal: bool = False,
) -> np.ndarray:
    """Codeword X_i for one block given both users' previous bin indices.

    ``qprev`` is (q_1, q_2) of the previous block, all zero before block 1.
    The terminal block carries X_ie only.
    """
    L = Layout(cfg)
    qprev = np.asarray(qprev, dtype=np.uint8).reshape(-1)
    w_common = np.asarray(w_common, dtype=np.uint8).reshape(-1)
    w_private = np.asarray(w_private, dtype=np.uint8).reshape(-1)
    if qprev.size != L.kq:
        raise ParameterError(f"bin index vector has {qprev.size} bits, expected {L.kq}")
    if w_common.size != L.kc[user] or w_private.size != L.kp[user]:
        raise ParameterError(
            f"message sizes ({w_common.size}, {w_private.size}) do not match ({L.kc[user]}, {L.kp[user]})"
        )
    xe = mat_bits(cb.E[user], qprev)
    if terminal:
        return _place(L, user, xe, np.zeros(L.N * L.sv[user], np.uint8), np.zeros(L.N * L.spr[user], np.uint8))
    dc = mat_bits(cb.Gc[user], w_common) ^ mat_bits(cb.Kc[user], qprev)
    dp = mat_bits(cb.Gp[user], w_private) ^ mat_bits(cb.Kp[user], np.concatenate([w_common, qprev]))
    return _place(L, user, xe, dc, dp)


@dataclass
class TxView:
    """What one transmitter has reconstructed about one past block."""

    vbar: dict  # user -> (N, n_ji) residual cross signal, zero where erased
    q: dict  # user -> bin index bits
    xe: dict  # user -> (N, q) X_ie of that block
    outage: dict  # user -> bool, hash not injective on the active bits


class Transmitter:
    """Tx ``user``: tracks its own codewords and feedback to form the next X_ie."""

    def __init__(self, cfg: SchemeConfig, cb: CodebookSet, user: int):
        self.cfg, self.cb, self.user = cfg, cb, user
        self.L = Layout(cfg)
        self.qprev = np.zeros(self.L.kq, dtype=np.uint8)
        self.history: list[TxView] = []
        self._x = None

    def send(self, w_common, w_private, terminal=False) -> np.ndarray:
        self._x = encode_block(self.cfg, self.cb, self.user, self.qprev, w_common, w_private, terminal)
        return self._x

    def observe(self, y_fed: np.ndarray, states: np.ndarray) -> TxView:
        """Digest the punctured feedback S_i Y_i of the block just sent."""
        L, cfg, i = self.L, self.cfg, self.user
        j = 3 - i
        N = L.N
        states = np.asarray(states, dtype=np.uint8)
        y_fed = np.asarray(y_fed, dtype=np.uint8)
        if states.shape != (N, 2) or y_fed.shape != (N, L.q):
            raise ParameterError(f"feedback shapes {y_fed.shape}, {states.shape} do not match N={N}, q={L.q}")
        H = {k: v.bits for k, v in cfg.params.H.items()}
        xe = {k: x_e(L, self.cb, k, self.qprev) for k in (1, 2)}
        s = {1: states[:, 0:1], 2: states[:, 1:2]}
        own = self._x
        # own cross signal: S_j H_ji X_i; other's: S_i Y_i - S_i H_ii X_i = S_i H_ij X_j
        vt = {
            i: s[j] * mat_bits(own, H[j, i].T),
            j: y_fed ^ (s[i] * mat_bits(own, H[i, i].T)),
        }
        view = TxView({}, {}, xe, {})
        for k in (1, 2):
            other = 3 - k
            vte = s[other] * mat_bits(xe[k], H[other, k].T)
            full = vt[k] ^ vte
            n = L.sv[k]
            vbar = full[:, L.q - n :] if n else np.zeros((N, 0), np.uint8)
            view.vbar[k] = vbar
            view.q[k] = mat_bits(self.cb.Hash[k], vbar.reshape(-1))
            active = np.repeat(states[:, other - 1].astype(bool), n)
            view.outage[k] = rank_bits(self.cb.Hash[k][:, active]) < int(active.sum())
        self.history.append(view)
        self.qprev = np.concatenate([view.q[1], view.q[2]])
        return view


# decoding


class _Unknowns:
    """Column layout of one decoding step: W1c, W1p, W2c, W2p, then active residual bits."""

    def __init__(self, L: Layout, active_prev: dict | None):
        self.slices = {}
        off = 0
        for name, size in (("W1c", L.kc[1]), ("W1p", L.kp[1]), ("W2c", L.kc[2]), ("W2p", L.kp[2])):
            self.slices[name] = slice(off, off + size)
            off += size
        self.active_prev = active_prev
        for k in (1, 2):
            n = int(active_prev[k].sum()) if active_prev is not None else 0
            self.slices[f"v{k}"] = slice(off, off + n)
            off += n
        self.width = off

    def select(self, name: str) -> np.ndarray:
        sl = self.slices[name]
        m = np.zeros((sl.stop - sl.start, self.width), dtype=np.uint8)
        m[np.arange(sl.stop - sl.start), np.arange(sl.start, sl.stop)] = 1
        return m


def _active(L: Layout, states: np.ndarray) -> dict:
    """Per user k, mask over the N*n_lk residual bits that feedback actually carried."""
    return {k: np.repeat(states[:, 2 - k].astype(bool), L.sv[k]) for k in (1, 2)}


def _bin_map(L: Layout, cb: CodebookSet, U: _Unknowns) -> np.ndarray:
    """Matrix sending the unknowns to q' = (q_1, q_2) of the previous block."""
    Q = np.zeros((L.kq, U.width), dtype=np.uint8)
    if U.active_prev is None:
        return Q
    row = 0
    for k in (1, 2):
        sl = U.slices[f"v{k}"]
        Q[row : row + L.kr[k], sl] = cb.Hash[k][:, U.active_prev[k]]
        row += L.kr[k]
    return Q


def _codeword_maps(L: Layout, cb: CodebookSet, U: _Unknowns, Q: np.ndarray):
    """Per user: (X map as (N, q, width), common-overlay map as (N*sv, width))."""
    N, q = L.N, L.q
    X, DC = {}, {}
    for k in (1, 2):
        sv, supp = L.sv[k], L.supp[k]
        wc, wp = U.select(f"W{k}c"), U.select(f"W{k}p")
        A = np.zeros((N, q, U.width), dtype=np.uint8)
        A[:, :supp] = mat_bits(cb.E[k], Q).reshape(N, supp, U.width)
        dc = mat_bits(cb.Gc[k], wc) ^ mat_bits(cb.Kc[k], Q)
        dp = mat_bits(cb.Gp[k], wp) ^ mat_bits(cb.Kp[k], np.vstack([wc, Q]))
        A[:, :sv] ^= dc.reshape(N, sv, U.width)
        A[:, sv:supp] ^= dp.reshape(N, supp - sv, U.width)
        X[k], DC[k] = A, dc
    return X, DC


def _through(H: np.ndarray, A: np.ndarray) -> np.ndarray:
    """Apply a per-symbol channel matrix to an (N, q, width) map."""
    N, q, w = A.shape
    flat = A.transpose(1, 0, 2).reshape(q, N * w)
    return mat_bits(H, flat).reshape(q, N, w).transpose(1, 0, 2)


def _received_map(cfg: SchemeConfig, user: int, X: dict) -> np.ndarray:
    H = {k: v.bits for k, v in cfg.params.H.items()}
    j = 3 - user
    Y = _through(H[user, user], X[user]) ^ _through(H[user, j], X[j])
    return Y.reshape(Y.shape[0] * Y.shape[1], Y.shape[2])


def _bin_equations(L: Layout, cb: CodebookSet, DC: dict, states: np.ndarray) -> np.ndarray:
    """Rows mapping the unknowns to (q_1, q_2) of the current block."""
    act = _active(L, states)
    rows = []
    for k in (1, 2):
        rows.append(mat_bits(cb.Hash[k][:, act[k]], DC[k][act[k]]))
    return np.vstack(rows)


@dataclass
class StepResult:
    block: int
    w_common: np.ndarray
    w_private: np.ndarray
    unique: bool  # own messages determined
    bins_unique: bool  # previous bin indices determined
    consistent: bool
    kernel_dim: int


@dataclass
class DecodeResult:
    user: int
    steps: list  # StepResult, ordered by block 1..B
    q_decoded: dict = field(default_factory=dict)  # block -> bin bits used for that block's step


def backward_decode(
    cfg: SchemeConfig,
    cb: CodebookSet,
    user: int,
    received: list,
    states: StateSeq,
    genie_bins: dict | None = None,
) -> DecodeResult:
    """Decode blocks B..1 at receiver ``user``.

    ``received`` holds Y_i for blocks 1..B+1 as (N, q) arrays, ``states`` the
    realized state sequence (B+1 blocks). ``genie_bins`` maps block b to the
    true (q_1(b), q_2(b)) and replaces the decoded ones.
    """
    L = Layout(cfg)
    B = cfg.B
    if len(received) != B + 1 or states.blocks != B + 1 or states.block_len != L.N:
        raise ParameterError(f"need {B + 1} received blocks and states of matching shape")
    out = DecodeResult(user, [])
    q_next = None  # bin indices of block b, decoded at step b+1
    for b in range(B, 0, -1):
        st = states.block(b - 1)
        U = _Unknowns(L, _active(L, states.block(b - 2)) if b > 1 else None)
        Q = _bin_map(L, cb, U)
        X, DC = _codeword_maps(L, cb, U, Q)
        A = [_received_map(cfg, user, X)]
        rhs = [np.asarray(received[b - 1], dtype=np.uint8).reshape(-1)]
        bins = _bin_equations(L, cb, DC, st)
        known = genie_bins.get(b) if genie_bins is not None else q_next
        if b == B:
            # fold in the terminal block, whose X_ke = E_k q(B) is linear in this step's unknowns
            Xt = {}
            for k in (1, 2):
                m = np.zeros((L.N, L.q, U.width), dtype=np.uint8)
                m[:, : L.supp[k]] = mat_bits(cb.E[k], bins).reshape(L.N, L.supp[k], U.width)
                Xt[k] = m
            A.append(_received_map(cfg, user, Xt))
            rhs.append(np.asarray(received[B], dtype=np.uint8).reshape(-1))
        with_bins = known is not None
        if with_bins:
            A.append(bins)
            rhs.append(np.asarray(known, dtype=np.uint8).reshape(-1))
        sol = solve_bits(np.vstack(A), np.concatenate(rhs))
        consistent = sol.consistent
        if not consistent and with_bins:
            # the bin indices handed down are wrong; fall back to this block's own signal
            sol = solve_bits(np.vstack(A[:-1]), np.concatenate(rhs[:-1]))
        x = sol.particular if sol.particular is not None else np.zeros(U.width, dtype=np.uint8)
        own = np.r_[np.arange(U.width)[U.slices[f"W{user}c"]], np.arange(U.width)[U.slices[f"W{user}p"]]]
        K = sol.kernel
        unique = sol.consistent and not K[:, own].any()
        bins_unique = sol.consistent and not mat_bits(Q, K.T).any()
        out.steps.append(
            StepResult(
                b,
                x[U.slices[f"W{user}c"]].copy(),
                x[U.slices[f"W{user}p"]].copy(),
                unique,
                bins_unique,
                consistent,
                K.shape[0],
            )
        )
        out.q_decoded[b] = None if known is None else np.asarray(known, dtype=np.uint8)
        q_next = mat_bits(Q, x)
    out.steps.reverse()
    return out


# one full transmission


@dataclass
class BlockTrace:
    block: int
    x: dict
    y: dict
    xe: dict  # clouds X_ie
    states: np.ndarray
    v: dict  # cross signals H_ji X_i
    vt: dict  # fed-back cross signals S_j H_ji X_i
    vbar: dict
    q: dict
    decoded: dict  # user -> (w_common, w_private) or None for the terminal block
    ok: dict  # user -> bool


@dataclass
class TrialResult:
    err: dict  # user -> bool, any block wrong
    block_err: dict  # user -> list of bools for blocks 1..B
    outage: bool
    consistent: bool
    tx_agree: bool
    traces: list | None = None


def _messages(rng, L: Layout, B: int) -> dict:
    return {
        (i, b): (
            rng.integers(0, 2, size=L.kc[i], dtype=np.uint8),
            rng.integers(0, 2, size=L.kp[i], dtype=np.uint8),
        )
        for i in (1, 2)
        for b in range(1, B + 1)
    }


def run_trial(
    cfg: SchemeConfig,
    seed,
    genie: bool = False,
    keep_trace: bool = False,
    states: StateSeq | None = None,
) -> TrialResult:
    """Draw codebooks, messages and states from ``seed``, transmit, decode at both receivers."""
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    cb_seed, msg_seed, st_seed = ss.spawn(3)
    L = Layout(cfg)
    B, N = cfg.B, cfg.N
    cb = generate_codebooks(cfg, np.random.default_rng(cb_seed))
    msgs = _messages(np.random.default_rng(msg_seed), L, B)
    if states is None:
        states = sample_states(cfg.dist, (B + 1) * N, np.random.default_rng(st_seed), N)
    H = {k: v.bits for k, v in cfg.params.H.items()}
    tx = {i: Transmitter(cfg, cb, i) for i in (1, 2)}
    received = {1: [], 2: []}
    traces = []
    outage = False
    agree = True
    true_bins = {}
    for b in range(1, B + 2):
        terminal = b == B + 1
        x = {}
        for i in (1, 2):
            wc, wp = (np.zeros(L.kc[i], np.uint8), np.zeros(L.kp[i], np.uint8)) if terminal else msgs[i, b]
            x[i] = tx[i].send(wc, wp, terminal)
        y1, y2 = transmit_block(x[1], x[2], cfg.params)
        y = {1: y1, 2: y2}
        st = states.block(b - 1)
        views = {}
        for i in (1, 2):
            received[i].append(y[i])
            views[i] = tx[i].observe(y[i] * st[:, i - 1 : i], st)
        a, c = views[1], views[2]
        same = all(
            np.array_equal(a.vbar[k], c.vbar[k]) and np.array_equal(a.q[k], c.q[k]) and np.array_equal(a.xe[k], c.xe[k])
            for k in (1, 2)
        )
        agree &= same
        if not terminal:
            outage |= a.outage[1] or a.outage[2]
            true_bins[b] = np.concatenate([a.q[1], a.q[2]])
        if keep_trace:
            v = {1: mat_bits(x[1], H[2, 1].T), 2: mat_bits(x[2], H[1, 2].T)}
            vt = {1: st[:, 1:2] * v[1], 2: st[:, 0:1] * v[2]}
            traces.append(BlockTrace(b, x, y, dict(a.xe), st, v, vt, a.vbar, a.q, {}, {}))
    err, block_err = {}, {}
    consistent = True
    for i in (1, 2):
        res = backward_decode(cfg, cb, i, received[i], states, true_bins if genie else None)
        flags = []
        for step in res.steps:
            wc, wp = msgs[i, step.block]
            ok = step.unique and np.array_equal(step.w_common, wc) and np.array_equal(step.w_private, wp)
            flags.append(not ok)
            consistent &= step.consistent
            if keep_trace:
                traces[step.block - 1].decoded[i] = (step.w_common, step.w_private)
                traces[step.block - 1].ok[i] = ok
        block_err[i] = flags
        err[i] = any(flags)
    return TrialResult(err, block_err, outage, consistent, agree, traces if keep_trace else None)


def _hex(a) -> str:
    a = np.asarray(a, dtype=np.uint8).reshape(-1)
    return np.packbits(a).tobytes().hex() + f":{a.size}"


def trace_to_json(traces: list) -> str:
    """Per-block hex dump of a kept trace; each field is ``hex:bitcount``."""
    rows = []
    for t in traces:
        row = {"block": t.block}
        row["states"] = _hex(t.states)
        for name in ("x", "y", "xe", "v", "vt", "vbar", "q"):
            row[name] = {str(k): _hex(v) for k, v in getattr(t, name).items()}
        row["decoded"] = {str(k): [_hex(w[0]), _hex(w[1])] for k, w in t.decoded.items()}
        row["ok"] = {str(k): bool(v) for k, v in t.ok.items()}
        rows.append(row)
    return json.dumps(rows, indent=1, sort_keys=True)
