import json
from fractions import Fraction

import numpy as np
import pytest
from conftest import ALWAYS_ON, NEVER_ON, corner_config, interference_free_config, zero_rate_config

from ldic.channel import ChannelParams, FeedbackDist, StateSeq, sample_states, transmit_block
from ldic.gf2 import ParameterError, rank_bits
from ldic.scheme import (
    CodebookSet,
    Layout,
    SchemeConfig,
    Transmitter,
    backward_decode,
    encode_block,
    generate_codebooks,
    residual_cross,
    run_trial,
    trace_to_json,
)

F = Fraction
DISTS = [ALWAYS_ON, NEVER_ON, FeedbackDist.independent(F(1, 2), F(1, 3)), FeedbackDist.anticorrelated(F(1, 2), F(1, 2))]


# configuration


def test_default_bin_rate_clears_the_margin():
    cfg = SchemeConfig(ChannelParams(2, 1, 1, 2), FeedbackDist.independent(F(1, 3), F(1, 2)), 2, 6, 0, 0, 0, 0)
    # r1 >= 1/2 * 1 + 1/2 = 1, r2 >= 1/3 + 1/2 = 5/6
    assert cfg.r1 == 1 and cfg.r2 == F(5, 6)
    assert cfg.k("r2") == 5


def test_config_rejects_fractional_bit_counts():
    with pytest.raises(ParameterError, match="N\\*R1p"):
        SchemeConfig(ChannelParams(2, 1, 1, 2), ALWAYS_ON, 2, 3, F(1, 2), 0, 0, 0)
    with pytest.raises(ParameterError):
        SchemeConfig(ChannelParams(2, 1, 1, 2), ALWAYS_ON, 2, 4, 0, 0, 0, 0, r1=F(1, 2))
    with pytest.raises(ParameterError):
        SchemeConfig(ChannelParams(2, 1, 1, 2), ALWAYS_ON, 0, 4, 0, 0, 0, 0)


def test_config_roundtrip():
    cfg = corner_config(16, F(9, 10))
    again = SchemeConfig.from_dict(json.loads(json.dumps(cfg.to_dict())))
    assert again == cfg
    with pytest.raises(ParameterError):
        SchemeConfig.from_dict({"B": 1})


def test_effective_rates_pay_for_the_terminal_block():
    cfg = interference_free_config(B=3)
    assert cfg.effective_rates == (F(9, 4), F(3, 2))


# codebooks


def test_zero_rate_codebooks_are_empty_but_valid():
    cb = generate_codebooks(zero_rate_config(), 0)
    for i in (1, 2):
        assert cb.Gc[i].shape[1] == 0 and cb.Gp[i].shape[1] == 0


def test_codebooks_are_deterministic():
    cfg = corner_config(16, F(9, 10))
    assert generate_codebooks(cfg, 7).fingerprint() == generate_codebooks(cfg, 7).fingerprint()
    assert generate_codebooks(cfg, 7).fingerprint() != generate_codebooks(cfg, 8).fingerprint()


def test_hash_shape_and_rank():
    # n21 = 1 and no feedback at Rx2: r1 = 1/2, i.e. 4 bits out of 8 cross bits
    cfg = SchemeConfig(ChannelParams(2, 1, 1, 2), FeedbackDist.independent(1, 0), 1, 8, 0, 0, 0, 0)
    for seed in range(20):
        cb = generate_codebooks(cfg, seed)
        assert cb.Hash[1].shape == (4, 8)
        assert rank_bits(cb.Hash[1]) == 4


def test_generator_dimensions_follow_the_layout():
    cfg = corner_config(32, F(9, 10))
    L, cb = Layout(cfg), generate_codebooks(cfg, 1)
    for i in (1, 2):
        assert cb.E[i].shape == (32 * L.supp[i], L.kq)
        assert cb.Gc[i].shape == (32 * L.sv[i], L.kc[i])
        assert cb.Gp[i].shape == (32 * L.spr[i], L.kp[i])
        assert rank_bits(cb.Gc[i]) == L.kc[i] and rank_bits(cb.Gp[i]) == L.kp[i]


def test_exhausted_retry_budget_fails_loudly():
    class Zeros:
        def integers(self, lo, hi, size, dtype):
            return np.zeros(size, dtype=dtype)

    with pytest.raises(RuntimeError):
        generate_codebooks(corner_config(8, F(1, 2)), np.random.default_rng(0), budget=0)
    with pytest.raises(RuntimeError):
        generate_codebooks(corner_config(8, F(1, 2)), Zeros(), budget=3)


# encoding


def test_all_zero_inputs_give_the_zero_codeword():
    cfg = corner_config(16, F(9, 10))
    L, cb = Layout(cfg), generate_codebooks(cfg, 3)
    for i in (1, 2):
        x = encode_block(cfg, cb, i, np.zeros(L.kq), np.zeros(L.kc[i]), np.zeros(L.kp[i]))
        assert x.shape == (16, 2) and not x.any()


def test_single_symbol_by_hand():
    # N = 1 at (2,1,1,2): level 0 of X1 is the common level, level 1 the private one
    cfg = SchemeConfig(ChannelParams(2, 1, 1, 2), ALWAYS_ON, 1, 1, 1, 1, 0, 0)
    L = Layout(cfg)
    assert (L.supp[1], L.sv[1], L.kc[1], L.kp[1], L.kq) == (2, 1, 1, 1, 4)
    m = lambda rows: np.array(rows, dtype=np.uint8)  # noqa: E731
    user1 = {
        "E": m([[1, 1, 0, 0], [0, 1, 1, 1]]),
        "Gc": m([[1]]),
        "Kc": m([[0, 0, 1, 0]]),
        "Gp": m([[1]]),
        "Kp": m([[1, 0, 0, 0, 1]]),
        "Hash": m([[1], [0]]),
    }
    empty = generate_codebooks(cfg, 0)
    cb = CodebookSet(**{k: {1: v, 2: getattr(empty, k)[2]} for k, v in user1.items()})
    qprev = [1, 0, 1, 1]
    # X1e = E q' = (1, 0); common: Gc*1 + Kc q' = 1 + 1 = 0; private: Gp*1 + Kp (1,1,0,1,1) = 1 + 0 = 1
    x = encode_block(cfg, cb, 1, qprev, [1], [1])
    assert x.tolist() == [[1, 1]]
    # terminal blocks carry the cloud only
    assert encode_block(cfg, cb, 1, qprev, [1], [1], terminal=True).tolist() == [[1, 0]]


def test_encode_rejects_size_mismatch():
    cfg = corner_config(8, F(1, 2))
    L, cb = Layout(cfg), generate_codebooks(cfg, 0)
    with pytest.raises(ParameterError):
        encode_block(cfg, cb, 1, np.zeros(L.kq + 1), np.zeros(L.kc[1]), np.zeros(L.kp[1]))
    with pytest.raises(ParameterError):
        encode_block(cfg, cb, 1, np.zeros(L.kq), np.zeros(L.kc[1] + 1), np.zeros(L.kp[1]))


def test_feedback_length_mismatch_raises():
    cfg = corner_config(8, F(1, 2))
    cb = generate_codebooks(cfg, 0)
    tx = Transmitter(cfg, cb, 1)
    L = Layout(cfg)
    tx.send(np.zeros(L.kc[1]), np.zeros(L.kp[1]))
    with pytest.raises(ParameterError):
        tx.observe(np.zeros((8, 2)), np.zeros((7, 2)))
    states = sample_states(cfg.dist, 8 * cfg.B, 0, 8)  # one block short
    with pytest.raises(ParameterError):
        backward_decode(cfg, cb, 1, [np.zeros((8, 2))] * (cfg.B + 1), states)


def test_no_feedback_degenerates_to_static_superposition():
    cfg = corner_config(16, F(1, 2), dist=NEVER_ON)
    for seed in range(5):
        r = run_trial(cfg, seed, keep_trace=True)
        for t in r.traces:
            for i in (1, 2):
                assert not t.xe[i].any() and not t.vbar[i].any() and not t.q[i].any()


# trial-level properties


@pytest.mark.parametrize("dist", DISTS)
def test_zero_rate_always_decodes(dist):
    cfg = zero_rate_config(dist=dist)
    for seed in range(20):
        r = run_trial(cfg, seed)
        assert not r.err[1] and not r.err[2] and r.consistent


@pytest.mark.parametrize("dist", DISTS)
def test_interference_free_always_decodes(dist):
    cfg = interference_free_config(dist=dist)
    for seed in range(20):
        r = run_trial(cfg, seed)
        assert not r.err[1] and not r.err[2]


def test_interference_free_with_forced_state_patterns():
    cfg = interference_free_config(N=4, B=2)
    for pattern in ([0, 0], [0, 1], [1, 0], [1, 1]):
        states = StateSeq.from_array(np.tile(pattern, (3, 4, 1)))
        assert not any(run_trial(cfg, 0, states=states).err.values())


def test_trials_are_deterministic():
    cfg = corner_config(16, F(9, 10))
    a = run_trial(cfg, 11, keep_trace=True)
    b = run_trial(cfg, 11, keep_trace=True)
    assert a.err == b.err and a.block_err == b.block_err
    assert trace_to_json(a.traces) == trace_to_json(b.traces)


@pytest.mark.parametrize("dist", DISTS)
def test_transmitters_agree(dist):
    cfg = corner_config(16, F(9, 10), dist=dist)
    for seed in range(10):
        assert run_trial(cfg, seed).tx_agree


def test_true_transmission_is_never_inconsistent_with_genie():
    cfg = corner_config(16, F(9, 10))
    for seed in range(20):
        assert run_trial(cfg, seed, genie=True).consistent


def test_genie_never_hurts():
    cfg = corner_config(16, F(9, 10))
    for seed in range(40):
        plain, genie = run_trial(cfg, seed), run_trial(cfg, seed, genie=True)
        for i in (1, 2):
            for g, p in zip(genie.block_err[i], plain.block_err[i]):
                assert p or not g


def test_interior_point_decodes_at_moderate_length():
    cfg = corner_config(64, F(9, 10))
    errs = sum(any(run_trial(cfg, s).err.values()) for s in range(20))
    assert errs <= 2


def test_exterior_point_fails():
    cfg = corner_config(32, F(6, 5), exterior=True)
    assert sum(cfg.rates) >= F(18, 5)
    errs = sum(any(run_trial(cfg, s).err.values()) for s in range(10))
    assert errs == 10


# traces


def test_residual_matches_stored_trace():
    cfg = corner_config(16, F(9, 10), dist=FeedbackDist.independent(F(1, 2), F(3, 4)))
    r = run_trial(cfg, 4, keep_trace=True)
    p = cfg.params
    for t in r.traces:
        for i in (1, 2):
            j = 3 - i
            assert np.array_equal(residual_cross(p, i, t.x[i], t.xe[i], t.states), t.vbar[i])
            # V̄ = Ṽ - Ṽe on the levels the other receiver sees
            vte = t.states[:, j - 1 : j] * (t.xe[i] @ p.H[j, i].bits.T % 2)
            n = p.n(j, i)
            assert np.array_equal((t.vt[i] ^ vte)[:, p.q - n :], t.vbar[i])


def test_residual_ignores_older_history():
    # a transmitter with a different past but the same current cloud computes the same V̄
    cfg = corner_config(16, F(9, 10))
    L = Layout(cfg)
    r = run_trial(cfg, 2, keep_trace=True)
    cb = generate_codebooks(cfg, np.random.default_rng(np.random.SeedSequence(2).spawn(3)[0]))
    b = 3
    t, prev = r.traces[b - 1], r.traces[b - 2]
    fresh = Transmitter(cfg, cb, 1)
    fresh.history = ["unrelated"] * 7
    fresh.qprev = np.concatenate([prev.q[1], prev.q[2]])
    fresh._x = t.x[1]
    y1, _ = transmit_block(t.x[1], t.x[2], cfg.params)
    view = fresh.observe(y1 * t.states[:, 0:1], t.states)
    for k in (1, 2):
        assert np.array_equal(view.vbar[k], t.vbar[k])
        assert np.array_equal(view.q[k], t.q[k])
    assert L.kq == sum(len(t.q[k]) for k in (1, 2))


def test_trace_json_is_hex_per_block():
    cfg = corner_config(8, F(1, 2), B=2)
    r = run_trial(cfg, 0, keep_trace=True)
    rows = json.loads(trace_to_json(r.traces))
    assert [row["block"] for row in rows] == [1, 2, 3]
    hexpart, bits = rows[0]["x"]["1"].split(":")
    assert int(bits) == 8 * 2 and len(hexpart) == 4
    assert rows[-1]["decoded"] == {} and set(rows[0]["ok"]) == {"1", "2"}
