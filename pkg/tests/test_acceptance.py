"""End-to-end acceptance checks, one test per criterion.

Each test appends a PASS/FAIL line that the terminal summary prints, so
``pytest tests/test_acceptance.py`` ends with a one-line verdict per criterion.
"""

import json
from contextlib import contextmanager
from fractions import Fraction

import pytest
from conftest import ACCEPTANCE_LINES, corner_config, interference_free_config, zero_rate_config

from ldic import verify
from ldic.channel import ChannelParams
from ldic.cli import main
from ldic.regions import outer_region, p_star
from ldic.sim import run_monte_carlo

F = Fraction
FULL_PGRID = tuple(F(k, 4) for k in range(5))

# calibrated once at N = 128, 200 trials, master seed 2024 (observed 0/200); frozen
REGRESSION_BOUND = F(2, 100)
MONOTONE_SEED = 2024
MONOTONE_TRIALS = 200


@contextmanager
def criterion(label: str):
    detail = {"text": ""}
    try:
        yield detail
    except BaseException:
        ACCEPTANCE_LINES.append(f"FAIL  {label}  {detail['text']}".rstrip())
        raise
    ACCEPTANCE_LINES.append(f"PASS  {label}  {detail['text']}".rstrip())


def test_1_achievable_equals_outer_on_full_grid():
    with criterion("1 region equality, n_ij <= 4, 25 (p1,p2) pairs") as d:
        rep = verify.region_equality_grid(4, FULL_PGRID)
        d["text"] = f"({rep.checked} points, {len(rep.failures)} mismatches)"
        assert rep.checked == 625 * 25
        assert rep.passed, rep.failures[:3]


def test_2_symmetric_closed_forms():
    with criterion("2 symmetric capacity and p* closed forms, n = 12") as d:
        rep = verify.symmetric_closed_forms(12, FULL_PGRID)
        d["text"] = f"({rep.checked} checks)"
        assert rep.passed, rep.failures[:3]
        assert (p_star(F(1, 3)), p_star(F(2, 3)), p_star(3)) == (F(1, 2), 0, F(1, 4))


def test_3_rank_entropies_and_dominance():
    with criterion("3 rank entropies = closed forms, dominance, marginal sufficiency") as d:
        rep = verify.dominance_suite(4)
        d["text"] = f"({rep.checked} evaluations, {len(rep.failures)} failures)"
        assert rep.checked == 2 * 625 * 3
        assert rep.passed, rep.failures[:3]


def test_4_split_constant_inequality_on_full_grid():
    with criterion("4 t_i <= p_ic + s_j on the full grid") as d:
        rep = verify.constant_inequality(4, FULL_PGRID)
        d["text"] = f"({rep.checked} points)"
        assert rep.passed, rep.failures[:3]


def test_5_perfect_feedback_collapse():
    with criterion("5 p-dependent bounds redundant at p1 = p2 = 1") as d:
        rep = verify.perfect_feedback_collapse(4)
        d["text"] = f"({rep.checked} tuples)"
        assert rep.passed, rep.failures[:3]


def test_6a_zero_error_regimes():
    with criterion("6a zero rate and no interference decode perfectly, 1000 trials each") as d:
        zero = run_monte_carlo(zero_rate_config(), 1000, master_seed=61)
        free = run_monte_carlo(interference_free_config(), 1000, master_seed=62)
        d["text"] = f"(errors {zero.either} and {free.either})"
        assert zero.either == 0 and free.either == 0


_monotone_cache: dict = {}


def monotone_runs():
    if not _monotone_cache:
        for N in (16, 32, 64, 128):
            _monotone_cache[N] = run_monte_carlo(corner_config(N, F(9, 10)), MONOTONE_TRIALS, MONOTONE_SEED)
    return _monotone_cache


def test_6b_error_non_increasing_in_block_length():
    with criterion("6b error non-increasing over N = 16, 32, 64, 128 (paired seeds)") as d:
        runs = monotone_runs()
        errs = [runs[N].either for N in (16, 32, 64, 128)]
        d["text"] = f"(errors out of {MONOTONE_TRIALS}: {errs})"
        assert all(a >= b for a, b in zip(errs, errs[1:]))


def test_6c_exterior_worse_than_interior():
    with criterion("6c exterior error > interior error in each 500-trial run, N = 64") as d:
        interior = corner_config(64, F(9, 10))
        exterior = corner_config(64, F(6, 5), exterior=True)
        # the exterior point sits above 120% of the sum-rate bound
        bound = outer_region(ChannelParams(2, 1, 1, 2), 1, 1).maximize({"R1": 1, "R2": 1}).value
        assert sum(exterior.rates) >= F(6, 5) * bound
        pairs = []
        for seed in (1, 2):
            a = run_monte_carlo(interior, 500, seed)
            b = run_monte_carlo(exterior, 500, seed)
            pairs.append((a.either, b.either))
        d["text"] = f"((interior, exterior) errors: {pairs})"
        assert all(b > a for a, b in pairs)


def test_6d_frozen_regression_bound():
    with criterion(f"6d error rate at N = 128 within the frozen bound {REGRESSION_BOUND}") as d:
        r = monotone_runs()[128]
        d["text"] = f"({r.either}/{r.trials}, tx disagreements {r.tx_disagree})"
        assert F(r.either, r.trials) <= REGRESSION_BOUND
        assert r.tx_disagree == 0


def test_7_determinism(tmp_path, capsys):
    with criterion("7 byte-identical simulation and region output") as d:
        cfg = corner_config(32, F(9, 10))
        a = run_monte_carlo(cfg, 20, master_seed=9).to_json()
        b = run_monte_carlo(cfg, 20, master_seed=9).to_json()
        f = tmp_path / "cfg.json"
        f.write_text(json.dumps(cfg.to_dict()))
        outs = []
        for argv in (
            ["--format", "json", "simulate", str(f), "--trials", "10", "--seed", "3"],
            ["--format", "json", "simulate", str(f), "--trials", "10", "--seed", "3"],
            ["--format", "json", "region", "compare", "--n11", "3", "--n12", "2", "--n21", "2", "--n22", "3", "--p1", "1/2", "--p2", "1/4"],
            ["--format", "json", "region", "compare", "--n11", "3", "--n12", "2", "--n21", "2", "--n22", "3", "--p1", "1/2", "--p2", "1/4"],
        ):
            assert main(argv) == 0
            outs.append(capsys.readouterr().out)
        d["text"] = "(sim JSON, CLI simulate, CLI region compare)"
        assert a == b and outs[0] == outs[1] and outs[2] == outs[3]


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
