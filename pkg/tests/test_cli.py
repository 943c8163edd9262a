import csv
import io
import json

import pytest
from conftest import corner_config, zero_rate_config

from ldic.cli import main

CH = ["--n11", "3", "--n12", "2", "--n21", "2", "--n22", "3"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def as_json(capsys, *argv):
    code, out, _ = run(capsys, "--format", "json", *argv)
    return code, json.loads(out)


# region


def test_compare_equal(capsys):
    code, out, _ = run(capsys, "region", "compare", *CH, "--p1", "1/2", "--p2", "1/2")
    assert code == 0 and out.strip() == "equal"


def test_outer_with_full_feedback_keeps_three_families(capsys):
    code, data = as_json(capsys, "region", "outer", *CH, "--p1", "1", "--p2", "1")
    assert code == 0
    coeffs = {(c["coeffs"].get("R1", "0"), c["coeffs"].get("R2", "0")) for c in data["constraints"]}
    assert coeffs <= {("1", "0"), ("0", "1"), ("1", "1")}


def test_outer_all_zero_is_origin(capsys):
    code, out, _ = run(capsys, "--format", "csv", "region", "outer", "--n11", "0", "--n12", "0", "--n21", "0", "--n22", "0", "--p1", "0", "--p2", "0")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and {r["bound"] for r in rows} == {"0"}


def test_region_from_channel_file(tmp_path, capsys):
    f = tmp_path / "ch.json"
    f.write_text(json.dumps({"n11": 3, "n12": 2, "n21": 2, "n22": 3, "q00": "1/4", "q01": "1/4", "q10": "1/4", "q11": "1/4"}))
    code, out, _ = run(capsys, "region", "compare", "--channel", str(f))
    assert code == 0 and out.strip() == "equal"


def test_region_missing_flags_is_usage_error(capsys):
    code, _, err = run(capsys, "region", "outer", "--n11", "3")
    assert code == 2 and "error" in err


def test_float_like_bad_probability_rejected(capsys):
    code, _, _ = run(capsys, "region", "outer", *CH, "--p1", "half", "--p2", "0")
    assert code == 2
    code, _, _ = run(capsys, "region", "outer", *CH, "--p1", "3/2", "--p2", "0")
    assert code == 2


# closed forms


def test_pstar_examples(capsys):
    assert as_json(capsys, "pstar", "--alpha", "1/3")[1]["pstar"] == "1/2"
    assert as_json(capsys, "pstar", "--alpha", "1")[1]["pstar"] == "0"


def test_symcap_example(capsys):
    code, out, _ = run(capsys, "symcap", "--n", "2", "--alpha", "3", "--p", "1/2")
    assert code == 0 and out.startswith("3 (3.000000)")


def test_symcap_non_integral_alpha_n(capsys):
    code, _, err = run(capsys, "symcap", "--n", "2", "--alpha", "1/3", "--p", "0")
    assert code == 2 and err


def test_sweep_rows(capsys):
    code, out, _ = run(capsys, "--format", "csv", "sweep", "--n", "12", "--alpha", "1/4,1/2,2/3,1,2,3", "--p", "0,1/4,1/2,1")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 24
    assert list(rows[0]) == ["alpha", "p", "csym", "pstar"]
    assert len({r["csym"] for r in rows if r["alpha"] == "2/3"}) == 1


def test_single_point_sweep_matches_symcap(capsys):
    _, sweep = as_json(capsys, "sweep", "--n", "12", "--alpha", "1/2", "--p", "1/4")
    _, sym = as_json(capsys, "symcap", "--n", "12", "--alpha", "1/2", "--p", "1/4")
    assert sweep["rows"][0]["csym"] == sym["csym"]


# verification suites


def test_verify_constant_inequality(capsys):
    code, data = as_json(capsys, "verify", "fact1", "--nmax", "4")
    assert code == 0 and data["passed"]


def test_verify_region_grid_small(capsys):
    code, out, _ = run(capsys, "verify", "theorem1-grid", "--nmax", "3", "--pgrid", "0,1/2,1")
    assert code == 0 and "pass" in out


def test_verify_dominance_suite(capsys):
    code, data = as_json(capsys, "verify", "appendix-a", "--nmax", "3")
    assert code == 0 and data["passed"] and not data["failures"]


def test_unknown_suite_is_usage_error(capsys):
    assert run(capsys, "verify", "everything")[0] == 2


# simulation


def write_config(tmp_path, cfg, name="cfg.json"):
    f = tmp_path / name
    f.write_text(json.dumps(cfg.to_dict()))
    return f


def test_simulate_zero_rate(tmp_path, capsys):
    f = write_config(tmp_path, zero_rate_config())
    code, data = as_json(capsys, "simulate", str(f), "--trials", "10")
    assert code == 0 and data["err1"] == data["err2"] == 0


def test_simulate_is_byte_identical(tmp_path, capsys):
    f = write_config(tmp_path, corner_config(16, "9/10"))
    a = run(capsys, "--format", "json", "--seed", "4", "simulate", str(f), "--trials", "8")[1]
    b = run(capsys, "simulate", str(f), "--trials", "8", "--format", "json", "--seed", "4")[1]
    assert a == b


def test_simulate_writes_trace_and_out(tmp_path, capsys):
    f = write_config(tmp_path, corner_config(8, "1/2", B=2))
    out, trace = tmp_path / "res.csv", tmp_path / "trace.json"
    code, _, _ = run(capsys, "--format", "csv", "--out", str(out), "simulate", str(f), "--trials", "3", "--trace", str(trace))
    assert code == 0
    assert out.read_text().startswith("trial_count,r1p,r1c,r2p,r2c,N,B,err1,err2,outage")
    assert len(json.loads(trace.read_text())) == 3


def test_simulate_fractional_bits_names_the_product(tmp_path, capsys):
    data = zero_rate_config(N=3).to_dict()
    data["R1p"] = "1/2"
    f = tmp_path / "bad.json"
    f.write_text(json.dumps(data))
    code, _, err = run(capsys, "simulate", str(f))
    assert code == 2 and "3*1/2" in err


def test_simulate_missing_file(tmp_path, capsys):
    assert run(capsys, "simulate", str(tmp_path / "nope.json"))[0] == 2


def test_verify_has_a_csv_summary(capsys):
    code, out, _ = run(capsys, "--format", "csv", "verify", "fact1", "--nmax", "1")
    assert code == 0 and out.splitlines()[0] == "suite,passed,checked,failures"


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["--format", "xml", "pstar", "--alpha", "1"]])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2
