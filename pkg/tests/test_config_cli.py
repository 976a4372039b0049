"""Config parsing and the command-line driver: exit codes, output schemas,
flag placement, and byte-for-byte determinism."""

import json
import math
import os
from fractions import Fraction as Q

import pytest

from gapsieve.cli import main
from gapsieve.config import (Config, format_rational, load_config,
                             parse_rational)


# ---------------------------------------------------------------------------
# config
# ---------------------------------------------------------------------------

def test_parse_rational():
    assert parse_rational("7/17") == Q(7, 17)
    assert parse_rational(" 3 ") == 3
    assert parse_rational("-1/4") == Q(-1, 4)
    with pytest.raises(ValueError):
        parse_rational("1/0")
    with pytest.raises(ValueError):
        parse_rational("a/b")


def test_format_rational_roundtrip():
    for q in (Q(7, 17), Q(0), Q(-3, 5), Q(4)):
        assert parse_rational(format_rational(q)) == q


def test_load_config(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"precision_bits": 256,
                                "default_epsilon": "1/20",
                                "rng_seed": 9}))
    cfg = load_config(str(path))
    assert cfg.precision_bits == 256
    assert cfg.default_epsilon == Q(1, 20)
    assert cfg.rng_seed == 9
    assert cfg.memory_budget_mb == 1024  # untouched default


def test_load_config_rejects_bad_input(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"precision_bits": 128,}')
    with pytest.raises(ValueError, match="line"):
        load_config(str(bad))
    unk = tmp_path / "unk.json"
    unk.write_text('{"no_such_key": 1}')
    with pytest.raises(ValueError, match="unknown config keys"):
        load_config(str(unk))
    zero = tmp_path / "zero.json"
    zero.write_text('{"default_epsilon": "1/0"}')
    with pytest.raises(ValueError):
        load_config(str(zero))
    arr = tmp_path / "arr.json"
    arr.write_text("[1, 2]")
    with pytest.raises(ValueError, match="object"):
        load_config(str(arr))


def test_cache_dir_env_override(monkeypatch):
    cfg = Config(cache_dir="/a")
    monkeypatch.delenv("GAPSIEVE_CACHE_DIR", raising=False)
    assert cfg.resolved_cache_dir() == "/a"
    monkeypatch.setenv("GAPSIEVE_CACHE_DIR", "/b")
    assert cfg.resolved_cache_dir() == "/b"


# ---------------------------------------------------------------------------
# CLI driver
# ---------------------------------------------------------------------------

def run_cli(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_sieve_json_schema_and_density(capsys):
    code, out, _ = run_cli(["sieve", "--x", "100000", "--y", "10000"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "gapsieve-interval v1"
    count = int(doc["bfree_count"])
    assert abs(count / 10000 - 6 / math.pi**2) < 0.01


def test_gaps_tau_zero_free(capsys):
    code, out, _ = run_cli(["gaps", "--source", "tau", "--limit", "20000"],
                           capsys)
    assert code == 0
    assert out.strip().splitlines()[-1] == "max_gap,0"


def test_theta_table_csv(capsys):
    code, out, _ = run_cli(["theta", "--step", "1/100"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 102  # header + 101 grid points
    assert lines[0] == "rho,theta,winner"
    assert lines[-1] == "1/1,7/17,prop7_68"
    assert lines[1].startswith("0/1,")


def test_json_format_of_table_payload(capsys):
    code, out, _ = run_cli(["theta", "--step", "1/4", "--format", "json"],
                           capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "gapsieve-table v1"
    assert doc["columns"] == ["rho", "theta", "winner"]
    assert len(doc["rows"]) == 5


def test_global_flags_accepted_on_either_side(capsys):
    a = run_cli(["--format", "json", "theta", "--step", "1/4"], capsys)
    b = run_cli(["theta", "--step", "1/4", "--format", "json"], capsys)
    assert a == b and a[0] == 0


def test_determinism_byte_identical(capsys):
    argv = ["expsum", "--M", "8", "--N", "8", "--X", "64", "--trials", "3",
            "--seed", "5"]
    a = run_cli(argv, capsys)
    b = run_cli(argv, capsys)
    assert a == b and a[0] == 0
    header = a[1].splitlines()[0]
    assert header.startswith("formula,X,M,N,H,")


def test_seed_changes_expsum_output(capsys):
    base = ["expsum", "--M", "8", "--N", "8", "--X", "64", "--trials", "2"]
    a = run_cli(base + ["--seed", "1"], capsys)
    b = run_cli(base + ["--seed", "2"], capsys)
    assert a[1] != b[1]


def test_out_writes_file(tmp_path, capsys):
    path = tmp_path / "table.csv"
    code, out, _ = run_cli(["theta", "--step", "1/2", "--out", str(path)],
                           capsys)
    assert code == 0 and out == ""
    assert path.read_text().splitlines()[0] == "rho,theta,winner"


def test_usage_errors_exit_1(capsys):
    assert run_cli(["sieve", "--y", "10"], capsys)[0] == 1    # missing --x
    assert run_cli(["no-such-command"], capsys)[0] == 1
    assert run_cli(["theta", "--step", "0/1"], capsys)[0] == 1
    assert run_cli(["sieve", "--x", "-5", "--y", "10"], capsys)[0] == 1
    code, _, err = run_cli(["sieve", "--x", "1", "--y", "10", "--rule",
                            "explicit", "--members", "4,6"], capsys)
    assert code == 1 and "coprime" in err


def test_resource_budget_exit_2(tmp_path, capsys):
    cfg = tmp_path / "tiny.json"
    cfg.write_text('{"memory_budget_mb": 1}')
    code, _, err = run_cli(["--config", str(cfg), "sieve",
                            "--x", "0", "--y", str(10**7)], capsys)
    assert code == 2
    assert "budget" in err


def test_config_epsilon_feeds_weights(tmp_path, capsys):
    cfg = tmp_path / "eps.json"
    cfg.write_text('{"default_epsilon": "1/20"}')
    code, out, _ = run_cli(["--config", str(cfg), "weights",
                            "--x", "1000000", "--y", "2000"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["parameters"]["eps"] == "1/20"
    assert doc["identity_A1_eq_main_plus_R"]["holds"] is True
    assert doc["parameters"]["n_quasi_primes"] == 147


def test_weights_degenerate_parameters_exit_1(capsys):
    # tiny rho collapses the two-factor window ordering
    code, _, err = run_cli(["weights", "--rho", "1/100", "--eps", "1/20"],
                           capsys)
    assert code == 1
    assert "constraint" in err


def test_kloosterman_report_and_exit_codes(capsys):
    code, out, _ = run_cli(["kloosterman", "--p-max", "30",
                            "--nu-max", "8"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "gapsieve-kloosterman v1"
    assert doc["near_zeros"] == []
    assert doc["inconclusive"] is False
    # absurd tolerance makes everything a near-zero at any precision: the
    # scan reports inconclusive and exits 3
    code2, out2, _ = run_cli(["kloosterman", "--p-max", "10", "--nu-max", "4",
                              "--tolerance", "0.9"], capsys)
    assert code2 == 3
    assert json.loads(out2)["inconclusive"] is True


def test_hecke_dump_and_scan(capsys):
    code, out, _ = run_cli(["hecke", "--limit", "10"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,coeff"
    assert lines[1] == "1,1" and lines[2] == "2,-24"
    code, out, _ = run_cli(["hecke", "--source", "elliptic", "--a4", "0",
                            "--a6", "1", "--scan-primes", "30"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "gapsieve-vanishing v1"
    by_p = {r["p"]: r for r in doc["reports"]}
    assert "2" not in by_p and "3" not in by_p  # bad primes skipped
    assert by_p["5"]["vanishing_orders"][0] == "1"  # supersingular at 5


def test_moments_csv(capsys):
    code, out, _ = run_cli(["moments", "--x-max", "100", "--points", "4",
                            "--r", "2"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "x,total,ratio"
    assert len(lines) == 5
    assert lines[1].startswith("25,")


def test_dict_payload_as_csv(capsys):
    code, out, _ = run_cli(["sieve", "--x", "0", "--y", "100",
                            "--format", "csv"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "key,value"
    assert any(line.startswith("bfree_count,") for line in lines)


def test_missing_config_file_exit_1(capsys):
    code, _, err = run_cli(["--config", "/nonexistent/cfg.json",
                            "theta", "--step", "1/2"], capsys)
    assert code == 1
