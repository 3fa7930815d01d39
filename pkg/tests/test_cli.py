import argparse
import json
import re

import pytest

from schemmel.cli import (
    DEFAULT_SIEVE_LIMIT,
    SCAN_KEYS,
    UsageError,
    resolve_sieve_limit,
    resolve_table_limit,
)


def normalize_elapsed(text: str) -> str:
    return re.sub(r'"elapsed_ms":\d+', '"elapsed_ms":0', text)


def test_eval_plain(run_cli):
    code, out = run_cli(["eval", "--m", "2", "--n", "7", "--show-trajectory"])
    assert code == 0
    assert out == (
        "L = 5\n"
        "R = 3\n"
        "H = 1\n"
        "D = 9\n"
        "classification = abundant\n"
        "trajectory: 7 -> 5 -> 3 -> 1\n"
    )


def test_eval_stagnant_marker(run_cli):
    code, out = run_cli(["eval", "--m", "2", "--n", "10"])
    assert code == 0
    assert "classification = deficient (stagnant)" in out
    assert "trajectory" not in out


def test_eval_json(run_cli):
    code, out = run_cli(["eval", "--m", "2", "--n", "37147", "--format", "json"])
    assert code == 0
    data = json.loads(out)
    assert data["kind"] == "perfect"
    assert data["D"] == 37147


def test_scan_json_key_order(run_cli):
    code, out = run_cli(["scan", "--m", "2", "--end", "2000"])
    assert code == 0
    data = json.loads(out)
    assert tuple(data) == SCAN_KEYS
    assert data["m"] == 2 and data["start"] == 1 and data["end"] == 2000
    assert data["deficient"] + data["perfect_count"] + data["abundant"] == 2000


def test_scan_plain(run_cli):
    code, out = run_cli(["scan", "--m", "3", "--start", "2", "--end", "1000",
                         "--format", "plain"])
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "m = 3"
    assert "abundant = 0" in lines  # odd m > 1 admits no abundant numbers


def test_scan_worker_byte_identity(run_cli):
    code1, out1 = run_cli(["scan", "--m", "2", "--end", "30000"])
    code3, out3 = run_cli(["scan", "--m", "2", "--end", "30000", "--workers", "3"])
    assert code1 == code3 == 0
    assert normalize_elapsed(out1) == normalize_elapsed(out3)
    assert json.loads(out1)["perfect"] == []


def test_scan_env_capped_sieve_same_bytes(run_cli):
    code_a, out_a = run_cli(["scan", "--m", "2", "--end", "2000"])
    code_b, out_b = run_cli(
        ["scan", "--m", "2", "--end", "2000"],
        env={"SCHEMMEL_SIEVE_LIMIT": "500"},
    )
    assert code_a == code_b == 0
    assert normalize_elapsed(out_a) == normalize_elapsed(out_b)


def test_invalid_env_value(run_cli):
    code, _ = run_cli(
        ["scan", "--m", "2", "--end", "100"],
        env={"SCHEMMEL_SIEVE_LIMIT": "ten"},
    )
    assert code == 1


def test_sieve_limit_precedence(monkeypatch):
    base = dict(sieve_limit=None, table_limit=None)
    monkeypatch.delenv("SCHEMMEL_SIEVE_LIMIT", raising=False)
    args = argparse.Namespace(**base)
    assert resolve_sieve_limit(args) == DEFAULT_SIEVE_LIMIT

    monkeypatch.setenv("SCHEMMEL_SIEVE_LIMIT", "4096")
    assert resolve_sieve_limit(args) == 4096

    flagged = argparse.Namespace(**{**base, "sieve_limit": 512})
    assert resolve_sieve_limit(flagged) == 512  # flag beats environment
    assert resolve_table_limit(flagged) == 512

    explicit = argparse.Namespace(sieve_limit=512, table_limit=600)
    with pytest.raises(UsageError):
        resolve_table_limit(explicit)


def test_plot_data_bytes(run_cli):
    code, out = run_cli(["plot-data", "--m", "2", "--limit", "10"])
    assert code == 0
    assert out == "n,R_m\n2,1\n3,1\n4,1\n5,2\n6,1\n7,3\n8,1\n9,2\n10,1\n"


def test_plot_data_out_file(run_cli, tmp_path):
    target = tmp_path / "r.csv"
    code, out = run_cli(["plot-data", "--m", "2", "--limit", "50",
                         "--out", str(target)])
    assert code == 0
    assert out == ""  # everything went to the file
    written = target.read_bytes().decode()
    _, direct = run_cli(["plot-data", "--m", "2", "--limit", "50"])
    assert written == direct
    assert not written.endswith("\n\n")


def test_sets_plain(run_cli):
    code, out = run_cli(["sets", "--m", "4", "--limit", "30"])
    assert code == 0
    assert out == "{1,5,25,29}\n"


def test_sets_check_equality(run_cli):
    code, out = run_cli(["sets", "--m", "4", "--limit", "30", "--check-equality"])
    assert code == 0
    assert out.splitlines()[1] == "set agreement on [1, 30] PASS"


def test_sequence_output(run_cli):
    code, out = run_cli(["sequence", "--function", "D", "--m", "2", "--count", "7"])
    assert code == 0
    assert out == "0\n0\n1\n0\n4\n0\n9\n"

    code, out = run_cli(["sequence", "--function", "R", "--m", "3", "--count", "6"])
    assert code == 0
    assert out == "1\n1\n1\n1\n2\n1\n"


def test_verify_counterexample(run_cli):
    code, out = run_cli(["verify", "counterexample"])
    assert code == 0
    assert out == "R_2(480314203)=22 PASS\n3^18 < 480314203 < 3^19 PASS\n"


def test_verify_upper_bound_passes(run_cli):
    code, out = run_cli(["verify", "upper-bound", "--end", "1000"])
    assert code == 0
    assert out.count(" PASS") == 3


def test_verify_strict_ok(run_cli):
    code, out = run_cli(["verify", "conjecture", "--end", "1000", "--strict"])
    assert code == 0
    assert out.endswith("PASS\n")


def test_verify_failure_exit_code(run_cli):
    code, out = run_cli(["verify", "thm25", "--search-limit", "12"])
    assert code == 2
    assert out == "witness p0 <= 12 for m=2 (scanned 4 primes) FAIL\n"


def test_usage_errors(run_cli):
    assert run_cli(["frobnicate"])[0] == 1
    assert run_cli(["eval", "--m", "2"])[0] == 1
    assert run_cli(["eval", "--m", "2", "--n", "7", "--format", "csv"])[0] == 1
    assert run_cli(["verify", "nope"])[0] == 1
    assert run_cli(["scan", "--m", "2", "--end", "100",
                    "--table-limit", str(10**8)])[0] == 1
    assert run_cli([])[0] == 1


def test_server_side_rejection(run_cli):
    # reversed range passes parsing locally, the service rejects it
    code, _ = run_cli(["scan", "--m", "2", "--start", "9", "--end", "5"])
    assert code == 1


def test_resource_limit_exit_code(run_cli):
    big = str(2 * 10**8)
    code, _ = run_cli(["scan", "--m", "2", "--end", big,
                       "--sieve-limit", big, "--table-limit", big])
    assert code == 3
