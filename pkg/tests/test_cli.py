import json
import subprocess
import sys

import pytest

from coxdeform.cli import EXIT_CAP, EXIT_FAIL, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


# -- examples ------------------------------------------------------------------


def test_chi_linial(capsys):
    code, rep = run_json(capsys, "chi", "--family", "linial", "--n", "4", "--engine", "nbc")
    assert code == EXIT_OK
    assert rep["results"]["nbc"]["regions"] == 36
    assert rep["results"]["nbc"]["bounded"] == 4


def test_chi_both_engines_agree(capsys):
    code, rep = run_json(capsys, "chi", "--family", "shi", "--n", "3", "--engine", "both")
    assert code == EXIT_OK
    assert rep["agree"] == {"nbc/whitney": True}
    assert rep["results"]["whitney"]["chi_essential"]["text"] == str(rep["results"]["nbc"]["chi_essential"]["text"])


def test_count_alternating_trees(capsys):
    code, out, _ = run(capsys, "count", "--family", "alternating-trees", "--n", "0")
    assert code == EXIT_OK
    assert out.strip().endswith(": 1")


def test_count_csv(capsys):
    code, out, _ = run(capsys, "count", "--family", "sleek-posets", "--n", "4", "--csv", "--start", "1")
    assert code == EXIT_OK
    assert out.splitlines() == ["n,count", "1,1", "2,2", "3,7", "4,36"]


def test_count_forests_json(capsys):
    code, rep = run_json(capsys, "count", "--family", "forests", "--n", "4")
    assert rep["result"]["total"] == 38


def test_roots_trunc_affine(capsys):
    code, rep = run_json(capsys, "roots", "--family", "trunc-affine", "--a", "1", "--b", "3", "--n", "5")
    assert code == EXIT_OK
    assert rep["expected_real_part"] == "15/2"
    assert rep["max_deviation"] < 1e-8
    assert all(len(z) == 2 for z in rep["roots"])


def test_chi_closed_forms(capsys):
    _, rep = run_json(capsys, "chi-closed", "--family", "shi", "--n", "3")
    assert rep["regions"] == 16
    _, rep2 = run_json(capsys, "chi-closed", "--family", "shi", "--n", "3", "--form", "2")
    assert rep2["chi"] == rep["chi"]
    _, rep = run_json(capsys, "chi-closed", "--family", "exceptional", "--which", "F4_alt")
    assert rep["chi"]["coefficients"] == ["2917", "-1368", "258", "-24", "1"]


def test_regions_all_engines(capsys):
    code, rep = run_json(capsys, "regions", "--family", "catalan", "--n", "3", "--engine", "all")
    assert code == EXIT_OK and rep["agree"]
    assert rep["results"]["geometric"] == {"r": 19, "b": 7}


def test_regions_sign_vectors(capsys):
    _, rep = run_json(capsys, "regions", "--family", "linial", "--n", "3", "--sign-vectors")
    assert len(rep["sign_vectors"]) == 7


def test_series_affine(capsys):
    code, rep = run_json(capsys, "series", "--kind", "affine", "--a", "0", "--b", "2", "--order", "6")
    assert code == EXIT_OK
    assert rep["counts"] == [1, 1, 2, 7, 36, 246, 2104]


def test_series_other_kinds(capsys):
    _, rep = run_json(capsys, "series", "--kind", "semigeneric", "--order", "6")
    assert rep["counts"] == [1, 1, 3, 19, 195, 2831, 53703]
    code, rep = run_json(capsys, "series", "--kind", "qtower", "--a", "1", "--b", "2", "--order", "6")
    assert code == EXIT_OK and rep["ratio_matches_f"]
    _, rep = run_json(capsys, "series", "--kind", "chi", "--a", "1", "--b", "2", "--q", "5", "--order", "4")
    assert rep["counts"][3] == 20


def test_oracle(capsys):
    code, rep = run_json(capsys, "oracle", "--family", "linial", "--n", "3", "--prime", "11")
    assert code == EXIT_OK
    assert rep["primes"][0] == {"p": 11, "points": 1001, "chi_at_p": 1001, "agree": True}
    assert len(rep["primes"]) == 3


def test_arrangement_file(tmp_path, capsys):
    from coxdeform.arrangement import build_family

    path = tmp_path / "a.json"
    path.write_text(json.dumps(build_family("shi", 3).to_dict()))
    _, rep = run_json(capsys, "chi", "--file", str(path))
    assert rep["results"]["nbc"]["regions"] == 16


# -- exit codes ------------------------------------------------------------------


def test_cap_exceeded_exit_code(capsys):
    code, _, err = run(capsys, "chi", "--family", "catalan0", "--n", "4", "--engine", "whitney", "--whitney-cap", "10")
    assert code == EXIT_CAP
    assert "cap" in err


def test_enumeration_cap_exit_code(capsys):
    code, _, _ = run(capsys, "count", "--family", "sleek-posets", "--n", "9")
    assert code == EXIT_CAP


@pytest.mark.parametrize(
    "argv",
    [
        ["chi", "--family", "nosuch", "--n", "3"],
        ["chi", "--family", "linial"],
        ["count", "--family", "nosuch", "--n", "3"],
        ["count", "--family", "graded-forests", "--n", "3"],
        ["roots", "--family", "rootsystem", "--n", "3"],
        ["oracle", "--family", "linial", "--n", "3", "--prime", "12"],
        ["series", "--kind", "affine"],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_USAGE
    assert err.startswith("arr:")


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["chi", "--engine", "magic"])
    assert exc.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == EXIT_USAGE


def test_failed_root_check_exit_code(capsys):
    code, _, _ = run(capsys, "roots", "--family", "linial", "--n", "6", "--tol", "0")
    assert code == EXIT_FAIL


# -- determinism -----------------------------------------------------------------


@pytest.mark.parametrize(
    "argv",
    [
        ["regions", "--family", "catalan", "--n", "3", "--engine", "all", "--sign-vectors"],
        ["chi", "--family", "rootsystem", "--R", "BC", "--a", "0", "--b", "2", "--n", "2", "--engine", "both"],
        ["verify", "--suite", "roots"],
    ],
)
def test_json_is_byte_identical(capsys, argv):
    _, first, _ = run(capsys, *argv, "--json")
    _, second, _ = run(capsys, *argv, "--json")
    assert first == second


def test_verify_suite_json(capsys):
    code, rep = run_json(capsys, "verify", "--suite", "series")
    assert code == EXIT_OK
    assert rep["passed"] is True
    assert [r["criterion"] for r in rep["results"]] == [6]
    assert "seconds" not in rep["results"][0]


def test_verify_text_table(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "roots", "--threads", "2")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0].startswith("[PASS]  7.") and lines[1].startswith("[PASS]  8.")
    assert lines[-1] == "2/2 criteria passed"


def test_console_script():
    out = subprocess.run(
        [sys.executable, "-m", "coxdeform.cli", "count", "--family", "lbs-trees", "--n", "5"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == "lbs-trees n=5: 246"
