import json

import pytest

from origami_monoids.cli import RunConfig, UsageError, run


def invoke(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def report(capsys, *argv):
    code, out, _ = invoke(capsys, *argv)
    return code, json.loads(out)


def test_enumerate_summary(capsys):
    code, r = report(capsys, "enumerate", "--monoid", "origami", "--n", "4")
    assert code == 0
    assert r["size"] == 294 and r["non_identity"] == 293
    assert r["schema_version"] == 1


def test_enumerate_jones_both_engines(capsys):
    code, r = report(capsys, "enumerate", "--monoid", "jones", "--n", "7", "--engine", "both")
    assert code == 0 and r["size"] == 429 and r["engines_agree"]


def test_kb_fallback(capsys):
    code, r = report(capsys, "enumerate", "--n", "4", "--engine", "kb", "--kb-max-rules", "10")
    assert code == 0 and r["size"] == 294 and r["kb_complete"] is False


def test_both_requires_complete_kb(capsys):
    code, _, err = invoke(capsys, "enumerate", "--n", "4", "--engine", "both", "--kb-max-rules", "10")
    assert code == 3 and "budget" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["enumerate", "--n", "1"],
        ["enumerate", "--n", "7"],
        ["verify", "--n", "3", "--suite", "nonsense"],
        ["verify", "--monoid", "jones", "--n", "3", "--suite", "identities"],
        ["normal-forms", "--monoid", "jones", "--n", "3"],
        ["greens", "--n", "3", "--format", "dot"],
    ],
)
def test_usage_errors(capsys, argv):
    assert invoke(capsys, *argv)[0] == 2


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["enumerate"])
    assert exc.value.code == 2


def test_budget_exit(capsys):
    assert invoke(capsys, "enumerate", "--n", "4", "--max-elements", "100")[0] == 3


def test_runconfig_validation():
    with pytest.raises(UsageError):
        RunConfig("origami", 7)
    assert RunConfig("origami", 7, large=True).n == 7
    assert RunConfig("jones", 9).n == 9


def test_cache_roundtrip(capsys, tmp_path):
    argv = ["enumerate", "--n", "4", "--cache", str(tmp_path)]
    _, cold = report(capsys, *argv)
    assert (tmp_path / "origami-n4-full-v1.npz").exists()
    _, warm = report(capsys, *argv)
    cold.pop("timing_seconds"), warm.pop("timing_seconds")
    assert cold == warm


def test_cache_env_var(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("ORIGAMI_MONOIDS_CACHE", str(tmp_path))
    invoke(capsys, "enumerate", "--monoid", "jones", "--n", "4")
    assert (tmp_path / "jones-n4-full-v1.npz").exists()


def test_stale_cache_is_an_error(capsys, tmp_path):
    import numpy as np

    np.savez(tmp_path / "origami-n3-full-v1.npz", version=np.int64(0), relations=np.array(""))
    code, _, err = invoke(capsys, "enumerate", "--n", "3", "--cache", str(tmp_path))
    assert code == 3 and "cache" in err


@pytest.mark.parametrize(
    "suite", ["identities", "submonoids", "projections", "conjecture", "redundancy", "h-trivial",
              "aperiodic", "d-equals-j", "regular-r", "core", "theorem", "regular-forms", "engines"]
)
def test_verify_suites_pass(capsys, suite):
    code, r = report(capsys, "verify", "--n", "3", "--suite", suite)
    assert code == 0
    assert r["passed"] and r["suite"] == suite and r["instances_checked"] > 0


def test_verify_oracle_jones(capsys):
    code, r = report(capsys, "verify", "--monoid", "jones", "--n", "4", "--suite", "oracle")
    assert code == 0 and r["failures"] == []


def test_conjecture_report_fields(capsys):
    _, r = report(capsys, "verify", "--n", "3", "--suite", "conjecture")
    assert r["candidates"] == r["monoid_size"] == 45 and r["asserted"]
    _, r5 = report(capsys, "verify", "--n", "5", "--suite", "conjecture")
    assert r5["asserted"] is False and "injective" in r5


def test_greens_report(capsys):
    code, r = report(capsys, "greens", "--monoid", "jones", "--n", "3")
    assert code == 0
    assert r["counts"]["D"] == 2 and r["h_trivial"] and r["d_equals_j"]
    assert r["d_order_covers"] == [["1", "h1"]]


def test_export_dot(capsys):
    code, out, _ = invoke(capsys, "export", "--n", "5", "--format", "dot")
    assert code == 0
    assert out.count("label=") == 9 and out.count("->") == 12
    _, out3, _ = invoke(capsys, "export", "--monoid", "jones", "--n", "3", "--format", "dot")
    assert out3.count("label=") == 2 and out3.count("->") == 1


def test_export_csv_and_json(capsys, tmp_path):
    target = tmp_path / "o3.csv"
    assert invoke(capsys, "export", "--n", "3", "--format", "csv", "--out", str(target))[0] == 0
    lines = target.read_text().splitlines()
    assert lines[0] == "element,rep,r,l,h,d,j" and len(lines) == 46
    _, out, _ = invoke(capsys, "export", "--n", "2", "--format", "json")
    assert json.loads(out)["size"] == 7


def test_normal_forms(capsys, tmp_path):
    target = tmp_path / "nf.tsv"
    assert invoke(capsys, "normal-forms", "--n", "2", "--out", str(target))[0] == 0
    rows = target.read_text().splitlines()
    assert len(rows) == 8
    assert rows[5].split("\t") == ["4", "g1uv", "b1", "a1", "1", "-", "b1 a1"]


@pytest.mark.parametrize(
    "argv",
    [
        ["greens", "--n", "4"],
        ["verify", "--n", "4", "--suite", "identities"],
        ["export", "--n", "4", "--format", "csv"],
        ["normal-forms", "--n", "3"],
    ],
)
def test_deterministic_output(capsys, argv):
    first = invoke(capsys, *argv)[1]
    second = invoke(capsys, *argv)[1]
    assert first == second
