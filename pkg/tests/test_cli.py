"""Command-line behavior: exit codes, output formats, goldens, figures."""

import json
import os
import subprocess
import sys

import pytest

from skewlab.cli import main

HERE = os.path.dirname(__file__)
SCEN = os.path.abspath(os.path.join(HERE, "..", "scenarios"))
GOLDEN = os.path.join(HERE, "golden")


def _run_main(argv, out):
    code = main(argv + ["--out", str(out)])
    return code, out.read_text() if out.exists() else None


def test_validate_scenario_ok(tmp_path):
    out = tmp_path / "r.txt"
    code, text = _run_main(
        ["validate", os.path.join(SCEN, "matrix_center.json"), "--seed", "0"], out
    )
    assert code == 0
    assert text.startswith("== skewlab validate:")
    assert "-" * 60 in text
    assert "status: ok" in text or "-> ok" in text


def test_json_format_is_canonical(tmp_path):
    out = tmp_path / "r.json"
    code, text = _run_main(
        [
            "center",
            os.path.join(SCEN, "truncated_derivation.json"),
            "--format",
            "json",
        ],
        out,
    )
    assert code == 0
    doc = json.loads(text)
    assert doc["tool"]["name"] == "skewlab"
    assert doc["command"] == "center"
    assert [r["status"] for r in doc["records"]] == ["ok"] * len(doc["records"])
    # canonical form: sorted keys, two-space indent, no timing
    assert text == json.dumps(doc, indent=2, sort_keys=True) + "\n"
    assert "elapsed" not in text


def test_replay_matches_golden(tmp_path):
    out = tmp_path / "r.json"
    code, text = _run_main(
        ["replay", "ex-4.8-truncated-shift(2)", "--seed", "0", "--format", "json"],
        out,
    )
    assert code == 0
    with open(os.path.join(GOLDEN, "replay_truncated_shift_2.json")) as fh:
        assert text == fh.read()


def test_replay_all_covers_defaults(tmp_path):
    out = tmp_path / "r.json"
    code, text = _run_main(["replay", "all", "--format", "json"], out)
    assert code == 0
    doc = json.loads(text)
    assert len(doc["records"]) == 6
    assert all(r["passed"] for r in doc["records"])


def test_exit_two_on_refused_run(tmp_path):
    # the pipeline run on the constrained ring is an honest refusal
    out = tmp_path / "r.json"
    code, text = _run_main(
        ["pipeline", os.path.join(SCEN, "example_ring.json"), "--format", "json"],
        out,
    )
    assert code == 2
    doc = json.loads(text)
    assert any(r["status"] == "error" and r["error"] == "OutOfCatalog" for r in doc["records"])


def test_exit_zero_on_negative_verdicts(tmp_path):
    # honest "not central" verdicts are completed analyses, not failures
    out = tmp_path / "r.json"
    code, text = _run_main(
        ["center", os.path.join(SCEN, "matrix_center.json"), "--format", "json"], out
    )
    assert code == 0
    doc = json.loads(text)
    verdicts = [
        e["centrality"]["verdict"]
        for r in doc["records"]
        if "elements" in r
        for e in r["elements"]
    ]
    assert "not-central" in verdicts


def test_exit_three_on_missing_file(tmp_path):
    assert main(["validate", str(tmp_path / "absent.json")]) == 3


def test_exit_three_on_bad_json(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text("{not json")
    assert main(["validate", str(p)]) == 3


def test_exit_three_on_unknown_replay(tmp_path):
    assert main(["replay", "ex-9.9-missing"]) == 3
    assert main(["replay", "ex-2.1(7)"]) == 3


def test_figures_are_rendered(tmp_path):
    out = tmp_path / "r.txt"
    figs = tmp_path / "figs"
    code = main(
        [
            "decompose",
            os.path.join(SCEN, "shift_pipeline.json"),
            "--out",
            str(out),
            "--figures",
            str(figs),
        ]
    )
    assert code == 0
    pngs = sorted(p.name for p in figs.glob("*.png"))
    assert "summary.png" in pngs
    assert any("kernel_chain" in p for p in pngs)
    for p in figs.glob("*.png"):
        assert p.read_bytes()[:4] == b"\x89PNG"


def test_udim_figures(tmp_path):
    out = tmp_path / "r.txt"
    figs = tmp_path / "figs"
    code = main(
        [
            "center",
            os.path.join(SCEN, "orbit_swap.json"),
            "--out",
            str(out),
            "--figures",
            str(figs),
        ]
    )
    assert code == 0
    assert any("udim" in p.name for p in figs.glob("*.png"))


def _cli(args):
    return subprocess.run(
        [sys.executable, "-m", "skewlab.cli"] + args,
        capture_output=True,
        timeout=300,
    )


def test_byte_determinism_across_processes():
    a = _cli(["replay", "ex-2.1", "--seed", "0", "--format", "json"])
    b = _cli(["replay", "ex-2.1", "--seed", "0", "--format", "json"])
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout and a.stdout


def test_parallel_output_identical(tmp_path):
    path = os.path.join(SCEN, "orbit_swap.json")
    seq = _cli(["center", path, "--seed", "3", "--format", "json"])
    par = _cli(["center", path, "--seed", "3", "--format", "json", "--parallel"])
    assert seq.returncode == par.returncode == 0
    assert seq.stdout == par.stdout


def test_seed_is_recorded(tmp_path):
    out = tmp_path / "r.json"
    code, text = _run_main(
        ["validate", os.path.join(SCEN, "orbit_swap.json"), "--seed", "11", "--format", "json"],
        out,
    )
    assert code == 0
    assert json.loads(text)["seed"] == 11


def test_usage_error_is_not_a_crash():
    with pytest.raises(SystemExit) as e:
        main([])
    assert e.value.code == 2
