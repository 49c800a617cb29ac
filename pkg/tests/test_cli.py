"""End-to-end command-line behavior, including exit codes."""

import json

import pytest

from proverb.cli import main
from proverb.controller import load_trace, replay
from proverb.decision import TimeCost, parse_utility_spec
from proverb.profiles import load

UTIL = (
    "actions=act_w,act_not_w; u(act_w,w)=1; u(act_w,~w)=0; "
    "u(act_not_w,w)=0; u(act_not_w,~w)=1"
)


def run_cli(*argv):
    return main(list(argv))


def test_no_command_is_usage_error(capsys):
    assert run_cli() == 2
    capsys.readouterr()


def test_unknown_command_is_usage_error(capsys):
    assert run_cli("frobnicate") == 2
    capsys.readouterr()


def test_gen_writes_deterministic_corpus(tmp_path, capsys):
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    for out in (out_a, out_b):
        code = run_cli(
            "gen", "--clauses", "6", "--lits", "2", "--alphabet", "4",
            "--seed", "11", "--count", "3", "--out", str(out),
        )
        assert code == 0
    names = sorted(p.name for p in out_a.iterdir())
    assert names == ["matrix_0.cnf", "matrix_1.cnf", "matrix_2.cnf"]
    for name in names:
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes()
    assert "wrote 3 instances" in capsys.readouterr().out


def test_gen_rejects_bad_config(tmp_path, capsys):
    code = run_cli(
        "gen", "--clauses", "5", "--lits", "9", "--alphabet", "4",
        "--seed", "1", "--count", "1", "--out", str(tmp_path / "x"),
    )
    assert code == 2
    assert "error:" in capsys.readouterr().err


def make_corpus(tmp_path, *, clauses=8, alphabet=3, seed=7, count=3):
    out = tmp_path / "corpus"
    assert (
        run_cli(
            "gen", "--clauses", str(clauses), "--lits", "2", "--alphabet",
            str(alphabet), "--seed", str(seed), "--count", str(count),
            "--out", str(out),
        )
        == 0
    )
    return out


def test_prove_reports_verdict_and_witness(tmp_path, capsys):
    corpus = make_corpus(tmp_path, count=8)
    saw_open = saw_exhausted = False
    for i in range(8):
        code = run_cli("prove", str(corpus / f"matrix_{i}.cnf"))
        out = capsys.readouterr().out
        assert code == 0
        if "status: W_FALSE" in out:
            saw_open = True
            witness_line = [l for l in out.splitlines() if l.startswith("witness:")]
            assert len(witness_line) == 1
            ints = [int(v) for v in witness_line[0].split()[1:]]
            assert len(ints) == 8
            assert all(v != 0 for v in ints)
        else:
            assert "status: W_TRUE" in out
            assert "fraction: 1/1 (1.000000)" in out
            saw_exhausted = True
        assert "closures:" in out
    assert saw_open and saw_exhausted


def test_prove_budget_exhaustion_exits_3(tmp_path, capsys):
    out = tmp_path / "c"
    run_cli(
        "gen", "--clauses", "20", "--lits", "3", "--alphabet", "4",
        "--seed", "3", "--count", "1", "--out", str(out),
    )
    code = run_cli("prove", str(out / "matrix_0.cnf"), "--budget", "5")
    text = capsys.readouterr().out
    assert code == 3
    assert "status: RUNNING" in text


def test_prove_presort_flag_preserves_verdict(tmp_path, capsys):
    corpus = make_corpus(tmp_path, count=5)
    capsys.readouterr()
    for i in range(5):
        run_cli("prove", str(corpus / f"matrix_{i}.cnf"))
        plain = capsys.readouterr().out.splitlines()[0]
        run_cli("prove", str(corpus / f"matrix_{i}.cnf"), "--presort")
        sorted_out = capsys.readouterr().out.splitlines()[0]
        assert plain == sorted_out


def test_profile_and_curve(tmp_path, capsys):
    prof_path = tmp_path / "prof.json"
    code = run_cli(
        "profile", "--clauses", "8", "--lits", "2", "--alphabet", "3",
        "--seed", "7", "--count", "40", "--out", str(prof_path),
    )
    assert code == 0
    assert "profile over 40 instances" in capsys.readouterr().out
    profile = load(prof_path)
    assert len(profile.records) == 40
    assert profile.context.n_clauses == 8
    assert profile.context.heuristic == "none"

    curve_path = tmp_path / "curve.csv"
    assert run_cli("curve", "--profile", str(prof_path), "--out", str(curve_path)) == 0
    lines = curve_path.read_text().splitlines()
    assert lines[0] == "s,survival,posterior"
    assert len(lines) == 102
    capsys.readouterr()


def test_profile_jobs_flag_matches_serial(tmp_path):
    serial = tmp_path / "serial.json"
    parallel = tmp_path / "parallel.json"
    base = [
        "profile", "--clauses", "8", "--lits", "2", "--alphabet", "3",
        "--seed", "9", "--count", "24",
    ]
    assert run_cli(*base, "--out", str(serial)) == 0
    assert run_cli(*base, "--jobs", "2", "--out", str(parallel)) == 0
    assert load(serial) == load(parallel)


def test_curve_prior_override(tmp_path, capsys):
    prof_path = tmp_path / "p.json"
    run_cli(
        "profile", "--clauses", "8", "--lits", "2", "--alphabet", "3",
        "--seed", "7", "--count", "20", "--out", str(prof_path),
    )
    out = tmp_path / "c.csv"
    assert run_cli(
        "curve", "--profile", str(prof_path), "--out", str(out), "--prior", "0"
    ) == 0
    assert out.read_text().splitlines()[1].endswith(",0.000000")
    capsys.readouterr()


def test_decide_from_posterior(capsys):
    assert run_cli("decide", "--utilities", UTIL, "--posterior", "0.7") == 0
    out = capsys.readouterr().out
    assert "posterior: 0.700000" in out
    assert "p*: 0.500000" in out
    assert "action: act_w" in out
    assert "eu: 0.700000" in out


def test_decide_from_prior_and_survival(capsys):
    assert run_cli(
        "decide", "--utilities", UTIL, "--prior", "0.3", "--survival", "0.2"
    ) == 0
    out = capsys.readouterr().out
    assert "posterior: 0.681818" in out
    assert "action: act_w" in out


def test_decide_from_profile(tmp_path, capsys):
    prof_path = tmp_path / "p.json"
    run_cli(
        "profile", "--clauses", "8", "--lits", "2", "--alphabet", "3",
        "--seed", "7", "--count", "30", "--out", str(prof_path),
    )
    capsys.readouterr()
    code = run_cli(
        "decide", "--utilities", UTIL, "--profile", str(prof_path),
        "--fraction", "1/2",
    )
    assert code == 0
    out = capsys.readouterr().out
    profile = load(prof_path)
    from fractions import Fraction

    want = float(profile.posterior_at(Fraction(1, 2)))
    got = float(out.splitlines()[0].split()[1])
    assert got == pytest.approx(want, abs=1e-6)


def test_decide_requires_exactly_one_input_form(capsys):
    assert run_cli("decide", "--utilities", UTIL) == 2
    assert (
        run_cli(
            "decide", "--utilities", UTIL, "--posterior", "0.5", "--prior", "0.5",
            "--survival", "0.5",
        )
        == 2
    )
    capsys.readouterr()


def test_decide_dominant_action_reports_undefined_threshold(capsys):
    spec = (
        "actions=always,never; u(always,w)=1; u(always,~w)=1; "
        "u(never,w)=0; u(never,~w)=0"
    )
    assert run_cli("decide", "--utilities", spec, "--posterior", "0.5") == 0
    out = capsys.readouterr().out
    assert "p*: undefined" in out
    assert "action: always" in out


def test_run_analytic_writes_replayable_trace(tmp_path, capsys):
    corpus = make_corpus(tmp_path, count=1)
    trace_path = tmp_path / "trace.jsonl"
    spec = UTIL + "; cost=linear:0.001"
    code = run_cli(
        "run", str(corpus / "matrix_0.cnf"), "--utilities", spec,
        "--analytic", "1", "--prior", "1/2", "--chunk", "16",
        "--out", str(trace_path),
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "stop:" in out
    trace = load_trace(trace_path)
    utilities, timecost = parse_utility_spec(spec)
    from proverb.controller import AnalyticSource
    from fractions import Fraction

    report = replay(
        trace, utilities=utilities, timecost=timecost,
        analytic=AnalyticSource(Fraction(1, 2), 1),
    )
    assert report.ok, report.message


def test_run_with_mixture_and_lookaheads(tmp_path, capsys):
    corpus = make_corpus(tmp_path, count=1)
    code = run_cli(
        "run", str(corpus / "matrix_0.cnf"), "--utilities", UTIL,
        "--analytic", "1:0.5,2:0.5", "--prior", "0.4",
        "--chunk", "8", "--lookahead", "8,full",
    )
    assert code == 0
    assert "stop:" in capsys.readouterr().out


def test_run_requires_one_source(tmp_path, capsys):
    corpus = make_corpus(tmp_path, count=1)
    assert run_cli("run", str(corpus / "matrix_0.cnf"), "--utilities", UTIL) == 2
    assert (
        run_cli(
            "run", str(corpus / "matrix_0.cnf"), "--utilities", UTIL,
            "--analytic", "1",
        )
        == 2
    )  # missing --prior
    capsys.readouterr()


def test_run_profile_source_with_matching_context(tmp_path, capsys):
    corpus = make_corpus(tmp_path, clauses=8, seed=7, count=2)
    prof_path = tmp_path / "p.json"
    run_cli(
        "profile", "--clauses", "8", "--lits", "2", "--alphabet", "3",
        "--seed", "7", "--count", "30", "--out", str(prof_path),
    )
    code = run_cli(
        "run", str(corpus / "matrix_0.cnf"), "--utilities", UTIL + "; cost=linear:0.002",
        "--profile", str(prof_path), "--chunk", "16", "--strict",
    )
    captured = capsys.readouterr()
    assert code == 0
    assert "warning:" not in captured.err


def test_run_strict_context_mismatch_exits_4(tmp_path, capsys):
    corpus = make_corpus(tmp_path, clauses=6, seed=3, count=1)
    prof_path = tmp_path / "p.json"
    run_cli(
        "profile", "--clauses", "8", "--lits", "2", "--alphabet", "3",
        "--seed", "7", "--count", "20", "--out", str(prof_path),
    )
    capsys.readouterr()
    relaxed = run_cli(
        "run", str(corpus / "matrix_0.cnf"), "--utilities", UTIL,
        "--profile", str(prof_path), "--chunk", "8",
    )
    captured = capsys.readouterr()
    assert relaxed == 0
    assert "warning:" in captured.err
    strict = run_cli(
        "run", str(corpus / "matrix_0.cnf"), "--utilities", UTIL,
        "--profile", str(prof_path), "--chunk", "8", "--strict",
    )
    captured = capsys.readouterr()
    assert strict == 4
    assert "context mismatch" in captured.err


def test_run_presort_profile_context(tmp_path, capsys):
    # A presort profile applied to a presorted run matches contexts.
    corpus = make_corpus(tmp_path, clauses=8, seed=7, count=1)
    prof_path = tmp_path / "p.json"
    run_cli(
        "profile", "--clauses", "8", "--lits", "2", "--alphabet", "3",
        "--seed", "7", "--count", "20", "--presort", "--out", str(prof_path),
    )
    capsys.readouterr()
    code = run_cli(
        "run", str(corpus / "matrix_0.cnf"), "--utilities", UTIL,
        "--profile", str(prof_path), "--presort", "--strict", "--chunk", "8",
    )
    captured = capsys.readouterr()
    assert code == 0, captured.err
    mismatched = run_cli(
        "run", str(corpus / "matrix_0.cnf"), "--utilities", UTIL,
        "--profile", str(prof_path), "--strict", "--chunk", "8",
    )
    capsys.readouterr()
    assert mismatched == 4


def test_compare_heuristic_outputs(tmp_path, capsys):
    out_dir = tmp_path / "cmp"
    code = run_cli(
        "compare-heuristic", "--clauses", "8", "--lits", "2", "--alphabet", "3",
        "--seed", "7", "--count", "20", "--out", str(out_dir),
    )
    assert code == 0
    assert "priors:" in capsys.readouterr().out
    plain = load(out_dir / "profile_none.json")
    sorted_p = load(out_dir / "profile_presort.json")
    assert plain.prior == sorted_p.prior  # verdicts cannot differ
    assert plain.context.heuristic == "none"
    assert sorted_p.context.heuristic == "presort"
    lines = (out_dir / "curves.csv").read_text().splitlines()
    assert lines[0] == (
        "s,survival_none,posterior_none,survival_presort,posterior_presort"
    )
    assert len(lines) == 102


def test_malformed_profile_is_usage_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"format_version": 1, "records": []}))
    assert run_cli("curve", "--profile", str(bad), "--out", str(tmp_path / "c.csv")) == 2
    assert "error:" in capsys.readouterr().err
