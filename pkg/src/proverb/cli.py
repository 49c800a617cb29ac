"""Command-line front end.

Subcommands: gen, prove, profile, curve, decide, run, compare-heuristic.
Exit codes: 0 success (including a terminal proof), 2 parse/configuration
error, 3 budget exhausted while still running, 4 context mismatch under
--strict.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from fractions import Fraction
from pathlib import Path

from . import belief, controller, decision, dimacs, generator, profiles
from .heuristics import Heuristic
from .matrix import SearchStatus, init_search, step_search, total_paths

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_RUNNING = 3
EXIT_CONTEXT = 4

_USER_ERRORS = (
    ValueError,
    dimacs.DimacsError,
    generator.ConfigError,
    profiles.MalformedProfileError,
    decision.UtilitySpecError,
    belief.ModelError,
    controller.MalformedTraceError,
    OSError,
)


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_USAGE


def _parse_fraction(text: str) -> Fraction:
    value = Fraction(text)
    if not 0 <= value <= 1:
        raise ValueError(f"{text!r} outside [0, 1]")
    return value


def _parse_open_paths(text: str):
    """'3' -> 3;  '1:0.5,2:0.5' -> {1: Fraction(1,2), 2: Fraction(1,2)}."""
    if ":" not in text:
        return int(text)
    dist = {}
    for part in text.split(","):
        count, _, weight = part.partition(":")
        if not weight:
            raise ValueError(f"bad open-path entry {part!r} (want COUNT:PROB)")
        dist[int(count)] = Fraction(weight)
    return dist


def _parse_lookaheads(text: str) -> tuple:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if part == controller.FULL_LOOKAHEAD:
            out.append(part)
        else:
            value = int(part)
            if value < 1:
                raise ValueError("lookaheads must be >= 1")
            out.append(value)
    if not out:
        raise ValueError("empty lookahead list")
    return tuple(out)


def _instance_context(meta: dict, heuristic: Heuristic) -> belief.ContextTag:
    def _int(key):
        try:
            return int(meta[key])
        except (KeyError, ValueError):
            return None

    return belief.ContextTag(
        n_clauses=_int("n_clauses"),
        lits_per_clause=_int("lits_per_clause"),
        alphabet_size=_int("alphabet_size"),
        seed=_int("seed"),
        heuristic=heuristic.value,
    )


def _gen(args) -> int:
    config = generator.GeneratorConfig(
        args.clauses, args.lits, args.alphabet, args.seed
    )
    paths = generator.write_corpus(config, args.count, args.out, args.prefix)
    print(f"wrote {len(paths)} instances to {args.out}")
    return EXIT_OK


def _prove(args) -> int:
    matrix, _meta = dimacs.read_dimacs(args.file)
    heuristic = Heuristic.PRESORT if args.presort else Heuristic.NONE
    matrix = heuristic.apply(matrix)
    state = init_search(matrix)
    while state.status is SearchStatus.RUNNING:
        if args.budget is not None:
            step_search(state, args.budget)
            break
        step_search(state, state.total)

    status = {
        SearchStatus.EXHAUSTED: "W_TRUE",
        SearchStatus.OPEN_FOUND: "W_FALSE",
        SearchStatus.RUNNING: "RUNNING",
    }[state.status]
    print(f"status: {status}")
    if state.total > 0:
        frac = Fraction(state.closed, state.total)
        print(f"fraction: {frac.numerator}/{frac.denominator} ({float(frac):.6f})")
    else:
        # Vacuously covered: an empty clause admits no path at all.
        print("fraction: 1/1 (1.000000)")
    print(f"closures: {state.closure_count}")
    if state.status is SearchStatus.OPEN_FOUND:
        ints = [
            (-1 if lit.negated else 1) * (lit.symbol_id + 1) for lit in state.witness
        ]
        print("witness: " + " ".join(str(v) for v in ints))
    return EXIT_OK if state.status is not SearchStatus.RUNNING else EXIT_RUNNING


def _profile(args) -> int:
    config = generator.GeneratorConfig(
        args.clauses, args.lits, args.alphabet, args.seed
    )
    corpus = generator.generate_corpus(config, args.count)
    heuristic = Heuristic.PRESORT if args.presort else Heuristic.NONE
    context = belief.ContextTag(
        n_clauses=config.n_clauses,
        lits_per_clause=config.lits_per_clause,
        alphabet_size=config.alphabet_size,
        seed=config.seed,
        count=args.count,
        heuristic=heuristic.value,
    )
    profile = profiles.collect(
        corpus,
        heuristic,
        context=context,
        step_cap=args.step_cap,
        jobs=args.jobs,
    )
    profiles.save(profile, args.out)
    print(
        f"profile over {len(profile.records)} instances "
        f"(excluded {profile.excluded}): prior {profile.prior} "
        f"({float(profile.prior):.4f}) -> {args.out}"
    )
    return EXIT_OK


def _curve(args) -> int:
    profile = profiles.load(args.profile)
    override = _parse_fraction(args.prior) if args.prior is not None else None
    profiles.write_curve_csv(profile, args.out, override)
    print(f"wrote curve table to {args.out}")
    return EXIT_OK


def _decide(args) -> int:
    utilities, timecost = decision.parse_utility_spec(args.utilities)
    given = [
        args.posterior is not None,
        args.prior is not None and args.survival is not None,
        args.profile is not None and args.fraction is not None,
    ]
    if sum(given) != 1:
        return _fail(
            "give exactly one of --posterior, --prior with --survival, "
            "or --profile with --fraction"
        )
    if args.posterior is not None:
        post = _parse_fraction(args.posterior)
    elif args.prior is not None:
        post = belief.posterior(
            _parse_fraction(args.prior), _parse_fraction(args.survival)
        )
    else:
        profile = profiles.load(args.profile)
        post = profile.posterior_at(_parse_fraction(args.fraction))
    print(f"posterior: {float(post):.6f}")
    try:
        print(f"p*: {decision.threshold(utilities):.6f}")
    except decision.DominanceError as exc:
        print(f"p*: undefined ({exc})")
    action, eu = decision.best_action(post, utilities, timecost)
    print(f"action: {action}")
    print(f"eu: {eu:.6f}")
    return EXIT_OK


def _run(args) -> int:
    matrix, meta = dimacs.read_dimacs(args.file)
    heuristic = Heuristic.PRESORT if args.presort else Heuristic.NONE
    matrix = heuristic.apply(matrix)
    utilities, timecost = decision.parse_utility_spec(args.utilities)

    if (args.profile is None) == (args.analytic is None):
        return _fail("give exactly one of --profile or --analytic (with --prior)")
    if args.profile is not None:
        profile = profiles.load(args.profile)
        source = controller.ProfileSource(profile)
        instance_ctx = _instance_context(meta, heuristic)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", belief.ContextMismatchWarning)
            belief.warn_on_mismatch(profile.context, instance_ctx)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
        if caught and args.strict:
            print("error: context mismatch under --strict", file=sys.stderr)
            return EXIT_CONTEXT
    else:
        if args.prior is None:
            return _fail("--analytic needs --prior")
        source = controller.AnalyticSource(
            _parse_fraction(args.prior), _parse_open_paths(args.analytic)
        )

    total = total_paths(matrix)
    chunk = args.chunk if args.chunk is not None else max(1, total // 100)
    lookaheads = _parse_lookaheads(args.lookahead) if args.lookahead else ()
    config = controller.ControllerConfig(
        chunk=chunk,
        utilities=utilities,
        timecost=timecost,
        source=source,
        lookaheads=lookaheads,
    )
    trace = controller.run(matrix, config)
    if args.out:
        controller.save_trace(trace, args.out)
    print(
        f"stop: {trace.stop_reason.value} after {len(trace.steps)} steps; "
        f"action {trace.action}, eu {trace.eu:.6f}, "
        f"posterior {trace.final_posterior:.6f}"
        + (f"; trace -> {args.out}" if args.out else "")
    )
    return EXIT_OK


def _compare(args) -> int:
    config = generator.GeneratorConfig(
        args.clauses, args.lits, args.alphabet, args.seed
    )
    corpus = generator.generate_corpus(config, args.count)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    built = {}
    for heuristic in (Heuristic.NONE, Heuristic.PRESORT):
        context = belief.ContextTag(
            n_clauses=config.n_clauses,
            lits_per_clause=config.lits_per_clause,
            alphabet_size=config.alphabet_size,
            seed=config.seed,
            count=args.count,
            heuristic=heuristic.value,
        )
        profile = profiles.collect(
            corpus, heuristic, context=context, step_cap=args.step_cap, jobs=args.jobs
        )
        profiles.save(profile, out_dir / f"profile_{heuristic.value}.json")
        built[heuristic.value] = profile

    plain, sorted_ = built["none"], built["presort"]
    lines = ["s,survival_none,posterior_none,survival_presort,posterior_presort"]
    for i in range(101):
        s = Fraction(i, 100)
        row = [f"{float(s):.6f}"]
        for profile in (plain, sorted_):
            surv = profile.curve.value(s)
            post = profile.posterior_at(s)
            row.append(f"{float(surv):.6f}")
            row.append(f"{float(post):.6f}")
        lines.append(",".join(row))
    (out_dir / "curves.csv").write_bytes(("\n".join(lines) + "\n").encode("ascii"))
    print(
        f"priors: none {float(plain.prior):.4f}, presort {float(sorted_.prior):.4f}; "
        f"wrote {out_dir}/profile_none.json, profile_presort.json, curves.csv"
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="proverb",
        description="budgeted open-path proving with value-of-computation stopping",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a random DIMACS corpus")
    p.add_argument("--clauses", type=int, required=True)
    p.add_argument("--lits", type=int, required=True)
    p.add_argument("--alphabet", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--prefix", default="matrix")
    p.set_defaults(handler=_gen)

    p = sub.add_parser("prove", help="search one DIMACS file for an open path")
    p.add_argument("file")
    p.add_argument("--budget", type=int, default=None, help="path budget (default: run to proof)")
    p.add_argument("--presort", action="store_true")
    p.set_defaults(handler=_prove)

    p = sub.add_parser("profile", help="collect a prior + survival curve over a corpus")
    p.add_argument("--clauses", type=int, required=True)
    p.add_argument("--lits", type=int, required=True)
    p.add_argument("--alphabet", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--presort", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--step-cap", type=int, default=None, dest="step_cap")
    p.set_defaults(handler=_profile)

    p = sub.add_parser("curve", help="export a profile's survival/posterior table")
    p.add_argument("--profile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--prior", default=None, help="override the profile prior")
    p.set_defaults(handler=_curve)

    p = sub.add_parser("decide", help="best action for a posterior and utility spec")
    p.add_argument("--utilities", required=True)
    p.add_argument("--posterior", default=None)
    p.add_argument("--prior", default=None)
    p.add_argument("--survival", default=None)
    p.add_argument("--profile", default=None)
    p.add_argument("--fraction", default=None)
    p.set_defaults(handler=_decide)

    p = sub.add_parser("run", help="deliberation-controlled proving of one file")
    p.add_argument("file")
    p.add_argument("--utilities", required=True)
    p.add_argument("--profile", default=None)
    p.add_argument("--analytic", default=None, help="open paths: '3' or '1:0.5,2:0.5'")
    p.add_argument("--prior", default=None)
    p.add_argument("--chunk", type=int, default=None)
    p.add_argument("--lookahead", default=None, help="e.g. '1000,full'")
    p.add_argument("--presort", action="store_true")
    p.add_argument("--strict", action="store_true")
    p.add_argument("--out", default=None, help="trace file (JSON lines)")
    p.set_defaults(handler=_run)

    p = sub.add_parser(
        "compare-heuristic", help="paired plain/presort profiles on one corpus"
    )
    p.add_argument("--clauses", type=int, required=True)
    p.add_argument("--lits", type=int, required=True)
    p.add_argument("--alphabet", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--step-cap", type=int, default=None, dest="step_cap")
    p.set_defaults(handler=_compare)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.handler(args)
    except _USER_ERRORS as exc:
        return _fail(str(exc))


if __name__ == "__main__":
    sys.exit(main())
