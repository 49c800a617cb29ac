"""The stop-or-search loop: metareasoning wrapped around the path search.

Each deliberation step the controller reads off the exact explored fraction,
turns it into a posterior on the claim through its belief source, prices the
candidate lookaheads (net expected value of computation), and either acts or
buys one more chunk of search.  Termination:

* ``nonpositive_evc``  -- no candidate lookahead is worth its time (acting at
  equality included),
* ``proof_of_not_w``   -- an open path turned up: the claim is disproved,
* ``proof_of_w``       -- the space is exhausted: the claim is proved,
* ``deadline_forced``  -- the next chunk cannot finish before a hard deadline.

Belief sources: ``AnalyticSource`` (prior + open-path urn model, exact
per-path pricing) or ``ProfileSource`` (empirical prior + survival curve,
chunk-granularity pricing; see ``nevc_two_outcome``).  A misspecified
analytic model can drive the posterior to 1 while the search still runs; the
controller then stops and acts on that certainty, which is the honest
reading of the model it was given.

Every run yields a ``DecisionTrace``; ``save_trace``/``load_trace`` move it
through JSON lines and ``replay`` re-derives every recorded quantity from
the fractions alone, reporting the first divergence if any.  Wall-clock time
is recorded as advisory and never checked.  Model time is ``closed * tau``,
computed fresh each step so replay reproduces it bit for bit.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping

from .belief import AnalyticModel, Probability, posterior
from .decision import (
    CostKind,
    SearchBeliefs,
    TimeCost,
    UtilityModel,
    best_action,
    format_utility_spec,
    nevc_multi,
    nevc_two_outcome,
)
from .matrix import Matrix, SearchStatus, init_search, step_search
from .profiles import Profile

__all__ = [
    "FULL_LOOKAHEAD",
    "TRACE_FORMAT_VERSION",
    "StopReason",
    "AnalyticSource",
    "ProfileSource",
    "ControllerConfig",
    "TraceStep",
    "DecisionTrace",
    "MalformedTraceError",
    "ReplayReport",
    "run",
    "save_trace",
    "load_trace",
    "replay",
]

TRACE_FORMAT_VERSION = 1
FULL_LOOKAHEAD = "full"


class StopReason(Enum):
    NONPOSITIVE_EVC = "nonpositive_evc"
    PROOF_OF_NOT_W = "proof_of_not_w"
    PROOF_OF_W = "proof_of_w"
    DEADLINE_FORCED = "deadline_forced"


class MalformedTraceError(ValueError):
    pass


@dataclass(frozen=True)
class AnalyticSource:
    """Prior plus an open-path urn model (count or distribution over counts)."""

    prior: Probability
    open_paths: int | Mapping[int, Probability]

    def __post_init__(self) -> None:
        if not 0 <= self.prior <= 1:
            raise ValueError(f"prior {self.prior} outside [0, 1]")


@dataclass(frozen=True)
class ProfileSource:
    """Empirical prior and survival curve from a collected profile."""

    profile: Profile


@dataclass(frozen=True)
class ControllerConfig:
    """chunk size, utilities, time cost, belief source, candidate lookaheads.

    ``lookaheads`` empty means myopic (the chunk itself is the only
    candidate); entries are path counts or the string "full" (the whole
    remaining space, resolved per step).  Candidates larger than the
    remaining space are truncated to it.
    """

    chunk: int
    utilities: UtilityModel
    timecost: TimeCost
    source: AnalyticSource | ProfileSource
    lookaheads: tuple[int | str, ...] = ()

    def __post_init__(self) -> None:
        if self.chunk < 1:
            raise ValueError("chunk must be >= 1")
        for x in self.lookaheads:
            if isinstance(x, str):
                if x != FULL_LOOKAHEAD:
                    raise ValueError(f"unknown lookahead {x!r}")
            elif x < 1:
                raise ValueError("candidate lookaheads must be >= 1")

    def candidates(self) -> tuple[int | str, ...]:
        return self.lookaheads if self.lookaheads else (self.chunk,)


@dataclass(frozen=True)
class TraceStep:
    step: int
    fraction: Fraction
    posterior: float
    nevc: tuple[float, ...]
    elapsed: float


@dataclass
class DecisionTrace:
    """Everything needed to audit one controller run."""

    total: int
    chunk: int
    lookaheads: tuple[int | str, ...]
    source_desc: dict
    utility_spec: str
    steps: list[TraceStep]
    stop_reason: StopReason
    action: str
    eu: float
    final_posterior: float
    final_elapsed: float
    wall_time: float = field(default=0.0, compare=False)


def _source_posterior(
    source: AnalyticSource | ProfileSource,
    model: AnalyticModel | None,
    total: int,
    closed: int,
) -> Probability:
    if isinstance(source, AnalyticSource):
        assert model is not None
        return posterior(source.prior, model.survival(closed))
    profile = source.profile
    return posterior(profile.prior, profile.curve.value(Fraction(closed, total)))


def _nevc_candidates(
    source: AnalyticSource | ProfileSource,
    model: AnalyticModel | None,
    total: int,
    closed: int,
    post: Probability,
    config: ControllerConfig,
    t_now: float,
) -> tuple[float, ...]:
    remaining = total - closed
    values = []
    for cand in config.candidates():
        x = remaining if cand == FULL_LOOKAHEAD else min(cand, remaining)
        if isinstance(source, AnalyticSource):
            assert model is not None
            beliefs = SearchBeliefs(post, remaining, model.conditional(closed))
            values.append(
                nevc_multi(beliefs, config.utilities, config.timecost, x, t_now)
            )
        else:
            curve = source.profile.curve
            now = curve.value(Fraction(closed, total))
            nxt = curve.value(Fraction(closed + x, total))
            ratio = nxt / now if now > 0 else Fraction(1)
            values.append(
                nevc_two_outcome(
                    post, ratio, config.utilities, config.timecost, x, t_now
                )
            )
    return tuple(values)


def _describe_source(source: AnalyticSource | ProfileSource) -> dict:
    if isinstance(source, AnalyticSource):
        prior = Fraction(source.prior)
        open_paths = source.open_paths
        if isinstance(open_paths, int):
            open_desc: Any = open_paths
        else:
            open_desc = [
                {"open": o, "num": Fraction(p).numerator, "den": Fraction(p).denominator}
                for o, p in sorted(open_paths.items())
            ]
        return {
            "kind": "analytic",
            "prior": {"num": prior.numerator, "den": prior.denominator},
            "open_paths": open_desc,
        }
    profile = source.profile
    ctx = profile.context
    return {
        "kind": "profile",
        "prior": {"num": profile.prior.numerator, "den": profile.prior.denominator},
        "context": {
            "n_clauses": ctx.n_clauses,
            "lits_per_clause": ctx.lits_per_clause,
            "alphabet_size": ctx.alphabet_size,
            "seed": ctx.seed,
            "count": ctx.count,
            "heuristic": ctx.heuristic,
        },
    }


def run(matrix: Matrix, config: ControllerConfig) -> DecisionTrace:
    """Deliberate over one matrix until proof, worthlessness, or deadline."""
    wall_started = time.perf_counter()
    state = init_search(matrix)
    total = state.total
    timecost = config.timecost
    utilities = config.utilities
    model: AnalyticModel | None = None
    if isinstance(config.source, AnalyticSource) and total > 0:
        model = AnalyticModel(total, config.source.open_paths)

    steps: list[TraceStep] = []
    step_idx = 0

    def finish(reason: StopReason, post: float, t_now: float) -> DecisionTrace:
        action, eu = best_action(post, utilities, timecost, t_now)
        return DecisionTrace(
            total=total,
            chunk=config.chunk,
            lookaheads=config.candidates(),
            source_desc=_describe_source(config.source),
            utility_spec=format_utility_spec(utilities, timecost),
            steps=steps,
            stop_reason=reason,
            action=action,
            eu=eu,
            final_posterior=float(post),
            final_elapsed=t_now,
            wall_time=time.perf_counter() - wall_started,
        )

    while True:
        t_now = state.closed * timecost.tau
        if state.status is SearchStatus.OPEN_FOUND:
            return finish(StopReason.PROOF_OF_NOT_W, 0.0, t_now)
        if state.status is SearchStatus.EXHAUSTED:
            return finish(StopReason.PROOF_OF_W, 1.0, t_now)

        closed = state.closed
        post = _source_posterior(config.source, model, total, closed)
        remaining = total - closed
        chunk = min(config.chunk, remaining)

        if (
            timecost.kind is CostKind.DEADLINE
            and t_now + chunk * timecost.tau > timecost.deadline_at
        ):
            steps.append(
                TraceStep(step_idx, Fraction(closed, total), float(post), (), t_now)
            )
            return finish(StopReason.DEADLINE_FORCED, float(post), t_now)

        nevcs = _nevc_candidates(
            config.source, model, total, closed, post, config, t_now
        )
        steps.append(
            TraceStep(step_idx, Fraction(closed, total), float(post), nevcs, t_now)
        )
        if max(nevcs) <= 0:
            return finish(StopReason.NONPOSITIVE_EVC, float(post), t_now)

        step_search(state, chunk)
        step_idx += 1


# ---------------------------------------------------------------------------
# Trace persistence (JSON lines) and replay verification.


def save_trace(trace: DecisionTrace, path: str | Path) -> None:
    lines = [
        json.dumps(
            {
                "kind": "header",
                "format_version": TRACE_FORMAT_VERSION,
                "total": trace.total,
                "chunk": trace.chunk,
                "lookaheads": list(trace.lookaheads),
                "source": trace.source_desc,
                "utility_spec": trace.utility_spec,
            }
        )
    ]
    for s in trace.steps:
        lines.append(
            json.dumps(
                {
                    "kind": "step",
                    "step": s.step,
                    "fraction": {
                        "num": s.fraction.numerator,
                        "den": s.fraction.denominator,
                    },
                    "posterior": s.posterior,
                    "nevc": list(s.nevc),
                    "t": s.elapsed,
                }
            )
        )
    lines.append(
        json.dumps(
            {
                "kind": "final",
                "stop_reason": trace.stop_reason.value,
                "action": trace.action,
                "eu": trace.eu,
                "posterior": trace.final_posterior,
                "t": trace.final_elapsed,
                "wall_time": trace.wall_time,
            }
        )
    )
    Path(path).write_bytes(("\n".join(lines) + "\n").encode("ascii"))


def load_trace(path: str | Path) -> DecisionTrace:
    rows = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rows.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise MalformedTraceError(f"line {lineno}: not JSON: {exc}") from exc
    if not rows or rows[0].get("kind") != "header":
        raise MalformedTraceError("first line must be the header record")
    if rows[-1].get("kind") != "final":
        raise MalformedTraceError("last line must be the final record")
    header, final = rows[0], rows[-1]
    if header.get("format_version") != TRACE_FORMAT_VERSION:
        raise MalformedTraceError(
            f"unsupported trace format_version {header.get('format_version')!r}"
        )
    steps = []
    for row in rows[1:-1]:
        if row.get("kind") != "step":
            raise MalformedTraceError(f"unexpected record kind {row.get('kind')!r}")
        try:
            frac = Fraction(row["fraction"]["num"], row["fraction"]["den"])
            steps.append(
                TraceStep(
                    row["step"],
                    frac,
                    float(row["posterior"]),
                    tuple(float(v) for v in row["nevc"]),
                    float(row["t"]),
                )
            )
        except (KeyError, TypeError, ZeroDivisionError) as exc:
            raise MalformedTraceError(f"bad step record: {exc}") from exc
    try:
        lookaheads = tuple(
            x if isinstance(x, int) else str(x) for x in header["lookaheads"]
        )
        trace = DecisionTrace(
            total=header["total"],
            chunk=header["chunk"],
            lookaheads=lookaheads,
            source_desc=header["source"],
            utility_spec=header["utility_spec"],
            steps=steps,
            stop_reason=StopReason(final["stop_reason"]),
            action=final["action"],
            eu=float(final["eu"]),
            final_posterior=float(final["posterior"]),
            final_elapsed=float(final["t"]),
            wall_time=float(final.get("wall_time", 0.0)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedTraceError(f"bad header/final record: {exc}") from exc
    return trace


@dataclass(frozen=True)
class ReplayReport:
    """Outcome of re-deriving a trace: clean, parameter mismatch, or divergence."""

    ok: bool
    kind: str  # "clean" | "parameter_mismatch" | "inconsistency"
    steps_checked: int = 0
    step: int | None = None
    field: str | None = None
    expected: object = None
    actual: object = None
    message: str = ""


def _mismatch(message: str) -> ReplayReport:
    return ReplayReport(False, "parameter_mismatch", message=message)


def _diverged(step: int | None, fld: str, expected, actual, checked: int) -> ReplayReport:
    return ReplayReport(
        False,
        "inconsistency",
        steps_checked=checked,
        step=step,
        field=fld,
        expected=expected,
        actual=actual,
        message=f"step {step}: {fld} expected {expected!r}, got {actual!r}",
    )


def replay(
    trace: DecisionTrace,
    *,
    utilities: UtilityModel,
    timecost: TimeCost,
    profile: Profile | None = None,
    analytic: AnalyticSource | None = None,
    tol: float = 1e-9,
) -> ReplayReport:
    """Re-derive every step of a trace and compare against what was recorded.

    The belief source the run used must be supplied (the profile for profile
    traces, the analytic source for analytic ones); supplying different
    parameters than the header records is reported as a parameter mismatch,
    not as trace corruption.
    """
    spec = format_utility_spec(utilities, timecost)
    if spec != trace.utility_spec:
        return _mismatch(
            f"utilities/timecost differ from the run's: {trace.utility_spec!r} "
            f"vs {spec!r}"
        )
    desc = trace.source_desc
    if desc.get("kind") == "profile":
        if profile is None:
            return _mismatch("trace was run with a profile source; pass profile=")
        source: AnalyticSource | ProfileSource = ProfileSource(profile)
        if _describe_source(source) != desc:
            return _mismatch("profile prior/context differ from the run's")
    elif desc.get("kind") == "analytic":
        if analytic is None:
            return _mismatch("trace was run with an analytic source; pass analytic=")
        source = analytic
        if _describe_source(source) != desc:
            return _mismatch("analytic prior/open-path model differ from the run's")
    else:
        raise MalformedTraceError(f"unknown source kind {desc.get('kind')!r}")

    total = trace.total
    config = ControllerConfig(
        chunk=trace.chunk,
        utilities=utilities,
        timecost=timecost,
        source=source,
        lookaheads=trace.lookaheads,
    )
    model: AnalyticModel | None = None
    if isinstance(source, AnalyticSource) and total > 0:
        model = AnalyticModel(total, source.open_paths)

    checked = 0
    last_fraction = None
    for s in trace.steps:
        if not 0 <= s.fraction <= 1:
            return _diverged(s.step, "fraction", "within [0, 1]", s.fraction, checked)
        if last_fraction is not None and s.fraction <= last_fraction:
            return _diverged(
                s.step, "fraction", f"> {last_fraction}", s.fraction, checked
            )
        last_fraction = s.fraction
        closed_exact = s.fraction * total
        if closed_exact.denominator != 1:
            return _diverged(
                s.step, "fraction", "a multiple of 1/total", s.fraction, checked
            )
        closed = closed_exact.numerator
        t_expect = closed * timecost.tau
        if abs(t_expect - s.elapsed) > tol:
            return _diverged(s.step, "t", t_expect, s.elapsed, checked)
        post = _source_posterior(source, model, total, closed)
        if abs(float(post) - s.posterior) > tol:
            return _diverged(s.step, "posterior", float(post), s.posterior, checked)
        if s.nevc:
            nevcs = _nevc_candidates(
                source, model, total, closed, post, config, t_expect
            )
            if len(nevcs) != len(s.nevc):
                return _diverged(s.step, "nevc", nevcs, s.nevc, checked)
            for k, (a, b) in enumerate(zip(nevcs, s.nevc)):
                if abs(a - b) > tol:
                    return _diverged(s.step, f"nevc[{k}]", a, b, checked)
        checked += 1

    action, eu = best_action(
        trace.final_posterior, utilities, timecost, trace.final_elapsed
    )
    if action != trace.action:
        return _diverged(None, "action", action, trace.action, checked)
    if abs(eu - trace.eu) > tol:
        return _diverged(None, "eu", eu, trace.eu, checked)
    if trace.stop_reason is StopReason.NONPOSITIVE_EVC:
        if not trace.steps or not trace.steps[-1].nevc:
            return _diverged(None, "stop_reason", "a final nevc step", "none", checked)
        if max(trace.steps[-1].nevc) > 0:
            return _diverged(
                None,
                "stop_reason",
                "max nevc <= 0",
                max(trace.steps[-1].nevc),
                checked,
            )
    return ReplayReport(True, "clean", steps_checked=checked)
