"""Corpus runs distilled into priors and empirical survival curves.

A profile answers two questions about a family of random instances: how
often the entailment holds at all (the prior), and -- for the instances
where it fails -- how deep the search tends to go before an open path turns
up (the survival curve over discovery fractions).  Both are exact rationals
computed from full search runs.

File format (JSON, format_version 1):

    {"format_version": 1,
     "context": {"n_clauses":.., "lits_per_clause":.., "alphabet_size":..,
                 "seed":.., "count":.., "heuristic":"none"},
     "prior": {"num":.., "den":..},
     "excluded": 0,
     "records": [{"id":0, "sat":true, "frac":{"num":..,"den":..}, "closures":..}, ..]}

The curve is implied by the records (it is rebuilt on load), so nothing in
the file can drift out of sync with the data.  Per-instance wall time is
advisory, in-memory only, and excluded from equality.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .belief import ContextTag, SurvivalCurve, posterior
from .heuristics import Heuristic
from .matrix import Matrix, SearchStatus, fraction_explored, solve

__all__ = [
    "FORMAT_VERSION",
    "InstanceRecord",
    "Profile",
    "MalformedProfileError",
    "VersionMismatchError",
    "collect",
    "save",
    "load",
    "export_curve_csv",
    "write_curve_csv",
]

FORMAT_VERSION = 1


class MalformedProfileError(ValueError):
    pass


class VersionMismatchError(MalformedProfileError):
    pass


@dataclass(frozen=True)
class InstanceRecord:
    """Outcome of one full search: verdict, where it ended, how hard it was."""

    instance_id: int
    satisfiable: bool
    discovery_fraction: Fraction
    closure_count: int
    wall_time: float | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.satisfiable:
            if not 0 <= self.discovery_fraction < 1:
                raise ValueError(
                    "satisfiable instances discover inside [0, 1); got "
                    f"{self.discovery_fraction}"
                )
        elif self.discovery_fraction != 1:
            raise ValueError("unsatisfiable instances record fraction 1 (exhaustion)")
        if self.closure_count < 0:
            raise ValueError("closure_count must be >= 0")


@dataclass
class Profile:
    """Prior + survival curve for one instance family, with raw records."""

    context: ContextTag
    prior: Fraction
    records: tuple[InstanceRecord, ...]
    excluded: int = 0
    curve: SurvivalCurve = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        self.records = tuple(self.records)
        if not self.records:
            raise ValueError("a profile needs at least one record")
        if self.excluded < 0:
            raise ValueError("excluded count must be >= 0")
        unsat = sum(1 for r in self.records if not r.satisfiable)
        expected = Fraction(unsat, len(self.records))
        if Fraction(self.prior) != expected:
            raise ValueError(
                f"prior {self.prior} inconsistent with records ({expected})"
            )
        self.prior = Fraction(self.prior)
        self.curve = SurvivalCurve.from_samples(
            r.discovery_fraction for r in self.records if r.satisfiable
        )

    def posterior_at(self, s) -> Fraction:
        """Posterior of the claim after surviving to explored fraction ``s``."""
        return posterior(self.prior, self.curve.value(s))


def _run_one(args: tuple[int, Matrix, str, int | None]) -> InstanceRecord:
    instance_id, matrix, heuristic_value, cap = args
    prepared = Heuristic(heuristic_value).apply(matrix)
    started = time.perf_counter()
    state = solve(prepared, max_closures=cap)
    elapsed = time.perf_counter() - started
    if state.status is SearchStatus.RUNNING:
        # Cap hit: signalled with a negative id so collect() can count it.
        return InstanceRecord(-instance_id - 1, False, Fraction(1), state.closure_count)
    sat = state.status is SearchStatus.OPEN_FOUND
    frac = fraction_explored(state) if sat else Fraction(1)
    return InstanceRecord(instance_id, sat, frac, state.closure_count, elapsed)


def collect(
    corpus: Sequence[Matrix],
    heuristic: Heuristic = Heuristic.NONE,
    *,
    context: ContextTag | None = None,
    step_cap: int | None = None,
    jobs: int = 1,
) -> Profile:
    """Run every instance to termination and distill the outcomes.

    ``step_cap`` bounds the closure events spent per instance; instances that
    exceed it are excluded from the statistics and counted in ``excluded``.
    ``jobs`` > 1 fans instances out to worker processes; outcomes are folded
    in instance order either way, so the result is identical.
    """
    if not corpus:
        raise ValueError("corpus is empty")
    work = [(i, m, heuristic.value, step_cap) for i, m in enumerate(corpus)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_run_one, work, chunksize=8))
    else:
        outcomes = [_run_one(w) for w in work]
    records = [r for r in outcomes if r.instance_id >= 0]
    excluded = len(outcomes) - len(records)
    if not records:
        raise ValueError("every instance exceeded the step cap; no data to profile")
    if context is None:
        context = ContextTag(count=len(corpus), heuristic=heuristic.value)
    unsat = sum(1 for r in records if not r.satisfiable)
    return Profile(context, Fraction(unsat, len(records)), tuple(records), excluded)


def _context_to_json(tag: ContextTag) -> dict:
    return {
        "n_clauses": tag.n_clauses,
        "lits_per_clause": tag.lits_per_clause,
        "alphabet_size": tag.alphabet_size,
        "seed": tag.seed,
        "count": tag.count,
        "heuristic": tag.heuristic,
    }


def save(profile: Profile, path: str | Path) -> None:
    doc = {
        "format_version": FORMAT_VERSION,
        "context": _context_to_json(profile.context),
        "prior": {"num": profile.prior.numerator, "den": profile.prior.denominator},
        "excluded": profile.excluded,
        "records": [
            {
                "id": r.instance_id,
                "sat": r.satisfiable,
                "frac": {
                    "num": r.discovery_fraction.numerator,
                    "den": r.discovery_fraction.denominator,
                },
                "closures": r.closure_count,
            }
            for r in profile.records
        ],
    }
    Path(path).write_bytes((json.dumps(doc, indent=1) + "\n").encode("ascii"))


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise MalformedProfileError(message)


def load(path: str | Path) -> Profile:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise MalformedProfileError(f"not valid JSON: {exc}") from exc
    _require(isinstance(doc, dict), "profile document must be a JSON object")
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise VersionMismatchError(
            f"profile format_version {version!r} unsupported (expected {FORMAT_VERSION})"
        )
    ctx = doc.get("context")
    _require(isinstance(ctx, dict), "missing context object")
    try:
        context = ContextTag(
            n_clauses=ctx.get("n_clauses"),
            lits_per_clause=ctx.get("lits_per_clause"),
            alphabet_size=ctx.get("alphabet_size"),
            seed=ctx.get("seed"),
            count=ctx.get("count"),
            heuristic=ctx.get("heuristic", "none"),
        )
    except TypeError as exc:
        raise MalformedProfileError(f"bad context: {exc}") from exc

    def _fraction(node, what: str) -> Fraction:
        _require(
            isinstance(node, dict)
            and isinstance(node.get("num"), int)
            and isinstance(node.get("den"), int)
            and not isinstance(node.get("num"), bool)
            and not isinstance(node.get("den"), bool),
            f"{what} must be an object with integer num/den",
        )
        _require(node["den"] > 0, f"{what} denominator must be positive")
        return Fraction(node["num"], node["den"])

    prior = _fraction(doc.get("prior"), "prior")
    _require(0 <= prior <= 1, f"prior {prior} outside [0, 1]")
    excluded = doc.get("excluded", 0)
    _require(isinstance(excluded, int) and excluded >= 0, "bad excluded count")
    raw_records = doc.get("records")
    _require(isinstance(raw_records, list) and raw_records, "missing records")
    records = []
    for i, row in enumerate(raw_records):
        _require(isinstance(row, dict), f"record {i} must be an object")
        _require(
            isinstance(row.get("id"), int) and not isinstance(row.get("id"), bool),
            f"record {i}: bad id",
        )
        _require(isinstance(row.get("sat"), bool), f"record {i}: bad sat flag")
        _require(
            isinstance(row.get("closures"), int) and row["closures"] >= 0,
            f"record {i}: bad closure count",
        )
        frac = _fraction(row.get("frac"), f"record {i} frac")
        try:
            records.append(InstanceRecord(row["id"], row["sat"], frac, row["closures"]))
        except ValueError as exc:
            raise MalformedProfileError(f"record {i}: {exc}") from exc
    try:
        return Profile(context, prior, tuple(records), excluded)
    except ValueError as exc:
        raise MalformedProfileError(str(exc)) from exc


def export_curve_csv(profile: Profile, prior_override: Fraction | None = None) -> str:
    """101-row CSV (s from 0.00 to 1.00 in 0.01 steps): s, survival, posterior."""
    prior = Fraction(prior_override) if prior_override is not None else profile.prior
    if not 0 <= prior <= 1:
        raise ValueError(f"prior {prior} outside [0, 1]")
    lines = ["s,survival,posterior"]
    for i in range(101):
        s = Fraction(i, 100)
        survival = profile.curve.value(s)
        if prior == 0:
            # The claim is impossible a priori; no amount of survival revives it.
            post = Fraction(0)
        else:
            post = posterior(prior, survival)
        lines.append(f"{float(s):.6f},{float(survival):.6f},{float(post):.6f}")
    return "\n".join(lines) + "\n"


def write_curve_csv(
    profile: Profile, path: str | Path, prior_override: Fraction | None = None
) -> None:
    Path(path).write_bytes(export_curve_csv(profile, prior_override).encode("ascii"))
