"""Acting under uncertainty about the claim, and pricing further search.

The first half is classical: expected utilities over a belief about which
formula holds, the best action under a binary belief, and the indifference
threshold p* between two actions.  Time enters through a ``TimeCost``:
utilities are additive-separable, ``u(A, outcome, t) = base - cost(t)`` for
the zero/linear kinds, while the deadline kind collapses every utility to a
flat penalty once ``t`` passes the deadline.  Model time is proportional to
paths examined: ``t(j) = t0 + j * tau``.

The second half prices continued search.  ``nevc_one`` / ``nevc_multi``
compute the net expected value of examining 1 / x more paths before acting:
with probability ``(1-p) * first_open_pmf(j)`` the search halts at path j
with a disproof (act under certainty, at time t(j)); otherwise the posterior
drifts up by the survival ratio and the best action is taken at t(x).  The
net value subtracts the utility of acting immediately.  Per-path sums are
evaluated through exact closed forms (survival ratios and a truncated
first-open mean), so lookaheads of millions of paths cost O(open_count)
big-integer operations; tests pin them to the literal sums and to an
exhaustive placement-enumeration oracle.

``nevc_two_outcome`` is the empirical-curve variant used when only a step
curve is known: the halt branch is valued at the chunk end, which under
nondecreasing costs never overprices search (stops err early, not late).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Mapping, Sequence

from .belief import (
    Probability,
    first_open_cdf,
    first_open_mean_within,
    survival_analytic,
)

__all__ = [
    "DominanceError",
    "MissingUtilityError",
    "LookaheadError",
    "UtilitySpecError",
    "CostKind",
    "TimeCost",
    "UtilityModel",
    "HypothesisBelief",
    "SearchBeliefs",
    "expected_utility",
    "best_action",
    "threshold",
    "u_best",
    "nevc_one",
    "nevc_multi",
    "nevc_two_outcome",
    "parse_utility_spec",
    "format_utility_spec",
]


class DominanceError(ValueError):
    """No indifference threshold exists for this utility table."""


class MissingUtilityError(ValueError):
    """A believed formula has no utility entry for some action."""


class LookaheadError(ValueError):
    """Lookahead outside 1..remaining."""


class UtilitySpecError(ValueError):
    """Malformed utility specification text."""


class CostKind(Enum):
    ZERO = "zero"
    LINEAR = "linear"
    DEADLINE = "deadline"


@dataclass(frozen=True)
class TimeCost:
    """Time pricing: kind plus the paths->time scale ``tau``.

    zero:      u(A, o, t) = base
    linear:    u(A, o, t) = base - rate * t
    deadline:  u(A, o, t) = base while t <= deadline, else the flat penalty
    """

    kind: CostKind = CostKind.ZERO
    rate: float = 0.0
    deadline_at: float = 0.0
    penalty: float = 0.0
    tau: float = 1.0

    def __post_init__(self) -> None:
        if self.tau <= 0:
            raise ValueError("tau must be > 0")
        if self.kind is CostKind.LINEAR and self.rate < 0:
            raise ValueError("linear rate must be >= 0")
        if self.kind is CostKind.DEADLINE and self.deadline_at < 0:
            raise ValueError("deadline must be >= 0")

    @classmethod
    def zero(cls, tau: float = 1.0) -> "TimeCost":
        return cls(CostKind.ZERO, tau=tau)

    @classmethod
    def linear(cls, rate: float, tau: float = 1.0) -> "TimeCost":
        return cls(CostKind.LINEAR, rate=rate, tau=tau)

    @classmethod
    def deadline(cls, at: float, penalty: float, tau: float = 1.0) -> "TimeCost":
        return cls(CostKind.DEADLINE, deadline_at=at, penalty=penalty, tau=tau)

    def time_for(self, paths: int, t0: float = 0.0) -> float:
        if paths < 0:
            raise ValueError("paths must be >= 0")
        return t0 + paths * self.tau

    def cost(self, t: float) -> float:
        """Additive delay cost (the deadline collapse is not additive)."""
        if t < 0:
            raise ValueError("t must be >= 0")
        if self.kind is CostKind.LINEAR:
            return self.rate * t
        return 0.0

    def utility_at(self, base: float, t: float) -> float:
        if self.kind is CostKind.DEADLINE and t > self.deadline_at:
            return self.penalty
        return base - self.cost(t)


ZERO_COST = TimeCost()


@dataclass(frozen=True)
class UtilityModel:
    """Named actions with base utilities under the claim and its negation."""

    actions: tuple[str, ...]
    when_true: tuple[float, ...]
    when_false: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "actions", tuple(self.actions))
        object.__setattr__(self, "when_true", tuple(float(v) for v in self.when_true))
        object.__setattr__(self, "when_false", tuple(float(v) for v in self.when_false))
        if len(self.actions) < 2:
            raise ValueError("need at least two actions")
        if len(set(self.actions)) != len(self.actions):
            raise ValueError("action names must be distinct")
        if not (len(self.actions) == len(self.when_true) == len(self.when_false)):
            raise ValueError("utility rows must match the action list")
        for v in (*self.when_true, *self.when_false):
            if not math.isfinite(v):
                raise ValueError("utilities must be finite")

    @classmethod
    def from_pairs(cls, pairs: Mapping[str, tuple[float, float]]) -> "UtilityModel":
        """Build from {action: (u_when_true, u_when_false)}, preserving order."""
        names = tuple(pairs)
        return cls(
            names,
            tuple(float(pairs[a][0]) for a in names),
            tuple(float(pairs[a][1]) for a in names),
        )

    def index(self, action: str) -> int:
        try:
            return self.actions.index(action)
        except ValueError:
            raise MissingUtilityError(f"unknown action {action!r}") from None

    def as_table(self) -> dict[str, dict[str, float]]:
        return {
            a: {"w": self.when_true[i], "~w": self.when_false[i]}
            for i, a in enumerate(self.actions)
        }


@dataclass(frozen=True)
class HypothesisBelief:
    """Probabilities over any finite set of candidate formulae."""

    labels: tuple[str, ...]
    probabilities: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.labels) != len(self.probabilities) or not self.labels:
            raise ValueError("labels and probabilities must align and be nonempty")
        for p in self.probabilities:
            if not 0 <= p <= 1:
                raise ValueError(f"probability {p} outside [0, 1]")
        total = sum(self.probabilities)
        if abs(total - 1) > 1e-9:
            raise ValueError(f"probabilities sum to {total!r}, not 1")

    @classmethod
    def binary(cls, p_w: float) -> "HypothesisBelief":
        return cls(("w", "~w"), (p_w, 1 - p_w))


def expected_utility(
    action: str,
    beliefs: HypothesisBelief,
    utilities: Mapping[str, Mapping[str, float]] | UtilityModel,
    timecost: TimeCost = ZERO_COST,
    t: float = 0.0,
) -> float:
    """sum_j p_j * u(action, formula_j, t) over the believed formulae."""
    table = utilities.as_table() if isinstance(utilities, UtilityModel) else utilities
    if action not in table:
        raise MissingUtilityError(f"no utilities for action {action!r}")
    row = table[action]
    total = 0.0
    for label, p in zip(beliefs.labels, beliefs.probabilities):
        if label not in row:
            raise MissingUtilityError(
                f"action {action!r} has no utility for formula {label!r}"
            )
        total += p * timecost.utility_at(row[label], t)
    return total


def best_action(
    p_w: Probability,
    utilities: UtilityModel,
    timecost: TimeCost = ZERO_COST,
    t: float = 0.0,
) -> tuple[str, float]:
    """Utility-maximizing action under a binary belief; ties -> lowest index."""
    if not 0 <= p_w <= 1:
        raise ValueError(f"p_w {p_w} outside [0, 1]")
    best_i = 0
    best_eu = None
    for i in range(len(utilities.actions)):
        ut = timecost.utility_at(utilities.when_true[i], t)
        uf = timecost.utility_at(utilities.when_false[i], t)
        eu = p_w * (ut - uf) + uf
        if best_eu is None or eu > best_eu:
            best_i, best_eu = i, eu
    return utilities.actions[best_i], float(best_eu)


def threshold(utilities: UtilityModel) -> float:
    """Indifference probability p* between two actions.

    Requires the canonical orientation: the first action is the bet on the
    claim (better when true), the second the hedge (better when false).
    Acting p > p* favors the first action, p < p* the second.
    """
    if len(utilities.actions) != 2:
        raise DominanceError("threshold is defined for exactly two actions")
    gain_true = utilities.when_true[0] - utilities.when_true[1]
    gain_false = utilities.when_false[1] - utilities.when_false[0]
    if gain_true <= 0 or gain_false <= 0:
        raise DominanceError(
            "no interior threshold: one action weakly dominates (or the bet/hedge "
            f"orientation is reversed); gains were {gain_true} when true, "
            f"{gain_false} when false"
        )
    return gain_false / (gain_false + gain_true)


def u_best(
    posterior_w: Probability,
    utilities: UtilityModel,
    timecost: TimeCost = ZERO_COST,
    paths: int = 0,
    t0: float = 0.0,
) -> float:
    """Best attainable expected utility after ``paths`` more examinations."""
    return best_action(posterior_w, utilities, timecost, timecost.time_for(paths, t0))[1]


@dataclass(frozen=True)
class SearchBeliefs:
    """Belief state mid-search: posterior on the claim, and the urn ahead.

    ``remaining`` counts unexplored complete paths; ``open_paths`` is the
    modelled count (or distribution over counts) of open paths among them
    under not-w, already conditioned on the progress so far.
    """

    posterior: Probability
    remaining: int
    open_paths: int | Mapping[int, Probability]

    def __post_init__(self) -> None:
        if not 0 <= self.posterior <= 1:
            raise ValueError(f"posterior {self.posterior} outside [0, 1]")
        if self.remaining < 0:
            raise ValueError("remaining must be >= 0")

    def open_dist(self) -> dict[int, Probability]:
        if isinstance(self.open_paths, int):
            return {self.open_paths: Fraction(1)}
        return dict(sorted(self.open_paths.items()))


def _certainty_value(
    p: Probability,
    utilities: UtilityModel,
    timecost: TimeCost,
    paths: int,
    t0: float,
) -> float:
    # Search cannot move a posterior already at a certainty (or an empty
    # remainder); its net value is pure delay: U(S, x) - U(S, 0), which is
    # -cost(t(x)) for the additive kinds.
    return u_best(p, utilities, timecost, paths, t0) - u_best(p, utilities, timecost, 0, t0)


def _max_false_utility(utilities: UtilityModel) -> float:
    return max(utilities.when_false)


def _paths_before(timecost: TimeCost, t0: float, limit: int) -> int:
    """Largest j <= limit with t0 + j*tau <= deadline (float-robust)."""
    if timecost.kind is not CostKind.DEADLINE:
        return limit
    if t0 > timecost.deadline_at:
        return 0
    j = int((timecost.deadline_at - t0) / timecost.tau)
    while j > 0 and t0 + j * timecost.tau > timecost.deadline_at:
        j -= 1
    while j < limit and t0 + (j + 1) * timecost.tau <= timecost.deadline_at:
        j += 1
    return min(j, limit)


def _halt_branch_value(
    dist: Mapping[int, Probability],
    remaining: int,
    x: int,
    utilities: UtilityModel,
    timecost: TimeCost,
    t0: float,
) -> tuple[Probability, Probability]:
    """(sum_j pmf(j) * u_halt(t(j)), sum_j pmf(j)) for j = 1..x, per-(1-p).

    Exact closed forms per open count; mixture-averaged over ``dist``.
    """
    max_false = _max_false_utility(utilities)
    halt_mass: Probability = 0
    value: Probability = 0
    for o, weight in dist.items():
        mass = first_open_cdf(remaining, o, x)
        halt_mass += weight * mass
        if timecost.kind is CostKind.ZERO:
            value += weight * mass * max_false
        elif timecost.kind is CostKind.LINEAR:
            mean_j = first_open_mean_within(remaining, o, x)
            value += weight * (
                (max_false - timecost.rate * t0) * mass
                - timecost.rate * timecost.tau * mean_j
            )
        else:  # deadline: step split at the last in-time path index
            j_ok = _paths_before(timecost, t0, x)
            early = first_open_cdf(remaining, o, j_ok) if j_ok > 0 else Fraction(0)
            value += weight * (max_false * early + timecost.penalty * (mass - early))
    return value, halt_mass


def nevc_multi(
    beliefs: SearchBeliefs,
    utilities: UtilityModel,
    timecost: TimeCost = ZERO_COST,
    lookahead: int = 1,
    t0: float = 0.0,
) -> float:
    """Net expected value of examining ``lookahead`` more paths before acting.

    Exactly: sum over halt positions j of p(halt at j) * best-disproof
    utility at t(j), plus the no-halt mass times the best utility at the
    drifted posterior and t(lookahead), minus the best utility of acting
    now.  At a posterior already certain (or an empty remainder) search
    carries no information and the value is the pure delay cost.
    """
    if lookahead < 1:
        raise LookaheadError(f"lookahead {lookahead} must be >= 1")
    p = beliefs.posterior
    l = beliefs.remaining
    if p <= 0 or p >= 1 or l == 0:
        return _certainty_value(p, utilities, timecost, lookahead, t0)
    if lookahead > l:
        raise LookaheadError(f"lookahead {lookahead} exceeds remaining paths {l}")
    dist = beliefs.open_dist()
    halt_value, halt_mass = _halt_branch_value(
        dist, l, lookahead, utilities, timecost, t0
    )
    survival = 1 - halt_mass
    p_halt = (1 - p) * halt_mass
    drifted = p / (p + survival * (1 - p))
    act_after = u_best(drifted, utilities, timecost, lookahead, t0)
    act_now = u_best(p, utilities, timecost, 0, t0)
    return float((1 - p) * halt_value + (1 - p_halt) * act_after - act_now)


def nevc_one(
    beliefs: SearchBeliefs,
    utilities: UtilityModel,
    timecost: TimeCost = ZERO_COST,
    t0: float = 0.0,
) -> float:
    """Net expected value of examining exactly one more path before acting."""
    p = beliefs.posterior
    l = beliefs.remaining
    if p <= 0 or p >= 1 or l == 0:
        return _certainty_value(p, utilities, timecost, 1, t0)
    dist = beliefs.open_dist()
    pmf1 = sum(weight * Fraction(o, l) for o, weight in dist.items())
    p_halt = (1 - p) * pmf1
    survival = 1 - pmf1
    drifted = p / (p + survival * (1 - p))
    u_halt = timecost.utility_at(_max_false_utility(utilities), timecost.time_for(1, t0))
    return float(
        p_halt * u_halt
        + (1 - p_halt) * u_best(drifted, utilities, timecost, 1, t0)
        - u_best(p, utilities, timecost, 0, t0)
    )


def nevc_two_outcome(
    posterior_w: Probability,
    survival_ratio: Probability,
    utilities: UtilityModel,
    timecost: TimeCost = ZERO_COST,
    paths: int = 1,
    t0: float = 0.0,
) -> float:
    """Chunk-level net value from an empirical curve.

    ``survival_ratio`` is curve(s') / curve(s): the chance that a chunk of
    ``paths`` more examinations stays unfound given not-w and survival so
    far.  The halt branch is valued at the chunk end t(paths) -- a step
    curve says nothing about where inside the chunk the find lands, and
    end-pricing never overprices search under nondecreasing cost.
    """
    if paths < 1:
        raise LookaheadError(f"paths {paths} must be >= 1")
    p = posterior_w
    if not 0 <= p <= 1:
        raise ValueError(f"posterior {p} outside [0, 1]")
    if not 0 <= survival_ratio <= 1:
        raise ValueError(f"survival ratio {survival_ratio} outside [0, 1]")
    if p <= 0 or p >= 1:
        return _certainty_value(p, utilities, timecost, paths, t0)
    p_halt = (1 - p) * (1 - survival_ratio)
    drifted = p / (p + survival_ratio * (1 - p))
    u_halt = timecost.utility_at(
        _max_false_utility(utilities), timecost.time_for(paths, t0)
    )
    return float(
        p_halt * u_halt
        + (1 - p_halt) * u_best(drifted, utilities, timecost, paths, t0)
        - u_best(p, utilities, timecost, 0, t0)
    )


# ---------------------------------------------------------------------------
# One-line utility spec text format.
#
#   actions=A1,A2; u(A1,w)=1; u(A1,~w)=0; u(A2,w)=0; u(A2,~w)=1;
#   cost=linear:0.01; tau=0.001
#
# cost is zero | linear:RATE | deadline:AT:PENALTY  (default zero, tau 1.0).

_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_+-]*$")
_U_KEY_RE = re.compile(r"^u\(([^,()]+),(~?w)\)$")


def parse_utility_spec(text: str) -> tuple[UtilityModel, TimeCost]:
    actions: list[str] | None = None
    entries: dict[tuple[str, str], float] = {}
    cost_spec = "zero"
    tau = 1.0
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        key, sep, value = chunk.partition("=")
        if not sep:
            raise UtilitySpecError(f"expected key=value, got {chunk!r}")
        key = key.strip().replace(" ", "")
        value = value.strip()
        if key == "actions":
            actions = [a.strip() for a in value.split(",") if a.strip()]
            if len(actions) < 2:
                raise UtilitySpecError("actions= needs at least two names")
            for a in actions:
                if not _NAME_RE.match(a):
                    raise UtilitySpecError(f"bad action name {a!r}")
            continue
        if key == "cost":
            cost_spec = value.strip()
            continue
        if key == "tau":
            try:
                tau = float(value)
            except ValueError as exc:
                raise UtilitySpecError(f"bad tau {value!r}") from exc
            continue
        m = _U_KEY_RE.match(key)
        if not m:
            raise UtilitySpecError(f"unrecognized key {key!r}")
        try:
            entries[(m.group(1), m.group(2))] = float(value)
        except ValueError as exc:
            raise UtilitySpecError(f"bad utility value {value!r}") from exc
    if actions is None:
        raise UtilitySpecError("missing actions=")
    when_true = []
    when_false = []
    for a in actions:
        for outcome, bucket in (("w", when_true), ("~w", when_false)):
            if (a, outcome) not in entries:
                raise UtilitySpecError(f"missing u({a},{outcome})")
            bucket.append(entries.pop((a, outcome)))
    if entries:
        stray = ", ".join(f"u({a},{o})" for a, o in entries)
        raise UtilitySpecError(f"utilities for unknown actions: {stray}")
    try:
        model = UtilityModel(tuple(actions), tuple(when_true), tuple(when_false))
    except ValueError as exc:
        raise UtilitySpecError(str(exc)) from exc

    parts = cost_spec.split(":")
    try:
        if parts[0] == "zero" and len(parts) == 1:
            cost = TimeCost.zero(tau)
        elif parts[0] == "linear" and len(parts) == 2:
            cost = TimeCost.linear(float(parts[1]), tau)
        elif parts[0] == "deadline" and len(parts) == 3:
            cost = TimeCost.deadline(float(parts[1]), float(parts[2]), tau)
        else:
            raise UtilitySpecError(
                f"cost must be zero | linear:RATE | deadline:AT:PENALTY, got {cost_spec!r}"
            )
    except ValueError as exc:
        raise UtilitySpecError(f"bad cost spec {cost_spec!r}") from exc
    return model, cost


def format_utility_spec(utilities: UtilityModel, timecost: TimeCost) -> str:
    """Canonical text form; parse(format(...)) round-trips exactly."""
    bits = ["actions=" + ",".join(utilities.actions)]
    for i, a in enumerate(utilities.actions):
        bits.append(f"u({a},w)={utilities.when_true[i]!r}")
        bits.append(f"u({a},~w)={utilities.when_false[i]!r}")
    if timecost.kind is CostKind.ZERO:
        bits.append("cost=zero")
    elif timecost.kind is CostKind.LINEAR:
        bits.append(f"cost=linear:{timecost.rate!r}")
    else:
        bits.append(f"cost=deadline:{timecost.deadline_at!r}:{timecost.penalty!r}")
    bits.append(f"tau={timecost.tau!r}")
    return "; ".join(bits)
