"""Turning search progress into belief about the entailment claim.

The claim under test ("w") is that every complete path closes.  Before the
search finishes, the evidence is survival: the search has pruned a fraction
``s`` of the path space without meeting an open path.  Under w that has
likelihood 1; under not-w it has the survival probability of the open paths
escaping the explored region.  Bayes then gives

    posterior(p, survival) = p / (p + survival * (1 - p))

Survival comes from either an empirical step curve (collected over a corpus,
see :mod:`proverb.profiles`) or an analytic urn model: if ``O`` of ``M``
complete paths are open and the searcher removes paths one at a time without
replacement, the chance that the first ``searched`` are all closed is

    prod_{i=0..searched-1} (1 - O / (M - i))  ==  C(M-searched, O) / C(M, O)

The same urn yields the distribution of *when* the first open path appears
among the remaining paths (``first_open_pmf``), which prices the chance that
more search halts early with a disproof.

Everything here is exact when fed exact numbers: integer inputs produce
`fractions.Fraction` outputs, and floats are only introduced by the caller.
"""

from __future__ import annotations

import warnings
from bisect import bisect_right, insort
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Sequence, Union

__all__ = [
    "FLOAT_TOL",
    "Probability",
    "DegenerateEvidenceError",
    "ModelError",
    "ContextTag",
    "ContextMismatchWarning",
    "context_mismatches",
    "warn_on_mismatch",
    "SurvivalCurve",
    "AnalyticModel",
    "posterior_general",
    "posterior",
    "survival_analytic",
    "survival_mixture",
    "first_open_pmf",
    "first_open_cdf",
    "first_open_mean_within",
    "halting_prob",
    "survival_lookup",
]

# Agreement tolerance for float-valued probability checks throughout the
# package (replay verification, mixture normalization, tests).
FLOAT_TOL = 1e-9

Probability = Union[float, Fraction]


class DegenerateEvidenceError(ValueError):
    """All hypotheses assign zero likelihood to the evidence."""


class ModelError(ValueError):
    """Inconsistent survival-model parameters (e.g. more open paths than paths)."""


@dataclass(frozen=True)
class ContextTag:
    """Background context a belief was calibrated under.

    Profiles only transfer to instances drawn from the same distribution;
    the tag records the generator configuration and heuristic so a mismatch
    can at least be flagged.  ``source`` is a free-form advisory label and
    never participates in comparisons or files.
    """

    n_clauses: int | None = None
    lits_per_clause: int | None = None
    alphabet_size: int | None = None
    seed: int | None = None
    count: int | None = None
    heuristic: str = "none"
    source: str = field(default="", compare=False)


class ContextMismatchWarning(UserWarning):
    pass


_MATCH_FIELDS = ("n_clauses", "lits_per_clause", "alphabet_size", "heuristic")


def context_mismatches(expected: ContextTag, actual: ContextTag) -> list[str]:
    """Names of distribution-shaping fields that disagree (None = unknown, skipped)."""
    out = []
    for name in _MATCH_FIELDS:
        a, b = getattr(expected, name), getattr(actual, name)
        if a is not None and b is not None and a != b:
            out.append(name)
    return out


def warn_on_mismatch(expected: ContextTag, actual: ContextTag) -> bool:
    """Emit a ContextMismatchWarning when tags disagree; True when they match."""
    bad = context_mismatches(expected, actual)
    if bad:
        detail = ", ".join(
            f"{name}: {getattr(expected, name)!r} != {getattr(actual, name)!r}"
            for name in bad
        )
        warnings.warn(
            f"profile context does not match instance context ({detail})",
            ContextMismatchWarning,
            stacklevel=2,
        )
    return not bad


class SurvivalCurve:
    """Nonincreasing step function s -> p(search passes fraction s unfound | not-w).

    Two constructions:

    * ``from_samples(fractions)`` -- empirical: discovery fractions of the
      satisfiable instances of a corpus; the value at ``s > 0`` is the strict
      count ``#{fraction > s} / n``.  The value at exactly 0 is pinned to 1
      (every search trivially begins unfound), which only matters when some
      instance was discovered after zero closures.  Zero samples give the
      constant-1 (uninformative) curve.
    * ``from_points(pairs)`` -- an explicit right-continuous step function,
      e.g. a hand-made reference curve.  Must start at (0, 1), have strictly
      increasing abscissae and nonincreasing values inside [0, 1].
    """

    __slots__ = ("_samples", "_points", "_n")

    def __init__(self) -> None:
        raise TypeError("use SurvivalCurve.from_samples or SurvivalCurve.from_points")

    @classmethod
    def _blank(cls) -> "SurvivalCurve":
        obj = object.__new__(cls)
        obj._samples = None
        obj._points = None
        obj._n = 0
        return obj

    @classmethod
    def from_samples(cls, fractions: Iterable[Probability]) -> "SurvivalCurve":
        samples = sorted(Fraction(f) for f in fractions)
        for f in samples:
            if not 0 <= f < 1:
                raise ValueError(f"discovery fraction {f} outside [0, 1)")
        obj = cls._blank()
        obj._samples = samples
        obj._n = len(samples)
        return obj

    @classmethod
    def from_points(
        cls, pairs: Iterable[tuple[Probability, Probability]]
    ) -> "SurvivalCurve":
        points = [(Fraction(s), Fraction(v)) for s, v in pairs]
        if not points or points[0] != (0, 1):
            raise ValueError("curve must start at the point (0, 1)")
        last_s, last_v = points[0]
        for s, v in points[1:]:
            if s <= last_s:
                raise ValueError("curve abscissae must strictly increase")
            if s > 1:
                raise ValueError("curve abscissae must lie in [0, 1]")
            if v > last_v:
                raise ValueError("survival curve must be nonincreasing")
            if v < 0:
                raise ValueError("survival values must lie in [0, 1]")
            last_s, last_v = s, v
        obj = cls._blank()
        obj._points = points
        return obj

    def value(self, s: Probability) -> Fraction:
        """Right-continuous evaluation at ``s`` in [0, 1]."""
        s = Fraction(s)
        if not 0 <= s <= 1:
            raise ValueError(f"fraction {s} outside [0, 1]")
        if self._points is not None:
            idx = bisect_right([p[0] for p in self._points], s) - 1
            return self._points[idx][1]
        if s == 0 or self._n == 0:
            return Fraction(1)
        above = self._n - bisect_right(self._samples, s)
        return Fraction(above, self._n)

    @property
    def sample_count(self) -> int:
        return self._n if self._samples is not None else 0

    def points(self) -> list[tuple[Fraction, Fraction]]:
        """Breakpoint view (for display/export; evaluation uses value())."""
        if self._points is not None:
            return list(self._points)
        pts: list[tuple[Fraction, Fraction]] = [(Fraction(0), Fraction(1))]
        for s in sorted(set(self._samples)):
            pts.append((s, self.value(s if s > 0 else Fraction(1, 10**9))))
        return pts

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SurvivalCurve):
            return NotImplemented
        return (self._samples, self._points) == (other._samples, other._points)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        if self._samples is not None:
            return f"SurvivalCurve.from_samples(<{self._n} fractions>)"
        return f"SurvivalCurve.from_points({self._points!r})"


def posterior_general(
    prior: Probability, lik_true: Probability, lik_false: Probability
) -> Probability:
    """Two-hypothesis Bayes: p(w | E) from p(E | w) and p(E | not-w)."""
    for name, v in (("prior", prior), ("lik_true", lik_true), ("lik_false", lik_false)):
        if not 0 <= v <= 1:
            raise ValueError(f"{name} {v} outside [0, 1]")
    denominator = prior * lik_true + (1 - prior) * lik_false
    if denominator == 0:
        raise DegenerateEvidenceError(
            "evidence impossible under both hypotheses (zero marginal likelihood)"
        )
    return prior * lik_true / denominator


def posterior(prior: Probability, survival: Probability) -> Probability:
    """Posterior of the claim after surviving search: likelihood 1 under w."""
    return posterior_general(prior, 1 if isinstance(prior, Fraction) else 1.0, survival)


def survival_analytic(total: int, open_count: int, searched: int) -> Fraction:
    """p(first ``searched`` examined paths all closed | ``open_count`` of ``total`` open).

    Sampling without replacement:  prod_{i<searched} (1 - O/(M-i)), computed
    via the equal closed form C(M-searched, O)/C(M, O) so huge path spaces
    cost only O(open_count) big-integer operations.  Searching past the
    closed population (searched > M - O) is impossible unfound: returns 0.
    """
    if open_count < 1:
        raise ModelError("open_count must be >= 1 (not-w guarantees an open path)")
    if open_count > total:
        raise ModelError(f"open_count {open_count} exceeds total paths {total}")
    if searched < 0:
        raise ValueError("searched must be >= 0")
    if searched > total - open_count:
        return Fraction(0)
    num = 1
    den = 1
    for i in range(open_count):
        num *= total - searched - i
        den *= total - i
    return Fraction(num, den)


def _normalized_dist(
    open_dist: Mapping[int, Probability], total: int
) -> list[tuple[int, Probability]]:
    if not open_dist:
        raise ModelError("open-path distribution is empty")
    items = sorted(open_dist.items())
    weight = 0
    for o, p in items:
        if not isinstance(o, int) or o < 1:
            raise ModelError(f"open-path count {o!r} must be a positive integer")
        if o > total:
            raise ModelError(f"open-path count {o} exceeds total paths {total}")
        if p < 0:
            raise ModelError("open-path probabilities must be >= 0")
        weight += p
    exact = all(isinstance(p, (int, Fraction)) for _, p in items)
    if exact:
        if weight != 1:
            raise ModelError(f"open-path distribution sums to {weight}, not 1")
    elif abs(weight - 1) > FLOAT_TOL:
        raise ModelError(f"open-path distribution sums to {weight!r}, not 1")
    return items


def survival_mixture(
    total: int, open_dist: Mapping[int, Probability], searched: int
) -> Probability:
    """Survival probability under a distribution over the open-path count."""
    items = _normalized_dist(open_dist, total)
    return sum(p * survival_analytic(total, o, searched) for o, p in items)


@dataclass(frozen=True)
class AnalyticModel:
    """Urn model of one search: ``total`` paths, open count fixed or distributed."""

    total: int
    open_paths: int | Mapping[int, Probability]

    def __post_init__(self) -> None:
        if self.total < 0:
            raise ModelError("total must be >= 0")
        if isinstance(self.open_paths, int):
            if not 1 <= self.open_paths <= self.total:
                raise ModelError(
                    f"open_paths {self.open_paths} invalid for {self.total} paths"
                )
        else:
            _normalized_dist(self.open_paths, self.total)

    def distribution(self) -> dict[int, Probability]:
        if isinstance(self.open_paths, int):
            return {self.open_paths: Fraction(1)}
        return dict(sorted(self.open_paths.items()))

    def survival(self, searched: int) -> Probability:
        if isinstance(self.open_paths, int):
            return survival_analytic(self.total, self.open_paths, searched)
        return survival_mixture(self.total, self.open_paths, searched)

    def conditional(self, searched: int) -> dict[int, Probability]:
        """Distribution of the open count given survival to ``searched``."""
        dist = self.distribution()
        if len(dist) == 1:
            (o, _), = dist.items()
            return {o: Fraction(1)}
        weighted = {
            o: p * survival_analytic(self.total, o, searched) for o, p in dist.items()
        }
        norm = sum(weighted.values())
        if norm == 0:
            # Survival impossible under every admitted count; the posterior on
            # the claim is 1 and this distribution is never consulted again.
            return dist
        return {o: w / norm for o, w in weighted.items()}


def first_open_pmf(remaining: int, open_count: int, j: int) -> Fraction:
    """p(first open path is the j-th examined | ``open_count`` of ``remaining`` open).

    First-success-without-replacement:
    ``prod_{i=0}^{j-2} (1 - O/(l-i)) * O/(l-(j-1))``.  Positions past the
    support (j > l - O + 1) are impossible: flagged with a warning, value 0.
    """
    if open_count < 1 or open_count > remaining:
        raise ModelError(
            f"open_count {open_count} invalid for {remaining} remaining paths"
        )
    if j < 1:
        raise ValueError("j must be >= 1")
    if j > remaining - open_count + 1:
        warnings.warn(
            f"first-open position {j} beyond support (remaining={remaining}, "
            f"open={open_count}); probability 0",
            RuntimeWarning,
            stacklevel=2,
        )
        return Fraction(0)
    return survival_analytic(remaining, open_count, j - 1) * Fraction(
        open_count, remaining - (j - 1)
    )


def first_open_cdf(remaining: int, open_count: int, within: int) -> Fraction:
    """p(first open path appears within the next ``within`` examinations)."""
    if within < 0:
        raise ValueError("within must be >= 0")
    if within == 0:
        return Fraction(0)
    return 1 - survival_analytic(remaining, open_count, min(within, remaining))


def first_open_mean_within(remaining: int, open_count: int, within: int) -> Fraction:
    """Truncated mean  sum_{j<=within} j * first_open_pmf(j), in closed form.

    Uses sum_{j<=x} j*p(j) = sum_{t=1..x} p(J >= t) - x*p(J > x) and the
    hockey-stick identity sum_{u<x} C(l-u, O) = C(l+1, O+1) - C(l-x+1, O+1),
    so the cost is O(open_count) big-integer operations regardless of x.
    """
    if within < 0:
        raise ValueError("within must be >= 0")
    l, o = remaining, open_count
    x = min(within, l)
    if x == 0:
        return Fraction(0)
    if o < 1 or o > l:
        raise ModelError(f"open_count {o} invalid for {l} remaining paths")
    head = Fraction(comb(l + 1, o + 1) - comb(l - x + 1, o + 1), comb(l, o))
    return head - x * survival_analytic(l, o, x)


def halting_prob(
    posterior_not_w: Probability, remaining: int, open_count: int, j: int
) -> Probability:
    """p(search halts with a disproof exactly at the j-th further path)."""
    if not 0 <= posterior_not_w <= 1:
        raise ValueError(f"posterior_not_w {posterior_not_w} outside [0, 1]")
    return posterior_not_w * first_open_pmf(remaining, open_count, j)


def survival_lookup(curve: SurvivalCurve, s: Probability) -> Fraction:
    """Evaluate a survival curve at explored fraction ``s`` (right-continuous)."""
    return curve.value(s)
