"""Clause matrices and exact-accounting open-path search.

A matrix is an ordered tuple of clauses (disjunctions of literals) that are
implicitly conjoined; a complete path picks one literal from every clause in
order.  The clause set is satisfiable exactly when some complete path is
*open*, i.e. contains no symbol together with its negation.  Equivalently,
when every complete path is closed, the negation of the clause set's
conjunction is entailed -- the question the prover actually answers.

The search walks the path tree depth first: the literals of clause ``d + 1``
are the children at depth ``d``.  As soon as a subpath carries a
complementary pair, every completion of that subpath is pruned in one step
and the count of pruned complete paths (the product of the remaining clause
widths) is added to an exact integer tally.  The explored fraction of the
path space is therefore an exact rational at every moment, and the walk can
be paused on a path budget and resumed later without losing a single count.

``brute_force_sat`` answers the same satisfiability question by sweeping all
``2**k`` truth assignments with numpy.  It shares no code or traversal logic
with the path search and serves as an independent verification oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Literal",
    "Clause",
    "Matrix",
    "ClosureEvent",
    "SearchStatus",
    "SearchState",
    "OracleLimitError",
    "InvalidStateError",
    "total_paths",
    "init_search",
    "step_search",
    "solve",
    "fraction_explored",
    "brute_force_sat",
]


class OracleLimitError(ValueError):
    """Raised when the truth-table oracle is asked to sweep too many symbols."""


class InvalidStateError(RuntimeError):
    """Raised when a terminal search state is asked to keep searching."""


@dataclass(frozen=True, slots=True)
class Literal:
    """A propositional symbol or its negation.

    ``symbol_id`` is a 0-based index into the matrix alphabet; ``negated``
    selects the polarity.  Two literals are complementary when they share a
    symbol and differ in polarity.
    """

    symbol_id: int
    negated: bool = False

    def __post_init__(self) -> None:
        if self.symbol_id < 0:
            raise ValueError(f"symbol_id {self.symbol_id} must be >= 0")

    def complement(self) -> "Literal":
        return Literal(self.symbol_id, not self.negated)

    def __str__(self) -> str:
        return ("~x%d" if self.negated else "x%d") % self.symbol_id


# A clause is an ordered tuple of literals; order matters to the search
# (children are tried left to right) which is exactly what the presort
# heuristic exploits.
Clause = tuple[Literal, ...]


@dataclass(frozen=True)
class Matrix:
    """An ordered collection of clauses over symbols ``0 .. alphabet_size-1``."""

    clauses: tuple[Clause, ...]
    alphabet_size: int

    def __post_init__(self) -> None:
        # Normalize nested sequences to tuples so hand-built literals-in-lists
        # matrices behave identically to parsed ones.
        object.__setattr__(
            self, "clauses", tuple(tuple(cl) for cl in self.clauses)
        )
        if self.alphabet_size < 0:
            raise ValueError("alphabet_size must be >= 0")
        for cl in self.clauses:
            for lit in cl:
                if not isinstance(lit, Literal):
                    raise TypeError(f"not a Literal: {lit!r}")
                if not 0 <= lit.symbol_id < self.alphabet_size:
                    raise ValueError(
                        f"symbol_id {lit.symbol_id} outside alphabet of size "
                        f"{self.alphabet_size}"
                    )

    @property
    def n_clauses(self) -> int:
        return len(self.clauses)


@dataclass(frozen=True, slots=True)
class ClosureEvent:
    """One pruning step: a subpath ending at clause ``clause_index`` closed.

    ``clause_index`` is 1-based (the clause whose literal completed the
    complementary pair).  ``pruned`` is the number of complete paths removed,
    i.e. the product of the widths of all later clauses.
    ``cumulative_closed`` is the total closed count right after this event.
    """

    clause_index: int
    pruned: int
    cumulative_closed: int


class SearchStatus(Enum):
    RUNNING = "running"
    OPEN_FOUND = "open_found"
    EXHAUSTED = "exhausted"


class SearchState:
    """Resumable cursor into the depth-first walk of one matrix's path tree.

    Single-owner and mutated in place by :func:`step_search`.  Public fields:

    ``matrix``         the matrix being searched (unchanged)
    ``closed``         exact count of complete paths pruned so far
    ``total``          exact size of the complete-path space
    ``status``         RUNNING / OPEN_FOUND / EXHAUSTED
    ``witness``        the open path (tuple of literals) once OPEN_FOUND
    ``closure_count``  number of closure events emitted so far
    """

    __slots__ = (
        "matrix",
        "closed",
        "total",
        "status",
        "witness",
        "closure_count",
        "_lits",
        "_tails",
        "_pos",
        "_neg",
        "_stack",
        "_cursor",
    )

    def __init__(self, matrix: Matrix) -> None:
        self.matrix = matrix
        n = matrix.n_clauses
        self._lits = [
            [(lit.symbol_id, lit.negated) for lit in cl] for cl in matrix.clauses
        ]
        # _tails[d] = number of complete paths below one node at depth d,
        # i.e. the product of clause widths from clause d (0-based) on.
        tails = [1] * (n + 1)
        for i in range(n - 1, -1, -1):
            tails[i] = tails[i + 1] * len(self._lits[i])
        self._tails = tails
        self.total = tails[0]
        self.closed = 0
        self.closure_count = 0
        self.witness: tuple[Literal, ...] | None = None
        self._pos = [0] * matrix.alphabet_size
        self._neg = [0] * matrix.alphabet_size
        self._stack: list[int] = []
        self._cursor = 0
        if self.total == 0:
            # An empty clause admits no path at all: the space is vacuously
            # covered and the entailment holds.
            self.status = SearchStatus.EXHAUSTED
        elif n == 0:
            # No clauses: the empty path is a (trivially open) witness.
            self.status = SearchStatus.OPEN_FOUND
            self.witness = ()
        else:
            self.status = SearchStatus.RUNNING

    @property
    def subpath(self) -> tuple[tuple[int, int], ...]:
        """Current open subpath as (1-based clause index, literal index) pairs."""
        return tuple((d + 1, li) for d, li in enumerate(self._stack))

    @property
    def polarity_counts(self) -> tuple[tuple[int, int], ...]:
        """Per-symbol (positive, negated) occurrence counts on the subpath."""
        return tuple(zip(self._pos, self._neg))

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return (
            f"SearchState(status={self.status.value}, closed={self.closed}, "
            f"total={self.total}, depth={len(self._stack)})"
        )


def total_paths(matrix: Matrix) -> int:
    """Exact number of complete paths: the product of the clause widths."""
    return math.prod(len(cl) for cl in matrix.clauses)


def init_search(matrix: Matrix) -> SearchState:
    """Fresh search state; terminal immediately for degenerate matrices."""
    return SearchState(matrix)


def step_search(
    state: SearchState, budget: int, *, event_cap: int | None = None
) -> list[ClosureEvent]:
    """Advance the walk until at least ``budget`` paths are pruned this call.

    Returns the closure events of this call in order; ``state`` is advanced
    in place.  The final closure may overshoot the budget (its full pruned
    count is always applied and reported).  The call also returns early when
    the walk terminates (open path found, or space exhausted) or when
    ``event_cap`` closure events have been emitted.  Stepping a terminal
    state raises :class:`InvalidStateError`.
    """
    if state.status is not SearchStatus.RUNNING:
        raise InvalidStateError(f"search already terminal: {state.status.value}")
    if budget < 1:
        raise ValueError("budget must be >= 1")
    if event_cap is not None and event_cap < 1:
        raise ValueError("event_cap must be >= 1 when given")

    clauses = state._lits
    tails = state._tails
    pos = state._pos
    neg = state._neg
    stack = state._stack
    n = len(clauses)
    total = state.total
    cursor = state._cursor
    closed = state.closed
    spent = 0
    events: list[ClosureEvent] = []
    status = SearchStatus.RUNNING
    witness: tuple[Literal, ...] | None = None

    while True:
        depth = len(stack)
        row = clauses[depth]
        if cursor >= len(row):
            if not stack:
                # Natural exhaustion: each complete path is pruned exactly
                # once, at its first closed prefix, so the tally must match.
                if closed != total:
                    raise AssertionError(
                        "closure accounting broke conservation: "
                        f"{closed} != {total}"
                    )
                status = SearchStatus.EXHAUSTED
                break
            li = stack.pop()
            sym, ng = clauses[len(stack)][li]
            if ng:
                neg[sym] -= 1
            else:
                pos[sym] -= 1
            cursor = li + 1
            continue
        sym, ng = row[cursor]
        if pos[sym] if ng else neg[sym]:
            # Complement already on the subpath: close here, pruning every
            # completion through the remaining clauses at once.
            pruned = tails[depth + 1]
            closed += pruned
            spent += pruned
            events.append(ClosureEvent(depth + 1, pruned, closed))
            cursor += 1
            if closed == total:
                status = SearchStatus.EXHAUSTED
                break
            if spent >= budget:
                break
            if event_cap is not None and len(events) >= event_cap:
                break
        else:
            stack.append(cursor)
            if ng:
                neg[sym] += 1
            else:
                pos[sym] += 1
            if len(stack) == n:
                status = SearchStatus.OPEN_FOUND
                witness = tuple(
                    state.matrix.clauses[d][i] for d, i in enumerate(stack)
                )
                break
            cursor = 0

    state._cursor = cursor
    state.closed = closed
    state.closure_count += len(events)
    state.status = status
    if witness is not None:
        state.witness = witness
    return events


def solve(matrix: Matrix, *, max_closures: int | None = None) -> SearchState:
    """Run the search to termination (or until ``max_closures`` events).

    Returns the final state; ``state.status`` stays RUNNING when the closure
    cap was hit first.
    """
    state = init_search(matrix)
    remaining_cap = max_closures
    while state.status is SearchStatus.RUNNING:
        if remaining_cap is not None and remaining_cap <= 0:
            break
        step_search(state, state.total, event_cap=remaining_cap)
        if remaining_cap is not None:
            remaining_cap = max_closures - state.closure_count
    return state


def fraction_explored(state: SearchState) -> Fraction:
    """Exact fraction of the complete-path space pruned so far."""
    if state.total <= 0:
        raise ValueError("fraction undefined on an empty path space")
    return Fraction(state.closed, state.total)


def brute_force_sat(matrix: Matrix, limit: int = 20) -> bool:
    """Truth-table satisfiability sweep over all ``2**alphabet_size`` rows.

    Independent oracle for the path search: a matrix is satisfiable iff the
    search finds an open path.  Refuses alphabets beyond ``limit`` symbols.
    """
    k = matrix.alphabet_size
    if k > limit:
        raise OracleLimitError(f"alphabet of {k} symbols exceeds oracle limit {limit}")
    assignments = np.arange(1 << k, dtype=np.uint32)
    alive = np.ones(1 << k, dtype=bool)
    for cl in matrix.clauses:
        pos_mask = 0
        neg_mask = 0
        for lit in cl:
            if lit.negated:
                neg_mask |= 1 << lit.symbol_id
            else:
                pos_mask |= 1 << lit.symbol_id
        sat = ((assignments & np.uint32(pos_mask)) != 0) | (
            (~assignments & np.uint32(neg_mask)) != 0
        )
        alive &= sat
        if not alive.any():
            return False
    return bool(alive.any())


def literals(*specs: int | tuple[int, bool]) -> Clause:
    """Terse clause builder: ``literals(0, (1, True))`` -> ``(x0, ~x1)``."""
    out = []
    for sp in specs:
        if isinstance(sp, tuple):
            out.append(Literal(sp[0], sp[1]))
        else:
            out.append(Literal(sp))
    return tuple(out)
