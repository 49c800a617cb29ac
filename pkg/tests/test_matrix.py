"""Path search against independent enumeration and truth-table oracles."""

import itertools
import math
import random
from fractions import Fraction

import pytest

from proverb.generator import GeneratorConfig, generate
from proverb.matrix import (
    ClosureEvent,
    InvalidStateError,
    Literal,
    Matrix,
    OracleLimitError,
    SearchStatus,
    brute_force_sat,
    fraction_explored,
    init_search,
    literals,
    solve,
    step_search,
    total_paths,
)


def path_is_closed(path):
    """Oracle: a path is closed iff it holds a complementary literal pair."""
    seen = set()
    for lit in path:
        if (lit.symbol_id, not lit.negated) in seen:
            return True
        seen.add((lit.symbol_id, lit.negated))
    return False


def enumerate_paths(matrix):
    return itertools.product(*matrix.clauses)


def count_open_paths(matrix):
    return sum(1 for p in enumerate_paths(matrix) if not path_is_closed(p))


def naive_sat(matrix):
    """Oracle: truth-table satisfiability, written independently of the library."""
    for bits in itertools.product([False, True], repeat=matrix.alphabet_size):
        if all(
            any(bits[l.symbol_id] != l.negated for l in clause)
            for clause in matrix.clauses
        ):
            return True
    return False


# --- construction ----------------------------------------------------------


def test_literal_basics():
    a = Literal(0)
    assert str(a) == "x0"
    assert str(a.complement()) == "~x0"
    assert a.complement().complement() == a
    with pytest.raises(ValueError):
        Literal(-1)


def test_literals_builder():
    clause = literals(0, (1, True), 2)
    assert clause == (Literal(0), Literal(1, True), Literal(2))


def test_matrix_validation():
    with pytest.raises(ValueError):
        Matrix((literals(3),), 3)  # symbol 3 needs alphabet >= 4
    with pytest.raises(ValueError):
        Matrix((), -1)
    m = Matrix([literals(0), literals(1)], 2)
    assert isinstance(m.clauses, tuple)
    assert m.n_clauses == 2


def test_total_paths_is_clause_length_product():
    m = Matrix((literals(0, 1), literals(0, 1, 2), literals(2)), 3)
    assert total_paths(m) == 6
    assert total_paths(Matrix((), 0)) == 1  # no clauses: the empty path
    assert total_paths(Matrix((literals(0), ()), 1)) == 0  # empty clause


# --- worked examples -------------------------------------------------------


def test_single_symbol_contradiction_exhausts():
    m = Matrix((literals(0), literals((0, True))), 1)
    state = solve(m)
    assert state.status is SearchStatus.EXHAUSTED
    assert (state.closed, state.total) == (1, 1)
    assert not naive_sat(m)


def test_open_path_is_a_satisfying_certificate():
    m = Matrix((literals(0, 1), literals((0, True), 1)), 2)
    state = solve(m)
    assert state.status is SearchStatus.OPEN_FOUND
    assert state.witness == (Literal(0), Literal(1))
    assert not path_is_closed(state.witness)
    assert naive_sat(m)


def test_fraction_after_first_closure_of_nine_paths():
    # 3x3 literal grid: the first path closes at clause 2, pruning one of 9.
    m = Matrix(
        (literals(0, 1, 2), literals((0, True), 3, 4)),
        5,
    )
    state = init_search(m)
    events = step_search(state, 1)
    assert state.total == 9
    assert [e.pruned for e in events] == [1]
    assert events[0].clause_index == 2
    assert fraction_explored(state) == Fraction(1, 9)


def test_empty_matrix_is_open():
    state = solve(Matrix((), 0))
    assert state.status is SearchStatus.OPEN_FOUND
    assert state.witness == ()


def test_empty_clause_has_no_paths():
    state = solve(Matrix((literals(0), ()), 1))
    assert state.status is SearchStatus.EXHAUSTED
    assert state.total == 0
    with pytest.raises(ValueError):
        fraction_explored(state)


def test_duplicate_literal_clause_counts_both_branches():
    m = Matrix((literals(0, 0), literals((0, True),)), 1)
    state = solve(m)
    assert state.total == 2
    assert state.status is SearchStatus.EXHAUSTED
    assert state.closed == 2


def test_tautological_clause_keeps_paths_open():
    # x0 | ~x0 cannot be closed by itself.
    m = Matrix((literals(0, (0, True)),), 1)
    state = solve(m)
    assert state.status is SearchStatus.OPEN_FOUND


# --- stepping, budgets, events ---------------------------------------------


def test_step_budget_validation():
    state = init_search(Matrix((literals(0, 1),), 2))
    with pytest.raises(ValueError):
        step_search(state, 0)


def test_stepping_terminal_state_raises():
    state = solve(Matrix((literals(0),), 1))
    with pytest.raises(InvalidStateError):
        step_search(state, 1)


def test_single_closure_may_overshoot_budget():
    # First branch closes at clause 2 and prunes a 3^5 tail in one event.
    clauses = [literals(0, 1, 2), literals((0, True), 1, 2)]
    clauses += [literals(3, 4, 5)] * 5
    m = Matrix(clauses, 6)
    state = init_search(m)
    events = step_search(state, 5)
    assert len(events) == 1
    assert events[0].pruned == 3**5
    assert state.closed == 3**5
    assert state.status is SearchStatus.RUNNING


def test_event_cap_pauses_before_budget():
    m = Matrix((literals(0), literals((0, True), 1), literals((1, True), 2)), 3)
    state = init_search(m)
    events = step_search(state, state.total, event_cap=1)
    assert len(events) == 1
    assert state.status is SearchStatus.RUNNING


def test_cumulative_closed_matches_running_total():
    config = GeneratorConfig(8, 2, 4, seed=1905)
    m = generate(config)
    state = init_search(m)
    seen = 0
    while state.status is SearchStatus.RUNNING:
        for event in step_search(state, 3):
            seen += event.pruned
            assert event.cumulative_closed == seen
    assert state.closed == seen


def test_closure_events_are_frozen_records():
    event = ClosureEvent(2, 3, 3)
    with pytest.raises(AttributeError):
        event.pruned = 5


def test_subpath_and_polarity_counts_shape():
    m = Matrix((literals(0, 1), literals((0, True), 1)), 2)
    state = init_search(m)
    step_search(state, 1)
    if state.status is SearchStatus.RUNNING:
        for clause_idx, lit_idx in state.subpath:
            assert 1 <= clause_idx <= m.n_clauses
            assert lit_idx >= 0
    counts = state.polarity_counts
    assert len(counts) == m.alphabet_size
    assert all(len(c) == 2 for c in counts)


# --- conservation and oracle equivalence ------------------------------------


def random_matrix(rng, n_clauses, max_lits, alphabet):
    clauses = []
    for _ in range(n_clauses):
        width = rng.randint(1, max_lits)
        clauses.append(
            tuple(
                Literal(rng.randrange(alphabet), rng.random() < 0.5)
                for _ in range(width)
            )
        )
    return Matrix(tuple(clauses), alphabet)


def test_closure_conservation_on_random_matrices():
    rng = random.Random(0xC0FFEE)
    for _ in range(60):
        m = random_matrix(rng, rng.randint(1, 6), 3, rng.randint(1, 5))
        state = init_search(m)
        pruned_total = 0
        while state.status is SearchStatus.RUNNING:
            pruned_total += sum(e.pruned for e in step_search(state, 7))
        if state.status is SearchStatus.EXHAUSTED:
            assert pruned_total == state.total
        else:
            assert pruned_total == state.closed < state.total


def test_exhaustion_agrees_with_path_enumeration():
    rng = random.Random(2718)
    for _ in range(80):
        m = random_matrix(rng, rng.randint(1, 5), 3, rng.randint(1, 4))
        state = solve(m)
        open_count = count_open_paths(m)
        if state.status is SearchStatus.EXHAUSTED:
            assert open_count == 0
        else:
            assert open_count > 0
            assert not path_is_closed(state.witness)


def test_exhaustion_agrees_with_truth_tables():
    rng = random.Random(31415)
    for _ in range(80):
        m = random_matrix(rng, rng.randint(1, 7), 3, rng.randint(1, 5))
        state = solve(m)
        assert (state.status is SearchStatus.OPEN_FOUND) == naive_sat(m)


def test_brute_force_oracle_matches_search():
    config = GeneratorConfig(10, 2, 6, seed=42)
    for i in range(50):
        m = generate(GeneratorConfig(10, 2, 6, seed=42 + i))
        state = solve(m)
        assert (state.status is SearchStatus.OPEN_FOUND) == brute_force_sat(m)


def test_brute_force_refuses_large_alphabets():
    m = Matrix((literals(20),), 21)
    with pytest.raises(OracleLimitError):
        brute_force_sat(m)
    assert brute_force_sat(m, limit=21) is True


def test_brute_force_edge_cases():
    assert brute_force_sat(Matrix((), 0)) is True
    assert brute_force_sat(Matrix((literals(0), ()), 1)) is False


def test_search_is_deterministic_under_any_budget_split():
    m = generate(GeneratorConfig(9, 2, 4, seed=77))

    def run(budget):
        state = init_search(m)
        events = []
        while state.status is SearchStatus.RUNNING:
            events.extend(step_search(state, budget))
        return state.status, state.closed, events

    reference = run(m and total_paths(m))
    for budget in (1, 2, 5, 13):
        assert run(budget) == reference


def test_witness_signs_satisfy_every_clause():
    # The open path assigns each symbol the polarity it carries on the path.
    rng = random.Random(99)
    for _ in range(40):
        m = random_matrix(rng, rng.randint(1, 6), 3, rng.randint(1, 5))
        state = solve(m)
        if state.status is not SearchStatus.OPEN_FOUND:
            continue
        assignment = {}
        for lit in state.witness:
            assert assignment.setdefault(lit.symbol_id, not lit.negated) == (
                not lit.negated
            )
        for clause, lit in zip(m.clauses, state.witness):
            assert lit in clause


def test_max_closures_cap_leaves_state_running():
    m = Matrix((literals(0), literals((0, True), 1), literals((1, True), 2)), 3)
    full = solve(m)
    assert full.closure_count >= 2
    capped = solve(m, max_closures=1)
    assert capped.status is SearchStatus.RUNNING
    assert capped.closure_count == 1


def test_total_paths_matches_math_prod():
    m = generate(GeneratorConfig(12, 3, 5, seed=5))
    assert total_paths(m) == math.prod(len(c) for c in m.clauses) == 3**12
