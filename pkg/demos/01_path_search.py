"""Walk the path search by hand on a four-clause matrix.

A claim w is checked by negating it: the clauses below are the CNF of ~w.
Every path (one literal per clause) that contains a complementary pair is
contradictory, hence closed.  If every path closes, ~w is impossible and w
is proved; one open path is a countermodel and disproves w.
"""

from proverb import (
    Matrix,
    SearchStatus,
    fraction_explored,
    init_search,
    literals,
    step_search,
    total_paths,
)


def show(matrix):
    for i, clause in enumerate(matrix.clauses, start=1):
        print(f"  clause {i}: " + " | ".join(map(str, clause)))


def main():
    matrix = Matrix(
        (
            literals(0, 1),
            literals((0, True), 2),
            literals((1, True), (2, True)),
            literals(0, 2),
        ),
        alphabet_size=3,
    )
    print("matrix (CNF of the negated claim):")
    show(matrix)
    print(f"path space: {total_paths(matrix)} complete paths\n")

    state = init_search(matrix)
    while state.status is SearchStatus.RUNNING:
        for event in step_search(state, 1):
            explored = fraction_explored(state)
            print(
                f"closed branch at clause {event.clause_index}: "
                f"pruned {event.pruned} path(s), "
                f"{event.cumulative_closed}/{state.total} done "
                f"(fraction {explored})"
            )

    print(f"\nverdict: {state.status.value}")
    if state.status is SearchStatus.OPEN_FOUND:
        print("open path found, the claim is false; countermodel literals:")
        print("  " + ", ".join(str(lit) for lit in state.witness))
        print("(each literal read as an assignment: x0 means x0=true,")
        print(" ~x2 means x2=false; unmentioned symbols are free)")
    else:
        print("every path closed: the claim is a theorem")

    # Second act: pin the countermodel down with one more clause and the
    # whole path space closes; every path is pruned exactly once.
    theorem = Matrix(
        matrix.clauses + (literals((0, True), (2, True)),),
        alphabet_size=3,
    )
    print("\nadding clause 5: ~x0 | ~x2 and starting over:")
    state = init_search(theorem)
    pruned = 0
    while state.status is SearchStatus.RUNNING:
        for event in step_search(state, state.total):
            pruned += event.pruned
    print(f"verdict: {state.status.value}")
    print(f"pruned path total {pruned} == path space {state.total}")


if __name__ == "__main__":
    main()
