"""Budgeted open-path proving with value-of-computation stopping.

The package splits into three layers.  ``matrix``/``dimacs``/``generator``
hold the object language: clause matrices, exhaustive path search with an
explicit budget, and a portable random-instance generator.  ``belief`` and
``profiles`` turn partial search into a posterior over entailment, either
from a counting model or from survival statistics collected on a corpus.
``decision`` and ``controller`` put a price on further search and stop the
prover when expected value runs out.
"""

from .belief import (
    AnalyticModel,
    ContextMismatchWarning,
    ContextTag,
    DegenerateEvidenceError,
    ModelError,
    SurvivalCurve,
    first_open_cdf,
    first_open_mean_within,
    first_open_pmf,
    halting_prob,
    posterior,
    posterior_general,
    survival_analytic,
    survival_mixture,
)
from .controller import (
    AnalyticSource,
    ControllerConfig,
    DecisionTrace,
    MalformedTraceError,
    ProfileSource,
    ReplayReport,
    StopReason,
    TraceStep,
    load_trace,
    replay,
    run,
    save_trace,
)
from .decision import (
    CostKind,
    DominanceError,
    HypothesisBelief,
    LookaheadError,
    MissingUtilityError,
    SearchBeliefs,
    TimeCost,
    UtilityModel,
    UtilitySpecError,
    ZERO_COST,
    best_action,
    expected_utility,
    format_utility_spec,
    nevc_multi,
    nevc_one,
    nevc_two_outcome,
    parse_utility_spec,
    threshold,
    u_best,
)
from .dimacs import DimacsError, format_dimacs, parse_dimacs, read_dimacs, write_dimacs
from .generator import (
    ConfigError,
    GeneratorConfig,
    SplitMix64,
    generate,
    generate_corpus,
    instance_seed,
    write_corpus,
)
from .heuristics import Heuristic, presort
from .matrix import (
    Clause,
    ClosureEvent,
    InvalidStateError,
    Literal,
    Matrix,
    OracleLimitError,
    SearchState,
    SearchStatus,
    brute_force_sat,
    fraction_explored,
    init_search,
    literals,
    solve,
    step_search,
    total_paths,
)
from .profiles import (
    InstanceRecord,
    MalformedProfileError,
    Profile,
    VersionMismatchError,
    collect,
    export_curve_csv,
    load,
    save,
    write_curve_csv,
)

__version__ = "0.1.0"

__all__ = [
    "AnalyticModel",
    "AnalyticSource",
    "Clause",
    "ClosureEvent",
    "ConfigError",
    "ContextMismatchWarning",
    "ContextTag",
    "ControllerConfig",
    "CostKind",
    "DecisionTrace",
    "DegenerateEvidenceError",
    "DimacsError",
    "DominanceError",
    "GeneratorConfig",
    "Heuristic",
    "HypothesisBelief",
    "InstanceRecord",
    "InvalidStateError",
    "Literal",
    "LookaheadError",
    "MalformedProfileError",
    "MalformedTraceError",
    "Matrix",
    "MissingUtilityError",
    "ModelError",
    "OracleLimitError",
    "Profile",
    "ProfileSource",
    "ReplayReport",
    "SearchBeliefs",
    "SearchState",
    "SearchStatus",
    "SplitMix64",
    "StopReason",
    "SurvivalCurve",
    "TimeCost",
    "TraceStep",
    "UtilityModel",
    "UtilitySpecError",
    "VersionMismatchError",
    "ZERO_COST",
    "best_action",
    "brute_force_sat",
    "collect",
    "expected_utility",
    "export_curve_csv",
    "first_open_cdf",
    "first_open_mean_within",
    "first_open_pmf",
    "format_dimacs",
    "format_utility_spec",
    "fraction_explored",
    "generate",
    "generate_corpus",
    "halting_prob",
    "init_search",
    "instance_seed",
    "literals",
    "load",
    "load_trace",
    "nevc_multi",
    "nevc_one",
    "nevc_two_outcome",
    "parse_dimacs",
    "parse_utility_spec",
    "posterior",
    "posterior_general",
    "presort",
    "read_dimacs",
    "replay",
    "run",
    "save",
    "save_trace",
    "solve",
    "step_search",
    "survival_analytic",
    "survival_mixture",
    "threshold",
    "total_paths",
    "u_best",
    "write_corpus",
    "write_curve_csv",
    "write_dimacs",
]
