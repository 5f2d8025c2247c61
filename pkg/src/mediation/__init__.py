"""Synthesis and verification of mediating connectors between mismatched protocols."""
from .decompose import DecomposeConfig, TraceSet, enumerate_traces
from .lts import (
    Action,
    Direction,
    Lts,
    LtsError,
    ParseError,
    Port,
    Trace,
    Transition,
    export_dot,
    isomorphic,
    linear_lts,
    parse_lts,
    parse_trace,
    replays,
    serialize_lts,
    validate,
)
from .mismatch import (
    AlignConfig,
    AlignStep,
    Alignment,
    Incompatible,
    MismatchReport,
    StepKind,
    align,
    classify,
    match_components,
)
from .semantics import Correspondence, CorrespondenceMap, Kind, lookup, parse_map
from .synthesis import compose_mediator, identity_relay, mediator_trace, synthesize
from .verify import (
    StateSpaceExceeded,
    VerifyReport,
    check,
    confirm_maximal_runs,
    parallel_compose,
    simulate,
)

__version__ = "0.1.0"
