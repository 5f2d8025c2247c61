"""Mediator construction: per-alignment mediator traces and their trie composition."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .decompose import DecomposeConfig, TraceSet, enumerate_traces
from .lts import Action, Direction, Lts, Port, Trace, Transition
from .mismatch import AlignConfig, Alignment, CompatibilityMatrix, match_components
from .semantics import CorrespondenceMap, Kind

__all__ = [
    "Synthesis",
    "compose_mediator",
    "identity_relay",
    "mediator_trace",
    "synthesize",
]


def _step_fragment(a: Alignment, step) -> list[Action]:
    # The mediator first takes every message the components send in this step
    # (left side first, each side in its own order), then delivers every
    # message they expect. Alignment steps guarantee each side's block is
    # sends-before-receives, so this never blocks a component.
    involved = [(Port.LEFT, a.left[k]) for k in step.left_span]
    involved += [(Port.RIGHT, a.right[k]) for k in step.right_span]
    takes = [Action(act.label, Direction.RECEIVE, port) for port, act in involved if act.is_send]
    gives = [Action(act.label, Direction.SEND, port) for port, act in involved if not act.is_send]
    return takes + gives


def mediator_trace(a: Alignment) -> Trace:
    """Concatenate the mediator fragment of every alignment step.

    >>> from mediation.semantics import parse_map
    >>> from mediation.mismatch import align
    >>> m = parse_map("FirstLastName <-> FirstName, LastName")
    >>> str(mediator_trace(align(Trace.of("!FirstLastName"), Trace.of("?FirstName ?LastName"), m)))
    'L.?FirstLastName R.!FirstName R.!LastName'
    """
    out: list[Action] = []
    for step in a.steps:
        out += _step_fragment(a, step)
    return Trace(out)


def compose_mediator(traces: Iterable[Trace], name: str = "Mediator", loop: bool = False) -> Lts:
    """Merge mediator traces into a prefix tree.

    With ``loop`` the last action of every trace returns to the root, which
    then is the only final state, so the mediator can serve one intent after
    another.
    """
    ordered = sorted(set(Trace(t) for t in traces), key=Trace.sort_key)
    if not ordered:
        raise ValueError("cannot compose a mediator from an empty trace set")
    root = "m0"
    children: dict[tuple[str, Action], str] = {}
    transitions: set[Transition] = set()
    finals: set[str] = set()
    counter = 1
    for trace in ordered:
        state = root
        for n, action in enumerate(trace):
            last = n == len(trace) - 1
            if loop and last:
                transitions.add(Transition(state, action, root))
                state = root
                break
            nxt = children.get((state, action))
            if nxt is None:
                nxt = f"m{counter}"
                counter += 1
                children[(state, action)] = nxt
                transitions.add(Transition(state, action, nxt))
            state = nxt
        finals.add(state)
    if loop:
        finals = {root}
    states = {root} | {t.target for t in transitions}
    return Lts(name, states, root, finals, transitions)


def identity_relay(left: Lts, right: Lts, cmap: CorrespondenceMap, name: str = "Relay") -> Lts:
    """A mediator that only passes identical messages straight through.

    Used as the no-mediation baseline: whatever one side sends is handed to
    the other side unchanged, and nothing is translated, dropped or made up.
    """
    labels = set()
    for port, lts in ((Port.LEFT, left), (Port.RIGHT, right)):
        for act in lts.alphabet():
            entry = cmap.lookup(act.label, port)
            if entry.kind is Kind.IDENTITY:
                labels.add(act.label)
    transitions = []
    for label in sorted(labels):
        for src in Port:
            mid = f"{label}_{src.value}"
            transitions.append(Transition("h0", Action(label, Direction.RECEIVE, src), mid))
            transitions.append(Transition(mid, Action(label, Direction.SEND, src.other()), "h0"))
    states = {"h0"} | {t.target for t in transitions}
    return Lts(name, states, "h0", {"h0"}, transitions)


@dataclass(frozen=True)
class Synthesis:
    left_traces: TraceSet
    right_traces: TraceSet
    matrix: CompatibilityMatrix
    mediator_traces: tuple[Trace, ...]
    mediator: Lts | None

    @property
    def compatible(self) -> bool:
        return self.mediator is not None


def synthesize(
    left: Lts,
    right: Lts,
    cmap: CorrespondenceMap,
    dcfg: DecomposeConfig = DecomposeConfig(),
    acfg: AlignConfig = AlignConfig(),
    name: str = "Mediator",
    loop: bool = False,
) -> Synthesis:
    """Decompose both sides, align every trace pair, and compose the mediator."""
    lt = enumerate_traces(left, dcfg)
    rt = enumerate_traces(right, dcfg)
    matrix = match_components(lt.traces, rt.traces, cmap, acfg)
    traces = tuple(
        sorted({mediator_trace(a) for _, _, a in matrix.compatible_pairs()}, key=Trace.sort_key)
    )
    mediator = compose_mediator(traces, name, loop) if traces else None
    return Synthesis(lt, rt, matrix, traces, mediator)
