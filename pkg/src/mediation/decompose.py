"""Split a component's LTS into its elementary traces."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterator

from .lts import Lts, LtsError, Trace, validate

__all__ = ["DecomposeConfig", "TraceSet", "enumerate_traces"]


@dataclass(frozen=True)
class DecomposeConfig:
    """``unroll_bound`` is how many times a path may come back to a state it already visited."""

    unroll_bound: int = 1
    max_traces: int = 1000

    def __post_init__(self):
        if self.unroll_bound < 0:
            raise ValueError("unroll_bound must be >= 0")
        if self.max_traces < 1:
            raise ValueError("max_traces must be >= 1")


@dataclass(frozen=True)
class TraceSet:
    traces: tuple[Trace, ...]
    truncated: bool = False

    def __iter__(self) -> Iterator[Trace]:
        return iter(self.traces)

    def __len__(self):
        return len(self.traces)

    def __getitem__(self, i):
        return self.traces[i]


def enumerate_traces(lts: Lts, cfg: DecomposeConfig = DecomposeConfig()) -> TraceSet:
    """All initial-to-final paths visiting each state at most ``unroll_bound + 1`` times.

    With the default bound of 1 every loop is traversed at most once, so a
    self-loop ``!m`` between ``!a`` and ``!c`` gives ``!a !c`` and ``!a !m !c``.

    Paths are explored breadth-first by length, so when the cap bites the
    returned traces are still the first ``max_traces`` in (length, text) order.
    """
    problems = validate(lts)
    if problems:
        raise LtsError("invalid LTS: " + "; ".join(problems))

    limit = cfg.unroll_bound + 1
    found: set[Trace] = set()
    level = [(lts.initial, (), Counter({lts.initial: 1}))]
    while level:
        nxt = []
        for state, actions, visits in level:
            if state in lts.finals:
                found.add(Trace(actions))
            for t in lts.outgoing(state):
                if visits[t.target] < limit:
                    v = visits.copy()
                    v[t.target] += 1
                    nxt.append((t.target, actions + (t.action,), v))
        if len(found) > cfg.max_traces:
            break
        level = nxt

    ordered = sorted(found, key=Trace.sort_key)
    truncated = len(ordered) > cfg.max_traces
    return TraceSet(tuple(ordered[: cfg.max_traces]), truncated)
