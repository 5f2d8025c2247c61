"""Closed-system exploration of left component || mediator || right component.

Synchronization is binary rendezvous: a component send ``!m`` on port P pairs
with the mediator's ``P.?m`` and a component receive ``?m`` with ``P.!m``.
The two components never talk to each other directly.
"""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Iterator, Sequence

from .lts import Action, Direction, Lts, Port

__all__ = [
    "ExecutionLog",
    "Product",
    "ProductState",
    "ProductStep",
    "StateSpaceExceeded",
    "VerifyReport",
    "check",
    "confirm_maximal_runs",
    "parallel_compose",
    "simulate",
]

DEFAULT_CAP = 10**6


class StateSpaceExceeded(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class ProductState:
    left: str
    mediator: str
    right: str

    def __str__(self):
        return f"({self.left}, {self.mediator}, {self.right})"


@dataclass(frozen=True)
class ProductStep:
    """One synchronization; ``direction`` is seen from the component."""

    port: Port
    label: str
    direction: Direction

    def sort_key(self):
        return (self.port.value, self.label, self.direction.value)

    def __str__(self):
        return f"{self.port.value} {self.direction.value}{self.label}"


class Product:
    """Lazily explored synchronous product of three machines."""

    def __init__(self, left: Lts, mediator: Lts, right: Lts):
        for t in mediator.transitions:
            if t.action.port is None:
                raise ValueError(f"mediator action {t.action} has no port qualifier")
        for lts in (left, right):
            for t in lts.transitions:
                if t.action.port is not None:
                    raise ValueError(f"component action {t.action} must not carry a port")
        self.left, self.mediator, self.right = left, mediator, right
        self._med: dict[tuple[str, Action], list[str]] = {}
        for t in mediator.transitions:
            self._med.setdefault((t.source, t.action), []).append(t.target)
        for targets in self._med.values():
            targets.sort()
        self.warnings = self._alphabet_warnings()

    @property
    def initial(self) -> ProductState:
        return ProductState(self.left.initial, self.mediator.initial, self.right.initial)

    def is_final(self, s: ProductState) -> bool:
        return (
            s.left in self.left.finals
            and s.mediator in self.mediator.finals
            and s.right in self.right.finals
        )

    def successors(self, s: ProductState) -> list[tuple[ProductStep, ProductState]]:
        out = []
        for port, comp, cstate in ((Port.LEFT, self.left, s.left), (Port.RIGHT, self.right, s.right)):
            for t in comp.outgoing(cstate):
                a = t.action
                partner = Action(a.label, a.direction.flipped(), port)
                for m2 in self._med.get((s.mediator, partner), ()):
                    if port is Port.LEFT:
                        nxt = ProductState(t.target, m2, s.right)
                    else:
                        nxt = ProductState(s.left, m2, t.target)
                    out.append((ProductStep(port, a.label, a.direction), nxt))
        out.sort(key=lambda x: (x[0].sort_key(), x[1]))
        return out

    def _alphabet_warnings(self) -> list[str]:
        med = {t.action for t in self.mediator.transitions}
        warnings = []
        for port, comp in ((Port.LEFT, self.left), (Port.RIGHT, self.right)):
            for a in sorted(comp.alphabet()):
                if Action(a.label, a.direction.flipped(), port) not in med:
                    warnings.append(f"{comp.name}: {a} is never matched by the mediator on port {port.value}")
        return warnings


def parallel_compose(left: Lts, mediator: Lts, right: Lts) -> Product:
    return Product(left, mediator, right)


@dataclass(frozen=True)
class VerifyReport:
    deadlock_free: bool
    goal_reachable: bool
    stuck_states: tuple[ProductState, ...]
    state_count: int
    transition_count: int
    warnings: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.deadlock_free and self.goal_reachable

    def render(self) -> str:
        lines = [
            f"deadlock_free={str(self.deadlock_free).lower()}",
            f"goal_reachable={str(self.goal_reachable).lower()}",
            f"states={self.state_count}",
            f"transitions={self.transition_count}",
            f"stuck={len(self.stuck_states)}",
        ]
        lines += [f"stuck_state {s}" for s in self.stuck_states]
        lines += [f"warning {w}" for w in self.warnings]
        return "\n".join(lines) + "\n"


def check(product: Product, cap: int = DEFAULT_CAP) -> VerifyReport:
    """Breadth-first exploration of every reachable product state.

    Raises :class:`StateSpaceExceeded` once more than ``cap`` states are seen.
    """
    start = product.initial
    seen = {start}
    queue = deque([start])
    stuck = []
    goal = False
    transitions = 0
    while queue:
        s = queue.popleft()
        final = product.is_final(s)
        goal |= final
        succ = product.successors(s)
        transitions += len(succ)
        if not succ and not final:
            stuck.append(s)
        for _, nxt in succ:
            if nxt not in seen:
                if len(seen) >= cap:
                    raise StateSpaceExceeded(f"product exceeds {cap} states")
                seen.add(nxt)
                queue.append(nxt)
    return VerifyReport(
        deadlock_free=not stuck,
        goal_reachable=goal,
        stuck_states=tuple(sorted(stuck)),
        state_count=len(seen),
        transition_count=transitions,
        warnings=tuple(product.warnings),
    )


def confirm_maximal_runs(product: Product, limit: int = 100_000) -> list[list[ProductState]]:
    """Enumerate maximal runs depth-first and return those not ending all-final.

    A run that revisits a state on its own path is cut there (it can be
    extended forever, so it has no end state). At most ``limit`` runs are
    inspected; exceeding that raises :class:`StateSpaceExceeded`.
    """
    bad: list[list[ProductState]] = []
    runs = 0

    def walk(path: list[ProductState], on_path: set[ProductState]):
        nonlocal runs
        s = path[-1]
        succ = product.successors(s)
        if not succ:
            runs += 1
            if runs > limit:
                raise StateSpaceExceeded(f"more than {limit} maximal runs")
            if not product.is_final(s):
                bad.append(list(path))
            return
        for _, nxt in succ:
            if nxt in on_path:
                continue
            path.append(nxt)
            on_path.add(nxt)
            walk(path, on_path)
            on_path.discard(nxt)
            path.pop()

    start = product.initial
    walk([start], {start})
    return bad


@dataclass(frozen=True)
class ExecutionLog:
    steps: tuple[tuple[int, ProductStep], ...]
    outcome: str  # "ALL FINAL", "STUCK" or "MAX STEPS"
    final_state: ProductState

    def render(self) -> str:
        lines = [f"{n} {step}" for n, step in self.steps]
        lines.append(f"{self.outcome} {self.final_state}")
        return "\n".join(lines) + "\n"

    def __iter__(self) -> Iterator[tuple[int, ProductStep]]:
        return iter(self.steps)


def simulate(
    left: Lts,
    mediator: Lts,
    right: Lts,
    script: Sequence[int] | None = None,
    seed: int | None = None,
    max_steps: int = 1000,
) -> ExecutionLog:
    """Run one interleaving until no synchronization is enabled.

    Choices among enabled steps (sorted by port, label, direction) come from
    ``script`` while it lasts, then from a ``random.Random(seed)`` stream.
    """
    product = Product(left, mediator, right)
    rng = random.Random(seed)
    script = list(script or [])
    state = product.initial
    log = []
    for n in range(1, max_steps + 1):
        succ = product.successors(state)
        if not succ:
            break
        if script:
            idx = script.pop(0)
            if not 0 <= idx < len(succ):
                raise IndexError(f"script choice {idx} out of range at step {n} ({len(succ)} enabled)")
        else:
            idx = rng.randrange(len(succ))
        step, state = succ[idx]
        log.append((n, step))
    else:
        if product.successors(state):
            return ExecutionLog(tuple(log), "MAX STEPS", state)
    outcome = "ALL FINAL" if product.is_final(state) else "STUCK"
    return ExecutionLog(tuple(log), outcome, state)
