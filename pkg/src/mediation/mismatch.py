"""Trace alignment under a correspondence map and mismatch classification.

``align`` is a dynamic program over positions ``(i, j)`` in the left and
right trace. Every move consumes a prefix of what is left of one or both
traces and corresponds to one mediator building block:

========== ============================================= =======
kind       what it consumes                               pattern
========== ============================================= =======
forward    one action per side, same message               --
translate  one action per side, renamed message            3
consume    one extra send on one side                      1
produce    one unmatched receive of a producible message  2
reorder    k actions per side, permuted pairs (k >= 2)     4
split      one send vs. several receives                   5
merge      several sends vs. one receive                   6
========== ============================================= =======

The receive-then-send crossing shape (left ``?x !y``, right ``?y !x``) is
always resolved by producers and consumers, never by reordering.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Sequence, Union

from .lts import Action, Direction, Port, Trace
from .semantics import CorrespondenceMap, Kind

__all__ = [
    "AlignConfig",
    "AlignStep",
    "Alignment",
    "CompatibilityMatrix",
    "Incompatible",
    "Instance",
    "MismatchReport",
    "StepKind",
    "align",
    "classify",
    "match_components",
]


class StepKind(Enum):
    FORWARD = "forward"
    TRANSLATE = "translate"
    SPLIT = "split"
    MERGE = "merge"
    REORDER = "reorder"
    CONSUME = "consume"
    PRODUCE = "produce"


# tie-break order among equal-cost alignments
PRIORITY = {k: n for n, k in enumerate(StepKind)}

PATTERN = {
    StepKind.CONSUME: 1,
    StepKind.PRODUCE: 2,
    StepKind.TRANSLATE: 3,
    StepKind.REORDER: 4,
    StepKind.SPLIT: 5,
    StepKind.MERGE: 6,
}

DEFAULT_COSTS = {
    StepKind.FORWARD: 0,
    StepKind.TRANSLATE: 1,
    StepKind.SPLIT: 1,
    StepKind.MERGE: 1,
    StepKind.REORDER: 2,  # per inverted pair
    StepKind.CONSUME: 3,
    StepKind.PRODUCE: 4,
}


@dataclass(frozen=True)
class AlignConfig:
    reorder_window: int = 4
    costs: Mapping[StepKind, int] = field(default_factory=lambda: dict(DEFAULT_COSTS))

    def __post_init__(self):
        if self.reorder_window < 1:
            raise ValueError("reorder_window must be positive")
        costs = dict(DEFAULT_COSTS)
        costs.update(self.costs)
        if costs[StepKind.FORWARD] != 0:
            raise ValueError("forward steps must cost 0")
        for kind, c in costs.items():
            if kind is not StepKind.FORWARD and c < 1:
                raise ValueError(f"{kind.value} cost must be >= 1")
        object.__setattr__(self, "costs", costs)

    @classmethod
    def from_overrides(cls, reorder_window: int = 4, overrides: Mapping[str, int] | None = None):
        costs = {StepKind(k.lower()): v for k, v in (overrides or {}).items()}
        return cls(reorder_window, costs)

    def __hash__(self):
        return hash((self.reorder_window, tuple(sorted((k.value, v) for k, v in self.costs.items()))))


@dataclass(frozen=True)
class AlignStep:
    kind: StepKind
    left_span: tuple[int, ...]
    right_span: tuple[int, ...]
    labels: tuple[str, ...]
    # reorder: (left index, right index) pairs; forward/translate: the single pair
    pairs: tuple[tuple[int, int], ...] = ()
    composite: str | None = None

    @property
    def side(self) -> Port | None:
        """For consume/produce steps, the side whose action is handled."""
        if self.kind in (StepKind.CONSUME, StepKind.PRODUCE):
            return Port.LEFT if self.left_span else Port.RIGHT
        return None

    def __str__(self):
        def span(s):
            return ",".join(map(str, s)) if s else "-"

        return f"{self.kind.value}({' '.join(self.labels)}) left={span(self.left_span)} right={span(self.right_span)}"


@dataclass(frozen=True)
class Alignment:
    left: Trace
    right: Trace
    steps: tuple[AlignStep, ...]
    cost: int

    compatible = True

    def mirrored(self) -> "Alignment":
        steps = tuple(
            AlignStep(
                s.kind,
                s.right_span,
                s.left_span,
                _mirror_labels(s),
                tuple((b, a) for a, b in s.pairs),
                s.composite,
            )
            for s in self.steps
        )
        return Alignment(self.right, self.left, steps, self.cost)


def _mirror_labels(s: AlignStep) -> tuple[str, ...]:
    if s.kind in (StepKind.TRANSLATE, StepKind.SPLIT, StepKind.MERGE, StepKind.REORDER):
        nl = len(s.left_span) if s.kind is not StepKind.TRANSLATE else 1
        return s.labels[nl:] + s.labels[:nl]
    return s.labels


@dataclass(frozen=True)
class Incompatible:
    left: Trace
    right: Trace
    frontier: tuple[int, int]
    reason: str

    compatible = False


AlignResult = Union[Alignment, Incompatible]


@dataclass(frozen=True)
class _Move:
    target: tuple[int, int]
    steps: tuple[AlignStep, ...]
    cost: int
    key: tuple


def _pair_step(a: Action, b: Action, i: int, j: int, cmap: CorrespondenceMap) -> AlignStep | None:
    if a.direction is b.direction:
        return None
    corr = cmap.corresponds(a.label, b.label)
    if corr is None:
        return None
    if corr.kind is Kind.IDENTITY:
        return AlignStep(StepKind.FORWARD, (i,), (j,), (a.label,), ((i, j),))
    return AlignStep(StepKind.TRANSLATE, (i,), (j,), (a.label, b.label), ((i, j),))


def _sends_then_receives(block: Sequence[Action]) -> bool:
    seen_receive = False
    for a in block:
        if a.is_send and seen_receive:
            return False
        seen_receive |= not a.is_send
    return True


def _inversions(perm: Sequence[int]) -> int:
    return sum(1 for x, y in itertools.combinations(perm, 2) if x > y)


def _crossing_shape(left, right, i, j, cmap) -> tuple[AlignStep, ...] | None:
    """Producer/consumer resolution of left ``?x !y`` against right ``?y' !x'``."""
    if i + 2 > len(left) or j + 2 > len(right):
        return None
    rx, sy = left[i], left[i + 1]
    ry, sx = right[j], right[j + 1]
    if not (not rx.is_send and sy.is_send and not ry.is_send and sx.is_send):
        return None
    if cmap.corresponds(rx.label, sx.label) is None or cmap.corresponds(sy.label, ry.label) is None:
        return None
    if rx.label not in cmap.producible or ry.label not in cmap.producible:
        return None
    tag = "4c"
    return (
        AlignStep(StepKind.PRODUCE, (i,), (), (rx.label,), composite=tag),
        AlignStep(StepKind.CONSUME, (i + 1,), (), (sy.label,), composite=tag),
        AlignStep(StepKind.PRODUCE, (), (j,), (ry.label,), composite=tag),
        AlignStep(StepKind.CONSUME, (), (j + 1,), (sx.label,), composite=tag),
    )


def _moves(left: Trace, right: Trace, i: int, j: int, cmap: CorrespondenceMap, cfg: AlignConfig) -> list[_Move]:
    costs = cfg.costs
    n, m = len(left), len(right)

    crossing = _crossing_shape(left, right, i, j, cmap)
    if crossing is not None:
        cost = sum(costs[s.kind] for s in crossing)
        return [_Move((i + 2, j + 2), crossing, cost, (PRIORITY[StepKind.PRODUCE], 4, ()))]

    moves = []

    def add(target, step, cost, extra=()):
        size = len(step.left_span) + len(step.right_span)
        moves.append(_Move(target, (step,), cost, (PRIORITY[step.kind], size, extra)))

    if i < n and j < m:
        step = _pair_step(left[i], right[j], i, j, cmap)
        if step is not None:
            add((i + 1, j + 1), step, costs[step.kind])

    for port, trace, k in ((Port.LEFT, left, i), (Port.RIGHT, right, j)):
        if k >= len(trace):
            continue
        a = trace[k]
        target = (i + 1, j) if port is Port.LEFT else (i, j + 1)
        span = ((k,), ()) if port is Port.LEFT else ((), (k,))
        if a.is_send:
            add(target, AlignStep(StepKind.CONSUME, *span, (a.label,)), costs[StepKind.CONSUME])
        elif a.label in cmap.producible:
            add(target, AlignStep(StepKind.PRODUCE, *span, (a.label,)), costs[StepKind.PRODUCE])

    # one action against several (split / merge)
    for port in Port:
        single, many = (left, right) if port is Port.LEFT else (right, left)
        si, mi = (i, j) if port is Port.LEFT else (j, i)
        if si >= len(single):
            continue
        a = single[si]
        entry = cmap.lookup(a.label, port)
        if entry.implicit or len(entry.side(port)) != 1:
            continue
        names = entry.side(port.other())
        k = len(names)
        if k < 2 or mi + k > len(many):
            continue
        block = many[mi:mi + k]
        if any(b.label != name or b.direction is a.direction for b, name in zip(block, names)):
            continue
        kind = StepKind.SPLIT if a.is_send else StepKind.MERGE
        many_span = tuple(range(mi, mi + k))
        if port is Port.LEFT:
            step = AlignStep(kind, (si,), many_span, (a.label,) + names)
            add((i + 1, j + k), step, costs[kind])
        else:
            step = AlignStep(kind, many_span, (si,), names + (a.label,))
            add((i + k, j + 1), step, costs[kind])

    for k in range(2, min(cfg.reorder_window, n - i, m - j) + 1):
        lb, rb = left[i:i + k], right[j:j + k]
        if not (_sends_then_receives(lb) and _sends_then_receives(rb)):
            continue
        ok = [[_pair_step(lb[s], rb[t], i + s, j + t, cmap) for t in range(k)] for s in range(k)]
        best = None
        for perm in itertools.permutations(range(k)):
            if all(p == q for p, q in enumerate(perm)):
                continue
            if all(ok[s][perm[s]] is not None for s in range(k)):
                inv = _inversions(perm)
                if best is None or inv < best[0]:
                    best = (inv, perm)
        if best is None:
            continue
        inv, perm = best
        pairs = tuple((i + s, j + perm[s]) for s in range(k))
        labels = tuple(a.label for a in lb) + tuple(b.label for b in rb)
        step = AlignStep(
            StepKind.REORDER, tuple(range(i, i + k)), tuple(range(j, j + k)), labels, pairs
        )
        add((i + k, j + k), step, costs[StepKind.REORDER] * inv, perm)

    return moves


def align(left: Trace, right: Trace, cmap: CorrespondenceMap, cfg: AlignConfig = AlignConfig()) -> AlignResult:
    """Minimum-cost alignment of two traces, or :class:`Incompatible`.

    Equal-cost alternatives are resolved step by step from the start:
    the earliest differing step with the higher-priority kind wins
    (forward, translate, split, merge, reorder, consume, produce).
    """
    left, right = Trace(left), Trace(right)
    n, m = len(left), len(right)
    INF = float("inf")
    best: dict[tuple[int, int], float] = {(n, m): 0}
    choice: dict[tuple[int, int], _Move] = {}
    for i in range(n, -1, -1):
        for j in range(m, -1, -1):
            if (i, j) == (n, m):
                continue
            top = INF
            for mv in _moves(left, right, i, j, cmap, cfg):
                total = mv.cost + best[mv.target]
                if total == INF:
                    continue
                if total < top or (total == top and mv.key < choice[(i, j)].key):
                    top = total
                    choice[(i, j)] = mv
            best[(i, j)] = top

    if best[(0, 0)] == INF:
        frontier = _frontier(left, right, cmap, cfg)
        return Incompatible(left, right, frontier, _diagnose(left, right, frontier))

    steps = []
    pos = (0, 0)
    while pos != (n, m):
        mv = choice[pos]
        steps.extend(mv.steps)
        pos = mv.target
    return Alignment(left, right, tuple(steps), int(best[(0, 0)]))


def _frontier(left, right, cmap, cfg) -> tuple[int, int]:
    seen = {(0, 0)}
    todo = [(0, 0)]
    while todo:
        i, j = todo.pop()
        for mv in _moves(left, right, i, j, cmap, cfg):
            if mv.target not in seen:
                seen.add(mv.target)
                todo.append(mv.target)
    return max(seen, key=lambda p: (p[0] + p[1], p[0]))


def _diagnose(left: Trace, right: Trace, frontier: tuple[int, int]) -> str:
    i, j = frontier
    la = str(left[i]) if i < len(left) else "end"
    ra = str(right[j]) if j < len(right) else "end"
    return f"no mediation step applies at left {i} ({la}) / right {j} ({ra})"


@dataclass(frozen=True)
class Instance:
    pattern: int
    variant: str
    step: int  # 1-based position in the alignment
    kind: StepKind
    labels: tuple[str, ...]
    left_span: tuple[int, ...]
    right_span: tuple[int, ...]

    def render(self) -> str:
        def span(s):
            return ",".join(map(str, s)) if s else "-"

        return (
            f"pattern={self.pattern} variant={self.variant} step={self.step} "
            f"kind={self.kind.value} labels={','.join(self.labels)} "
            f"left={span(self.left_span)} right={span(self.right_span)}"
        )


@dataclass(frozen=True)
class MismatchReport:
    instances: tuple[Instance, ...]
    compatible: bool
    cost: int | None = None
    frontier: tuple[int, int] | None = None

    def render(self) -> str:
        if not self.compatible:
            return f"compatible=false frontier={self.frontier[0]},{self.frontier[1]}\n"
        lines = [f"compatible=true cost={self.cost} instances={len(self.instances)}"]
        lines += [inst.render() for inst in self.instances]
        return "\n".join(lines) + "\n"

    def patterns(self) -> list[tuple[int, str]]:
        return [(inst.pattern, inst.variant) for inst in self.instances]


# (position relative to neighbour, neighbour direction) -> variant
_CONSUMER_VARIANTS = {
    ("after", Direction.RECEIVE): "base",
    ("after", Direction.SEND): "a",
    ("before", Direction.SEND): "b",
    ("before", Direction.RECEIVE): "c",
}
# producer variants are the consumer ones with every direction flipped
_PRODUCER_VARIANTS = {(pos, d.flipped()): v for (pos, d), v in _CONSUMER_VARIANTS.items()}


def _variant(a: Alignment, step: AlignStep) -> str:
    if step.composite:
        return step.composite
    kind = step.kind
    if kind in (StepKind.CONSUME, StepKind.PRODUCE):
        trace, k = (a.left, step.left_span[0]) if step.left_span else (a.right, step.right_span[0])
        if k > 0:
            key = ("after", trace[k - 1].direction)
        elif k + 1 < len(trace):
            key = ("before", trace[k + 1].direction)
        else:
            return "base"
        table = _CONSUMER_VARIANTS if kind is StepKind.CONSUME else _PRODUCER_VARIANTS
        return table[key]
    if kind is StepKind.TRANSLATE:
        return "base" if a.left[step.left_span[0]].is_send else "a"
    if kind is StepKind.REORDER:
        dirs = {a.left[k].is_send for k in step.left_span}
        if dirs == {True}:
            return "base"
        if dirs == {False}:
            return "a"
        return "b"
    # split / merge: as drawn, the left side is the sender
    return "base" if a.left[step.left_span[0]].is_send else "mirrored"


def classify(result: AlignResult) -> MismatchReport:
    """One pattern instance per non-forward step."""
    if isinstance(result, Incompatible):
        return MismatchReport((), False, frontier=result.frontier)
    out = []
    for n, step in enumerate(result.steps, 1):
        if step.kind is StepKind.FORWARD:
            continue
        out.append(
            Instance(
                PATTERN[step.kind],
                _variant(result, step),
                n,
                step.kind,
                step.labels,
                step.left_span,
                step.right_span,
            )
        )
    return MismatchReport(tuple(out), True, cost=result.cost)


@dataclass(frozen=True)
class CompatibilityMatrix:
    left: tuple[Trace, ...]
    right: tuple[Trace, ...]
    results: tuple[tuple[AlignResult, ...], ...]  # results[i][j]

    @property
    def potentially_compatible(self) -> bool:
        return any(r.compatible for row in self.results for r in row)

    def compatible_pairs(self) -> list[tuple[int, int, Alignment]]:
        return [
            (i, j, r)
            for i, row in enumerate(self.results)
            for j, r in enumerate(row)
            if r.compatible
        ]

    def render(self) -> str:
        lines = []
        for i, row in enumerate(self.results):
            for j, r in enumerate(row):
                report = classify(r).render().splitlines()
                lines.append(f"pair L{i + 1} R{j + 1} {report[0]}")
                lines += ["  " + ln for ln in report[1:]]
        total = len(self.left) * len(self.right)
        lines.append(
            f"verdict potentially_compatible={str(self.potentially_compatible).lower()} "
            f"compatible_pairs={len(self.compatible_pairs())}/{total}"
        )
        return "\n".join(lines) + "\n"


def match_components(
    left_traces: Sequence[Trace],
    right_traces: Sequence[Trace],
    cmap: CorrespondenceMap,
    cfg: AlignConfig = AlignConfig(),
) -> CompatibilityMatrix:
    left_traces, right_traces = tuple(left_traces), tuple(right_traces)
    results = tuple(tuple(align(lt, rt, cmap, cfg) for rt in right_traces) for lt in left_traces)
    return CompatibilityMatrix(left_traces, right_traces, results)
