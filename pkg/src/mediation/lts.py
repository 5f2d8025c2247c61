"""Labeled transition systems: data model, text format, validation, dot export.

A protocol source looks like::

    lts Ping
    initial s0
    final s1
    s0 -> s1 : !ping      # send
    s1 -> s1 : ?pong      # receive

Mediator machines additionally qualify every action with the port it
synchronizes on, e.g. ``s0 -> s1 : L.?ping``.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from enum import Enum
from functools import total_ordering
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Action",
    "Direction",
    "Lts",
    "LtsError",
    "ParseError",
    "Port",
    "Trace",
    "Transition",
    "export_dot",
    "isomorphic",
    "linear_lts",
    "parse_action",
    "parse_lts",
    "parse_trace",
    "replays",
    "serialize_lts",
    "validate",
]

IDENT = re.compile(r"[A-Za-z0-9_]+\Z")
_ACTION = re.compile(r"(?:(?P<port>[LR])\.)?(?P<dir>[!?])(?P<label>[A-Za-z0-9_]+)\Z")

LEFT_COLOR = "blue"
RIGHT_COLOR = "darkgreen"


class LtsError(ValueError):
    """Raised for structurally invalid machines."""


class ParseError(LtsError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class Direction(Enum):
    SEND = "!"
    RECEIVE = "?"

    def flipped(self) -> "Direction":
        return Direction.RECEIVE if self is Direction.SEND else Direction.SEND


class Port(Enum):
    LEFT = "L"
    RIGHT = "R"

    def other(self) -> "Port":
        return Port.RIGHT if self is Port.LEFT else Port.LEFT


@total_ordering
@dataclass(frozen=True, eq=False)
class Action:
    """A message occurrence. ``port`` is only set on mediator actions."""

    label: str
    direction: Direction
    port: Port | None = None

    def __post_init__(self):
        if not IDENT.match(self.label or ""):
            raise LtsError(f"invalid action label {self.label!r}")

    def _key(self):
        return (
            self.port.value if self.port else "",
            self.label,
            self.direction.value,
        )

    def __eq__(self, other):
        if not isinstance(other, Action):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __lt__(self, other):
        return self._key() < other._key()

    @property
    def is_send(self) -> bool:
        return self.direction is Direction.SEND

    def __str__(self):
        prefix = f"{self.port.value}." if self.port else ""
        return f"{prefix}{self.direction.value}{self.label}"

    def __repr__(self):
        return f"Action({str(self)!r})"


def send(label: str, port: Port | None = None) -> Action:
    return Action(label, Direction.SEND, port)


def receive(label: str, port: Port | None = None) -> Action:
    return Action(label, Direction.RECEIVE, port)


def parse_action(text: str) -> Action:
    m = _ACTION.match(text.strip())
    if not m:
        raise LtsError(f"malformed action {text!r}")
    port = Port(m["port"]) if m["port"] else None
    return Action(m["label"], Direction(m["dir"]), port)


@dataclass(frozen=True)
class Trace:
    """A finite action sequence."""

    actions: tuple[Action, ...] = ()

    def __init__(self, actions: Iterable[Action] = ()):
        object.__setattr__(self, "actions", tuple(actions))

    @classmethod
    def of(cls, text: str) -> "Trace":
        """Build from whitespace-separated actions, e.g. ``Trace.of("?m1 !m2")``."""
        return cls(parse_action(tok) for tok in text.split())

    def __iter__(self) -> Iterator[Action]:
        return iter(self.actions)

    def __len__(self):
        return len(self.actions)

    def __getitem__(self, i):
        return self.actions[i]

    def sort_key(self):
        return (len(self.actions), tuple(str(a) for a in self.actions))

    def __str__(self):
        return " ".join(str(a) for a in self.actions)


@dataclass(frozen=True, order=True)
class Transition:
    source: str
    action: Action
    target: str


@dataclass(frozen=True)
class Lts:
    """Rooted finite LTS with explicit final states.

    Construction does not check reachability; use :func:`validate` for that.
    """

    name: str
    states: frozenset[str]
    initial: str
    finals: frozenset[str]
    transitions: frozenset[Transition]

    def __init__(self, name, states, initial, finals, transitions):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "states", frozenset(states))
        object.__setattr__(self, "initial", initial)
        object.__setattr__(self, "finals", frozenset(finals))
        object.__setattr__(self, "transitions", frozenset(transitions))
        object.__setattr__(self, "_out", None)
        if initial not in self.states:
            raise LtsError(f"initial state {initial!r} is not a state")
        if not self.finals:
            raise LtsError("final state set is empty")
        missing = sorted(self.finals - self.states)
        if missing:
            raise LtsError(f"final states not in machine: {', '.join(missing)}")
        for t in self.transitions:
            for s in (t.source, t.target):
                if s not in self.states:
                    raise LtsError(f"transition endpoint {s!r} is not a state")

    def outgoing(self, state: str) -> tuple[Transition, ...]:
        if self._out is None:
            out: dict[str, list[Transition]] = {s: [] for s in self.states}
            for t in self.transitions:
                out[t.source].append(t)
            object.__setattr__(
                self, "_out", {s: tuple(sorted(ts)) for s, ts in out.items()}
            )
        return self._out.get(state, ())

    def sorted_transitions(self) -> list[Transition]:
        return sorted(self.transitions, key=lambda t: (t.source, t.action.label, str(t.action), t.target))

    def alphabet(self) -> frozenset[Action]:
        return frozenset(t.action for t in self.transitions)

    def __eq__(self, other):
        if not isinstance(other, Lts):
            return NotImplemented
        return (self.name, self.states, self.initial, self.finals, self.transitions) == (
            other.name, other.states, other.initial, other.finals, other.transitions
        )

    def __hash__(self):
        return hash((self.name, self.initial, self.finals, self.transitions))


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return line if i < 0 else line[:i]


def parse_lts(text: str) -> Lts:
    """Parse the line-oriented protocol format into an :class:`Lts`.

    Raises :class:`ParseError` with line/column on syntax errors, unknown
    final states, a missing ``initial`` or ``final`` line, and duplicate
    transitions.
    """
    lines = [(n, _strip_comment(raw)) for n, raw in enumerate(text.splitlines(), 1)]
    lines = [(n, ln) for n, ln in lines if ln.strip()]
    it = iter(lines)

    def expect(keyword: str):
        try:
            n, ln = next(it)
        except StopIteration:
            raise ParseError(f"missing '{keyword}' line", len(text.splitlines()) + 1)
        parts = ln.split(None, 1)
        if parts[0] != keyword or len(parts) < 2:
            raise ParseError(f"expected '{keyword}'", n, _col(ln, parts[0]))
        return n, ln, parts[1].strip()

    n, ln, name = expect("lts")
    if not IDENT.match(name):
        raise ParseError(f"bad machine name {name!r}", n, _col(ln, name))
    n, ln, initial = expect("initial")
    if not IDENT.match(initial):
        raise ParseError(f"bad state name {initial!r}", n, _col(ln, initial))
    final_line, ln, rest = expect("final")
    finals = [f.strip() for f in rest.split(",")]
    for f in finals:
        if not IDENT.match(f):
            raise ParseError(f"bad state name {f!r}", final_line, _col(ln, f or ","))

    transitions: list[Transition] = []
    seen: set[Transition] = set()
    for n, ln in it:
        if "->" not in ln or ":" not in ln:
            raise ParseError("expected 'SRC -> DST : ACTION'", n, _col(ln, ln.strip()[:1]))
        src, rest = ln.split("->", 1)
        dst, act = rest.split(":", 1)
        src, dst, act = src.strip(), dst.strip(), act.strip()
        for tok in (src, dst):
            if not IDENT.match(tok):
                raise ParseError(f"bad state name {tok!r}", n, _col(ln, tok or "->"))
        try:
            action = parse_action(act)
        except LtsError:
            raise ParseError(f"malformed action {act!r}", n, _col(ln, act or ":"))
        t = Transition(src, action, dst)
        if t in seen:
            raise ParseError(f"duplicate transition {src} -> {dst} : {action}", n)
        seen.add(t)
        transitions.append(t)

    states = {initial} | {t.source for t in transitions} | {t.target for t in transitions}
    for f in finals:
        if f not in states:
            raise ParseError(f"unknown state {f!r}", final_line, _col(lines[2][1], f))
    return Lts(name, states, initial, finals, transitions)


def _col(line: str, token: str) -> int:
    i = line.find(token) if token else -1
    return i + 1 if i >= 0 else 1


def serialize_lts(lts: Lts) -> str:
    out = [f"lts {lts.name}", f"initial {lts.initial}", f"final {', '.join(sorted(lts.finals))}"]
    for t in lts.sorted_transitions():
        out.append(f"{t.source} -> {t.target} : {t.action}")
    return "\n".join(out) + "\n"


def parse_trace(text: str) -> Trace:
    """One action per line; ``#`` comments and blank lines are ignored."""
    actions = []
    for n, raw in enumerate(text.splitlines(), 1):
        ln = _strip_comment(raw).strip()
        if not ln:
            continue
        try:
            actions.append(parse_action(ln))
        except LtsError:
            raise ParseError(f"malformed action {ln!r}", n, _col(raw, ln))
    return Trace(actions)


def linear_lts(trace: Trace | Sequence[Action], name: str = "T") -> Lts:
    actions = list(trace)
    states = [f"t{i}" for i in range(len(actions) + 1)]
    transitions = [Transition(states[i], a, states[i + 1]) for i, a in enumerate(actions)]
    return Lts(name, states, states[0], [states[-1]], transitions)


def reachable_from(lts: Lts, start: str) -> set[str]:
    seen = {start}
    todo = deque([start])
    while todo:
        s = todo.popleft()
        for t in lts.outgoing(s):
            if t.target not in seen:
                seen.add(t.target)
                todo.append(t.target)
    return seen


def validate(lts: Lts) -> list[str]:
    """Return the list of invariant violations; empty iff the machine is valid."""
    problems = []
    reach = reachable_from(lts, lts.initial)
    for s in sorted(lts.states - reach):
        problems.append(f"state {s} is unreachable from initial state {lts.initial}")

    # backward search from the finals
    preds: dict[str, set[str]] = {s: set() for s in lts.states}
    for t in lts.transitions:
        preds[t.target].add(t.source)
    coreach = set(lts.finals)
    todo = deque(lts.finals)
    while todo:
        s = todo.popleft()
        for p in preds[s]:
            if p not in coreach:
                coreach.add(p)
                todo.append(p)
    for s in sorted(lts.states - coreach):
        problems.append(f"state {s} cannot reach any final state")
    return problems


def replays(lts: Lts, trace: Iterable[Action]) -> bool:
    """True iff ``trace`` leads from the initial state to some final state."""
    current = {lts.initial}
    for a in trace:
        current = {t.target for s in current for t in lts.outgoing(s) if t.action == a}
        if not current:
            return False
    return bool(current & lts.finals)


def _q(s: str) -> str:
    return '"' + s.replace('"', r"\"") + '"'


def export_dot(lts: Lts) -> str:
    """Graphviz rendering. Finals are double circles, the initial state is bold.

    Port-qualified edges are colored: left-facing blue, right-facing darkgreen.
    """
    out = [f"digraph {_q(lts.name)} {{", "  rankdir=LR;"]
    for s in sorted(lts.states):
        attrs = ["shape=doublecircle" if s in lts.finals else "shape=circle"]
        if s == lts.initial:
            attrs.append("style=bold")
        out.append(f"  {_q(s)} [{', '.join(attrs)}];")
    for t in lts.sorted_transitions():
        attrs = [f"label={_q(str(t.action))}"]
        if t.action.port is Port.LEFT:
            attrs.append(f"color={LEFT_COLOR}")
        elif t.action.port is Port.RIGHT:
            attrs.append(f"color={RIGHT_COLOR}")
        out.append(f"  {_q(t.source)} -> {_q(t.target)} [{', '.join(attrs)}];")
    out.append("}")
    return "\n".join(out) + "\n"


def isomorphic(a: Lts, b: Lts) -> bool:
    """Isomorphism under state renaming, preserving initial, finals and labels."""
    import networkx as nx
    from networkx.algorithms.isomorphism import DiGraphMatcher

    def graph(lts: Lts):
        g = nx.DiGraph()
        for s in lts.states:
            g.add_node(s, initial=s == lts.initial, final=s in lts.finals)
        labels: dict[tuple[str, str], set[str]] = {}
        for t in lts.transitions:
            labels.setdefault((t.source, t.target), set()).add(str(t.action))
        for (u, v), ls in labels.items():
            g.add_edge(u, v, labels=frozenset(ls))
        return g

    if len(a.states) != len(b.states) or len(a.transitions) != len(b.transitions):
        return False
    matcher = DiGraphMatcher(
        graph(a),
        graph(b),
        node_match=lambda x, y: x == y,
        edge_match=lambda x, y: x["labels"] == y["labels"],
    )
    return matcher.is_isomorphic()
