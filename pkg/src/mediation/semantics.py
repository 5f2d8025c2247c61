"""Declared message correspondences between the left and right vocabularies.

Map source, one declaration per line::

    Information <-> Request                  # rename
    FirstLastName <-> FirstName, LastName    # split (order is emission order)
    producible ack                           # mediator may emit ack unprompted
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .lts import IDENT, Port, ParseError, _strip_comment

__all__ = [
    "Correspondence",
    "CorrespondenceMap",
    "Kind",
    "lookup",
    "parse_map",
    "serialize_map",
]


class Kind(Enum):
    IDENTITY = "identity"
    RENAME = "rename"
    SPLIT = "split"
    MERGE = "merge"


@dataclass(frozen=True)
class Correspondence:
    left: tuple[str, ...]
    right: tuple[str, ...]
    implicit: bool = field(default=False, compare=False)

    def __post_init__(self):
        if not self.left or not self.right:
            raise ValueError("correspondence sides must be non-empty")
        if len(self.left) > 1 and len(self.right) > 1:
            raise ValueError(f"many-to-many correspondence {self} is not supported")

    @property
    def kind(self) -> Kind:
        if len(self.left) == 1 and len(self.right) == 1:
            return Kind.IDENTITY if self.left == self.right else Kind.RENAME
        return Kind.SPLIT if len(self.left) == 1 else Kind.MERGE

    def side(self, port: Port) -> tuple[str, ...]:
        return self.left if port is Port.LEFT else self.right

    def mirrored(self) -> "Correspondence":
        return Correspondence(self.right, self.left, self.implicit)

    def __str__(self):
        return f"{', '.join(self.left)} <-> {', '.join(self.right)}"


@dataclass(frozen=True)
class CorrespondenceMap:
    entries: tuple[Correspondence, ...] = ()
    producible: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(sorted(self.entries, key=str)))
        object.__setattr__(self, "producible", frozenset(self.producible))
        index: dict[tuple[Port, str], Correspondence] = {}
        for e in self.entries:
            for port in Port:
                for label in e.side(port):
                    if (port, label) in index:
                        raise ValueError(f"label {label!r} appears twice on the {port.name.lower()} side")
                    index[(port, label)] = e
        object.__setattr__(self, "_index", index)

    def lookup(self, label: str, side: Port) -> Correspondence:
        """The entry holding ``label`` on ``side``; unmapped labels map to themselves."""
        entry = self._index.get((side, label))
        if entry is None:
            return Correspondence((label,), (label,), implicit=True)
        return entry

    def mirrored(self) -> "CorrespondenceMap":
        return CorrespondenceMap(tuple(e.mirrored() for e in self.entries), self.producible)

    def corresponds(self, left_label: str, right_label: str) -> Correspondence | None:
        """The 1-to-1 entry linking the two labels, if there is one."""
        a = self.lookup(left_label, Port.LEFT)
        b = self.lookup(right_label, Port.RIGHT)
        if a.implicit and b.implicit:
            return a if left_label == right_label else None
        if a == b and a.kind in (Kind.IDENTITY, Kind.RENAME):
            return a
        return None


def lookup(cmap: CorrespondenceMap, label: str, side: Port) -> Correspondence:
    return cmap.lookup(label, side)


def _idents(text: str, n: int, line: str) -> tuple[str, ...]:
    names = tuple(p.strip() for p in text.split(","))
    for name in names:
        if not IDENT.match(name):
            col = line.find(name) + 1 if name else 1
            raise ParseError(f"bad message name {name!r}", n, max(col, 1))
    return names


def parse_map(text: str) -> CorrespondenceMap:
    entries = []
    producible: set[str] = set()
    seen: dict[tuple[Port, str], int] = {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if line.split(None, 1)[0] == "producible" and "<->" not in line:
            rest = line[len("producible"):].strip()
            if not rest:
                raise ParseError("'producible' needs at least one message name", n)
            producible.update(_idents(rest, n, raw))
            continue
        if line.count("<->") != 1:
            raise ParseError("expected 'NAMES <-> NAMES' or 'producible NAMES'", n)
        lhs, rhs = line.split("<->")
        if not lhs.strip() or not rhs.strip():
            raise ParseError("empty side in correspondence", n)
        left, right = _idents(lhs, n, raw), _idents(rhs, n, raw)
        try:
            entry = Correspondence(left, right)
        except ValueError as e:
            raise ParseError(str(e), n) from None
        for port, names in ((Port.LEFT, left), (Port.RIGHT, right)):
            for name in names:
                if (port, name) in seen:
                    raise ParseError(
                        f"{name!r} already mapped on the {port.name.lower()} side "
                        f"(line {seen[(port, name)]})",
                        n,
                        raw.find(name) + 1,
                    )
                seen[(port, name)] = n
        entries.append(entry)
    return CorrespondenceMap(tuple(entries), frozenset(producible))


def serialize_map(cmap: CorrespondenceMap) -> str:
    out = [str(e) for e in cmap.entries]
    if cmap.producible:
        out.append("producible " + ", ".join(sorted(cmap.producible)))
    return "\n".join(out) + ("\n" if out else "")
