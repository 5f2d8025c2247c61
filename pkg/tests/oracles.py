"""Independent brute-force oracles and random generators for the test suite.

Nothing here imports the code under test beyond the plain data types, so a
bug in the production algorithms cannot leak into the expected values.
"""
from __future__ import annotations

import itertools
import random
from collections import deque

from mediation.lts import Action, Direction, Lts, Trace, Transition
from mediation.semantics import Correspondence, CorrespondenceMap

# --- decomposition ---------------------------------------------------------


def all_paths(lts: Lts, bound: int) -> set[tuple[str, ...]]:
    """Recursive DFS with per-state visit counters."""
    by_source: dict[str, list[Transition]] = {}
    for t in lts.transitions:
        by_source.setdefault(t.source, []).append(t)
    visits: dict[str, int] = {lts.initial: 1}
    out: set[tuple[str, ...]] = set()

    def go(state, acc):
        if state in lts.finals:
            out.add(tuple(acc))
        for t in by_source.get(state, []):
            if visits.get(t.target, 0) <= bound:
                visits[t.target] = visits.get(t.target, 0) + 1
                acc.append(str(t.action))
                go(t.target, acc)
                acc.pop()
                visits[t.target] -= 1

    go(lts.initial, [])
    return out


def can_reach(lts: Lts, src: str, goals: set[str]) -> bool:
    seen, todo = {src}, deque([src])
    while todo:
        s = todo.popleft()
        if s in goals:
            return True
        for t in lts.transitions:
            if t.source == s and t.target not in seen:
                seen.add(t.target)
                todo.append(t.target)
    return False


# --- alignment -------------------------------------------------------------

COSTS = dict(forward=0, translate=1, split=1, merge=1, reorder=2, consume=3, produce=4)


def _one_to_one(cmap: CorrespondenceMap, l: str, r: str) -> str | None:
    """'forward' / 'translate' / None, computed straight from the entry list."""
    left_entries = [e for e in cmap.entries if l in e.left]
    right_entries = [e for e in cmap.entries if r in e.right]
    if not left_entries and not right_entries:
        return "forward" if l == r else None
    if left_entries and right_entries and left_entries[0] is right_entries[0]:
        e = left_entries[0]
        if len(e.left) == 1 and len(e.right) == 1:
            return "forward" if l == r else "translate"
    return None


def _pairable(cmap, a: Action, b: Action) -> str | None:
    if a.direction == b.direction:
        return None
    return _one_to_one(cmap, a.label, b.label)


def _block_ok(block) -> bool:
    dirs = [0 if a.direction is Direction.SEND else 1 for a in block]
    return dirs == sorted(dirs)


def _inversions(perm) -> int:
    n = 0
    for x in range(len(perm)):
        for y in range(x + 1, len(perm)):
            if perm[x] > perm[y]:
                n += 1
    return n


def _candidates(L, R, i, j, cmap, window):
    """All (di, dj, cost) moves from (i, j)."""
    n, m = len(L), len(R)
    prod = cmap.producible

    if i + 2 <= n and j + 2 <= m:
        a, b, c, d = L[i], L[i + 1], R[j], R[j + 1]
        if (
            a.direction is Direction.RECEIVE and b.direction is Direction.SEND
            and c.direction is Direction.RECEIVE and d.direction is Direction.SEND
            and _one_to_one(cmap, a.label, d.label) and _one_to_one(cmap, b.label, c.label)
            and a.label in prod and c.label in prod
        ):
            return [(2, 2, 2 * COSTS["produce"] + 2 * COSTS["consume"])]

    out = []
    if i < n and j < m:
        k = _pairable(cmap, L[i], R[j])
        if k:
            out.append((1, 1, COSTS[k]))
    if i < n:
        if L[i].direction is Direction.SEND:
            out.append((1, 0, COSTS["consume"]))
        elif L[i].label in prod:
            out.append((1, 0, COSTS["produce"]))
    if j < m:
        if R[j].direction is Direction.SEND:
            out.append((0, 1, COSTS["consume"]))
        elif R[j].label in prod:
            out.append((0, 1, COSTS["produce"]))
    for e in cmap.entries:
        if len(e.left) == 1 and len(e.right) >= 2 and i < n and j + len(e.right) <= m:
            a = L[i]
            blk = R[j:j + len(e.right)]
            if a.label == e.left[0] and [x.label for x in blk] == list(e.right) and all(
                x.direction != a.direction for x in blk
            ):
                out.append((1, len(blk), COSTS["split" if a.direction is Direction.SEND else "merge"]))
        if len(e.right) == 1 and len(e.left) >= 2 and j < m and i + len(e.left) <= n:
            b = R[j]
            blk = L[i:i + len(e.left)]
            if b.label == e.right[0] and [x.label for x in blk] == list(e.left) and all(
                x.direction != b.direction for x in blk
            ):
                out.append((len(blk), 1, COSTS["split" if b.direction is Direction.SEND else "merge"]))
    for k in range(2, window + 1):
        if i + k > n or j + k > m:
            break
        lb, rb = L[i:i + k], R[j:j + k]
        if not (_block_ok(lb) and _block_ok(rb)):
            continue
        for perm in itertools.permutations(range(k)):
            if list(perm) == list(range(k)):
                continue
            if all(_pairable(cmap, lb[s], rb[perm[s]]) for s in range(k)):
                out.append((k, k, COSTS["reorder"] * _inversions(perm)))
    return out


def brute_force_cost(L, R, cmap, window=4) -> float:
    """Minimum total cost over every complete step sequence (inf if none)."""
    L, R = list(L), list(R)
    best = float("inf")

    def go(i, j, acc):
        nonlocal best
        if (i, j) == (len(L), len(R)):
            best = min(best, acc)
            return
        for di, dj, c in _candidates(L, R, i, j, cmap, window):
            go(i + di, j + dj, acc + c)

    go(0, 0, 0)
    return best


# --- random generators -----------------------------------------------------

ALPHABET = ["a", "b", "c", "d", "e"]


def random_trace(rng: random.Random, max_len=4, alphabet=ALPHABET) -> Trace:
    n = rng.randint(0, max_len)
    return Trace(Action(rng.choice(alphabet), rng.choice(list(Direction))) for _ in range(n))


def random_map(rng: random.Random, alphabet=ALPHABET) -> CorrespondenceMap:
    """Random functional map over the alphabet (renames, splits, merges)."""
    left_free, right_free = list(alphabet), list(alphabet)
    rng.shuffle(left_free)
    rng.shuffle(right_free)
    entries = []
    for _ in range(rng.randint(0, 3)):
        shape = rng.choice(["1:1", "1:2", "2:1"])
        nl, nr = {"1:1": (1, 1), "1:2": (1, 2), "2:1": (2, 1)}[shape]
        if len(left_free) < nl or len(right_free) < nr:
            break
        left = tuple(left_free.pop() for _ in range(nl))
        right = tuple(right_free.pop() for _ in range(nr))
        entries.append(Correspondence(left, right))
    producible = frozenset(x for x in alphabet if rng.random() < 0.3)
    return CorrespondenceMap(tuple(entries), producible)


def random_lts(rng: random.Random, max_states=8, max_transitions=12, alphabet=("a", "b", "c")) -> Lts:
    """A random machine that passes validation (retries until it does)."""
    from mediation.lts import validate

    while True:
        n = rng.randint(1, max_states)
        states = [f"s{k}" for k in range(n)]
        ts = set()
        # spanning edges so most states are reachable
        for k in range(1, n):
            ts.add(Transition(states[rng.randrange(k)], Action(rng.choice(alphabet), rng.choice(list(Direction))), states[k]))
        for _ in range(rng.randint(0, max(0, max_transitions - len(ts)))):
            ts.add(
                Transition(rng.choice(states), Action(rng.choice(alphabet), rng.choice(list(Direction))), rng.choice(states))
            )
        if len(ts) > max_transitions:
            continue
        finals = {s for s in states if rng.random() < 0.35} or {states[-1]}
        lts = Lts("R", states, states[0], finals, ts)
        if not validate(lts):
            return lts
