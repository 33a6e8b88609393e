"""Finite posets stored as transitively closed strict orders.

Elements are plain strings.  In adjacency posets the minimal copy of a
vertex ``v`` is named ``v`` and its maximal copy ``v'``.
"""
from __future__ import annotations

import heapq
import random
from typing import Iterable, NamedTuple, Optional, Sequence

from .graph import Graph, GraphFormatError

MAX_MARK = "'"


class PosetElement(NamedTuple):
    tag: str  # "min" or "max"
    vertex: str

    def __str__(self) -> str:
        return self.vertex + MAX_MARK if self.tag == "max" else self.vertex

    @classmethod
    def parse(cls, name: str) -> "PosetElement":
        if name.endswith(MAX_MARK):
            return cls("max", name[: -len(MAX_MARK)])
        return cls("min", name)


def min_el(v: str) -> str:
    return v


def max_el(v: str) -> str:
    return v + MAX_MARK


def vertex_of(name: str) -> str:
    return PosetElement.parse(name).vertex


def is_max_el(name: str) -> bool:
    return name.endswith(MAX_MARK)


class Poset:
    """Strict partial order on named elements.

    ``up[i]`` / ``down[i]`` are bitmasks over element indices of the
    elements strictly above / below element ``i``.
    """

    __slots__ = ("elements", "_index", "up", "down")

    def __init__(self, elements: Iterable[str], lt: Iterable[tuple[str, str]] = ()):
        self.elements = tuple(elements)
        self._index = {x: i for i, x in enumerate(self.elements)}
        if len(self._index) != len(self.elements):
            raise ValueError("duplicate poset element")
        n = len(self.elements)
        up = [0] * n
        for a, b in lt:
            ia, ib = self.index(a), self.index(b)
            if ia == ib:
                raise ValueError(f"relation {a} < {a} is not irreflexive")
            up[ia] |= 1 << ib
        # transitive closure, Warshall on bit rows
        for k in range(n):
            bit = 1 << k
            row = up[k]
            for i in range(n):
                if up[i] & bit:
                    up[i] |= row
        for i in range(n):
            if up[i] >> i & 1:
                raise ValueError(f"relation has a cycle through {self.elements[i]}")
        down = [0] * n
        for i in range(n):
            m = up[i]
            while m:
                low = m & -m
                down[low.bit_length() - 1] |= 1 << i
                m ^= low
        self.up = up
        self.down = down

    @classmethod
    def _from_masks(cls, elements, up, down) -> "Poset":
        p = cls.__new__(cls)
        p.elements = tuple(elements)
        p._index = {x: i for i, x in enumerate(p.elements)}
        p.up = list(up)
        p.down = list(down)
        return p

    def __len__(self) -> int:
        return len(self.elements)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poset):
            return NotImplemented
        return set(self.elements) == set(other.elements) and self.lt == other.lt

    def __repr__(self) -> str:
        return f"Poset(|X|={len(self.elements)}, |<|={len(self.lt)})"

    def index(self, x: str) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise KeyError(f"unknown poset element {x!r}") from None

    @property
    def lt(self) -> frozenset[tuple[str, str]]:
        els = self.elements
        return frozenset(
            (els[i], els[j]) for i in range(len(els)) for j in _bits(self.up[i])
        )

    def sorted_lt(self) -> list[tuple[str, str]]:
        els = self.elements
        return [(els[i], els[j]) for i in range(len(els)) for j in _bits(self.up[i])]

    def less(self, a: str, b: str) -> bool:
        return bool(self.up[self.index(a)] >> self.index(b) & 1)

    def comparable(self, a: str, b: str) -> bool:
        return a == b or self.less(a, b) or self.less(b, a)

    def up_set(self, a: str) -> set[str]:
        return {self.elements[j] for j in _bits(self.up[self.index(a)])}

    def down_set(self, a: str) -> set[str]:
        return {self.elements[j] for j in _bits(self.down[self.index(a)])}

    def incomparable_pairs(self) -> list[tuple[str, str]]:
        """Ordered pairs (a, b), a != b, with neither a < b nor b < a."""
        els = self.elements
        n = len(els)
        out = []
        for i in range(n):
            rel = self.up[i] | self.down[i] | (1 << i)
            for j in range(n):
                if not rel >> j & 1:
                    out.append((els[i], els[j]))
        return out

    def is_chain(self) -> bool:
        n = len(self.elements)
        full = (1 << n) - 1
        return all((self.up[i] | self.down[i] | 1 << i) == full for i in range(n))

    def height(self) -> int:
        """Number of elements in a longest chain."""
        n = len(self.elements)
        if n == 0:
            return 0
        memo: dict[int, int] = {}

        def longest_from(i: int) -> int:
            if i not in memo:
                memo[i] = 1 + max((longest_from(j) for j in _bits(self.up[i])), default=0)
            return memo[i]

        return max(longest_from(i) for i in range(n))


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# -- constructions -----------------------------------------------------------

def build_adjacency_poset(g: Graph) -> Poset:
    """Minimal copies of all vertices, then maximal copies; x < y' and y < x' per edge xy."""
    elements = [min_el(v) for v in g.vertices] + [max_el(v) for v in g.vertices]
    lt = []
    for u, w in g.sorted_edges():
        lt.append((min_el(u), max_el(w)))
        lt.append((min_el(w), max_el(u)))
    return Poset(elements, lt)


def critical_pairs(p: Poset) -> list[tuple[str, str]]:
    """Incomparable (x, y) with down(x) <= down(y) and up(y) <= up(x)."""
    els = p.elements
    n = len(els)
    out = []
    for i in range(n):
        rel = p.up[i] | p.down[i] | (1 << i)
        for j in range(n):
            if rel >> j & 1:
                continue
            if p.down[i] & ~p.down[j] == 0 and p.up[j] & ~p.up[i] == 0:
                out.append((els[i], els[j]))
    return out


def induced_subposet(p: Poset, elems: Iterable[str]) -> Poset:
    keep = set(elems)
    for x in keep:
        p.index(x)
    kept = [x for x in p.elements if x in keep]
    new_index = {p.index(x): k for k, x in enumerate(kept)}
    mask = 0
    for i in new_index:
        mask |= 1 << i

    def remap(m: int) -> int:
        out = 0
        for j in _bits(m & mask):
            out |= 1 << new_index[j]
        return out

    return Poset._from_masks(
        kept,
        [remap(p.up[p.index(x)]) for x in kept],
        [remap(p.down[p.index(x)]) for x in kept],
    )


def gen_standard_example(n: int) -> Poset:
    """S_n: x_i < y_j exactly when i != j."""
    if n < 2:
        raise ValueError("standard example needs n >= 2")
    xs = [f"x{i}" for i in range(1, n + 1)]
    ys = [f"y{i}" for i in range(1, n + 1)]
    return Poset(xs + ys, [(xs[i], ys[j]) for i in range(n) for j in range(n) if i != j])


def gen_chain(n: int) -> Poset:
    els = [f"c{i}" for i in range(1, n + 1)]
    return Poset(els, list(zip(els, els[1:])))


def gen_antichain(n: int) -> Poset:
    return Poset([f"e{i}" for i in range(1, n + 1)])


def random_poset(n: int, density: float, rng: random.Random) -> Poset:
    """Closure of a random DAG drawn on a shuffled index order."""
    els = [f"p{i}" for i in range(1, n + 1)]
    perm = els[:]
    rng.shuffle(perm)
    lt = [(perm[i], perm[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < density]
    return Poset(els, lt)


# -- linear extensions -------------------------------------------------------

def is_linear_extension(p: Poset, seq: Sequence[str]) -> tuple[bool, Optional[object]]:
    """Return ``(True, None)`` or ``(False, detail)``.

    ``detail`` is the first violated pair ``(a, b)`` (a < b in p but b comes
    first, scanning ``seq`` left to right) or, when ``seq`` is not a
    permutation of the elements, a message naming the mismatch.
    """
    seq = list(seq)
    if len(seq) != len(set(seq)) or set(seq) != set(p.elements):
        missing = sorted(set(p.elements) - set(seq))
        extra = sorted(set(seq) - set(p.elements))
        dup = sorted({x for x in seq if seq.count(x) > 1})
        return False, f"element mismatch: missing={missing} extra={extra} repeated={dup}"
    seen = 0
    for x in seq:
        i = p.index(x)
        bad = p.up[i] & seen
        if bad:
            j = (bad & -bad).bit_length() - 1
            return False, (x, p.elements[j])
        seen |= 1 << i
    return True, None


def topological_order(p: Poset, extra: Iterable[tuple[str, str]] = ()) -> list[str]:
    """Smallest-index-first topological sort of p plus ``extra`` arcs a -> b."""
    n = len(p.elements)
    succ = [set(_bits(p.up[i])) for i in range(n)]
    for a, b in extra:
        succ[p.index(a)].add(p.index(b))
    indeg = [0] * n
    for i in range(n):
        for j in succ[i]:
            indeg[j] += 1
    heap = [i for i in range(n) if indeg[i] == 0]
    heapq.heapify(heap)
    out = []
    while heap:
        i = heapq.heappop(heap)
        out.append(p.elements[i])
        for j in succ[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                heapq.heappush(heap, j)
    if len(out) != n:
        raise ValueError("extra arcs create a cycle")
    return out


# -- text formats ------------------------------------------------------------

def parse_poset(text: str) -> Poset:
    """``el <name>`` lines followed by ``lt <a> <b>`` lines; closure applied."""
    elements: list[str] = []
    lt: list[tuple[str, str]] = []
    known: set[str] = set()
    first = True
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if first and parts == ["poset"]:
            first = False
            continue
        first = False
        if parts[0] == "el" and len(parts) == 2:
            if parts[1] in known:
                raise GraphFormatError(f"duplicate element {parts[1]!r}", lineno)
            known.add(parts[1])
            elements.append(parts[1])
        elif parts[0] == "lt" and len(parts) == 3:
            for x in parts[1:]:
                if x not in known:
                    raise GraphFormatError(f"relation references unknown element {x!r}", lineno)
            lt.append((parts[1], parts[2]))
        else:
            raise GraphFormatError(f"malformed line {raw!r}", lineno)
    try:
        return Poset(elements, lt)
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from exc


def serialize_poset(p: Poset) -> str:
    lines = [f"el {x}" for x in p.elements] + [f"lt {a} {b}" for a, b in p.sorted_lt()]
    return "".join(line + "\n" for line in lines)


def parse_extension(text: str) -> list[str]:
    return text.split()


def serialize_extension(seq: Sequence[str]) -> str:
    return " ".join(seq)
