"""Crossing-free line layouts of outerplanar graphs and their interval geometry."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import networkx as nx

from .graph import BudgetExceeded, Colouring, Graph, GraphFormatError


class NotOuterplanar(ValueError):
    pass


class EmbeddingError(ValueError):
    pass


class Embedding:
    """A left-to-right placement of all vertices on a line."""

    __slots__ = ("order", "position")

    def __init__(self, order: Iterable[str]):
        self.order = tuple(order)
        self.position = {v: i for i, v in enumerate(self.order)}
        if len(self.position) != len(self.order):
            raise EmbeddingError("embedding lists a vertex twice")

    def __len__(self) -> int:
        return len(self.order)

    def __eq__(self, other) -> bool:
        return isinstance(other, Embedding) and self.order == other.order

    def __hash__(self) -> int:
        return hash(self.order)

    def __repr__(self) -> str:
        return f"Embedding({' '.join(self.order)})"

    def to_text(self) -> str:
        return " ".join(self.order) + "\n"

    def check(self, g: Graph) -> None:
        """Raise EmbeddingError unless this is a crossing-free layout of ``g``."""
        if set(self.order) != set(g.vertices) or len(self.order) != len(g):
            raise EmbeddingError("embedding does not list exactly the vertices of the graph")
        crossing = find_crossing(g, self)
        if crossing is not None:
            (a, b), (c, d) = crossing
            raise EmbeddingError(f"edges {a}-{b} and {c}-{d} cross")


def parse_embedding(text: str) -> Embedding:
    """One line of space-separated vertex names; an ``embedding`` header line is skipped."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if lines and lines[0] == "embedding":
        lines = lines[1:]
    if len(lines) != 1:
        raise GraphFormatError("embedding must be a single line of vertex names")
    return Embedding(lines[0].split())


def find_crossing(g: Graph, e: Embedding):
    """Return one pair of crossing edges, or None."""
    pos = e.position
    arcs = sorted(
        (min(pos[u], pos[w]), max(pos[u], pos[w]), u, w) for u, w in g.sorted_edges()
    )
    for i, (a, b, u, w) in enumerate(arcs):
        for c, d, x, y in arcs[i + 1:]:
            if c >= b:
                break
            if a < c < b < d:
                return (u, w), (x, y)
    return None


def is_crossing_free(g: Graph, e: Embedding) -> bool:
    return find_crossing(g, e) is None


# -- recognition -------------------------------------------------------------

def find_embedding(g: Graph) -> Embedding:
    """Deterministic crossing-free line order of ``g``.

    Connected components are laid out side by side in the order of their
    first declared vertex.  Inside a component every block is laid out along
    its outer cycle, starting at the block's cut vertex and heading towards
    the earlier-declared cycle neighbour; blocks hanging at a vertex follow
    it immediately.  The result is checked edge pair by edge pair before it
    is returned.  Raises NotOuterplanar when ``g`` has no such layout.
    """
    n, m = len(g), len(g.edges)
    if n >= 2 and m > 2 * n - 3:
        raise NotOuterplanar(f"{m} edges exceed the outerplanar bound 2n-3 = {2 * n - 3}")
    order: list[str] = []
    for comp in g.components():
        order.extend(_layout_component(g, comp))
    emb = Embedding(order)
    crossing = find_crossing(g, emb)
    if crossing is not None:
        raise NotOuterplanar(f"edges {crossing[0]} and {crossing[1]} cannot be uncrossed")
    return emb


def _layout_component(g: Graph, comp: list[str]) -> list[str]:
    if len(comp) <= 2:
        return list(comp)
    nxg = nx.Graph()
    nxg.add_nodes_from(comp)
    nxg.add_edges_from(e for e in g.sorted_edges() if e[0] in nxg)
    key = g.index
    blocks = [frozenset(b) for b in nx.biconnected_components(nxg)]
    blocks.sort(key=lambda b: sorted(map(key, b)))
    at: dict[str, list[frozenset]] = {v: [] for v in comp}
    for b in blocks:
        for v in b:
            at[v].append(b)
    cycles = {b: _outer_cycle(g, b) for b in blocks}
    out: list[str] = []
    done: set[frozenset] = set()

    def hang(v: str) -> None:
        # lay out, right after v, every unvisited block containing v
        for b in at[v]:
            if b in done:
                continue
            done.add(b)
            cyc = cycles[b]
            i = cyc.index(v)
            cyc = cyc[i:] + cyc[:i]
            if len(cyc) > 2 and key(cyc[-1]) < key(cyc[1]):
                cyc = [cyc[0]] + cyc[:0:-1]
            for w in cyc[1:]:
                out.append(w)
                hang(w)

    root = comp[0]
    out.append(root)
    hang(root)
    return out


def _outer_cycle(g: Graph, block: frozenset) -> list[str]:
    """Hamiltonian cycle of a 2-connected outerplanar block (bridges: the edge).

    Repeatedly removes a degree-2 vertex, joining its two neighbours, then
    splices the removed vertices back between their neighbours.
    """
    key = g.index
    verts = sorted(block, key=key)
    if len(verts) <= 2:
        return verts
    adj = {v: set(g.neighbours(v)) & block for v in verts}
    peeled = []
    alive = set(verts)
    while len(alive) > 3:
        cands = [v for v in alive if len(adj[v]) == 2]
        if not cands:
            raise NotOuterplanar("a block has no degree-2 vertex")
        v = min(cands, key=key)
        u, w = sorted(adj[v], key=key)
        peeled.append((v, u, w))
        alive.discard(v)
        for x in (u, w):
            adj[x].discard(v)
        adj[u].add(w)
        adj[w].add(u)
        del adj[v]
    cyc = sorted(alive, key=key)
    if any(len(adj[v]) != 2 for v in cyc):
        raise NotOuterplanar("block does not reduce to a triangle")
    for v, u, w in reversed(peeled):
        i, j = cyc.index(u), cyc.index(w)
        if (i + 1) % len(cyc) == j:
            cyc.insert(i + 1, v)
        elif (j + 1) % len(cyc) == i:
            cyc.insert(j + 1, v)
        else:
            raise NotOuterplanar("block has no outer Hamiltonian cycle")
    return cyc


def find_embedding_exhaustive(g: Graph, budget_nodes: int = 5_000_000) -> Embedding:
    """Lexicographically smallest crossing-free line order, by backtracking.

    Positions are filled left to right trying vertices in declaration order,
    so the first complete layout is the lexicographically smallest.  Exact
    and independent of :func:`find_embedding`, but exponential on large
    sparse inputs; raises BudgetExceeded after ``budget_nodes`` nodes.
    """
    n, m = len(g), len(g.edges)
    if n >= 2 and m > 2 * n - 3:
        raise NotOuterplanar(f"{m} edges exceed the outerplanar bound 2n-3 = {2 * n - 3}")
    order: list[str] = []
    counter = [0]
    for comp in g.components():
        found = _search_component(g.induced_subgraph(comp), counter, budget_nodes)
        if found is None:
            raise NotOuterplanar("no crossing-free line layout exists")
        order.extend(found)
    return Embedding(order)


def _search_component(g: Graph, counter: list, budget: int) -> Optional[list[str]]:
    verts = list(g.vertices)
    n = len(verts)
    if n <= 2:
        return verts
    idx = {v: i for i, v in enumerate(verts)}
    nbrs = [[idx[u] for u in g.neighbours(v)] for v in verts]
    nbrs = [sorted(x) for x in nbrs]
    pos = [-1] * n
    remaining = [len(x) for x in nbrs]  # unplaced neighbours per vertex
    seq: list[int] = []
    closed_arcs: list[tuple[int, int]] = []

    def feasible_after(v: int, p: int) -> bool:
        # prefix seq (with v at p) must admit a crossing-free completion:
        # vertices inside a closed arc may not keep open edges, and open
        # edges must be closable in nested (stack) order
        placed_nbr = [pos[u] for u in nbrs[v] if pos[u] >= 0]
        if placed_nbr:
            lo = min(placed_nbr)
            for q in range(lo + 1, p):
                if remaining[seq[q]] > 0:
                    return False
            for q in placed_nbr:
                for s, t in closed_arcs:
                    if s < q < t:
                        return False
        return _stack_order_ok(seq, pos, nbrs, remaining)

    def rec() -> bool:
        counter[0] += 1
        if counter[0] > budget:
            raise BudgetExceeded(f"embedding search exceeded {budget} nodes")
        p = len(seq)
        if p == n:
            return True
        for v in range(n):
            if pos[v] >= 0:
                continue
            pos[v] = p
            seq.append(v)
            new_arcs = [(pos[u], p) for u in nbrs[v] if 0 <= pos[u] < p]
            for u in nbrs[v]:
                remaining[u] -= 1
            if feasible_after(v, p):
                closed_arcs.extend(new_arcs)
                if rec():
                    return True
                del closed_arcs[len(closed_arcs) - len(new_arcs):]
            for u in nbrs[v]:
                remaining[u] += 1
            seq.pop()
            pos[v] = -1
        return False

    if rec():
        return [verts[i] for i in seq]
    return None


def _stack_order_ok(seq, pos, nbrs, remaining) -> bool:
    """Open edges leaving the prefix must nest: an open vertex further right
    needs all its unplaced neighbours placed no later than those of any open
    vertex to its left (a shared neighbour being the boundary)."""
    opened = [(v, [u for u in nbrs[v] if pos[u] < 0]) for v in seq if remaining[v] > 0]
    if len(opened) < 2:
        return True
    succ: dict[int, set[int]] = {}
    for i in range(len(opened)):
        left = opened[i][1]
        for j in range(i + 1, len(opened)):
            right = opened[j][1]
            for x in right:
                for y in left:
                    if x != y:
                        succ.setdefault(x, set()).add(y)
    # cycle detection on the precedence digraph
    state: dict[int, int] = {}
    for root in succ:
        if root in state:
            continue
        stack = [(root, iter(succ.get(root, ())))]
        state[root] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                state[node] = 2
                stack.pop()
            elif state.get(nxt) == 1:
                return False
            elif nxt not in state:
                state[nxt] = 1
                stack.append((nxt, iter(succ.get(nxt, ()))))
    return True


# -- colouring ---------------------------------------------------------------

def three_colour(g: Graph) -> Colouring:
    """Degeneracy colouring: peel a minimum-degree vertex (earliest declared on
    ties) until empty, then colour in reverse peel order, lowest colour first.

    Colours are finally renamed so that they first appear in the order 1, 2, 3
    along the declaration order (a triangle ``a b c`` gets 1, 2, 3).
    """
    deg = {v: g.degree(v) for v in g.vertices}
    alive = set(g.vertices)
    peel = []
    while alive:
        v = min(alive, key=lambda x: (deg[x], g.index(x)))
        if deg[v] > 2:
            raise ValueError(f"graph is not 2-degenerate (minimum degree {deg[v]} at {v!r})")
        peel.append(v)
        alive.discard(v)
        for u in g.neighbours(v):
            if u in alive:
                deg[u] -= 1
    colour: dict[str, int] = {}
    for v in reversed(peel):
        taken = {colour[u] for u in g.neighbours(v) if u in colour}
        colour[v] = min(c for c in (1, 2, 3) if c not in taken)
    # name the classes by first appearance in declaration order
    rename: dict[int, int] = {}
    for v in g.vertices:
        rename.setdefault(colour[v], len(rename) + 1)
    return Colouring(g, {v: rename[c] for v, c in colour.items()})


# -- intervals ---------------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    lo: int
    hi: int
    owner: str
    kind: str  # "I" or "J"

    @property
    def length(self) -> int:
        return self.hi - self.lo

    def span(self) -> tuple[int, int]:
        return (self.lo, self.hi)

    def contains(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def strictly_contains(self, other: "Interval") -> bool:
        return self.contains(other) and self.span() != other.span()

    def disjoint(self, other: "Interval") -> bool:
        # open intervals with integer ends: sharing only an endpoint is disjoint
        return self.hi <= other.lo or other.hi <= self.lo


def interval_I(e: Embedding, g: Graph, v: str) -> Interval:
    """Span of the closed neighbourhood of ``v`` in the layout."""
    if v not in g:
        raise KeyError(f"unknown vertex {v!r}")
    ps = [e.position[v]] + [e.position[u] for u in g.neighbours(v)]
    return Interval(min(ps), max(ps), v, "I")


def interval_J(e: Embedding, g: Graph, v: str, Y: Iterable[str]) -> Interval:
    """I_v joined with I_u for every neighbour u of v inside ``Y``."""
    Y = set(Y)
    if v in Y:
        raise ValueError(f"{v!r} must not belong to the neighbour filter")
    base = interval_I(e, g, v)
    lo, hi = base.lo, base.hi
    for u in g.neighbours(v):
        if u in Y:
            iu = interval_I(e, g, u)
            lo, hi = min(lo, iu.lo), max(hi, iu.hi)
    return Interval(lo, hi, v, "J")


def intervals_nested_or_disjoint(a: Interval, b: Interval) -> bool:
    return a.contains(b) or b.contains(a) or a.disjoint(b)
