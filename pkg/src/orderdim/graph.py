"""Undirected simple graphs, the text graph format, and generators."""
from __future__ import annotations

import random
from typing import Iterable, Mapping

PENDANT_SUFFIX = "*"
APEX = "apex"


class GraphFormatError(ValueError):
    """Malformed graph input; ``lineno`` is 1-based (0 when not line-bound)."""

    def __init__(self, message: str, lineno: int = 0):
        self.lineno = lineno
        if lineno:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class BudgetExceeded(RuntimeError):
    """An exact search ran out of its node or time budget."""


class Graph:
    """Immutable simple graph with vertices kept in declaration order.

    The declaration order is the tie-break order for every deterministic
    routine in the package.
    """

    __slots__ = ("vertices", "edges", "_index", "_adj")

    def __init__(self, vertices: Iterable[str], edges: Iterable[Iterable[str]] = ()):
        vertices = tuple(vertices)
        index: dict[str, int] = {}
        for v in vertices:
            if not isinstance(v, str) or not v or any(ch.isspace() for ch in v):
                raise GraphFormatError(f"invalid vertex name {v!r}")
            if v in index:
                raise GraphFormatError(f"duplicate vertex {v!r}")
            index[v] = len(index)
        adj: dict[str, set[str]] = {v: set() for v in vertices}
        edge_set = set()
        for e in edges:
            u, w = tuple(e)
            if u == w:
                raise GraphFormatError(f"self-loop on {u!r}")
            for x in (u, w):
                if x not in index:
                    raise GraphFormatError(f"edge endpoint {x!r} is not a declared vertex")
            key = frozenset((u, w))
            if key in edge_set:
                raise GraphFormatError(f"duplicate edge {u} {w}")
            edge_set.add(key)
            adj[u].add(w)
            adj[w].add(u)
        self.vertices = vertices
        self.edges = frozenset(edge_set)
        self._index = index
        self._adj = {v: frozenset(n) for v, n in adj.items()}

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def __contains__(self, v) -> bool:
        return v in self._index

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.vertices, self.edges))

    def __repr__(self) -> str:
        return f"Graph(|V|={len(self.vertices)}, |E|={len(self.edges)})"

    def index(self, v: str) -> int:
        """Declaration position of ``v``."""
        try:
            return self._index[v]
        except KeyError:
            raise KeyError(f"unknown vertex {v!r}") from None

    def neighbours(self, v: str) -> frozenset[str]:
        try:
            return self._adj[v]
        except KeyError:
            raise KeyError(f"unknown vertex {v!r}") from None

    def degree(self, v: str) -> int:
        return len(self.neighbours(v))

    def has_edge(self, u: str, w: str) -> bool:
        return w in self._adj.get(u, ())

    def sorted_edges(self) -> list[tuple[str, str]]:
        """Edges as ordered pairs, sorted by endpoint declaration order."""
        out = []
        for e in self.edges:
            u, w = sorted(e, key=self._index.__getitem__)
            out.append((u, w))
        out.sort(key=lambda p: (self._index[p[0]], self._index[p[1]]))
        return out

    def induced_subgraph(self, keep: Iterable[str]) -> "Graph":
        keep = set(keep)
        for v in keep:
            self.index(v)
        vs = [v for v in self.vertices if v in keep]
        return Graph(vs, [e for e in self.sorted_edges() if e[0] in keep and e[1] in keep])

    def components(self) -> list[list[str]]:
        """Connected components, each in declaration order, ordered by first vertex."""
        seen: set[str] = set()
        comps = []
        for v in self.vertices:
            if v in seen:
                continue
            seen.add(v)
            stack, comp = [v], []
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in self._adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            comp.sort(key=self._index.__getitem__)
            comps.append(comp)
        return comps


class Colouring:
    """Proper colouring with colour indices 1, 2, 3 (colour sets A, B, C)."""

    NAMES = {1: "A", 2: "B", 3: "C"}

    def __init__(self, g: Graph, classes: Mapping[str, int]):
        for v in g.vertices:
            if v not in classes:
                raise ValueError(f"vertex {v!r} is not coloured")
        for v, c in classes.items():
            if v not in g:
                raise ValueError(f"colour given for unknown vertex {v!r}")
            if c not in (1, 2, 3):
                raise ValueError(f"colour of {v!r} must be 1, 2 or 3, got {c!r}")
        for u, w in g.sorted_edges():
            if classes[u] == classes[w]:
                raise ValueError(f"improper colouring: edge {u} {w} is monochromatic")
        self.graph = g
        self.classes = {v: classes[v] for v in g.vertices}

    def __getitem__(self, v: str) -> int:
        return self.classes[v]

    def colour_class(self, c: int) -> list[str]:
        return [v for v in self.graph.vertices if self.classes[v] == c]

    def sizes(self) -> tuple[int, int, int]:
        return tuple(len(self.colour_class(c)) for c in (1, 2, 3))

    def partition(self) -> set[frozenset[str]]:
        """Nonempty colour classes as an unlabelled partition."""
        return {frozenset(self.colour_class(c)) for c in (1, 2, 3) if self.colour_class(c)}

    def to_text(self) -> str:
        return "".join(f"c {v} {self.classes[v]}\n" for v in self.graph.vertices)


# -- text format -------------------------------------------------------------

def parse_graph(text: str) -> Graph:
    """Parse ``v <name>`` / ``e <a> <b>`` records; ``#`` starts a comment line.

    A leading ``graph`` header line (as written by the CLI) is accepted.
    """
    vertices: list[str] = []
    declared: set[str] = set()
    edges: list[tuple[str, str]] = []
    seen_edges: set[frozenset[str]] = set()
    first = True
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if first and parts == ["graph"]:
            first = False
            continue
        first = False
        kind = parts[0]
        if kind == "v" and len(parts) == 2:
            name = parts[1]
            if name in declared:
                raise GraphFormatError(f"duplicate vertex {name!r}", lineno)
            declared.add(name)
            vertices.append(name)
        elif kind == "e" and len(parts) == 3:
            u, w = parts[1], parts[2]
            if u == w:
                raise GraphFormatError(f"self-loop on {u!r}", lineno)
            for x in (u, w):
                if x not in declared:
                    raise GraphFormatError(f"edge references undeclared vertex {x!r}", lineno)
            key = frozenset((u, w))
            if key in seen_edges:
                raise GraphFormatError(f"duplicate edge {u} {w}", lineno)
            seen_edges.add(key)
            edges.append((u, w))
        else:
            raise GraphFormatError(f"malformed line {raw!r}", lineno)
    return Graph(vertices, edges)


def serialize_graph(g: Graph) -> str:
    lines = [f"v {v}" for v in g.vertices]
    lines += [f"e {u} {w}" for u, w in g.sorted_edges()]
    return "".join(line + "\n" for line in lines)


# -- colouring ---------------------------------------------------------------

def chromatic_number(g: Graph, max_nodes: int = 2_000_000) -> int:
    """Exact chromatic number by backtracking, max-degree vertices first.

    Raises BudgetExceeded after ``max_nodes`` search nodes.
    """
    n = len(g)
    if n == 0:
        return 0
    if not g.edges:
        return 1
    order = sorted(g.vertices, key=lambda v: (-g.degree(v), g.index(v)))
    pos = {v: i for i, v in enumerate(order)}
    earlier = [[pos[u] for u in g.neighbours(v) if pos[u] < i] for i, v in enumerate(order)]
    nodes = 0

    def colourable(k: int) -> bool:
        nonlocal nodes
        colour = [0] * n

        def rec(i: int, used: int) -> bool:
            nonlocal nodes
            nodes += 1
            if nodes > max_nodes:
                raise BudgetExceeded(f"chromatic_number exceeded {max_nodes} nodes")
            if i == n:
                return True
            taken = {colour[j] for j in earlier[i]}
            # a fresh colour is symmetric to any other unused colour
            for c in range(1, min(used + 1, k) + 1):
                if c not in taken:
                    colour[i] = c
                    if rec(i + 1, max(used, c)):
                        return True
            colour[i] = 0
            return False

        return rec(0, 0)

    k = 2
    while not colourable(k):
        k += 1
    return k


# -- transformations ---------------------------------------------------------

def add_private_neighbours(g: Graph) -> Graph:
    """Attach a pendant vertex ``v*`` to every vertex ``v``."""
    for v in g.vertices:
        if v.endswith(PENDANT_SUFFIX):
            raise GraphFormatError(f"vertex name {v!r} uses the reserved suffix {PENDANT_SUFFIX!r}")
    pendants = [v + PENDANT_SUFFIX for v in g.vertices]
    return Graph(
        list(g.vertices) + pendants,
        g.sorted_edges() + [(v, v + PENDANT_SUFFIX) for v in g.vertices],
    )


def add_apex(g: Graph) -> Graph:
    """Add the vertex ``apex`` adjacent to every existing vertex."""
    if APEX in g:
        raise GraphFormatError(f"vertex name {APEX!r} is reserved")
    return Graph(list(g.vertices) + [APEX], g.sorted_edges() + [(APEX, v) for v in g.vertices])


# -- generators --------------------------------------------------------------

def gen_knn_minus_pm(n: int) -> Graph:
    """K_{n,n} minus a perfect matching: u_i ~ w_j iff i != j."""
    if n < 1:
        raise ValueError("n must be positive")
    us = [f"u{i}" for i in range(1, n + 1)]
    ws = [f"w{i}" for i in range(1, n + 1)]
    edges = [(us[i], ws[j]) for i in range(n) for j in range(n) if i != j]
    return Graph(us + ws, edges)


def gen_cycle(n: int, prefix: str = "v") -> Graph:
    vs = [f"{prefix}{i}" for i in range(1, n + 1)]
    if n < 3:
        return Graph(vs, [(vs[0], vs[1])] if n == 2 else [])
    return Graph(vs, [(vs[i], vs[(i + 1) % n]) for i in range(n)])


def gen_random_outerplanar(n: int, density: float, seed: int) -> Graph:
    """Random outerplanar graph on ``v1..vn``.

    A convex polygon on a random arrangement of the vertices is triangulated
    by clipping random ears; the hull cycle is always kept and every chord
    survives independently with probability ``density``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if not 0.0 <= density <= 1.0:
        raise ValueError("density must lie in [0, 1]")
    rng = random.Random(seed)
    names = [f"v{i}" for i in range(1, n + 1)]
    ring = names[:]
    rng.shuffle(ring)
    edges: list[tuple[str, str]] = []
    if n == 2:
        edges.append((ring[0], ring[1]))
    elif n >= 3:
        edges.extend((ring[i], ring[(i + 1) % n]) for i in range(n))
        poly = ring[:]
        while len(poly) > 3:
            i = rng.randrange(len(poly))
            left, right = poly[i - 1], poly[(i + 1) % len(poly)]
            if rng.random() < density:
                edges.append((left, right))
            del poly[i]
    return Graph(names, edges)
