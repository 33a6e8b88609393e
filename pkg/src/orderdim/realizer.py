"""Four linear extensions realizing the adjacency poset of an outerplanar graph.

Blocks are built over a set X of minimal elements and a set Y of maximal
elements of the adjacency poset:

* ``order_right``: X in layout order, each y right after its last X-neighbour;
* ``order_left``: X in reverse layout order, likewise;
* ``order_triangle``: reverse inclusion of the intervals J_v (v in X) and I_u (u in Y).

The realizer concatenates one triangle block with one right block per colour
class, plus a single left block over everything.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .graph import Colouring, Graph
from .outerplanar import Embedding, interval_I, interval_J
from .poset import Poset, build_adjacency_poset, is_linear_extension, is_max_el, max_el, min_el, vertex_of


def _split(X: Iterable[str], Y: Iterable[str], g: Graph) -> tuple[list[str], list[str]]:
    xs = [vertex_of(x) for x in X]
    ys = [vertex_of(y) for y in Y]
    for x in X:
        if is_max_el(x):
            raise ValueError(f"{x!r} is not a minimal element")
    for y in Y:
        if not is_max_el(y):
            raise ValueError(f"{y!r} is not a maximal element")
    for v in xs + ys:
        if v not in g:
            raise KeyError(f"unknown vertex {v!r}")
    if len(set(xs)) != len(xs) or len(set(ys)) != len(ys):
        raise ValueError("repeated element in block")
    return xs, ys


def _anchored(g: Graph, e: Embedding, xs: list[str], ys: list[str], tie_sign: int) -> list[str]:
    """Place each maximal element right after its last X-neighbour in ``xs``.

    Maximals sharing a slot are ordered by ``tie_sign * position``.
    """
    slot = {v: i for i, v in enumerate(xs)}
    groups: dict[int, list[str]] = {}
    for u in ys:
        anchor = max((slot[v] for v in g.neighbours(u) if v in slot), default=-1)
        groups.setdefault(anchor, []).append(u)
    pos = e.position
    out: list[str] = []
    for i in range(-1, len(xs)):
        if i >= 0:
            out.append(min_el(xs[i]))
        for u in sorted(groups.get(i, ()), key=lambda w: tie_sign * pos[w]):
            out.append(max_el(u))
    return out


def order_right(g: Graph, e: Embedding, X: Iterable[str], Y: Iterable[str]) -> list[str]:
    """X in layout order; tied maximals in reverse layout order."""
    xs, ys = _split(X, Y, g)
    xs.sort(key=e.position.__getitem__)
    return _anchored(g, e, xs, ys, -1)


def order_left(g: Graph, e: Embedding, X: Iterable[str], Y: Iterable[str]) -> list[str]:
    """X in reverse layout order; tied maximals in layout order.

    The tie direction matters: with ties reversed, L4 misses max-max critical
    pairs such as (v*', w') for a pendant v* of a neighbour of w.
    """
    xs, ys = _split(X, Y, g)
    xs.sort(key=lambda v: -e.position[v])
    return _anchored(g, e, xs, ys, 1)


def triangle_items(g: Graph, e: Embedding, X: Iterable[str], Y: Iterable[str]):
    """The intervals J_v (v under X) and I_u (u under Y) ordered by P(X, Y)."""
    xs, ys = _split(X, Y, g)
    yset = set(ys)
    for u in ys:
        if g.neighbours(u) & yset:
            raise ValueError(f"maximal side must be monochromatic; {u!r} has a neighbour in it")
    items = [interval_J(e, g, v, yset) for v in xs] + [interval_I(e, g, u) for u in ys]
    pos = e.position
    # longer first; equal spans: J before I, then layout order of the owner
    items.sort(key=lambda it: (-it.length, it.lo, it.kind != "J", pos[it.owner]))
    return items


def order_triangle(g: Graph, e: Embedding, X: Iterable[str], Y: Iterable[str]) -> list[str]:
    return [min_el(it.owner) if it.kind == "J" else max_el(it.owner) for it in triangle_items(g, e, X, Y)]


def respects_triangle_order(g: Graph, e: Embedding, X, Y, seq: Sequence[str]) -> bool:
    """Whether ``seq`` is a linear extension of the reverse-inclusion order P(X, Y)."""
    xs, ys = _split(X, Y, g)
    yset = set(ys)
    item = {min_el(v): interval_J(e, g, v, yset) for v in xs}
    item.update({max_el(u): interval_I(e, g, u) for u in ys})
    if sorted(seq) != sorted(item):
        return False
    pos = e.position
    its = [item[s] for s in seq]

    def before(a, b) -> bool:
        if a.span() == b.span():
            if a.kind != b.kind:
                return a.kind == "J"
            return pos[a.owner] < pos[b.owner]
        return a.strictly_contains(b)

    return not any(before(its[j], its[i]) for i in range(len(its)) for j in range(i + 1, len(its)))


# -- the realizer ------------------------------------------------------------

def build_realizer(g: Graph, e: Embedding, c: Colouring) -> list[list[str]]:
    """The four extensions L1..L4 of the adjacency poset of ``g``."""
    e.check(g)
    if c.graph.vertices != g.vertices:
        raise ValueError("colouring belongs to a different graph")
    # Colouring validates properness on construction; recheck in case of mutation
    for u, w in g.sorted_edges():
        if c[u] == c[w]:
            raise ValueError(f"improper colouring: edge {u} {w} is monochromatic")
    cls = {k: c.colour_class(k) for k in (1, 2, 3)}

    def mins(*ks):
        return [min_el(v) for k in ks for v in cls[k]]

    def maxs(*ks):
        return [max_el(v) for k in ks for v in cls[k]]

    out = []
    for k in (1, 2, 3):
        others = tuple(j for j in (1, 2, 3) if j != k)
        out.append(order_triangle(g, e, mins(*others), maxs(k)) + order_right(g, e, mins(k), maxs(*others)))
    out.append(order_left(g, e, mins(1, 2, 3), maxs(1, 2, 3)))
    return out


@dataclass
class VerificationReport:
    extension_validity: list[bool]
    extension_errors: list[object]
    intersection_equals_poset: bool
    unreversed_pairs: list[tuple[str, str]] = field(default_factory=list)
    wrong_comparabilities: list[tuple[str, str]] = field(default_factory=list)
    lost_comparabilities: list[tuple[str, str]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(self.extension_validity) and not self.unreversed_pairs and self.intersection_equals_poset

    def summary(self) -> str:
        if self.passed:
            return f"pass: {len(self.extension_validity)} extensions realize the poset"
        bits = []
        for i, (ok, err) in enumerate(zip(self.extension_validity, self.extension_errors), start=1):
            if not ok:
                bits.append(f"L{i} is not a linear extension ({err})")
        if self.unreversed_pairs:
            bits.append(f"{len(self.unreversed_pairs)} incomparable pairs never reversed")
        if self.lost_comparabilities:
            bits.append(f"{len(self.lost_comparabilities)} comparabilities lost")
        return "fail: " + "; ".join(bits)

    def to_text(self) -> str:
        lines = [self.summary()]
        for i, ok in enumerate(self.extension_validity, start=1):
            lines.append(f"L{i}: {'valid' if ok else 'INVALID'}")
        for a, b in self.unreversed_pairs:
            lines.append(f"unreversed: ({a},{b})")
        for a, b in self.lost_comparabilities:
            lines.append(f"lost: {a} < {b}")
        return "\n".join(lines) + "\n"


def verify_realizer(p: Poset, r: Sequence[Sequence[str]]) -> VerificationReport:
    """Check that ``r`` is a family of linear extensions whose intersection is ``p``."""
    elements = set(p.elements)
    for i, ext in enumerate(r, start=1):
        if len(ext) != len(elements) or set(ext) != elements:
            raise ValueError(f"extension {i} does not list exactly the poset elements")
    validity, errors = [], []
    n = len(p)
    full = (1 << n) - 1
    # after[i]: elements placed after i in every extension so far
    after = [full & ~(1 << i) for i in range(n)]
    for ext in r:
        ok, err = is_linear_extension(p, ext)
        validity.append(ok)
        errors.append(err)
        later = 0
        for x in reversed(ext):
            i = p.index(x)
            after[i] &= later
            later |= 1 << i
    els = p.elements
    unreversed, wrong, lost = [], [], []
    for i in range(n):
        extra = after[i] & ~p.up[i]
        missing = p.up[i] & ~after[i]
        for j in range(n):
            if extra >> j & 1:
                pair = (els[i], els[j])
                wrong.append(pair)
                if not p.up[j] >> i & 1:
                    unreversed.append(pair)
            if missing >> j & 1:
                lost.append((els[i], els[j]))
    if not r:
        # empty family: nothing is realized unless the poset is trivial
        unreversed = p.incomparable_pairs()
    return VerificationReport(
        extension_validity=validity,
        extension_errors=errors,
        intersection_equals_poset=not wrong and not lost and bool(r) or (not r and n <= 1),
        unreversed_pairs=unreversed,
        wrong_comparabilities=wrong,
        lost_comparabilities=lost,
    )


def reversed_vertices(ext: Sequence[str]) -> set[str]:
    """Vertices v whose pair (v, v') has v' before v in ``ext``."""
    where = {x: i for i, x in enumerate(ext)}
    return {x for x in ext if not is_max_el(x) and max_el(x) in where and where[max_el(x)] < where[x]}


def realize_graph(g: Graph, e: Embedding, c: Colouring):
    """Convenience: the adjacency poset, its realizer and the verification report."""
    p = build_adjacency_poset(g)
    r = build_realizer(g, e, c)
    return p, r, verify_realizer(p, r)
