"""The worked example H: an outerplanar graph whose adjacency poset has dimension 4.

The layout and edge set were recovered from the three block orders printed
with the example (``CAPTION_RIGHT``, ``CAPTION_LEFT``, ``CAPTION_TRIANGLE``).  Colour classes follow the letters:
a -> 1 (A), b -> 2 (B), c -> 3 (C).
"""
from __future__ import annotations

from .graph import Colouring, Graph
from .outerplanar import Embedding
from .poset import Poset, build_adjacency_poset, induced_subposet, max_el, min_el

H_VERTICES = tuple("a1 a2 a3 a4 a5 a6 b1 b2 b3 b4 c1 c2 c3 c4".split())

H_EDGES = (
    ("c1", "a1"), ("c1", "a2"), ("c2", "a2"), ("c2", "a3"),
    ("c3", "a3"), ("c3", "a4"), ("c4", "a5"), ("c4", "a6"),
    ("b2", "a1"), ("b2", "a2"), ("b3", "a3"), ("b3", "a4"),
    ("b1", "a2"), ("b1", "a6"), ("b4", "a3"), ("b4", "a5"),
    ("a5", "b1"), ("b1", "c1"), ("b1", "c2"), ("b1", "c4"),
    ("b2", "c1"), ("b3", "c3"), ("b4", "c2"), ("b4", "c3"),
)

H_LAYOUT = tuple("b1 c1 a1 b2 a2 c2 a3 b3 a4 c3 b4 a5 c4 a6".split())

# block orders over X = A (minimal) and Y = B' u C' (maximal), and the
# triangle block over X = B u C, Y = A'
CAPTION_RIGHT = "a1 a2 b2' c1' a3 c2' a4 c3' b3' a5 b4' a6 c4' b1'"
CAPTION_LEFT = "a6 a5 c4' a4 a3 b4' c3' b3' a2 c2' b1' a1 b2' c1'"
CAPTION_TRIANGLE = "b1 c4 a6' b4 a5' c2 c1 b2 a2' a1' b3 c3 a3' a4'"


def fixture_h() -> Graph:
    return Graph(H_VERTICES, H_EDGES)


def fixture_h_embedding() -> Embedding:
    return Embedding(H_LAYOUT)


def fixture_h_colouring() -> Colouring:
    g = fixture_h()
    return Colouring(g, {v: "abc".index(v[0]) + 1 for v in g.vertices})


def fixture_fig2() -> Poset:
    """A_H restricted to the c-minimals and the a-maximals (4 + 6 elements)."""
    g = fixture_h()
    keep = [min_el(v) for v in g.vertices if v[0] == "c"] + [max_el(v) for v in g.vertices if v[0] == "a"]
    return induced_subposet(build_adjacency_poset(g), keep)


def spider_poset() -> Poset:
    """Height-2 poset read off the walk-through: x1<y1,y3; x2<y2,y4; x3<y3,y4,y5; x4<y5,y6.

    It is not an induced subposet of A_H (see the decisions log); kept so the
    dimension of the walk-through's own poset can be checked.
    """
    up = {"x1": ("y1", "y3"), "x2": ("y2", "y4"), "x3": ("y3", "y4", "y5"), "x4": ("y5", "y6")}
    xs = sorted(up)
    ys = [f"y{i}" for i in range(1, 7)]
    return Poset(xs + ys, [(x, y) for x in xs for y in up[x]])
