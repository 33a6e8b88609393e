import itertools

import pytest
from hypothesis import given, settings, strategies as st

from orderdim.fixtures import H_VERTICES, fixture_h
from orderdim.graph import (
    BudgetExceeded,
    Colouring,
    Graph,
    GraphFormatError,
    add_apex,
    add_private_neighbours,
    chromatic_number,
    gen_cycle,
    gen_knn_minus_pm,
    gen_random_outerplanar,
    parse_graph,
    serialize_graph,
)
from orderdim.outerplanar import find_embedding, is_crossing_free


@st.composite
def graphs(draw, max_n=8):
    n = draw(st.integers(0, max_n))
    vs = [f"g{i}" for i in range(n)]
    possible = [(vs[i], vs[j]) for i in range(n) for j in range(i + 1, n)]
    edges = draw(st.lists(st.sampled_from(possible), unique=True)) if possible else []
    return Graph(vs, edges)


# -- parsing -----------------------------------------------------------------

def test_parse_single_edge():
    g = parse_graph("v a\nv b\ne a b")
    assert g.vertices == ("a", "b")
    assert g.edges == {frozenset("ab")}


@pytest.mark.parametrize(
    "text, lineno, fragment",
    [
        ("v a\ne a a", 2, "self-loop"),
        ("v a\nv a", 2, "duplicate vertex"),
        ("v a\ne a b", 2, "undeclared"),
        ("v a\n# note\nvertex b", 3, "malformed"),
        ("v a\nv b\ne a b\ne b a", 4, "duplicate edge"),
        ("v a b", 1, "malformed"),
    ],
)
def test_parse_errors_carry_line_numbers(text, lineno, fragment):
    with pytest.raises(GraphFormatError) as info:
        parse_graph(text)
    assert info.value.lineno == lineno
    assert fragment in str(info.value)


def test_comments_blank_lines_and_header_are_ignored():
    g = parse_graph("graph\n# a triangle\n\nv x\nv y\nv z\ne x y\ne y z\ne z x\n")
    assert len(g) == 3 and len(g.edges) == 3


def test_serializer_is_canonical():
    g = parse_graph("v b\nv a\nv c\ne c a\ne a b\n")
    # vertices in declaration order, edges by endpoint declaration order
    assert serialize_graph(g) == "v b\nv a\nv c\ne b a\ne a c\n"


@given(graphs())
def test_round_trip_is_identity_on_canonical_form(g):
    text = serialize_graph(g)
    assert parse_graph(text) == g
    assert serialize_graph(parse_graph(text)) == text


def test_fixture_h_has_fourteen_named_vertices():
    g = fixture_h()
    assert list(g.vertices) == [f"a{i}" for i in range(1, 7)] + [f"b{i}" for i in range(1, 5)] + [f"c{i}" for i in range(1, 5)]
    assert g.vertices == H_VERTICES
    assert parse_graph(serialize_graph(g)) == g


# -- chromatic number --------------------------------------------------------

def test_chromatic_number_examples():
    assert chromatic_number(Graph("abc", [("a", "b"), ("b", "c"), ("c", "a")])) == 3
    assert chromatic_number(gen_knn_minus_pm(3)) == 2
    assert chromatic_number(fixture_h()) == 3


def test_chromatic_number_small_cases():
    assert chromatic_number(Graph([])) == 0
    assert chromatic_number(Graph(["a", "b"])) == 1
    assert chromatic_number(gen_cycle(5)) == 3
    assert chromatic_number(gen_cycle(6)) == 2
    k4 = Graph("abcd", [(u, w) for u in "abcd" for w in "abcd" if u < w])
    assert chromatic_number(k4) == 4


def test_chromatic_number_budget():
    with pytest.raises(BudgetExceeded):
        chromatic_number(gen_cycle(9), max_nodes=3)


@given(graphs(max_n=7))
@settings(max_examples=60)
def test_chromatic_number_is_least_proper_colouring(g):
    k = chromatic_number(g)
    vs = list(g.vertices)

    def proper(cols):
        col = dict(zip(vs, cols))
        return all(col[u] != col[w] for u, w in g.sorted_edges())

    if vs:
        assert any(proper(c) for c in itertools.product(range(k), repeat=len(vs)))
        if k > 1:
            assert not any(proper(c) for c in itertools.product(range(k - 1), repeat=len(vs)))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_knn_minus_pm_is_bipartite(n):
    assert chromatic_number(gen_knn_minus_pm(n)) == 2


# -- colourings --------------------------------------------------------------

def test_colouring_rejects_monochromatic_edge_and_missing_vertex():
    g = Graph("ab", [("a", "b")])
    with pytest.raises(ValueError, match="monochromatic"):
        Colouring(g, {"a": 1, "b": 1})
    with pytest.raises(ValueError, match="not coloured"):
        Colouring(g, {"a": 1})
    with pytest.raises(ValueError):
        Colouring(g, {"a": 1, "b": 4})


# -- transformations ---------------------------------------------------------

def test_private_neighbour_of_single_vertex():
    g = add_private_neighbours(Graph(["a"]))
    assert g.vertices == ("a", "a*")
    assert g.edges == {frozenset(("a", "a*"))}


def test_private_neighbours_of_edge():
    g = add_private_neighbours(Graph("ab", [("a", "b")]))
    assert len(g) == 4 and len(g.edges) == 3
    assert g.neighbours("a*") == {"a"}


def test_private_neighbours_of_h_stay_outerplanar():
    h = fixture_h()
    g = add_private_neighbours(h)
    assert len(g) == 28
    assert len(g.edges) == len(h.edges) + 14 == 38
    assert is_crossing_free(g, find_embedding(g))


def test_reserved_pendant_suffix_is_rejected():
    with pytest.raises(GraphFormatError, match="reserved"):
        add_private_neighbours(Graph(["a*"]))


@given(graphs())
def test_removing_private_neighbours_restores_graph(g):
    aug = add_private_neighbours(g)
    assert aug.induced_subgraph(g.vertices) == g
    assert all(aug.degree(v + "*") == 1 for v in g.vertices)


def test_apex_joins_everything():
    h = fixture_h()
    g = add_apex(h)
    assert len(g) == 15
    assert g.neighbours("apex") == set(h.vertices)
    assert len(g.edges) == len(h.edges) + 14
    with pytest.raises(GraphFormatError):
        add_apex(g)


# -- generators --------------------------------------------------------------

def test_knn_minus_pm_small():
    g1 = gen_knn_minus_pm(1)
    assert g1.vertices == ("u1", "w1") and not g1.edges
    g2 = gen_knn_minus_pm(2)
    assert g2.edges == {frozenset(("u1", "w2")), frozenset(("u2", "w1"))}
    g3 = gen_knn_minus_pm(3)
    assert all(g3.degree(v) == 2 for v in g3.vertices)
    assert len(g3.components()) == 1  # a single 6-cycle
    with pytest.raises(ValueError):
        gen_knn_minus_pm(0)


def test_random_outerplanar_edge_cases():
    g = gen_random_outerplanar(1, 1.0, 11)
    assert g.vertices == ("v1",) and not g.edges
    for n in (3, 5, 9):
        c = gen_random_outerplanar(n, 0.0, n)
        assert len(c.edges) == n and all(c.degree(v) == 2 for v in c.vertices)
        assert len(c.components()) == 1


def test_random_outerplanar_edge_bound_and_determinism():
    g = gen_random_outerplanar(12, 0.5, 7)
    assert len(g.edges) <= 2 * 12 - 3
    assert g == gen_random_outerplanar(12, 0.5, 7)
    full = gen_random_outerplanar(12, 1.0, 7)
    assert len(full.edges) == 2 * 12 - 3  # a maximal outerplanar graph


def test_random_outerplanar_is_always_embeddable():
    for seed in range(1000):
        n = 1 + seed % 16
        g = gen_random_outerplanar(n, (seed % 11) / 10, seed)
        assert len(g.edges) <= max(2 * n - 3, n - 1)
        assert is_crossing_free(g, find_embedding(g))


def test_random_outerplanar_rejects_bad_parameters():
    with pytest.raises(ValueError):
        gen_random_outerplanar(0, 0.5, 1)
    with pytest.raises(ValueError):
        gen_random_outerplanar(4, 1.5, 1)
