import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from orderdim.dimension import (
    DimensionBudgetExceeded,
    brute_force_dimension,
    exact_dimension,
    has_alternating_cycle,
    is_reversible,
    linear_extensions,
)
from orderdim.fixtures import fixture_fig2, fixture_h, spider_poset
from orderdim.graph import add_private_neighbours, chromatic_number, gen_knn_minus_pm, gen_random_outerplanar
from orderdim.outerplanar import find_embedding, three_colour
from orderdim.poset import (
    Poset,
    build_adjacency_poset,
    gen_antichain,
    gen_chain,
    gen_standard_example,
    induced_subposet,
    is_max_el,
    random_poset,
)
from orderdim.realizer import build_realizer, reversed_vertices, verify_realizer


@st.composite
def posets(draw, max_n=7):
    n = draw(st.integers(1, max_n))
    density = draw(st.floats(0, 1))
    return random_poset(n, density, random.Random(draw(st.integers(0, 2**32))))


def reversible_by_extensions(p, S):
    return any(all(ext.index(y) < ext.index(x) for x, y in S) for ext in linear_extensions(p))


def random_pair_set(p, rng, k):
    inc = p.incomparable_pairs()
    return rng.sample(inc, min(k, len(inc)))


def suite_graph(s):
    return gen_random_outerplanar(1 + s % 14, (0.0, 0.3, 0.7, 1.0)[s % 4], s)


# -- reversibility -----------------------------------------------------------

def test_singleton_pair_is_reversible():
    p = gen_standard_example(3)
    for pair in p.incomparable_pairs():
        assert is_reversible(p, [pair])
        assert not has_alternating_cycle(p, [pair])


def test_s2_pairs_form_an_alternating_cycle():
    p = gen_standard_example(2)
    S = [("x1", "y1"), ("x2", "y2")]
    assert not is_reversible(p, S)
    assert has_alternating_cycle(p, S)
    assert is_reversible(p, [])


def test_comparable_pairs_are_rejected():
    p = gen_chain(2)
    a, b = p.elements
    for f in (is_reversible, has_alternating_cycle):
        with pytest.raises(ValueError):
            f(p, [(a, b)])
        with pytest.raises(ValueError):
            f(p, [(a, a)])


def test_reversibility_checks_agree_with_extension_search():
    rng = random.Random(2024)
    for _ in range(2000):
        p = random_poset(rng.randint(2, 6), rng.random(), rng)
        S = random_pair_set(p, rng, rng.randint(1, 4))
        r = is_reversible(p, S)
        assert r == (not has_alternating_cycle(p, S))
        assert r == reversible_by_extensions(p, S)


def test_linear_extension_enumeration():
    assert len(list(linear_extensions(gen_antichain(3)))) == 6
    assert list(linear_extensions(gen_chain(3))) == [list(gen_chain(3).elements)]
    assert len(list(linear_extensions(gen_standard_example(2)))) == 6  # two disjoint 2-chains


# -- exact dimension ---------------------------------------------------------

def test_chain_and_empty_poset_have_dimension_one():
    c = exact_dimension(gen_chain(3))
    assert c.value == 1 and c.witness == [list(gen_chain(3).elements)]
    assert exact_dimension(Poset([])).value == 1


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_standard_examples(n):
    c = exact_dimension(gen_standard_example(n))
    assert c.value == n
    assert len(c.witness) == n


def test_brute_force_examples():
    assert brute_force_dimension(gen_antichain(2)) == 2
    assert brute_force_dimension(gen_standard_example(3)) == 3
    assert brute_force_dimension(gen_chain(4)) == 1
    with pytest.raises(ValueError):
        brute_force_dimension(gen_antichain(9))


@given(posets())
@settings(max_examples=80, deadline=None)
def test_exact_matches_brute_force(p):
    assert exact_dimension(p).value == brute_force_dimension(p)


@given(posets(max_n=10))
@settings(max_examples=60, deadline=None)
def test_certificate_is_consistent(p):
    cert = exact_dimension(p)
    assert len(cert.witness) == cert.value
    assert verify_realizer(p, cert.witness).passed
    # each class checked from scratch, independent of the incremental closures
    for cls in cert.classes:
        assert is_reversible(p, cls)
    assert not has_alternating_cycle(p, cert.clique[:1])
    for a, b in itertools.combinations(cert.clique, 2):
        assert not is_reversible(p, [a, b])
    assert cert.value >= len(cert.clique)


@given(posets(max_n=9), st.data())
@settings(max_examples=40, deadline=None)
def test_dimension_is_monotone_under_restriction(p, data):
    keep = data.draw(st.sets(st.sampled_from(p.elements)))
    assert exact_dimension(induced_subposet(p, keep)).value <= exact_dimension(p).value


def test_adjacency_poset_of_h():
    cert = exact_dimension(build_adjacency_poset(fixture_h()))
    assert cert.value == 4
    assert cert.lower_bound == "exhausted" and 3 in cert.stats.refuted
    assert "dim = 4" in cert.report()


@pytest.mark.parametrize("n", [3, 4])
def test_bipartite_examples(n):
    g = gen_knn_minus_pm(n)
    assert chromatic_number(g) == 2
    assert exact_dimension(build_adjacency_poset(g)).value == n


def test_subposets_of_h():
    # exact values are computed, not assumed; recorded for the decisions log
    fig2 = exact_dimension(fixture_fig2())
    spider = exact_dimension(spider_poset())
    print("fig2 subposet:", fig2.value, "spider:", spider.value)
    assert fig2.value <= 4 and spider.value <= 4


def test_budget_exceeded_reports_bounds():
    p = build_adjacency_poset(add_private_neighbours(suite_graph(13)))
    with pytest.raises(DimensionBudgetExceeded) as info:
        exact_dimension(p, budget_ms=200)
    exc = info.value
    assert 2 <= exc.lower <= exc.upper == len(exc.witness)
    assert verify_realizer(p, exc.witness).passed
    assert f"{exc.lower} <= dim <= {exc.upper}" in str(exc)


def test_parallel_certificate_equals_sequential():
    for p in (build_adjacency_poset(fixture_h()), gen_standard_example(4),
              build_adjacency_poset(add_private_neighbours(suite_graph(9)))):
        one = exact_dimension(p, jobs=1)
        two = exact_dimension(p, jobs=2)
        assert (one.value, one.witness, one.classes) == (two.value, two.witness, two.classes)


# -- chromatic number bound --------------------------------------------------

def test_dimension_is_at_least_the_chromatic_number():
    for s in range(0, 200, 5):
        g = suite_graph(s)
        assert exact_dimension(build_adjacency_poset(g)).value >= chromatic_number(g)


def test_pairs_reversed_together_form_an_independent_set():
    graphs = [fixture_h(), gen_knn_minus_pm(3)] + [add_private_neighbours(suite_graph(s)) for s in range(12)] + [suite_graph(s) for s in range(40)]
    for g in graphs:
        p = build_adjacency_poset(g)
        exts = build_realizer(g, find_embedding(g), three_colour(g)) + exact_dimension(p).witness
        for ext in exts:
            vs = reversed_vertices(ext)
            assert not any(g.has_edge(u, w) for u, w in itertools.combinations(vs, 2))


def test_every_extension_of_a_small_adjacency_poset_reverses_an_independent_set():
    g = gen_knn_minus_pm(2)
    p = build_adjacency_poset(g)
    for ext in linear_extensions(p):
        vs = reversed_vertices(ext)
        assert all(not is_max_el(v) for v in vs)
        assert not any(g.has_edge(u, w) for u, w in itertools.combinations(vs, 2))
