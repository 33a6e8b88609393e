import io
import subprocess
import sys
from pathlib import Path

import pytest

from orderdim.cli import augment_embedding, main, parse_colouring, parse_realizer, split_sections
from orderdim.dimension import exact_dimension
from orderdim.fixtures import fixture_fig2, fixture_h, fixture_h_colouring, fixture_h_embedding
from orderdim.graph import add_private_neighbours, gen_knn_minus_pm, gen_random_outerplanar, parse_graph, serialize_graph
from orderdim.outerplanar import find_embedding, parse_embedding, three_colour
from orderdim.poset import build_adjacency_poset, gen_standard_example, parse_poset, serialize_poset
from orderdim.realizer import build_realizer, verify_realizer

GOLDEN = Path(__file__).parent / "golden"


def run(*argv, stdin=""):
    out = io.StringIO()
    old = sys.stdin
    sys.stdin = io.StringIO(stdin)
    try:
        status = main(list(argv), out)
    finally:
        sys.stdin = old
    return status, out.getvalue()


def shell(cmd):
    return subprocess.run(cmd, shell=True, capture_output=True, text=True,
                          env={"PATH": f"{Path(sys.executable).parent}:/usr/bin:/bin"})


ORDERDIM = f"{sys.executable} -m orderdim"

K4 = "v a\nv b\nv c\nv d\ne a b\ne a c\ne a d\ne b c\ne b d\ne c d\n"


# -- golden files -------------------------------------------------------------

@pytest.mark.parametrize("what", ["fixture-h", "fixture-fig2"])
def test_fixture_output_is_byte_stable(what):
    assert run("gen", what) == (0, (GOLDEN / f"{what}.txt").read_text())
    assert run("gen", what)[1] == run("gen", what)[1]


def test_fixture_h_output_is_the_library_fixture():
    secs = split_sections((GOLDEN / "fixture-h.txt").read_text(), "graph")
    g = parse_graph(secs["graph"])
    assert g == fixture_h()
    assert parse_embedding(secs["embedding"]) == fixture_h_embedding()
    assert parse_colouring(g, secs["colouring"]).partition() == fixture_h_colouring().partition()


def test_fig2_output_is_derived_from_h():
    secs = split_sections((GOLDEN / "fixture-fig2.txt").read_text(), "poset")
    assert parse_poset(secs["poset"]) == fixture_fig2()


def test_generators_match_the_library():
    assert run("gen", "s3")[1] == "poset\n" + serialize_poset(gen_standard_example(3))
    assert run("gen", "knn-minus-pm", "3")[1] == "graph\n" + serialize_graph(gen_knn_minus_pm(3))
    assert run("gen", "random", "9", "0.5", "--seed", "4")[1] == "graph\n" + serialize_graph(gen_random_outerplanar(9, 0.5, 4))


# -- thin wrappers ------------------------------------------------------------

def test_adjposet_matches_library():
    text = serialize_graph(fixture_h())
    assert run("adjposet", stdin=text) == (0, "poset\n" + serialize_poset(build_adjacency_poset(fixture_h())))


def test_embed_and_color_match_library():
    g = gen_random_outerplanar(10, 0.7, 2)
    text = serialize_graph(g)
    assert run("embed", stdin=text) == (0, "embedding\n" + find_embedding(g).to_text())
    assert run("color", stdin=text) == (0, "colouring\n" + three_colour(g).to_text())
    status, out = run("check", stdin=text)
    assert status == 0 and out.startswith("outerplanar: 10 vertices")


def test_realize_matches_library():
    g = gen_random_outerplanar(8, 0.4, 5)
    status, out = run("realize", stdin=serialize_graph(g))
    assert status == 0
    aug = add_private_neighbours(g)
    secs = split_sections(out, "realizer")
    assert parse_poset(secs["poset"]) == build_adjacency_poset(aug)
    assert parse_realizer(secs["realizer"]) == build_realizer(aug, find_embedding(aug), three_colour(aug))


def test_realize_uses_the_given_layout_and_colouring():
    status, out = run("realize", "--augment=false", stdin=(GOLDEN / "fixture-h.txt").read_text())
    assert status == 0
    r = parse_realizer(split_sections(out, "realizer")["realizer"])
    assert r == build_realizer(fixture_h(), fixture_h_embedding(), fixture_h_colouring())


def test_augmented_layout_stays_crossing_free():
    g = add_private_neighbours(fixture_h())
    augment_embedding(fixture_h_embedding()).check(g)
    status, out = run("realize", stdin=(GOLDEN / "fixture-h.txt").read_text())
    assert status == 0 and len(parse_poset(split_sections(out, "x")["poset"])) == 56


def test_dim_matches_library():
    p = gen_standard_example(4)
    status, out = run("dim", stdin="poset\n" + serialize_poset(p))
    assert status == 0
    cert = exact_dimension(p)
    assert out.splitlines()[0] == "dim = 4"
    assert [l for l in out.splitlines() if l.startswith("L")] == [
        f"L{i}: " + " ".join(ext) for i, ext in enumerate(cert.witness, start=1)
    ]


def test_dim_accepts_a_graph():
    status, out = run("dim", stdin=serialize_graph(fixture_h()))
    assert status == 0 and out.startswith("dim = 4\n")


def test_export_dot():
    status, out = run("export-dot", stdin="v a\nv b\ne a b\n")
    assert status == 0 and out == 'graph G {\n  "a";\n  "b";\n  "a" -- "b";\n}\n'
    status, out = run("export-dot", stdin="poset\n" + serialize_poset(gen_standard_example(2)))
    assert status == 0 and out.startswith("digraph poset {") and '"x1" -> "y2";' in out
    status, out = run("export-dot", "--format", "text", stdin="v a\n")
    assert out == "graph\nv a\n"


# -- exit codes ---------------------------------------------------------------

def test_k4_is_not_outerplanar():
    assert run("check", stdin=K4)[0] == 2
    assert run("embed", stdin=K4)[0] == 2


def test_parse_error_exit():
    assert run("adjposet", stdin="v a\ne a z\n")[0] == 1
    assert run("gen", "bogus")[0] == 1
    assert run("gen", "s1")[0] == 1
    assert run("gen", "knn-minus-pm")[0] == 1


def test_verify_failure_exit():
    text = "poset\n" + serialize_poset(gen_standard_example(2)) + "realizer\nx1 x2 y1 y2\n"
    status, out = run("verify", stdin=text)
    assert status == 3 and out.startswith("fail")
    bad = "poset\n" + serialize_poset(gen_standard_example(2)) + "realizer\nx1 x2\n"
    assert run("verify", stdin=bad)[0] == 1


def test_verify_against_separate_poset(tmp_path):
    p = gen_standard_example(2)
    f = tmp_path / "p.txt"
    f.write_text("poset\n" + serialize_poset(p))
    cert = exact_dimension(p)
    text = "realizer\n" + "".join(" ".join(ext) + "\n" for ext in cert.witness)
    assert run("verify", "--poset", str(f), stdin=text)[0] == 0
    assert verify_realizer(p, cert.witness).passed


def test_budget_exit():
    g = add_private_neighbours(gen_random_outerplanar(14, 0.3, 13))
    status, out = run("dim", "--budget-ms", "200", stdin=serialize_graph(g))
    assert status == 4 and out.startswith("budget exceeded: ")


# -- pipelines through the real entry point ------------------------------------

def test_pipeline_standard_example():
    res = shell(f"{ORDERDIM} gen s3 | {ORDERDIM} dim")
    assert res.returncode == 0 and "dim = 3" in res.stdout


def test_pipeline_fixture_realize_verify():
    res = shell(f"{ORDERDIM} gen fixture-h | {ORDERDIM} realize --augment=false | {ORDERDIM} verify")
    assert res.returncode == 0 and res.stdout.startswith("pass")


def test_pipeline_check_k4(tmp_path):
    f = tmp_path / "k4.txt"
    f.write_text(K4)
    assert shell(f"{ORDERDIM} check {f}").returncode == 2
