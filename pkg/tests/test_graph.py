import logging
import random

import pytest

from barkerpairs import graph
from barkerpairs.arith import factorize
from barkerpairs.graph import GraphFormatError, GraphInvariantError, Kind, Mode, PrimeGraph
from barkerpairs.wieferich import SearchTask, WieferichPair, is_wieferich, search_pairs

SMALL_P = 3000


def chm_graph(P=SMALL_P):
    pairs = search_pairs(SearchTask((3, P), (3, P), Mode.CHM.congruence))
    return pairs, graph.build_closure(pairs, Mode.CHM, P, descended=P)


def test_default_vertex_bound():
    assert graph.default_vertex_bound(5 * 10**6) == 36840
    assert graph.default_vertex_bound(31622776601683793) == 125992104989


def test_closure_from_single_seed():
    g = graph.build_closure([WieferichPair(41, 138200401)], Mode.BARKER, 10**9, descent_bound=100)
    assert {p for r, p in g.flimsy if r == 138200401} == {5, 13, 2953}
    assert (2953, 41) in g.flimsy
    assert not any(r in (5, 13) for r, _ in g.flimsy)
    assert (41, 29) in g.solid
    assert not g.complete
    g.validate()


def test_empty_seed():
    g = graph.build_closure([], Mode.BARKER, 100)
    assert not g.vertices and not g.solid and not g.flimsy and g.complete


def test_closure_is_idempotent():
    _, g = chm_graph()
    again = graph.build_closure(sorted(WieferichPair(*e) for e in g.solid), Mode.CHM, SMALL_P, descended=SMALL_P)
    assert again.solid == g.solid and again.flimsy == g.flimsy and again.vertices == g.vertices


def test_closure_complete_by_rescan():
    _, g = chm_graph()
    assert g.complete
    g.validate()
    for r in g.vertices:
        want = {p for p in factorize(r - 1).primes if p > 2 and p <= SMALL_P}
        assert {p for a, p in g.flimsy if a == r} == want


def test_closure_with_descending_search_rescan():
    g = graph.build_closure([WieferichPair(5, 53471161)], Mode.BARKER, 10**5, descent_bound=10**4)
    for v in g.vertices:
        for p in range(5, min(v, 10**4), 4):
            if p != v and factorize(p).primes == (p,) and is_wieferich(v, p):
                assert (v, p) in g.solid


def test_seed_order_does_not_matter():
    pairs, g = chm_graph()
    shuffled = list(pairs)
    random.Random(5).shuffle(shuffled)
    h = graph.build_closure(shuffled, Mode.CHM, SMALL_P, descended=SMALL_P)
    assert graph.format_graph(h) == graph.format_graph(g)


def test_seed_outside_class_rejected():
    with pytest.raises(GraphInvariantError):
        graph.build_closure([WieferichPair(3, 11)], Mode.BARKER, 100)


def test_max_vertices_marks_incomplete():
    pairs, _ = chm_graph()
    g = graph.build_closure(pairs, Mode.CHM, SMALL_P, descended=SMALL_P, max_vertices=5)
    assert not g.complete


def test_save_load_roundtrip(tmp_path):
    _, g = chm_graph()
    path = tmp_path / "g.txt"
    graph.save(g, path, header=["note"])
    text = path.read_text()
    assert text.startswith("# note\n# mode=chm P=3000 complete=1\n# vertices=")
    h = graph.load(path)
    assert (h.mode, h.bound, h.complete) == (g.mode, g.bound, g.complete)
    assert h.solid == g.solid and h.flimsy == g.flimsy and h.vertices == g.vertices
    graph.save(h, tmp_path / "h.txt", header=["note"])
    assert (tmp_path / "h.txt").read_text() == text


def write(tmp_path, body, header="# mode=barker P=200000000000 complete=1\n"):
    p = tmp_path / "f.txt"
    p.write_text(header + body)
    return p


def test_load_examples(tmp_path):
    g = graph.load(write(tmp_path, "S 5 53471161\nF 138200401 2953\n"))
    assert (5, 53471161) in g.solid and (138200401, 2953) in g.flimsy
    with pytest.raises(GraphInvariantError, match="3 -> 5"):
        graph.load(write(tmp_path, "S 3 5\n", "# mode=chm P=100 complete=1\n"))
    with pytest.raises(GraphInvariantError, match="13"):
        graph.load(write(tmp_path, "F 41 13\n"))


def test_load_format_errors(tmp_path):
    with pytest.raises(GraphFormatError, match=":3:"):
        graph.load(write(tmp_path, "S 5 53471161\nX 1 2\n"))
    with pytest.raises(GraphFormatError):
        graph.load(write(tmp_path, "S 5 five\n"))
    with pytest.raises(GraphFormatError):
        graph.load(write(tmp_path, "S 5 53471161\n", header=""))
    with pytest.raises(GraphInvariantError, match="self-loop"):
        graph.load(write(tmp_path, "S 5 5\n"))


def test_over_bound_vertex_warns(tmp_path, caplog):
    path = write(tmp_path, "S 5 188748146801\nS 188748146801 5\n", "# mode=barker P=125992104989 complete=1\n")
    with caplog.at_level(logging.WARNING):
        g = graph.load(path)
    assert g.over_bound() == [188748146801]
    assert "188748146801" in caplog.text


def test_edges_sorted_and_successors():
    g = PrimeGraph(Mode.BARKER, 10**12)
    g.add_edge(5, 53471161, Kind.SOLID)
    g.add_edge(53471161, 5, Kind.FLIMSY)
    g.add_edge(53471161, 193, Kind.SOLID)
    assert [e[0].value for e in g.edges()] == ["F", "S", "S"]
    assert g.successors()[53471161] == {5: (Kind.FLIMSY,), 193: (Kind.SOLID,)}
    with pytest.raises(GraphInvariantError):
        g.add_edge(5, 5, Kind.SOLID)
