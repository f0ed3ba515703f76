import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from grigorchuk.group import (
    GraphShapeError,
    LabeledGraph,
    WindowBoundaryError,
    act,
    act_word,
    compare_graphs,
    edge_census,
    graph_from_window,
    is_transitive,
    kappa,
    level_permutations,
    lysenok_relators,
    movers,
    orbit_coincidence_check,
    acts_trivially,
    relator_check,
    schreier_graph,
    subshift_generator,
    subshift_word,
    tree_vertices,
    word_permutation,
)
from grigorchuk.language import special_sequence_window
from grigorchuk.words import PointedWord, eta_prefix

from oracles import brute_act

bits = st.text(alphabet="01", max_size=14)


def test_act_examples():
    assert act("a", "01") == "11"
    assert act("b", "00") == "01"
    assert act("d", "0110") == "0110"
    assert act("c", "") == ""


@given(st.sampled_from("abcd"), bits)
def test_act_matches_recursion(g, v):
    assert act(g, v) == brute_act(g, v)
    assert act(g, act(g, v)) == v


@given(bits)
def test_klein_relations(v):
    assert act_word("", v) == v
    assert act_word("aa", v) == v
    assert act_word("bc", v) == act("d", v) == act_word("cb", v)


def test_act_word_order():
    # rightmost letter first: "ab" means b then a
    v = "00"
    assert act_word("ab", v) == act("a", act("b", v))


@pytest.mark.parametrize("n", [1, 3, 6])
def test_level_permutations_match_act(n):
    perms = level_permutations(n)
    for g in "abcd":
        for k, v in enumerate(tree_vertices(n)):
            assert format(int(perms[g][k]), f"0{n}b") == act(g, v)


def test_word_permutation_composition():
    n = 5
    p = word_permutation("abd", n)
    for k, v in enumerate(tree_vertices(n)):
        assert format(int(p[k]), f"0{n}b") == act_word("abd", v)


def test_kappa_and_relators():
    assert kappa("ad") == "acac"
    rel = lysenok_relators(1)
    assert rel == ["ad" * 4, kappa("ad" * 4), "adacac" * 4, kappa("adacac" * 4)]


def test_relator_examples():
    assert acts_trivially("ad" * 4, 8)
    assert acts_trivially("adacac" * 4, 8)
    assert acts_trivially("aa", 8)
    assert not acts_trivially("ad", 8)
    assert not acts_trivially("ab" * 4, 8)  # (ab) has order 16
    assert relator_check(10, 3)


def test_relator_guards():
    with pytest.raises(ValueError):
        relator_check(15, 1)
    with pytest.raises(ValueError):
        relator_check(3, 4)


@pytest.mark.parametrize("n", range(1, 11))
def test_transitive(n):
    assert is_transitive(n)


def test_schreier_level_one():
    g = schreier_graph(1)
    loops, links, order = g.path_profile()
    assert links == [frozenset("a")]
    assert loops == [frozenset("bcd")] * 2


def test_schreier_level_two():
    g = schreier_graph(2)
    loops, links, order = g.path_profile()
    assert order == ["10", "00", "01", "11"] or order[::-1] == ["10", "00", "01", "11"]
    if order[0] != "10":
        loops, links = loops[::-1], links[::-1]
    assert links == [frozenset("a"), frozenset("bc"), frozenset("a")]
    assert loops == [frozenset("bcd"), frozenset("d"), frozenset("d"), frozenset("bcd")]
    assert g.root == "11"


@pytest.mark.parametrize("n", range(1, 11))
def test_schreier_regular_and_census(n):
    g = schreier_graph(n)
    assert g.is_regular() and g.is_connected()
    c = edge_census(g)
    assert c["a_edges"] == 2 ** (n - 1)
    assert c["double_edges"] == 2 ** (n - 1) - 1


def test_graph_from_window_examples():
    ga = graph_from_window("a")
    assert ga.edges == [(1, 2, "a")]
    gx = graph_from_window("x")
    assert sorted(gx.edges) == [(1, 1, "d"), (1, 2, "b"), (1, 2, "c"), (2, 2, "d")]


def test_graph_window_vs_level_two_interior():
    diff = compare_graphs(schreier_graph(2), graph_from_window("axa"))
    assert diff.loops_only()
    assert diff.positions() <= {0, 3}


def test_graph_diff_axa_aya():
    diff = compare_graphs(graph_from_window("axa"), graph_from_window("aya"))
    assert not diff.empty
    labels = {lab for *_, lab in diff.only_first + diff.only_second}
    assert labels == {"c", "d"}
    assert all(e[:2] in {(1, 1), (2, 2), (1, 2)} for e in diff.only_first + diff.only_second)


def test_compare_self_is_empty():
    g = schreier_graph(5)
    assert compare_graphs(g, g).empty


def test_compare_shape_errors():
    tri = LabeledGraph([1, 2, 3], [(1, 2, "a"), (2, 3, "a"), (3, 1, "a")], 1)
    with pytest.raises(GraphShapeError):
        compare_graphs(tri, tri)
    with pytest.raises(GraphShapeError):
        compare_graphs(graph_from_window("axa"), graph_from_window("axaya"))


@pytest.mark.parametrize("n", range(2, 9))
def test_graph_correspondence(n):
    g = schreier_graph(n)
    h = graph_from_window(eta_prefix(2**n - 1))
    diff = compare_graphs(g, h)
    assert len(diff) <= 6 and diff.loops_only()
    assert diff.positions() <= {0, 2**n - 1}
    assert edge_census(g)["a_edges"] == edge_census(h)["a_edges"]
    assert edge_census(g)["double_edges"] == edge_census(h)["double_edges"]


def test_edge_list_roundtrip():
    g = schreier_graph(4)
    text = g.to_edge_list()
    assert text.splitlines()[0] == "root 1111"
    h = LabeledGraph.from_edge_list(text)
    assert sorted(h.edges) == sorted(g.edges) and h.root == g.root
    with pytest.raises(ValueError):
        LabeledGraph.from_edge_list("1 2 a\n")


def _eta_window(radius: int, origin: int) -> PointedWord:
    return PointedWord(eta_prefix(radius), origin)


def test_A_moves_right_and_is_involution():
    w = _eta_window(30, 11)  # omega_1 = eta_11 = a
    assert w.at(1) == "a"
    moved = subshift_generator("A", w)
    assert moved.origin == 12
    assert subshift_generator("A", moved) == w


def test_B_fixes_z_seam():
    s = eta_prefix(64)
    i = s.index("z") + 1  # 1-based index of the first z
    w = PointedWord(s, i)  # omega_1 = z, omega_0 = a
    assert subshift_generator("B", w) == w


def test_BC_equals_D_on_random_windows():
    rng = random.Random(0)
    s = eta_prefix(4096)
    for _ in range(1000):
        w = PointedWord(s, rng.randrange(3, 4090))
        assert subshift_word("BC", w) == subshift_generator("D", w)
        for g in "ABCD":
            assert subshift_word(g + g, w) == w


def test_boundary_error():
    with pytest.raises(WindowBoundaryError):
        subshift_generator("A", PointedWord("axa", 1))


def test_movers():
    w = special_sequence_window("x", 10)
    assert movers(w, -1) == {"A"}  # omega_1 = a
    assert movers(w, 1) == {"B", "C"}  # crossing omega_0 = x
    assert movers(w, 0) == {"D"}  # D fixes ...a x | a...


def test_orbit_coincidence():
    w = special_sequence_window("x", 500)
    assert orbit_coincidence_check(w, 0)
    assert orbit_coincidence_check(w, 50)
    with pytest.raises(WindowBoundaryError):
        orbit_coincidence_check(special_sequence_window("x", 5), 10)
