"""Multigraph algebra: normal form, products, powers, paths, isomorphism."""
import numpy as np
import pytest

import graphonlab as gl
from graphonlab.errors import ValidationError

from conftest import rand_graph


def labeled_edge(label: int = 1, psi: str = "unit") -> gl.DecoratedMultigraph:
    """A psi-edge from a vertex carrying ``label`` to an unlabeled vertex."""
    return gl.DecoratedMultigraph(2, ((0, 1, psi, 1),), {0: label})


def test_normal_form_sorts_and_merges():
    F = gl.DecoratedMultigraph(3, ((2, 0, "b", 1), (0, 2, "b", 2), (1, 0, "a", 1)))
    assert F.edges == ((0, 1, "a", 1), (0, 2, "b", 3))


def test_validation():
    with pytest.raises(ValidationError):
        gl.DecoratedMultigraph(2, ((0, 0, "a", 1),))  # self-loop
    with pytest.raises(ValidationError):
        gl.DecoratedMultigraph(2, ((0, 1, "a", 0),))  # zero multiplicity
    with pytest.raises(ValidationError):
        gl.DecoratedMultigraph(2, (), {0: 1, 1: 1})  # non-injective labels
    with pytest.raises(ValidationError):
        gl.DecoratedMultigraph(1, ((0, 1, "a", 1),))  # vertex out of range


def test_product_merges_on_labels_to_a_two_star():
    F = labeled_edge()
    G = gl.product(F, F)
    assert G.n_vertices == 3
    assert G.labels == {0: 1}
    assert G.edges == ((0, 1, "unit", 1), (0, 2, "unit", 1))
    assert G.degree(0) == 2


def test_product_with_empty_graph_is_identity():
    F = rand_graph(np.random.default_rng(0), n_labels=1)
    assert gl.product(F, gl.empty_graph()) == F
    assert gl.product(gl.empty_graph(), F) == F


def test_product_commutative_up_to_isomorphism():
    rng = np.random.default_rng(1)
    for _ in range(20):
        F1 = rand_graph(rng, n_labels=int(rng.integers(0, 3)))
        F2 = rand_graph(rng, n_labels=int(rng.integers(0, 3)))
        assert gl.canonical_key(gl.product(F1, F2)) == gl.canonical_key(gl.product(F2, F1))


def test_product_associative_up_to_isomorphism():
    rng = np.random.default_rng(2)
    for _ in range(15):
        F1, F2, F3 = (rand_graph(rng, max_vertices=4, n_labels=1) for _ in range(3))
        lhs = gl.product(gl.product(F1, F2), F3)
        rhs = gl.product(F1, gl.product(F2, F3))
        assert gl.canonical_key(lhs) == gl.canonical_key(rhs)


def test_power_examples():
    F = labeled_edge()
    assert gl.power(F, 1) == F
    star = gl.power(F, 3)
    assert star.n_vertices == 4
    assert all(star.degree(v) == 1 for v in range(1, 4))
    assert star.degree(0) == 3
    skeleton = gl.power(F, 0)
    assert skeleton.n_vertices == 1
    assert skeleton.edges == ()
    assert skeleton.labels == {0: 1}
    assert gl.power(gl.edge_graph(), 0) == gl.empty_graph()


def test_power_zero_is_product_identity():
    F = rand_graph(np.random.default_rng(3), n_labels=2)
    assert gl.canonical_key(gl.product(gl.power(F, 0), F)) == gl.canonical_key(F)


def test_unlabel_and_relabel_roundtrip():
    F = gl.DecoratedMultigraph(2, ((0, 1, "a", 1),), {0: 1, 1: 2})
    G = gl.unlabel(F, 2)
    assert G.labels == {0: 1}
    assert gl.relabel(G, 1, 2) == F
    with pytest.raises(ValidationError):
        gl.unlabel(G, 7)


def test_unlabel_restores_fstar_flag():
    F = gl.DecoratedMultigraph(2, ((0, 1, "a", 1),), {0: 1, 1: 2})
    assert not gl.fstar_flag(F).holds
    assert gl.fstar_flag(gl.unlabel(F, 2)).holds


def test_fstar_preserved_by_product():
    rng = np.random.default_rng(4)
    checked = 0
    while checked < 10:
        F1 = rand_graph(rng, n_labels=2)
        F2 = rand_graph(rng, n_labels=2)
        if gl.fstar_flag(F1).holds and gl.fstar_flag(F2).holds:
            assert gl.fstar_flag(gl.product(F1, F2)).holds
            checked += 1


def test_add_path_examples():
    e = gl.edge_graph("a")
    double = gl.add_path(e, 0, 1, 1, "a")
    assert double.edges == ((0, 1, "a", 2),)
    two = gl.add_path(e, 0, 1, 2, "a")
    assert two.n_vertices == 3
    assert two.degree(2) == 2
    k = 4
    G = gl.add_path(e, 0, 1, k, "a")
    assert G.n_vertices == e.n_vertices + k - 1
    assert G.n_edges == e.n_edges + k
    with pytest.raises(ValidationError):
        gl.add_path(e, 0, 0, 2, "a")


def test_remove_one_edge():
    F = gl.edge_graph("a", multiplicity=2)
    G = gl.graphs.remove_one_edge(F, 0, 1, "a")
    assert G.edges == ((0, 1, "a", 1),)
    H = gl.graphs.remove_one_edge(G, 1, 0, "a")
    assert H.edges == ()
    with pytest.raises(ValidationError):
        gl.graphs.remove_one_edge(H, 0, 1, "a")


def test_canonical_form_idempotent():
    rng = np.random.default_rng(5)
    for _ in range(25):
        F = rand_graph(rng, n_labels=int(rng.integers(0, 2)))
        C = gl.canonical_form(F)
        assert gl.canonical_form(C) == C


def test_canonical_detects_isomorphism():
    # same 4-cycle drawn with two different vertex orders
    C1 = gl.cycle_graph(4, "a")
    C2 = gl.DecoratedMultigraph(4, ((0, 2, "a", 1), (2, 1, "a", 1), (1, 3, "a", 1), (3, 0, "a", 1)))
    assert gl.is_isomorphic(C1, C2)
    # decoration must match
    C3 = gl.DecoratedMultigraph(4, ((0, 1, "a", 1), (1, 2, "a", 1), (2, 3, "a", 1), (0, 3, "b", 1)))
    assert not gl.is_isomorphic(C1, C3)
    # a path of equal size is not a cycle
    assert not gl.is_isomorphic(C1, gl.path_graph(3, "a"))


def test_canonical_respects_labels():
    F1 = gl.DecoratedMultigraph(2, ((0, 1, "a", 1),), {0: 1})
    F2 = gl.DecoratedMultigraph(2, ((0, 1, "a", 1),), {1: 1})
    assert gl.is_isomorphic(F1, F2)
    F3 = gl.DecoratedMultigraph(2, ((0, 1, "a", 1),), {1: 2})
    assert not gl.is_isomorphic(F1, F3)


def test_canonical_separates_wl_equivalent_graphs():
    # C6 and two disjoint triangles share every degree signature; only the
    # brute-force tie refinement tells them apart
    c6 = gl.cycle_graph(6, "a")
    two_triangles = gl.product(gl.cycle_graph(3, "a"), gl.cycle_graph(3, "a"))
    assert not gl.is_isomorphic(c6, two_triangles)
    shifted = gl.DecoratedMultigraph(
        6, tuple((i, (i + 1) % 6, "a", 1) for i in (2, 3, 4, 5, 0, 1))
    )
    assert gl.is_isomorphic(c6, shifted)


def test_canonical_highly_symmetric():
    # interchangeable leaves skip the permutation budget entirely
    big_star = gl.star_graph(9)
    assert gl.canonical_form(big_star).n_vertices == 10
    assert gl.is_isomorphic(big_star, gl.star_graph(9))


def test_degree_counts_multiplicity():
    F = gl.edge_graph("a", multiplicity=3)
    assert F.degree(0) == 3
    assert F.max_degree == 3
    assert F.n_edges == 3
