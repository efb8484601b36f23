"""Quotients, twins, anchored graphons and regularity."""
import math

import numpy as np
import pytest

import graphonlab as gl
from graphonlab.errors import ValidationError

from conftest import (
    duplicate_class,
    graph_suite,
    graphons_close,
    graphons_close_upto_permutation,
    rand_graphon,
    rand_partition,
    rand_twin_free_graphon,
    scalar_graphon,
)


def test_quotient_identity_is_exact(w2):
    Q = gl.quotient(w2, gl.identity_partition(2))
    assert Q.masses == w2.masses
    assert Q.blocks == w2.blocks


def test_quotient_full_merge_is_global_mean(w2):
    Q = gl.quotient(w2, gl.Partition((0, 0)))
    assert Q.q == 1
    assert Q.masses == (1.0,)
    # oracle: mass-weighted mean of the four scalar blocks
    mean = sum(0.25 * x for x in (1.0, 2.0, 2.0, 3.0))
    assert gl.tv_distance(Q.blocks[0][0], gl.scalar_measure(mean)) <= 1e-14


def test_quotient_requires_surjective_and_matching_size(w2):
    with pytest.raises(ValidationError) as e:
        gl.Partition((0, 2))  # misses class 1
    assert e.value.code == "non-surjective"
    with pytest.raises(ValidationError):
        gl.quotient(w2, gl.Partition((0, 1, 2)))


def test_quotient_composition():
    rng = np.random.default_rng(20)
    for _ in range(15):
        W = rand_graphon(rng, int(rng.integers(2, 6)))
        P1 = rand_partition(rng, W.q)
        P2 = rand_partition(rng, P1.n_classes)
        two_step = gl.quotient(gl.quotient(W, P1), P2)
        one_step = gl.quotient(W, P1.compose(P2))
        assert graphons_close(two_step, one_step, tol=1e-12)


def test_norm_contraction_under_quotient():
    rng = np.random.default_rng(21)
    for _ in range(40):
        W = rand_graphon(rng, int(rng.integers(2, 6)))
        P = rand_partition(rng, W.q)
        for p in (1, 2, 4):
            assert gl.p_norm(gl.quotient(W, P), p) <= gl.p_norm(W, p) + 1e-12


def test_twin_partition_groups_identical_rows():
    rng = np.random.default_rng(22)
    W = duplicate_class(rand_graphon(rng, 3), rng, target=1)
    P = gl.twin_partition(W)
    assert P.n_classes == 3
    assert P.class_of[1] == P.class_of[3]  # the duplicate sits at the end


def test_twin_partition_w2_is_discrete(w2):
    # oracle: the two block rows differ in tv distance
    assert gl.tv_distance(w2.blocks[0][0], w2.blocks[1][0]) > 0
    assert gl.twin_partition(w2).n_classes == 2


def test_twin_partition_infinite_tolerance(w2):
    assert gl.twin_partition(w2, tol=math.inf).n_classes == 1


def test_twin_reduce_duplicate_masses():
    # two identical classes of mass .25 merge into one of mass .5
    W = scalar_graphon((0.25, 0.25, 0.5), [[1, 1, 2], [1, 1, 2], [2, 2, 3]])
    R = gl.twin_reduce(W)
    assert R.q == 2
    assert R.masses == (0.5, 0.5)


def test_twin_reduce_preserves_densities():
    rng = np.random.default_rng(23)
    for _ in range(8):
        W = rand_graphon(rng, int(rng.integers(2, 4)))
        for _ in range(int(rng.integers(1, 3))):
            W = duplicate_class(W, rng)
        R = gl.twin_reduce(W)
        assert R.q < W.q
        for psi in ("unit", "e0", "e1"):
            for F in graph_suite(psi):
                a = gl.density(F, W)
                b = gl.density(F, R)
                assert abs(a - b) <= 1e-10 * max(1.0, abs(a))


def test_twin_reduce_idempotent_and_certified():
    rng = np.random.default_rng(24)
    for _ in range(10):
        W = duplicate_class(rand_graphon(rng, 3), rng)
        R = gl.twin_reduce(W)
        assert gl.twin_partition(R).n_classes == R.q  # twin-free certificate
        R2 = gl.twin_reduce(R)
        assert R2.masses == R.masses and R2.blocks == R.blocks


def test_merging_twins_keeps_kernel_rows():
    rng = np.random.default_rng(25)
    W = rand_graphon(rng, 3)
    dup = duplicate_class(W, rng, target=0)
    R = gl.twin_reduce(dup)
    for psi in W.functionals:
        K = gl.kernel_matrix(W, psi)
        KR = gl.kernel_matrix(R, psi)
        assert np.allclose(np.sort(K, axis=None), np.sort(KR, axis=None), atol=1e-10)


def test_anchored_w2_single_anchor(w2):
    fm, G = gl.anchored_graphon(w2, [0], ["unit"])
    assert fm.features.tolist() == [[1.0], [2.0]]
    assert G.q == 2  # nothing merged


def test_anchored_zero_functionals(w2):
    fm, G = gl.anchored_graphon(w2, [0], [])
    assert G.q == 1
    assert G.masses == (1.0,)


def test_anchored_matches_twin_reduce():
    rng = np.random.default_rng(26)
    for _ in range(8):
        W = duplicate_class(rand_twin_free_graphon(rng, 3), rng)
        anchors = list(range(W.q))
        fm, G = gl.anchored_graphon(W, anchors, sorted(W.functionals))
        R = gl.twin_reduce(W)
        assert graphons_close_upto_permutation(G, R, tol=1e-10)


def test_anchored_lexicographic_class_order():
    rng = np.random.default_rng(27)
    W = rand_twin_free_graphon(rng, 4)
    fm, G = gl.anchored_graphon(W, list(range(W.q)), sorted(W.functionals))
    rows = sorted(fm.rounded_rows())
    P = fm.induced_partition()
    # class k of the quotient corresponds to the k-th smallest feature row
    for i in range(W.q):
        assert rows[P.class_of[i]] == fm.rounded_rows()[i]


def test_regularity_full_information():
    rng = np.random.default_rng(28)
    W = rand_twin_free_graphon(rng, 4)
    assert gl.regularity_check(W, list(range(W.q)), sorted(W.functionals))


def test_regularity_no_functionals_fails(w2):
    assert not gl.regularity_check(w2, [0, 1], [])


def test_regularity_random_anchor_frequency():
    rng = np.random.default_rng(29)
    W = rand_twin_free_graphon(rng, 4)
    psis = sorted(W.functionals)
    hits = 0
    for seed in range(500):
        anchors = gl.sample_anchors(W, W.q, seed)
        if gl.regularity_check(W, anchors, psis):
            hits += 1
    assert hits >= 495  # observed frequency at least 0.99


def test_sample_anchors_single_class():
    W = scalar_graphon((1.0,), [[1.0]])
    assert gl.sample_anchors(W, 10, 3) == [0] * 10


def test_sample_anchors_deterministic(w2):
    assert gl.sample_anchors(w2, 50, 8) == gl.sample_anchors(w2, 50, 8)


def test_sample_anchors_frequencies():
    W = scalar_graphon((0.3, 0.7), [[1, 1], [1, 1]])
    n = 100_000
    draws = gl.sample_anchors(W, n, 123)
    for cls, p in ((0, 0.3), (1, 0.7)):
        freq = draws.count(cls) / n
        assert abs(freq - p) <= 4 * math.sqrt(p * (1 - p) / n)
