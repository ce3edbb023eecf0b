import itertools

import numpy as np
from hypothesis import given, settings

from consensus_tf.graph import build_graph, laplacian
from consensus_tf.instances import undirected_path
from consensus_tf.spectral import (
    char_poly,
    faddeev_leverrier,
    laplacian_eigenvalues,
    laplacian_power_entry,
    matrix_rank,
    negated_roots,
)
from consensus_tf.graph import hop_distance, enumerate_simple_paths, path_weight
from consensus_tf.poly import Polynomial

from conftest import brute_forests, brute_set_weight, cofactor_poly, digraphs


def test_five_node_char_poly(five_node):
    g = char_poly(laplacian(five_node))
    np.testing.assert_allclose(g.coeffs[1:], [7.9, 29.05, 26.15, 8.8, 1], rtol=1e-12)
    assert abs(g.coeffs[0]) < 1e-12


def test_five_node_eigenvalues(five_node):
    lam = laplacian_eigenvalues(laplacian(five_node))
    assert lam[0] == 0
    np.testing.assert_allclose(lam.real, [0, 0.39397, 2, 2.72024, 3.68580], atol=5e-5)
    assert not lam.imag.any()


def test_path_graph_eigenvalues():
    lam = laplacian_eigenvalues(laplacian(undirected_path(3)))
    np.testing.assert_allclose(lam.real, [0, 1, 3], atol=1e-12)


def test_edgeless_and_single():
    assert char_poly(np.zeros((3, 3))).tolist() == [0, 0, 0, 1]
    assert list(laplacian_eigenvalues(np.zeros((3, 3)))) == [0, 0, 0]
    assert char_poly(np.zeros((0, 0))).tolist() == [1]
    fl = faddeev_leverrier(np.zeros((1, 1)))
    np.testing.assert_array_equal(fl.q_matrices[0], [[1.0]])


def test_negated_roots_deflation():
    p = Polynomial([1e-14, 1, 1])  # numerically s(s+1)
    np.testing.assert_array_equal(negated_roots(p), [0, 1])
    np.testing.assert_allclose(negated_roots(Polynomial([2, 3, 1])), [1, 2])


@settings(max_examples=60, deadline=None)
@given(digraphs(max_n=6))
def test_char_poly_matches_numpy_and_forests(g):
    L = laplacian(g)
    c = char_poly(L).coeffs
    np.testing.assert_allclose(c[::-1], np.poly(-L), atol=1e-8 * (1 + np.abs(c).max()))
    for i in range(g.n + 1):
        brute = sum(np.prod([g.weight(u, v) for u, v in s]) if s else 1.0
                    for s, _ in brute_forests(g, g.n - i))
        assert abs(c[i] - brute) <= 1e-9 * max(1, abs(brute))


@settings(max_examples=40, deadline=None)
@given(digraphs(max_n=5))
def test_adjugate_series_matches_cofactors_and_forests(g):
    L = laplacian(g)
    fl = faddeev_leverrier(L)
    np.testing.assert_array_equal(fl.q_matrices[0], np.eye(g.n))
    for o, c in itertools.product(g.nodes, repeat=2):
        h = fl.adjugate_entry(o, c).coeffs
        h = np.pad(h, (0, g.n - len(h)))
        ref = cofactor_poly(L, o, c)
        assert np.max(np.abs(h - ref)) <= 1e-7 * (1 + np.abs(ref).max())
    for k in range(g.n):
        Q = fl.q_matrices[k]
        for i, j in itertools.product(g.nodes, repeat=2):
            w = brute_set_weight(g, k, j, i)
            assert abs(Q[i - 1, j - 1] - w) <= 1e-9 * max(1, abs(w))


def test_forest_graph_forest_entry(forest_graph):
    fl = faddeev_leverrier(laplacian(forest_graph))
    assert abs(fl.q_matrices[3][2, 0] - 0.552) <= 1e-12


@settings(max_examples=60, deadline=None)
@given(digraphs(max_n=6))
def test_power_pattern(g):
    """Entries of (-L)^m vanish below the hop distance and equal the
    shortest-path weight sum at it."""
    L = laplacian(g)
    for i, j in itertools.permutations(g.nodes, 2):
        d = hop_distance(g, j, i)
        top = g.n if d == float("inf") else int(d)
        for m in range(min(top, g.n)):
            assert abs(laplacian_power_entry(-L, m, i, j)) <= 1e-12 * (1 + np.abs(L).max()) ** m
        if top < g.n:
            theta = sum(path_weight(g, p) for p in enumerate_simple_paths(g, j, i)
                        if p.length == top)
            val = laplacian_power_entry(-L, top, i, j)
            assert abs(val - theta) <= 1e-9 * max(1, theta)


@settings(max_examples=60, deadline=None)
@given(digraphs(max_n=6))
def test_spectrum_properties(g):
    L = laplacian(g)
    lam = laplacian_eigenvalues(L)
    assert np.min(np.abs(lam)) <= 1e-6 * (1 + np.abs(L).max())
    assert np.all(lam.real >= -1e-6)
    np.testing.assert_allclose(np.sum(lam).real, np.trace(L), atol=1e-7 * (1 + np.trace(L)))
    ref = np.linalg.eigvals(L)
    key = lambda z: (round(z.real, 4), round(z.imag, 4))
    # defective eigenvalues make both routes inaccurate; compare loosely via
    # symmetric functions, tightly when the eigenvalues are well separated
    gaps = [abs(a - b) for a, b in itertools.combinations(ref, 2)]
    if not gaps or min(gaps) > 1e-2:
        np.testing.assert_allclose(sorted(lam, key=key), sorted(ref, key=key), atol=1e-7)


@given(digraphs(min_n=2, max_n=6, weights=False))
def test_symmetric_spectrum_real(g):
    arcs = {(u, v) for u, v, _ in g.arcs} | {(v, u) for u, v, _ in g.arcs}
    sym = build_graph(g.n, sorted(arcs))
    L = laplacian(sym)
    lam = laplacian_eigenvalues(L)
    # a root of multiplicity m is only resolved to about eps**(1/m)
    ref = np.linalg.eigvalsh(L)
    mult = max(np.sum(np.abs(ref - x) < 1e-9) for x in ref)
    tol = 10 * 1e-15 ** (1 / mult) * (1 + ref.max())
    np.testing.assert_allclose(np.sort(lam.real), ref, atol=tol)
    assert np.all(np.abs(lam.imag) <= tol)


def test_matrix_rank():
    assert matrix_rank(np.eye(3)) == 3
    assert matrix_rank(np.zeros((2, 2))) == 0
    assert matrix_rank(np.array([[1, 2], [2, 4]])) == 1
