"""Characteristic polynomial and adjugate series of ``sI + L``.

``faddeev_leverrier`` returns ``g(s) = det(sI + L)`` together with matrices
``Q_0 .. Q_{N-1}`` such that ``adj(sI + L) = sum_k Q_k s**(N-k-1)``. For a
Laplacian, ``(Q_k)[i, j]`` is the weight of all k-arc spanning out-forests in
which node i+1 hangs off the tree rooted at node j+1, and ``g_i`` is the
weight of all (N-i)-arc spanning out-forests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .poly import Polynomial, poly_roots

ZERO_TOL = 1e-10
RANK_TOL = 1e-8


@dataclass(frozen=True)
class ForestSeries:
    char_poly: Polynomial
    q_matrices: tuple[np.ndarray, ...]

    @property
    def n(self) -> int:
        return len(self.q_matrices)

    def gamma(self, i: int) -> np.ndarray:
        """Coefficient matrix of ``s**i`` in ``adj(sI + L)``."""
        return self.q_matrices[self.n - i - 1]

    def adjugate_entry(self, o: int, c: int) -> Polynomial:
        """``e_o^T adj(sI + L) e_c`` as a polynomial (1-based o, c)."""
        return self.adjugate_combination(o, [c])

    def adjugate_combination(self, o: int, controls) -> Polynomial:
        cols = [c - 1 for c in controls]
        return Polynomial([self.gamma(i)[o - 1, cols].sum() for i in range(self.n)])


def faddeev_leverrier(L) -> ForestSeries:
    L = np.asarray(L, dtype=float)
    n = L.shape[0]
    if L.shape != (n, n):
        raise ValueError(f"square matrix required, got shape {L.shape}")
    if n == 0:
        return ForestSeries(Polynomial([1.0]), ())
    X = -L
    eye = np.eye(n)
    coeffs = np.zeros(n + 1)
    coeffs[n] = 1.0
    Q = []
    M = np.zeros((n, n))
    for k in range(1, n + 1):
        M = X @ M + coeffs[n - k + 1] * eye
        Q.append(M)
        coeffs[n - k] = -np.trace(X @ M) / k
    return ForestSeries(Polynomial(coeffs), tuple(Q))


def char_poly(M) -> Polynomial:
    """``det(sI + M)``; the empty matrix gives the constant 1."""
    return faddeev_leverrier(M).char_poly


def negated_roots(p: Polynomial, zero_tol: float = ZERO_TOL) -> np.ndarray:
    """Gains ``k`` with ``p(-k) = 0``.

    Low-order coefficients with ``|c_i| <= zero_tol * max|c|`` are treated as
    structural zeros and produce exact zero gains. Sorted by (real, imag).
    """
    c = np.array(p.coeffs)
    scale = np.max(np.abs(c))
    zeros = 0
    while zeros < len(c) - 1 and abs(c[zeros]) <= zero_tol * scale:
        zeros += 1
    rest = poly_roots(Polynomial(c[zeros:])) if len(c) - zeros > 1 else np.zeros(0)
    gains = np.concatenate([np.zeros(zeros, dtype=complex), -np.asarray(rest, dtype=complex)])
    gains = gains + 0.0  # normalise -0.0 parts
    return np.array(sorted(gains, key=lambda z: (z.real, z.imag)))


def laplacian_eigenvalues(L, tol: float = ZERO_TOL) -> np.ndarray:
    """Eigenvalues of L as negated roots of ``det(sI + L)``."""
    L = np.asarray(L, dtype=float)
    if not L.size:
        return np.zeros(0, dtype=complex)
    return negated_roots(char_poly(L), tol)


def laplacian_power_entry(L, m: int, o: int, c: int) -> float:
    """``(L**m)[o, c]`` with 1-based node labels."""
    if m < 0:
        raise ValueError("power must be nonnegative")
    return float(np.linalg.matrix_power(np.asarray(L, dtype=float), m)[o - 1, c - 1])


def matrix_rank(M, tol: float = RANK_TOL) -> int:
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if not M.size:
        return 0
    sv = np.linalg.svd(M, compute_uv=False)
    if sv[0] == 0:
        return 0
    return int(np.sum(sv > tol * sv[0]))
