"""Polynomials and rational functions in the Laplace variable ``s``.

Coefficients are stored in ascending powers: ``coeffs[i]`` multiplies ``s**i``.
That convention holds for storage, JSON and the CLI. Coefficients are real
unless a complex feedback gain was folded in (see :func:`closed_loop_factor`).
No operation in this module cancels common factors implicitly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PolynomialError


def _trim(c: np.ndarray) -> np.ndarray:
    n = len(c)
    while n > 1 and c[n - 1] == 0:
        n -= 1
    if n == 0:
        return np.zeros(1)
    return c[:n]


class Polynomial:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs=(0.0,)):
        c = np.atleast_1d(np.asarray(coeffs))
        if c.dtype.kind not in "fc":
            c = c.astype(float)
        self.coeffs = _trim(c.copy())
        self.coeffs.setflags(write=False)

    @classmethod
    def from_roots(cls, roots, lead=1.0) -> "Polynomial":
        p = cls([lead])
        for r in roots:
            p = p * cls([-r, 1.0])
        return p

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return -1 if self.is_zero() else len(self.coeffs) - 1

    @property
    def lead(self):
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 0

    def is_real(self) -> bool:
        return self.coeffs.dtype.kind == "f"

    def real(self, tol: float = 1e-9) -> "Polynomial":
        """Drop imaginary parts, checking they are at most ``tol * max|c|``."""
        if self.is_real():
            return self
        scale = max(1.0, float(np.max(np.abs(self.coeffs))))
        resid = float(np.max(np.abs(self.coeffs.imag)))
        if resid > tol * scale:
            raise PolynomialError(f"imaginary residue {resid:.3g} exceeds tolerance")
        return Polynomial(self.coeffs.real)

    def conj(self) -> "Polynomial":
        return Polynomial(np.conj(self.coeffs))

    def __call__(self, s):
        return poly_eval(self, s)

    def __add__(self, other):
        return poly_add(self, _as_poly(other))

    __radd__ = __add__

    def __neg__(self):
        return poly_scale(self, -1.0)

    def __sub__(self, other):
        return poly_add(self, -_as_poly(other))

    def __rsub__(self, other):
        return poly_add(_as_poly(other), -self)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return poly_mul(self, other)
        return poly_scale(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Polynomial([1.0])
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash(tuple(self.coeffs.tolist()))

    def allclose(self, other: "Polynomial", rtol=1e-9, atol=0.0) -> bool:
        a, b = self.coeffs, _as_poly(other).coeffs
        n = max(len(a), len(b))
        a = np.pad(a, (0, n - len(a)))
        b = np.pad(b, (0, n - len(b)))
        scale = max(np.max(np.abs(a)), np.max(np.abs(b)), 1e-300)
        return bool(np.max(np.abs(a - b)) <= atol + rtol * scale)

    def tolist(self):
        return self.coeffs.tolist()

    def __repr__(self):
        return f"Polynomial({self.coeffs.tolist()})"


def _as_poly(x) -> Polynomial:
    return x if isinstance(x, Polynomial) else Polynomial([x])


def poly_add(p: Polynomial, q: Polynomial) -> Polynomial:
    a, b = p.coeffs, q.coeffs
    if len(a) < len(b):
        a, b = b, a
    out = a.astype(np.result_type(a, b)).copy()
    out[: len(b)] += b
    return Polynomial(out)


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    if p.is_zero() or q.is_zero():
        return Polynomial([0.0])
    return Polynomial(np.convolve(p.coeffs, q.coeffs))


def poly_scale(p: Polynomial, alpha) -> Polynomial:
    if alpha == 0:
        return Polynomial([0.0])
    return Polynomial(p.coeffs * alpha)


def poly_eval(p: Polynomial, s):
    """Horner evaluation; ``s`` may be a scalar or an array."""
    s = np.asarray(s)
    acc = np.zeros_like(s, dtype=np.result_type(s, p.coeffs, float))
    for c in p.coeffs[::-1]:
        acc = acc * s + c
    return acc[()] if acc.ndim == 0 else acc


def poly_divmod(p: Polynomial, d: Polynomial) -> tuple[Polynomial, Polynomial]:
    """Long division ``p = q*d + r`` with ``deg r < deg d``."""
    if d.is_zero():
        raise PolynomialError("division by the zero polynomial")
    r = p.coeffs.astype(np.result_type(p.coeffs, d.coeffs)).copy()
    dc = d.coeffs
    nd = len(dc) - 1
    if len(r) - 1 < nd:
        return Polynomial([0.0]), Polynomial(r)
    q = np.zeros(len(r) - nd, dtype=r.dtype)
    for i in range(len(r) - 1, nd - 1, -1):
        c = r[i] / dc[-1]
        q[i - nd] = c
        r[i - nd: i + 1] -= c * dc
    return Polynomial(q), Polynomial(r[:nd] if nd else [0.0])


def companion_matrix(p: Polynomial) -> np.ndarray:
    c = p.coeffs
    n = len(c) - 1
    C = np.zeros((n, n), dtype=c.dtype)
    C[1:, :-1] = np.eye(n - 1)
    C[:, -1] = -c[:-1] / c[-1]
    return C


def poly_roots(p: Polynomial, tol: float = 1e-9) -> np.ndarray:
    """All roots with multiplicity, sorted by (real, imag).

    Exact zero low-order coefficients become exact zero roots; the rest come
    from the eigenvalues of the companion matrix (LAPACK balances it first).
    Roots failing ``|p(r)| <= tol*(1+||p||)`` get a few Newton polishing steps.
    """
    if p.is_zero():
        raise PolynomialError("the zero polynomial has no finite root set")
    c = p.coeffs
    zeros = 0
    while c[zeros] == 0:
        zeros += 1
    core = Polynomial(c[zeros:])
    if core.degree >= 1:
        roots = np.linalg.eigvals(companion_matrix(core))
    else:
        roots = np.zeros(0, dtype=complex)
    roots = np.concatenate([np.zeros(zeros, dtype=complex), roots.astype(complex)])
    bound = tol * (1.0 + np.linalg.norm(c))
    dp = poly_derivative(p)
    for idx, r in enumerate(roots):
        for _ in range(3):
            val = poly_eval(p, r)
            if abs(val) <= bound:
                break
            slope = poly_eval(dp, r)
            if slope == 0:
                break
            candidate = r - val / slope
            if abs(poly_eval(p, candidate)) >= abs(val):
                break
            r = candidate
        roots[idx] = r
    return np.array(sorted(roots, key=lambda z: (z.real, z.imag)))


def poly_derivative(p: Polynomial) -> Polynomial:
    c = p.coeffs
    if len(c) == 1:
        return Polynomial([0.0])
    return Polynomial(c[1:] * np.arange(1, len(c)))


def closed_loop_factor(psi: Polynomial, phi: Polynomial, k) -> Polynomial:
    """``psi + k*phi``: characteristic polynomial of an output-feedback loop
    with open loop ``phi/psi`` and gain ``k`` (complex ``k`` allowed)."""
    if isinstance(k, complex) or np.iscomplexobj(k):
        k = complex(k)
        if k.imag == 0:
            k = k.real
    return poly_add(psi, poly_scale(phi, k))


@dataclass(frozen=True)
class RationalFunction:
    num: Polynomial
    den: Polynomial

    def __post_init__(self):
        if not isinstance(self.num, Polynomial):
            object.__setattr__(self, "num", Polynomial(self.num))
        if not isinstance(self.den, Polynomial):
            object.__setattr__(self, "den", Polynomial(self.den))
        if self.den.is_zero():
            raise PolynomialError("rational function with zero denominator")

    def __call__(self, s):
        return poly_eval(self.num, s) / poly_eval(self.den, s)

    def __mul__(self, other):
        if isinstance(other, RationalFunction):
            return RationalFunction(self.num * other.num, self.den * other.den)
        return RationalFunction(self.num * other, self.den)

    __rmul__ = __mul__

    @property
    def relative_degree(self) -> int:
        return rational_relative_degree(self)

    def to_dict(self) -> dict:
        return {"num": self.num.real().tolist(), "den": self.den.real().tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "RationalFunction":
        return cls(Polynomial(d["num"]), Polynomial(d["den"]))


def rational_relative_degree(r: RationalFunction) -> int:
    if r.num.is_zero():
        raise PolynomialError("relative degree undefined for a zero numerator")
    return r.den.degree - r.num.degree
