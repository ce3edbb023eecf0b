"""Independent oracles used to check the polynomial route.

* :func:`resolvent_tf_eval` solves ``(I + M(s) L) y = M(s) e_c`` directly.
* :func:`eigensum_identity_check` uses an explicit eigendecomposition of L.
* :func:`brute_force_char_coeffs` rebuilds ``det(sI + L)`` from forest counts.

None of these touch :mod:`consensus_tf.spectral`'s Faddeev-LeVerrier series.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import SamplingError, SingularPointError
from .graph import WeightedDigraph, iter_out_forests, laplacian
from .poly import Polynomial, RationalFunction, poly_eval

DEFAULT_SEED = 20150123
CONDITION_LIMIT = 1e8


def resolvent_tf_eval(g: WeightedDigraph, c: int, o: int, M: RationalFunction, s,
                      L=None, method: str = "solve") -> complex:
    """``e_o^T (I + M(s) L)^{-1} e_c M(s)``."""
    if L is None:
        L = laplacian(g)
    n = L.shape[0]
    den = complex(poly_eval(M.den, s))
    if den == 0:
        raise SingularPointError(f"open loop has a pole at s={s}")
    m = complex(poly_eval(M.num, s)) / den
    A = np.eye(n, dtype=complex) + m * L
    rhs = np.zeros(n, dtype=complex)
    rhs[c - 1] = m
    try:
        if method == "solve":
            y = np.linalg.solve(A, rhs)
        elif method == "inverse":
            y = np.linalg.inv(A) @ rhs
        else:
            raise ValueError(f"unknown method {method!r}")
        cond = np.linalg.cond(A)
    except np.linalg.LinAlgError as exc:
        raise SingularPointError(f"I + M(s)L singular at s={s}") from exc
    if not cond <= 1e14:
        raise SingularPointError(f"I + M(s)L ill-conditioned at s={s}")
    return complex(y[o - 1])


@dataclass
class Sample:
    s: complex
    candidate: complex
    oracle: complex
    rel_err: float


@dataclass
class ComparisonReport:
    samples: list[Sample] = field(default_factory=list)
    tol: float = 1e-8
    seed: int = DEFAULT_SEED
    status: str = "checked"

    @property
    def max_err(self) -> float:
        return max((x.rel_err for x in self.samples), default=0.0)

    @property
    def passed(self) -> bool:
        if self.status != "checked":
            return self.status.startswith("skipped")
        return self.max_err <= self.tol

    def to_dict(self) -> dict:
        def pair(z):
            return [float(np.real(z)), float(np.imag(z))]

        out = {
            "samples": [{"s": pair(x.s), "candidate": pair(x.candidate),
                         "oracle": pair(x.oracle), "rel_err": x.rel_err}
                        for x in self.samples],
            "max_err": self.max_err,
            "pass": self.passed,
            "seed": self.seed,
        }
        if self.status != "checked":
            out["status"] = self.status
        return out


def sample_points(n: int, seed: int = DEFAULT_SEED, r_min=0.5, r_max=2.0) -> np.ndarray:
    """Points on the annulus r_min <= |s| <= r_max, none on the real axis."""
    rng = np.random.default_rng(seed)
    r = rng.uniform(r_min, r_max, n)
    theta = rng.uniform(0.05, np.pi - 0.05, n) * rng.choice([-1, 1], n)
    return r * np.exp(1j * theta)


def _near_root(p: Polynomial, s) -> bool:
    c = np.abs(p.coeffs)
    scale = float(np.sum(c * np.abs(s) ** np.arange(len(c))))
    return abs(poly_eval(p, s)) < 1e-6 * scale


def compare_tf(candidate, g: WeightedDigraph, c: int, o: int, M: RationalFunction,
               n_samples: int = 20, tol: float = 1e-8, seed: int = DEFAULT_SEED,
               L=None, max_draws: int = 50) -> ComparisonReport:
    """Evaluate ``candidate`` (a RationalFunction or a callable) against the
    resolvent oracle at ``n_samples`` accepted random points."""
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    if isinstance(candidate, RationalFunction):
        den = candidate.den
        evaluate = candidate
    else:
        den = None
        evaluate = candidate
    report = ComparisonReport(tol=tol, seed=seed)
    points = sample_points(n_samples * max_draws, seed)
    for s in points:
        if len(report.samples) == n_samples:
            break
        if (den is not None and _near_root(den, s)) or _near_root(M.den, s):
            continue
        try:
            ref = resolvent_tf_eval(g, c, o, M, s, L=L)
        except SingularPointError:
            continue
        val = complex(evaluate(s))
        err = abs(val - ref) / abs(ref) if ref != 0 else abs(val)
        report.samples.append(Sample(complex(s), val, ref, float(err)))
    if not report.samples:
        raise SamplingError("every sample point was rejected as near-singular")
    return report


@dataclass
class EigenDecomposition:
    vectors: np.ndarray
    values: np.ndarray
    inverse: np.ndarray
    condition: float


def eigendecomposition(L) -> EigenDecomposition:
    values, V = np.linalg.eig(np.asarray(L, dtype=float))
    cond = float(np.linalg.cond(V))
    inv = np.linalg.inv(V) if np.isfinite(cond) and cond < 1e15 else np.full_like(V, np.nan)
    return EigenDecomposition(V, values, inv, cond)


@dataclass
class IdentityReport:
    status: str
    max_err: float = 0.0
    tol: float = 1e-7
    checked: int = 0
    condition: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status.startswith("skipped") or self.max_err <= self.tol

    def to_dict(self) -> dict:
        return asdict(self) | {"pass": self.passed}


def eigensum_identity_check(g: WeightedDigraph, c: int | None = None, o: int | None = None,
                            k_max: int | None = None, tol: float = 1e-7,
                            L=None) -> IdentityReport:
    """Check ``sum_i rho_i v_{oi} lambda_i**k == (L**k)[o, c]`` with
    ``rho_i = (V^{-1})[i, c]``, for k = 0..k_max and all pairs unless given.

    Errors are relative to ``max(1, ||L**k||)``. Skipped (not failed) when the
    eigenvector matrix is too ill-conditioned for the identity to mean much.
    """
    if L is None:
        L = laplacian(g)
    n = L.shape[0]
    if k_max is None:
        k_max = n
    ed = eigendecomposition(L)
    if not ed.condition <= CONDITION_LIMIT:
        return IdentityReport("skipped: ill-conditioned V", tol=tol, condition=ed.condition)
    pairs = [(o, c)] if o is not None and c is not None else [
        (i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    worst = 0.0
    checked = 0
    P = np.eye(n)
    for k in range(k_max + 1):
        lam_k = ed.values ** k
        scale = max(1.0, float(np.max(np.abs(P))))
        for oo, cc in pairs:
            lhs = np.sum(ed.inverse[:, cc - 1] * ed.vectors[oo - 1, :] * lam_k)
            worst = max(worst, abs(lhs - P[oo - 1, cc - 1]) / scale)
            checked += 1
        P = P @ L
    return IdentityReport("checked", float(worst), tol, checked, ed.condition)


def brute_force_char_coeffs(g: WeightedDigraph, cap: int | None = None) -> Polynomial:
    """Coefficient of ``s**i`` = total weight of spanning out-forests with N-i arcs."""
    coeffs = np.zeros(g.n + 1)
    for forest in iter_out_forests(g, None, cap):
        coeffs[g.n - len(forest.parent)] += forest.weight(g)
    return Polynomial(coeffs)
