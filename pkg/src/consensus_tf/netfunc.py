"""Transfer functions of consensus networks of identical SISO agents.

Each agent runs the open loop ``M = phi/psi`` with ``phi = b*q`` (plant
numerator times controller numerator) and ``psi = a*p``. Agents are coupled by
relative output feedback through the Laplacian, ``y = M(-L y + e_c r_c)``.

Everything here goes through the single-integrator polynomials
``g(s) = det(sI + L)`` and ``h(s) = adj(sI + L)[o, c]`` and their roots; no
eigenvectors are formed, so repeated Laplacian eigenvalues need no special
handling.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import inf, isinf

import numpy as np

from .errors import (
    IntegratorError,
    ModelError,
    MultipleZeroEigenvalueError,
    NoPathError,
    PairingError,
    PathNotUniqueError,
)
from .graph import (
    DEFAULT_PATH_CAP,
    WeightedDigraph,
    check_node,
    enumerate_simple_paths,
    hop_distance,
    hop_distances_from,
    laplacian,
    path_weight,
    reduced_laplacian,
)
from .poly import Polynomial, RationalFunction, closed_loop_factor
from .spectral import (
    ForestSeries,
    char_poly,
    faddeev_leverrier,
    matrix_rank,
    negated_roots,
)

PAIRING_TOL = 1e-7
ZERO_GAIN_TOL = 1e-8


@dataclass(frozen=True)
class AgentModel:
    plant: RationalFunction
    controller: RationalFunction = field(
        default_factory=lambda: RationalFunction(Polynomial([1.0]), Polynomial([1.0])))

    def __post_init__(self):
        if self.relative_degree < 0:
            raise ModelError("open loop b*q/(a*p) must be proper")

    @property
    def phi(self) -> Polynomial:
        return self.plant.num * self.controller.num

    @property
    def psi(self) -> Polynomial:
        return self.plant.den * self.controller.den

    @property
    def open_loop(self) -> RationalFunction:
        return RationalFunction(self.phi, self.psi)

    @property
    def relative_degree(self) -> int:
        return self.psi.degree - self.phi.degree

    def has_integrator(self, tol: float = 1e-12) -> bool:
        c = self.psi.coeffs
        return abs(c[0]) <= tol * np.max(np.abs(c))

    @classmethod
    def from_dict(cls, d: dict) -> "AgentModel":
        try:
            plant = RationalFunction.from_dict(d["plant"])
            ctrl = d.get("controller")
            controller = (RationalFunction.from_dict(ctrl) if ctrl is not None
                          else RationalFunction(Polynomial([1.0]), Polynomial([1.0])))
        except (KeyError, TypeError) as exc:
            raise ModelError(f"malformed agent model: {exc}") from exc
        if plant.num.is_zero() or controller.num.is_zero():
            raise ModelError("agent numerators must be nonzero")
        return cls(plant, controller)

    def to_dict(self) -> dict:
        return {"plant": self.plant.to_dict(), "controller": self.controller.to_dict()}


def load_agent(path) -> AgentModel:
    with open(path) as fh:
        return AgentModel.from_dict(json.load(fh))


def integrator_agent() -> AgentModel:
    """Single integrator, ``M(s) = 1/s``."""
    return AgentModel(RationalFunction(Polynomial([1.0]), Polynomial([0.0, 1.0])))


@dataclass(frozen=True)
class SingleIntegratorTF:
    numerator: Polynomial
    denominator: Polynomial
    distance: float
    theta: float

    @property
    def monic_numerator(self) -> Polynomial:
        """``h(s) / theta``, whose negated roots are the zero-gains."""
        return self.numerator * (1.0 / self.theta)

    @property
    def reachable(self) -> bool:
        return not isinf(self.distance)


def single_integrator_tf(g: WeightedDigraph, c: int, o: int,
                         series: ForestSeries | None = None) -> SingleIntegratorTF:
    """``h(s)/g(s)`` for ``M = 1/s``; ``h`` is the (o, c) entry of adj(sI + L).

    When ``o`` is unreachable from ``c`` the numerator is the zero polynomial.
    """
    if series is None:
        series = faddeev_leverrier(laplacian(g))
    d = hop_distance(g, c, o)
    h = series.adjugate_entry(o, c)
    if isinf(d):
        return SingleIntegratorTF(Polynomial([0.0]), series.char_poly, d, 0.0)
    top = g.n - d - 1
    coeffs = np.array(h.coeffs[: top + 1])
    # coefficients above N-d-1 vanish structurally (no forest that short)
    return SingleIntegratorTF(Polynomial(coeffs), series.char_poly, d, float(coeffs[top]))


@dataclass(frozen=True)
class ProductFormTF:
    theta: float
    distance: int
    lambda_gains: np.ndarray
    gamma_gains: np.ndarray
    agent: AgentModel

    @property
    def n(self) -> int:
        return len(self.lambda_gains)


def product_form_tf(g: WeightedDigraph, c: int, o: int, agent: AgentModel,
                    series: ForestSeries | None = None) -> ProductFormTF:
    si = single_integrator_tf(g, c, o, series)
    if not si.reachable:
        raise NoPathError(f"no path from node {c} to node {o}")
    lam = negated_roots(si.denominator)
    gam = negated_roots(si.numerator) if si.numerator.degree > 0 else np.zeros(0, complex)
    return ProductFormTF(si.theta, int(si.distance), lam, gam, agent)


def pair_gains(gains, tol: float = PAIRING_TOL) -> list[tuple]:
    """Group gains into real singletons ``(k,)`` and conjugate pairs ``(k, k2)``.

    Pairs are matched greedily to the nearest conjugate; any complex gain left
    without a partner within ``tol * max(1, |k|)`` raises :class:`PairingError`.
    """
    pending = [complex(k) for k in gains]
    groups = []
    while pending:
        k = pending.pop(0)
        scale = tol * max(1.0, abs(k))
        if abs(k.imag) <= scale:
            groups.append((k.real,))
            continue
        if not pending:
            raise PairingError(f"complex gain {k} has no conjugate partner")
        dists = [abs(x - k.conjugate()) for x in pending]
        j = int(np.argmin(dists))
        if dists[j] > scale:
            raise PairingError(f"complex gain {k} has no conjugate partner")
        groups.append((k, pending.pop(j)))
    return groups


def gain_product(psi: Polynomial, phi: Polynomial, gains,
                 tol: float = PAIRING_TOL) -> Polynomial:
    """Real polynomial ``prod_k (psi + k*phi)`` with conjugate pairs merged."""
    out = Polynomial([1.0])
    for grp in pair_gains(gains, tol):
        if len(grp) == 1:
            out = out * closed_loop_factor(psi, phi, grp[0])
        else:
            k1, k2 = grp
            total = (k1 + k2).real
            product = (k1 * k2).real
            out = out * (psi * psi + (psi * phi) * total + (phi * phi) * product)
    return out


def expand_product_form(pf: ProductFormTF) -> RationalFunction:
    phi, psi = pf.agent.phi, pf.agent.psi
    num = (phi ** (1 + pf.distance)) * gain_product(psi, phi, pf.gamma_gains) * pf.theta
    den = gain_product(psi, phi, pf.lambda_gains)
    return RationalFunction(num, den)


def _sorted_gains(gains) -> list[complex]:
    return sorted((complex(k) for k in gains), key=lambda z: (z.real, z.imag))


def series_factors(pf: ProductFormTF) -> list[RationalFunction]:
    """Biproper factors ``Z_i`` followed by output-feedback factors ``T_j``.

    Eigenvalues sorted by (real, imag) are dealt out smallest-first to the
    ``d+1`` T-factors, so the zero eigenvalue always lands in a T-factor. The
    overall transfer function is ``theta`` times the product of the factors.
    Factors built from complex gains have complex coefficients.
    """
    phi, psi = pf.agent.phi, pf.agent.psi
    lam = _sorted_gains(pf.lambda_gains)
    gam = _sorted_gains(pf.gamma_gains)
    t_gains, z_gains = lam[: pf.distance + 1], lam[pf.distance + 1:]
    zs = [RationalFunction(closed_loop_factor(psi, phi, _simplify(gk)),
                           closed_loop_factor(psi, phi, _simplify(lk)))
          for gk, lk in zip(gam, z_gains)]
    ts = [RationalFunction(phi, closed_loop_factor(psi, phi, _simplify(lk)))
          for lk in t_gains]
    return zs + ts


def _simplify(k: complex):
    return k.real if k.imag == 0 else k


def _zero_gain_mask(gains) -> np.ndarray:
    gains = np.asarray(gains, dtype=complex)
    if not gains.size:
        return np.zeros(0, bool)
    scale = max(np.max(np.abs(gains)), 1.0)
    return np.abs(gains) <= ZERO_GAIN_TOL * scale


def network_part(g: WeightedDigraph, c: int, o: int, agent: AgentModel,
                 pf: ProductFormTF | None = None) -> RationalFunction:
    """``S_co`` such that ``T_co = M * S_co``: one zero-eigenvalue factor
    (equal to ``psi``) and one ``phi`` are removed from the product form."""
    if pf is None:
        pf = product_form_tf(g, c, o, agent)
    zero = _zero_gain_mask(pf.lambda_gains)
    if zero.sum() != 1:
        raise MultipleZeroEigenvalueError(
            f"expected one zero Laplacian eigenvalue, found {int(zero.sum())}")
    phi, psi = agent.phi, agent.psi
    num = (phi ** pf.distance) * gain_product(psi, phi, pf.gamma_gains) * pf.theta
    den = gain_product(psi, phi, np.asarray(pf.lambda_gains)[~zero])
    return RationalFunction(num, den)


def general_io_tf(network: RationalFunction, open_loop_part: RationalFunction) -> RationalFunction:
    """Transfer function from a generic input at c to a generic output at o."""
    return open_loop_part * network


def input_disturbance_tf(network: RationalFunction, agent: AgentModel) -> RationalFunction:
    return general_io_tf(network, agent.plant)


def output_disturbance_tf(network: RationalFunction) -> RationalFunction:
    return general_io_tf(network, RationalFunction(Polynomial([1.0]), Polynomial([1.0])))


def relative_degree_co(agent: AgentModel, distance: int) -> int:
    chi = agent.relative_degree
    if chi < 0:
        raise ModelError("open loop must be proper")
    return (distance + 1) * chi


def steady_state_gain(pf: ProductFormTF) -> float:
    """DC gain ``theta * prod(gamma) / prod(lambda)``.

    A zero gamma cancels the zero eigenvalue and the gain is finite;
    otherwise the zero eigenvalue makes it infinite.
    """
    if not pf.agent.has_integrator():
        raise IntegratorError("open loop has no integrator (psi(0) != 0)")
    lam = np.asarray(pf.lambda_gains, dtype=complex)
    gam = np.asarray(pf.gamma_gains, dtype=complex)
    lam_zero = _zero_gain_mask(lam)
    if lam_zero.sum() != 1:
        raise MultipleZeroEigenvalueError(
            f"expected one zero Laplacian eigenvalue, found {int(lam_zero.sum())}")
    gam_zero = _zero_gain_mask(np.concatenate([gam, lam]))[: len(gam)]
    if not gam_zero.any():
        return inf
    first = int(np.flatnonzero(gam_zero)[0])
    gam_rest = np.delete(gam, first)
    value = pf.theta * np.prod(gam_rest) / np.prod(lam[~lam_zero])
    return float(value.real)


def _reduced_char_poly(g: WeightedDigraph, removed) -> Polynomial:
    removed = set(removed)
    if len(removed) == g.n:
        return Polynomial([1.0])
    return char_poly(reduced_laplacian(g, removed))


def collocated_numerator(g: WeightedDigraph, c: int) -> Polynomial:
    """``det(sI + L)`` with row and column c deleted."""
    return _reduced_char_poly(g, {c})


def one_path_numerator(g: WeightedDigraph, c: int, o: int) -> Polynomial:
    """``theta * det(sI + Lbar)`` with every vertex of the unique c->o path deleted."""
    paths = enumerate_simple_paths(g, c, o, max_count=2)
    if len(paths) != 1:
        raise PathNotUniqueError(f"{len(paths)} simple paths from {c} to {o}, need 1")
    (path,) = paths
    return _reduced_char_poly(g, path.vertices) * path_weight(g, path)


def multi_path_numerator(g: WeightedDigraph, c: int, o: int,
                         max_count: int = DEFAULT_PATH_CAP) -> Polynomial:
    """Sum over simple c->o paths of path weight times the reduced char poly."""
    total = Polynomial([0.0])
    for path in enumerate_simple_paths(g, c, o, max_count=max_count):
        total = total + _reduced_char_poly(g, path.vertices) * path_weight(g, path)
    return total


def multi_controlling_numerator(g: WeightedDigraph, controls, o: int,
                                series: ForestSeries | None = None) -> Polynomial:
    controls = list(controls)
    if not controls:
        raise ValueError("need at least one controlling node")
    if series is None:
        series = faddeev_leverrier(laplacian(g))
    total = Polynomial([0.0])
    for c in controls:
        total = total + single_integrator_tf(g, c, o, series).numerator
    return total


def multi_controlling_relative_degree(g: WeightedDigraph, controls, o: int,
                                      agent: AgentModel) -> int:
    nearest = min(hop_distance(g, c, o) for c in controls)
    if isinf(nearest):
        raise NoPathError(f"no controlling node reaches node {o}")
    return relative_degree_co(agent, int(nearest))


@dataclass(frozen=True)
class ControllabilityReport:
    bound: int
    actual_rank: int
    shape: tuple[int, int]
    unreachable: tuple[int, ...] = ()

    @property
    def satisfied(self) -> bool:
        return self.actual_rank >= self.bound


def controllability_matrix(L, c: int) -> np.ndarray:
    """Columns ``L**k e_c`` for ``k = 0..N``."""
    L = np.asarray(L, dtype=float)
    n = L.shape[0]
    v = np.zeros(n)
    v[c - 1] = 1.0
    cols = []
    for _ in range(n + 1):
        cols.append(v)
        v = L @ v
    return np.column_stack(cols)


def controllability_report(g: WeightedDigraph, c: int) -> ControllabilityReport:
    """Compare the Krylov rank from node c with ``max hop distance + 1``.

    Columns are normalised before the rank test (rank-preserving) since their
    norms grow like the spectral radius to the k-th power. Nodes unreachable
    from c do not enter the bound and are listed separately.
    """
    check_node(g, c)
    C = controllability_matrix(laplacian(g), c)
    norms = np.linalg.norm(C, axis=0)
    scaled = C[:, norms > 0] / norms[norms > 0]
    dist = hop_distances_from(g, c)
    finite = [d for d in dist if not isinf(d)]
    unreachable = tuple(v for v, d in zip(g.nodes, dist) if isinf(d))
    return ControllabilityReport(int(max(finite)) + 1, matrix_rank(scaled),
                                 C.shape, unreachable)
