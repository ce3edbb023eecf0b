"""Command-line front end.

Exit codes: 0 ok, 1 verification failure, 2 input validation, 3 no path,
4 forest-enumeration cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass
from math import inf, isinf

import numpy as np

from .checks import run_verification
from .errors import (
    ConsensusTFError,
    EnumerationCapError,
    GraphError,
    ModelError,
    NoPathError,
    PolynomialError,
)
from .graph import iter_out_forests, laplacian, load_graph
from .netfunc import (
    AgentModel,
    controllability_report,
    expand_product_form,
    load_agent,
    product_form_tf,
    steady_state_gain,
)
from .poly import poly_eval, poly_roots, closed_loop_factor
from .verify import DEFAULT_SEED, compare_tf, resolvent_tf_eval

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_NO_PATH, EXIT_CAP = 0, 1, 2, 3, 4


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _pairs(values) -> list[list[float]]:
    return [[float(np.real(z)), float(np.imag(z))] for z in values]


@dataclass
class AnalysisReport:
    graph: dict
    controlling: int
    observing: int
    theta: float
    distance: int
    lambda_gains: list
    gamma_gains: list
    numerator: list
    denominator: list
    relative_degree: int
    steady_state_gain: float | str | None
    controllability: dict
    verification: dict

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "AnalysisReport":
        return cls(**json.loads(text))


def analyze(g, agent: AgentModel, c: int, o: int, seed: int = DEFAULT_SEED) -> AnalysisReport:
    pf = product_form_tf(g, c, o, agent)
    T = expand_product_form(pf)
    if agent.has_integrator():
        dc = steady_state_gain(pf)
        dc = "inf" if isinf(dc) else dc
    else:
        dc = None
    ctrb = controllability_report(g, c)
    rep = compare_tf(T, g, c, o, agent.open_loop, seed=seed)
    return AnalysisReport(
        graph={"n": g.n, "arcs": len(g.arcs)},
        controlling=c,
        observing=o,
        theta=pf.theta,
        distance=pf.distance,
        lambda_gains=_pairs(pf.lambda_gains),
        gamma_gains=_pairs(pf.gamma_gains),
        numerator=T.num.real().tolist(),
        denominator=T.den.real().tolist(),
        relative_degree=T.relative_degree,
        steady_state_gain=dc,
        controllability={"bound": ctrb.bound, "rank": ctrb.actual_rank,
                         "unreachable": list(ctrb.unreachable)},
        verification={"pass": rep.passed, "max_err": rep.max_err, "seed": rep.seed},
    )


def frequency_response(g, agent: AgentModel, c: int, o: int, w_min: float, w_max: float,
                       n_points: int, check_points: int = 5, tol: float = 1e-6):
    """Rows ``(omega, mag_db, phase_deg)``; ``None`` entries where the grid
    hits a pole. Returns the rows and the worst oracle mismatch."""
    if not 0 < w_min < w_max or n_points < 2:
        raise ValueError("need 0 < wmin < wmax and at least 2 points")
    T = expand_product_form(product_form_tf(g, c, o, agent))
    omegas = np.logspace(np.log10(w_min), np.log10(w_max), n_points)
    rows = []
    for w in omegas:
        s = 1j * w
        den = poly_eval(T.den, s)
        scale = np.sum(np.abs(T.den.coeffs) * w ** np.arange(len(T.den.coeffs)))
        if abs(den) <= 1e-12 * scale:
            rows.append((w, None, None, None))
            continue
        val = poly_eval(T.num, s) / den
        mag = 20 * np.log10(abs(val)) if val != 0 else -inf
        rows.append((w, mag, float(np.degrees(np.angle(val))), val))
    worst = 0.0
    L = laplacian(g)
    for idx in np.linspace(0, n_points - 1, min(check_points, n_points)).astype(int):
        w, _, _, val = rows[idx]
        if val is None:
            continue
        ref = resolvent_tf_eval(g, c, o, agent.open_loop, 1j * w, L=L)
        worst = max(worst, abs(val - ref) / abs(ref))
    return [r[:3] for r in rows], worst


def root_locus(agent: AgentModel, k_min: float, k_max: float, n_points: int):
    if not 0 <= k_min < k_max or n_points < 2:
        raise ValueError("need 0 <= kmin < kmax and at least 2 points")
    rows = []
    for k in np.linspace(k_min, k_max, n_points):
        rows.extend(_locus_rows(agent, float(k)))
    return rows


def _locus_rows(agent, k, marker=None):
    roots = poly_roots(closed_loop_factor(agent.psi, agent.phi, k))
    return [(k, i, r.real, r.imag) + ((marker,) if marker else ())
            for i, r in enumerate(roots)]


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(["" if x is None else x if isinstance(x, str) else
                    str(x) if isinstance(x, (int, np.integer)) else _fmt(x) for x in row])
    return buf.getvalue()


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="consensus-tf", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def pair(sp, required=True):
        sp.add_argument("--from", dest="c", type=int, required=required)
        sp.add_argument("--to", dest="o", type=int, required=required)

    a = sub.add_parser("analyze", help="product form and derived quantities as JSON")
    a.add_argument("--graph", required=True)
    a.add_argument("--agent", required=True)
    pair(a)
    a.add_argument("--seed", type=int, default=DEFAULT_SEED)

    f = sub.add_parser("freqresp", help="Bode data as CSV")
    f.add_argument("--graph", required=True)
    f.add_argument("--agent", required=True)
    pair(f)
    f.add_argument("--wmin", type=float, default=1e-2)
    f.add_argument("--wmax", type=float, default=1e2)
    f.add_argument("--points", type=int, default=200)

    r = sub.add_parser("rootlocus", help="roots of psi + k*phi as CSV")
    r.add_argument("--agent", required=True)
    r.add_argument("--graph")
    pair(r, required=False)
    r.add_argument("--kmin", type=float, default=0.0)
    r.add_argument("--kmax", type=float, default=10.0)
    r.add_argument("--points", type=int, default=101)

    fo = sub.add_parser("forests", help="list spanning out-forests with k arcs")
    fo.add_argument("--graph", required=True)
    fo.add_argument("--k", type=int, required=True)
    fo.add_argument("--root", type=int)
    fo.add_argument("--contains", type=int)
    fo.add_argument("--cap", type=int)

    v = sub.add_parser("verify", help="run every cross-route check")
    v.add_argument("--graph", required=True)
    v.add_argument("--agent", required=True)
    v.add_argument("--seed", type=int, default=DEFAULT_SEED)
    v.add_argument("--cap", type=int)
    v.add_argument("--corrupt-laplacian", action="store_true",
                   help="debug: perturb L on the polynomial route (negative control)")
    return p


def _cmd_analyze(args, out):
    g, agent = load_graph(args.graph), load_agent(args.agent)
    out.write(analyze(g, agent, args.c, args.o, args.seed).to_json() + "\n")
    return EXIT_OK


def _cmd_freqresp(args, out):
    g, agent = load_graph(args.graph), load_agent(args.agent)
    rows, worst = frequency_response(g, agent, args.c, args.o, args.wmin, args.wmax,
                                     args.points)
    out.write(_csv(["omega", "mag_db", "phase_deg"], rows))
    if worst > 1e-6:
        print(f"frequency response disagrees with resolvent oracle ({worst:.3g})",
              file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def _cmd_rootlocus(args, out):
    agent = load_agent(args.agent)
    rows = root_locus(agent, args.kmin, args.kmax, args.points)
    header = ["k", "root_index", "re", "im"]
    if args.graph:
        g = load_graph(args.graph)
        rows = [r + ("",) for r in rows]
        header.append("marker")
        markers = []
        if args.c is not None and args.o is not None:
            pf = product_form_tf(g, args.c, args.o, agent)
            markers = [("lambda", k) for k in pf.lambda_gains] + \
                      [("gamma", k) for k in pf.gamma_gains]
        elif args.c is None and args.o is None:
            from .spectral import laplacian_eigenvalues
            markers = [("lambda", k) for k in laplacian_eigenvalues(laplacian(g))]
        # complex gains are off the real-k locus and get no marker rows
        for name, k in markers:
            if abs(np.imag(k)) <= 1e-9 * max(1.0, abs(k)):
                rows.extend(_locus_rows(agent, float(np.real(k)), name))
    out.write(_csv(header, rows))
    return EXIT_OK


def _cmd_forests(args, out):
    g = load_graph(args.graph)
    forests = []
    total = 0.0
    if args.contains is not None and args.root is None:
        raise ValueError("--contains needs --root")
    for forest in iter_out_forests(g, args.k, args.cap):
        if args.root is not None and not forest.contains(args.root, args.contains or args.root):
            continue
        w = forest.weight(g)
        total += w
        forests.append({"arcs": [list(a) for a in forest.arcs],
                        "roots": list(forest.roots), "weight": w})
    json.dump({"k": args.k, "root": args.root, "contains": args.contains,
               "forests": forests, "total_weight": total}, out, indent=2, sort_keys=True)
    out.write("\n")
    return EXIT_OK


def _cmd_verify(args, out):
    g, agent = load_graph(args.graph), load_agent(args.agent)
    L = laplacian(g)
    if args.corrupt_laplacian:
        L = L.copy()
        L[0, 0] += 0.25
    report = run_verification(g, agent, args.seed, args.cap, L)
    out.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    if not report["pass"]:
        failing = [ch["name"] for ch in report["checks"] if ch["status"] == "fail"]
        print("failing checks: " + ", ".join(failing), file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


COMMANDS = {
    "analyze": _cmd_analyze,
    "freqresp": _cmd_freqresp,
    "rootlocus": _cmd_rootlocus,
    "forests": _cmd_forests,
    "verify": _cmd_verify,
}


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = _parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except EnumerationCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except NoPathError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_PATH
    except (GraphError, ModelError, PolynomialError, ValueError, KeyError,
            OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConsensusTFError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
