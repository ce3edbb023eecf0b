"""Acceptance criteria, one test each. Every test prints a PASS/FAIL line."""

import itertools
import subprocess
import sys
from math import isinf
from pathlib import Path

import numpy as np
import pytest

from consensus_tf.checks import forest_checks, power_pattern_check
from consensus_tf.cli import frequency_response
from consensus_tf.graph import (
    build_graph,
    enumerate_out_forests,
    enumerate_simple_paths,
    forest_set_weight,
    hop_distance,
    laplacian,
)
from consensus_tf.instances import (
    five_node_example_graph,
    forest_example_graph,
    pi_integrator_agent,
    random_agent,
    random_digraph,
    random_reachable_digraph,
    random_reachable_pair,
    random_weights,
    undirected_path,
    undirected_star,
)
from consensus_tf.netfunc import (
    collocated_numerator,
    controllability_report,
    expand_product_form,
    multi_controlling_numerator,
    multi_path_numerator,
    one_path_numerator,
    product_form_tf,
    single_integrator_tf,
    steady_state_gain,
)
from consensus_tf.poly import Polynomial, poly_divmod
from consensus_tf.spectral import faddeev_leverrier, laplacian_eigenvalues
from consensus_tf.verify import compare_tf, resolvent_tf_eval

from conftest import cofactor_poly

ROOT = Path(__file__).resolve().parent.parent


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'}: {detail}")
        return ok
    return emit


def rel(a, b):
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    n = max(a.size, b.size)
    a, b = np.pad(a, (0, n - a.size)), np.pad(b, (0, n - b.size))
    return float(np.max(np.abs(a - b)) / max(1.0, np.max(np.abs(b))))


def test_1_forest_weights(report):
    g = forest_example_graph()
    total = forest_set_weight(g, 3, 1, 3)
    weights = sorted(f.weight(g) for f in enumerate_out_forests(g, 3) if f.contains(1, 3))
    ok = (abs(total - 0.552) <= 1e-12 and len(weights) == 2
          and abs(weights[0] - 0.192) <= 1e-12 and abs(weights[1] - 0.36) <= 1e-12)
    assert report(1, ok, f"set weight {total!r}, forests {weights}")


def test_2_worked_example(report):
    g, agent = five_node_example_graph(), pi_integrator_agent()
    lam = laplacian_eigenvalues(laplacian(g))
    si = single_integrator_tf(g, 1, 3)
    pf = product_form_tf(g, 1, 3, agent)
    T = expand_product_form(pf)
    _, rem = poly_divmod(T.num, Polynomial([1.0, 1.0]) ** 3)
    reduced = one_path_numerator(g, 1, 3) * (1.0 / si.theta)
    ctrb = controllability_report(g, 1)
    h_ref = [1.5, 3.5, 1.0]
    parts = {
        "a eigenvalues": np.max(np.abs(np.sort(lam.real) - [0, 0.39, 2, 2.72, 3.69])) <= 5e-3
        and np.all(lam.imag == 0),
        "b h(s)": np.max(np.abs(si.monic_numerator.coeffs - h_ref)) <= 1e-9,
        "c gamma": np.max(np.abs(pf.gamma_gains - [0.5, 3.0])) <= 1e-9,
        "d theta": pf.theta == 0.3,
        "e distance": pf.distance == 2,
        "f relative degree": T.relative_degree == 3,
        "g (s+1)^3 | num": np.max(np.abs(rem.coeffs)) <= 1e-9 * np.max(np.abs(T.num.coeffs)),
        "h reduced Laplacian": np.max(np.abs(reduced.coeffs - h_ref)) <= 1e-9,
        "i controllability": (ctrb.bound, ctrb.actual_rank) == (5, 5),
    }
    failed = [k for k, v in parts.items() if not v]
    assert report(2, not failed, f"{len(parts) - len(failed)}/{len(parts)} parts"
                  + (f", failed {failed}" if failed else ""))


def test_3_product_form_vs_oracle(report):
    rng = np.random.default_rng(1001)
    worst, passed, total = 0.0, 0, 100
    for i in range(total):
        n = int(rng.integers(3, 9))
        g = random_digraph(rng, n, p=0.4)
        c, o = random_reachable_pair(rng, g, distinct=bool(rng.random() < 0.8)) or (1, 1)
        agent = random_agent(rng, max_degree=3)
        T = expand_product_form(product_form_tf(g, c, o, agent))
        rep = compare_tf(T, g, c, o, agent.open_loop, n_samples=20, tol=1e-8, seed=i)
        worst = max(worst, rep.max_err)
        passed += rep.passed and len(rep.samples) == 20
    assert report(3, passed == total, f"{passed}/{total} pass, max rel err {worst:.2e}")


def test_4_combinatorial_identities(report):
    rng = np.random.default_rng(2002)
    worst, passed, total = 0.0, 0, 50
    for _ in range(total):
        g = random_digraph(rng, int(rng.integers(2, 8)), p=0.35)
        L = laplacian(g)
        checks = forest_checks(g, faddeev_leverrier(L)) + [power_pattern_check(g, L)]
        worst = max([worst] + [ch["max_err"] for ch in checks])
        passed += all(ch["status"] == "pass" and ch["tol"] == 1e-9 for ch in checks)
    assert report(4, passed == total, f"{passed}/{total} graphs, max err {worst:.2e}")


def _instances():
    rng = np.random.default_rng(3003)
    yield five_node_example_graph()
    yield forest_example_graph()
    for _ in range(40):
        yield random_digraph(rng, int(rng.integers(2, 8)), p=0.4)


def test_5_reduced_laplacian_numerators(report):
    worst, counts = 0.0, {"collocated": 0, "one path": 0, "multi path": 0}
    for g in _instances():
        series = faddeev_leverrier(laplacian(g))
        for c, o in itertools.product(g.nodes, repeat=2):
            h = single_integrator_tf(g, c, o, series).numerator.coeffs
            if c == o:
                worst = max(worst, rel(collocated_numerator(g, c).coeffs, h))
                counts["collocated"] += 1
                continue
            if isinf(hop_distance(g, c, o)):
                continue
            worst = max(worst, rel(multi_path_numerator(g, c, o).coeffs, h))
            counts["multi path"] += 1
            if len(enumerate_simple_paths(g, c, o)) == 1:
                worst = max(worst, rel(one_path_numerator(g, c, o).coeffs, h))
                counts["one path"] += 1
    assert report(5, worst <= 1e-9, f"max err {worst:.2e} over {counts}")


def test_6_multiple_controlling_nodes(report):
    rng = np.random.default_rng(4004)
    worst, total = 0.0, 20
    for _ in range(total):
        n = int(rng.integers(3, 8))
        g = random_digraph(rng, n, p=0.4)
        o = int(rng.integers(1, n + 1))
        controls = sorted(int(x) for x in rng.choice(np.arange(1, n + 1),
                                                     int(rng.integers(2, n + 1)), replace=False))
        summed = multi_controlling_numerator(g, controls, o)
        L = laplacian(g)
        ref = sum(cofactor_poly(L, o, c) for c in controls)
        worst = max(worst, rel(summed.coeffs, ref))
    assert report(6, worst <= 1e-9, f"{total} instances, max err {worst:.2e}")


def test_7_controllability_bound(report):
    table_ok = controllability_report(undirected_star(7), 1).bound == 2
    for n in range(3, 11):
        table_ok &= controllability_report(undirected_path(n), 1).bound == n
        if n % 2 == 0:
            mid = controllability_report(undirected_path(n), n // 2)
            table_ok &= mid.bound == n // 2 + 1 and mid.satisfied
    rng = np.random.default_rng(5005)
    failures, checked = 0, 0
    for _ in range(200):
        n = int(rng.integers(3, 11))
        topo = [(u, v) for u, v, _ in random_reachable_digraph(rng, n, p=0.25).arcs]
        for _ in range(2):
            g = build_graph(n, random_weights(rng, topo))
            rep = controllability_report(g, 1)
            failures += not (rep.satisfied and not rep.unreachable)
            checked += 1
    assert report(7, table_ok and failures == 0,
                  f"table {'ok' if table_ok else 'wrong'}, {checked - failures}/{checked} "
                  "random digraphs satisfy rank >= bound")


def _dc_limit(T):
    """s -> 0 limit after removing the common power of s."""
    num, den = np.asarray(T.num.coeffs), np.asarray(T.den.coeffs)
    k = int(np.flatnonzero(den)[0])
    assert not np.any(num[:k])
    return num[k] / den[k]


def test_8_steady_state_split(report):
    agent = pi_integrator_agent()
    # node 1 has no in-arcs: every spanning tree is rooted there
    leader = build_graph(4, [(1, 2, 1.0), (2, 3, 0.5), (3, 2, 1.2), (3, 4, 2.0), (4, 3, 0.7)])
    pf = product_form_tf(leader, 2, 3, agent)
    gain = steady_state_gain(pf)
    limit = _dc_limit(expand_product_form(pf))
    # resolvent at small s, Richardson-extrapolated to s = 0
    near = [resolvent_tf_eval(leader, 2, 3, agent.open_loop, e) for e in (1e-4, 2e-4)]
    oracle = 2 * near[0] - near[1]
    leader_ok = (np.any(pf.gamma_gains == 0) and not isinf(gain)
                 and abs(gain - limit) <= 1e-6 and abs(gain - oracle.real) <= 1e-6)

    g = five_node_example_graph()
    leaderless = steady_state_gain(product_form_tf(g, 1, 3, agent))
    rows, mismatch = frequency_response(g, agent, 1, 3, 1e-4, 1e2, 121)
    mag = np.array([r[1] for r in rows])
    low = mag[:60]  # four decades below 1 rad/s
    grows = bool(np.all(np.diff(low) < 0)) and low[0] - low[-1] > 100
    ok = leader_ok and isinf(leaderless) and grows and mismatch <= 1e-6
    assert report(8, ok, f"leader gain {gain:.9g} (limit {limit:.9g}), leaderless "
                  f"{leaderless}, |T| rises {low[0] - low[-1]:.1f} dB over 4 decades")


def test_9_verify_deterministic(report, tmp_path):
    cmd = [sys.executable, "-m", "consensus_tf.cli", "verify",
           "--graph", str(ROOT / "data" / "five_node_graph.json"),
           "--agent", str(ROOT / "data" / "pi_agent.json"), "--seed", "17"]
    runs = [subprocess.run(cmd, capture_output=True, check=False) for _ in range(2)]
    same = runs[0].stdout == runs[1].stdout and len(runs[0].stdout) > 0
    ok = same and all(r.returncode == 0 for r in runs)
    assert report(9, ok, f"{len(runs[0].stdout)} bytes, identical={same}, "
                  f"exit codes {[r.returncode for r in runs]}")
