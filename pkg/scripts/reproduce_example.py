"""Print every derived quantity for the five-node example with M = (s+1)/s^2."""

import argparse
from dataclasses import dataclass

import numpy as np

from consensus_tf.graph import forest_set_weight, laplacian
from consensus_tf.instances import five_node_example_graph, forest_example_graph, pi_integrator_agent
from consensus_tf.netfunc import (
    controllability_report,
    expand_product_form,
    one_path_numerator,
    product_form_tf,
    single_integrator_tf,
)
from consensus_tf.spectral import laplacian_eigenvalues
from consensus_tf.verify import compare_tf


@dataclass
class Config:
    controlling: int = 1
    observing: int = 3
    seed: int = 0


def main(cfg: Config):
    g, agent = five_node_example_graph(), pi_integrator_agent()
    c, o = cfg.controlling, cfg.observing
    print("eigenvalues     ", np.round(laplacian_eigenvalues(laplacian(g)).real, 5))
    si = single_integrator_tf(g, c, o)
    print("theta, distance ", si.theta, si.distance)
    print("h(s)/theta      ", np.round(si.monic_numerator.coeffs, 12))
    print("reduced-L route ", np.round((one_path_numerator(g, c, o) * (1 / si.theta)).coeffs, 12)
          if si.distance > 0 else "n/a")
    pf = product_form_tf(g, c, o, agent)
    T = expand_product_form(pf)
    print("gamma           ", np.round(pf.gamma_gains.real, 12))
    print("T num           ", T.num.tolist())
    print("T den           ", T.den.tolist())
    print("relative degree ", T.relative_degree)
    rep = compare_tf(T, g, c, o, agent.open_loop, seed=cfg.seed)
    print(f"oracle max err   {rep.max_err:.3e}")
    ctrb = controllability_report(g, c)
    print("ctrb bound/rank ", ctrb.bound, ctrb.actual_rank)
    print("forest weight   ", forest_set_weight(forest_example_graph(), 3, 1, 3))


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--from", dest="controlling", type=int, default=Config.controlling)
    p.add_argument("--to", dest="observing", type=int, default=Config.observing)
    p.add_argument("--seed", type=int, default=Config.seed)
    main(Config(**vars(p.parse_args())))
