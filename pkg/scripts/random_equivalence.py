"""Sweep random graphs and agents; compare the expanded product form with the
resolvent at random complex points and report the error distribution."""

import argparse
from dataclasses import dataclass

import numpy as np

from consensus_tf.instances import random_agent, random_digraph, random_reachable_pair
from consensus_tf.netfunc import expand_product_form, product_form_tf, relative_degree_co
from consensus_tf.verify import compare_tf


@dataclass
class Config:
    trials: int = 300
    n_min: int = 3
    n_max: int = 8
    density: float = 0.4
    max_degree: int = 3
    samples: int = 20
    tol: float = 1e-8
    seed: int = 0


def run(cfg: Config):
    rng = np.random.default_rng(cfg.seed)
    errs, degree_ok = [], 0
    for i in range(cfg.trials):
        g = random_digraph(rng, int(rng.integers(cfg.n_min, cfg.n_max + 1)), cfg.density)
        c, o = random_reachable_pair(rng, g, distinct=True) or (1, 1)
        agent = random_agent(rng, cfg.max_degree)
        pf = product_form_tf(g, c, o, agent)
        T = expand_product_form(pf)
        errs.append(compare_tf(T, g, c, o, agent.open_loop, cfg.samples, cfg.tol, i).max_err)
        degree_ok += T.relative_degree == relative_degree_co(agent, pf.distance)
    return np.array(errs), degree_ok


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    for name, default in vars(Config()).items():
        p.add_argument("--" + name.replace("_", "-"), type=type(default), default=default)
    cfg = Config(**vars(p.parse_args()))
    errs, degree_ok = run(cfg)
    print(f"trials {cfg.trials}: max {errs.max():.2e}, median {np.median(errs):.2e}, "
          f"fail {(errs > cfg.tol).sum()}, relative degree law {degree_ok}/{cfg.trials}")
