"""Krylov rank versus hop-distance bound for stars, paths and random digraphs."""

import argparse
from dataclasses import dataclass

import numpy as np

from consensus_tf.graph import build_graph
from consensus_tf.instances import (
    random_reachable_digraph,
    random_weights,
    undirected_path,
    undirected_star,
)
from consensus_tf.netfunc import controllability_report


@dataclass
class Config:
    sizes: tuple = (4, 6, 8, 10)
    topologies: int = 200
    reweights: int = 2
    density: float = 0.25
    seed: int = 0


def table(cfg: Config):
    print(f"{'graph':<12}{'N':>4}{'node':>6}{'bound':>7}{'rank':>6}")
    for n in cfg.sizes:
        for name, g, c in [("star", undirected_star(n), 1),
                           ("path end", undirected_path(n), 1),
                           ("path mid", undirected_path(n), n // 2)]:
            r = controllability_report(g, c)
            print(f"{name:<12}{n:>4}{c:>6}{r.bound:>7}{r.actual_rank:>6}")


def sweep(cfg: Config):
    rng = np.random.default_rng(cfg.seed)
    slack, bad = [], 0
    for _ in range(cfg.topologies):
        n = int(rng.integers(3, 11))
        topo = [(u, v) for u, v, _ in random_reachable_digraph(rng, n, cfg.density).arcs]
        for _ in range(cfg.reweights):
            r = controllability_report(build_graph(n, random_weights(rng, topo)), 1)
            slack.append(r.actual_rank - r.bound)
            bad += not r.satisfied
    slack = np.array(slack)
    print(f"random: {len(slack)} digraphs, violations {bad}, "
          f"rank - bound: min {slack.min()}, mean {slack.mean():.2f}, max {slack.max()}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--topologies", type=int, default=Config.topologies)
    p.add_argument("--seed", type=int, default=Config.seed)
    cfg = Config(**vars(p.parse_args()))
    table(cfg)
    sweep(cfg)
