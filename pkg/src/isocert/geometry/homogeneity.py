"""Isometry-group invariance of the parabolic helicoid graph t = -B log w."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from .ambient import AmbientSpace, metric_at
from .jets import Jet, jet_space, stack

GRAPH_TOL = 1e-12
PULLBACK_TOL = 1e-10


@dataclass
class HomogeneityResult:
    lam: float
    shift: tuple
    point: tuple
    graph_residual: float
    pullback_residual: float
    passed: bool

    def to_json(self):
        return {
            "lambda": self.lam,
            "shift": list(self.shift),
            "point": list(self.point),
            "graph_residual": self.graph_residual,
            "pullback_residual": self.pullback_residual,
            "pass": self.passed,
        }


def group_element(B: float, lam: float, shift: Sequence[float]):
    """(u, v, w, t) -> (e^lam u + l1, e^lam v + l2, e^lam w, t - B lam); works on arrays and jets."""
    l1, l2 = shift
    s = math.exp(lam)

    def apply(x):
        return [x[0] * s + l1, x[1] * s + l2, x[2] * s, x[3] - B * lam]

    return apply


def graph_height(B: float, w):
    return -B * np.log(w)


def helicoid_homogeneity_check(
    B: float, lam: float, shift: Sequence[float], point: Sequence[float], tol_graph: float = GRAPH_TOL,
    tol_pullback: float = PULLBACK_TOL,
) -> HomogeneityResult:
    """Map a graph point by a group element; check it stays on the graph and the map is an isometry there."""
    p = np.asarray(point, dtype=float)
    if p[2] <= 0:
        raise ValueError("helicoid points need w > 0")
    if abs(p[3] - graph_height(B, p[2])) > tol_graph:
        raise ValueError("point is not on the graph t = -B log w")
    amb = AmbientSpace(-1)
    phi = group_element(B, lam, shift)

    space = jet_space((4, 1))
    X = [Jet.variable(space, a, p[a]) for a in range(4)]
    Y = stack(phi(X))
    y = Y.value
    D = np.stack([Y.d(a).value for a in range(4)], axis=-1)  # D[a, b] = d y^a / d x^b
    graph = abs(y[3] - graph_height(B, y[2]))
    pull = D.T @ metric_at(amb, y) @ D - metric_at(amb, p)
    pullback = float(np.abs(pull).max())
    ok = graph <= tol_graph and pullback <= tol_pullback
    return HomogeneityResult(lam, tuple(float(c) for c in shift), tuple(p.tolist()), float(graph), pullback, ok)


def random_group_checks(B: float, n: int = 20, seed: int = 0) -> List[HomogeneityResult]:
    """``n`` seeded group elements applied to seeded graph points."""
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        lam = rng.uniform(-1.0, 1.0)
        shift = (rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0))
        u, v, w = rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(0.5, 2.0)
        out.append(helicoid_homogeneity_check(B, lam, shift, (u, v, w, float(graph_height(B, w)))))
    return out
