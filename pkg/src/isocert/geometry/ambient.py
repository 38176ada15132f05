"""Chart metrics of Q^3_eps x R and their Christoffel symbols.

eps = +1 uses stereographic coordinates on S^3 (projection from one point),
eps = -1 the upper half-space model of H^3.  The fourth coordinate is the
height along the R factor, so every metric is diag(phi, phi, phi, 1).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .jets import Jet, jeinsum, jet_space, jinv, stack

STEREO_RADIUS_MAX = 100.0
HALF_SPACE_W_MIN = 1e-6
HEIGHT = 3


class DomainError(ValueError):
    """A point lies outside the chart domain (or too close to its boundary)."""


@dataclass(frozen=True)
class AmbientSpace:
    epsilon: int

    def __post_init__(self):
        if self.epsilon not in (1, -1):
            raise ValueError(f"epsilon must be +1 or -1, got {self.epsilon!r}")

    @property
    def model(self) -> str:
        return "sphere-stereographic" if self.epsilon == 1 else "hyperbolic-half-space"

    def check_domain(self, x: np.ndarray) -> None:
        x = np.asarray(x, dtype=float)
        if not np.all(np.isfinite(x)):
            raise DomainError("non-finite chart coordinates")
        if self.epsilon == 1:
            r = np.sqrt(np.sum(x[..., :3] ** 2, axis=-1))
            if np.any(r > STEREO_RADIUS_MAX):
                raise DomainError(f"point too close to the excluded pole (|x| = {r.max():.3g})")
        else:
            w = x[..., 2]
            if np.any(w <= HALF_SPACE_W_MIN):
                raise DomainError(f"half-space point with w = {w.min():.3g} <= {HALF_SPACE_W_MIN}")

    def conformal_factor(self, x0, x1, x2):
        """phi for the spatial block; accepts jets or arrays."""
        if self.epsilon == 1:
            return 4.0 / (1.0 + x0 * x0 + x1 * x1 + x2 * x2) ** 2
        return 1.0 / (x2 * x2)

    def metric_jet(self, X: Jet) -> Jet:
        """4x4 metric along a 4-vector jet of chart points."""
        phi = self.conformal_factor(X[0], X[1], X[2])
        zero = phi * 0.0
        one = zero + 1.0
        rows = []
        for a in range(4):
            rows.append(stack([(phi if a < 3 else one) if b == a else zero for b in range(4)]))
        return stack(rows)

    def geometry_along(self, X: Jet) -> Tuple[Jet, Jet]:
        """Metric and Christoffel symbols Gamma[k, i, j] along the chart-point jet ``X``.

        Metric derivatives come from four auxiliary first-order variables
        added to the jet space, then projected away.
        """
        self.check_domain(X.value)
        base = X.space
        big = jet_space(*base.groups, (4, 1))
        n0 = base.nvars
        batch = X.value.shape[:-1]
        Y = stack([Jet.variable(big, n0 + a, np.zeros(batch)) for a in range(4)])
        G = self.metric_jet(X.lift(big) + Y)
        G0 = G.project(base)
        dG = stack([G.d(n0 + a).project(base) for a in range(4)])  # dG[l, j, i] = d_i G_lj
        Ginv = jinv(G0)
        return G0, christoffel_from(Ginv, dG)

    def conformal_gradient(self, X: Jet):
        """phi and its spatial gradient along ``X``, differentiated with auxiliary jet variables."""
        base = X.space
        big = jet_space(*base.groups, (3, 1))
        n0 = base.nvars
        batch = X.value.shape[:-1]
        Xl = X.lift(big)
        xs = [Xl[a] + Jet.variable(big, n0 + a, np.zeros(batch)) for a in range(3)]
        phi = self.conformal_factor(*xs)
        return phi.project(base), [phi.d(n0 + a).project(base) for a in range(3)]

    def geodesic_accel(self, X: Jet, V: Jet) -> Jet:
        """-Gamma(V, V) along ``X`` using the conformal form of the spatial block.

        For G = diag(phi, phi, phi, 1) the Christoffel symbols reduce to
        Gamma^k_ij = (d_i phi delta_kj + d_j phi delta_ki - d_k phi delta_ij) / (2 phi)
        on spatial indices and vanish otherwise.
        """
        self.check_domain(X.value)
        phi, dphi = self.conformal_gradient(X)
        v = [V[a] for a in range(4)]
        dv = dphi[0] * v[0] + dphi[1] * v[1] + dphi[2] * v[2]
        vv = v[0] * v[0] + v[1] * v[1] + v[2] * v[2]
        inv = phi.reciprocal()
        acc = [(dphi[k] * vv * 0.5 - dv * v[k]) * inv for k in range(3)]
        return stack(acc + [v[3] * 0.0])


def christoffel_from(Ginv: Jet, dG: Jet) -> Jet:
    """Gamma^k_ij = 1/2 G^kl (d_i G_lj + d_j G_li - d_l G_ij) with dG[l, j, i] = d_i G_lj."""
    t1 = dG.transpose((0, 2, 1))
    t3 = dG.transpose((2, 0, 1))
    return jeinsum("kl,lij->kij", Ginv, t1 + dG - t3) * 0.5


def _point_jet(x) -> Jet:
    x = np.asarray(x, dtype=float)
    space = jet_space((0, 0))
    return Jet.const(space, x, 1)


def metric_at(amb: AmbientSpace, x) -> np.ndarray:
    """4x4 metric matrix at chart point(s) ``x`` (last axis of length 4)."""
    x = np.asarray(x, dtype=float)
    amb.check_domain(x)
    phi = amb.conformal_factor(x[..., 0], x[..., 1], x[..., 2])
    G = np.zeros(x.shape[:-1] + (4, 4))
    for a in range(3):
        G[..., a, a] = phi
    G[..., 3, 3] = 1.0
    return G


def christoffel_at(amb: AmbientSpace, x) -> np.ndarray:
    """Christoffel symbols Gamma[k][i][j] at chart point(s) ``x``."""
    _, gamma = amb.geometry_along(_point_jet(x))
    return gamma.value
