"""Geodesic exponential map and mean curvature of geodesic-parallel hypersurfaces.

The integrator is classical RK4 on jets, so derivatives of the endpoint
with respect to the base parameters come out of the integration itself.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np

from .ambient import AmbientSpace
from .families import Immersion
from .jets import Jet, jet_space, stack
from .shape import _local_geometry

H_MAX = 0.005
DRIFT_TOL = 1e-9
MAX_STEPS = 1 << 16
FOCAL_TOL = 1e-10


class StepBudgetError(RuntimeError):
    """The geodesic integrator could not meet its drift tolerance within the step budget."""


@dataclass
class GeodesicResult:
    x: Jet
    v: Jet
    steps: int
    drift: float
    focal: np.ndarray  # per batch point: frame determinant vanished or changed sign


def _accel(amb: AmbientSpace, x: Jet, v: Jet) -> Jet:
    return amb.geodesic_accel(x, v)


def _speed2(amb: AmbientSpace, x: np.ndarray, v: np.ndarray) -> np.ndarray:
    phi = amb.conformal_factor(x[..., 0], x[..., 1], x[..., 2])
    return phi * np.sum(v[..., :3] ** 2, axis=-1) + v[..., 3] ** 2


def _frame_det(x: Jet, v: Jet, nparam: int) -> Optional[np.ndarray]:
    if nparam != 3:
        return None
    cols = np.stack([x.d(i).value for i in range(3)] + [v.value], axis=-1)
    return np.linalg.det(cols)


def _run(amb: AmbientSpace, x: Jet, v: Jet, s: float, n: int, det0: Optional[np.ndarray]):
    h = s / n
    nparam = x.space.nvars
    focal = np.zeros(x.value.shape[:-1], dtype=bool)
    scale = np.abs(det0) if det0 is not None else None
    for _ in range(n):
        k1x, k1v = v, _accel(amb, x, v)
        k2x = v + k1v * (h / 2)
        k2v = _accel(amb, x + k1x * (h / 2), k2x)
        k3x = v + k2v * (h / 2)
        k3v = _accel(amb, x + k2x * (h / 2), k3x)
        k4x = v + k3v * h
        k4v = _accel(amb, x + k3x * h, k4x)
        x = x + (k1x + k2x * 2.0 + k3x * 2.0 + k4x) * (h / 6)
        v = v + (k1v + k2v * 2.0 + k3v * 2.0 + k4v) * (h / 6)
        if det0 is not None:
            det = _frame_det(x, v, nparam)
            focal |= (np.sign(det) != np.sign(det0)) | (np.abs(det) <= FOCAL_TOL * np.maximum(scale, 1.0))
    return x, v, focal


def integrate_geodesic(
    amb: AmbientSpace,
    x0: Jet,
    v0: Jet,
    s: float,
    h_max: float = H_MAX,
    drift_tol: float = DRIFT_TOL,
    max_steps: int = MAX_STEPS,
    track_focal: bool = False,
    start_speed2: Optional[np.ndarray] = None,
    det0: Optional[np.ndarray] = None,
) -> GeodesicResult:
    """Integrate x'' + Gamma(x', x') = 0 from (x0, v0) over parameter length ``s``.

    The step count starts at ceil(|s| / h_max) and doubles until the metric
    norm of the velocity is conserved to ``drift_tol`` (relative to
    ``start_speed2`` when continuing an earlier segment).
    """
    amb.check_domain(x0.value)
    if s == 0:
        return GeodesicResult(x0, v0, 0, 0.0, np.zeros(x0.value.shape[:-1], dtype=bool))
    start = _speed2(amb, x0.value, v0.value) if start_speed2 is None else start_speed2
    if track_focal and det0 is None:
        det0 = _frame_det(x0, v0, x0.space.nvars)
    n = max(1, math.ceil(abs(s) / h_max))
    while True:
        if n > max_steps:
            raise StepBudgetError(f"geodesic needs more than {max_steps} steps to conserve speed to {drift_tol}")
        x, v, focal = _run(amb, x0, v0, s, n, det0 if track_focal else None)
        drift = float(np.max(np.abs(_speed2(amb, x.value, v.value) - start)))
        if drift <= drift_tol:
            return GeodesicResult(x, v, n, drift, focal)
        n *= 2


def geodesic_exp(amb: AmbientSpace, p, v, s: float, **kw) -> np.ndarray:
    """exp_p(s v) in chart coordinates; ``p`` and ``v`` may carry leading batch axes."""
    space = jet_space((0, 0))
    x0 = Jet.const(space, np.asarray(p, dtype=float), 1)
    v0 = Jet.const(space, np.asarray(v, dtype=float), 1)
    return integrate_geodesic(amb, x0, v0, s, **kw).x.value


@dataclass
class ParallelResult:
    offset: float
    H: np.ndarray
    focal: np.ndarray
    steps: int
    drift: float


def parallel_mean_curvatures(imm: Immersion, u, offsets: Sequence[float], **kw) -> List[ParallelResult]:
    """Mean curvature tr(S)/3 of f_s(u) = exp_{f(u)}(s N(u)) for each offset and row of ``u``.

    One geodesic integration runs through the sorted offsets.  Points where
    the offset metric degenerates (or the geodesic frame flips) are flagged
    as focal and get H = nan.
    """
    amb = imm.ambient
    u = np.atleast_2d(np.asarray(u, dtype=float))
    space = jet_space((3, 3))
    uj = [Jet.variable(space, i, u[:, i]) for i in range(3)]
    X = stack(imm.chart_map(uj))
    N = _local_geometry(X, amb)["N"]
    # f_s needs second derivatives only, so the rays carry order-2 jets
    low = jet_space((3, 2))
    x, v = X.truncate(low), N.truncate(low)
    start = _speed2(amb, x.value, v.value)
    det0 = _frame_det(x, v, 3)
    focal = np.zeros(len(u), dtype=bool)
    here, steps, drift = 0.0, 0, 0.0
    out: Dict[float, ParallelResult] = {}
    for s in sorted(set(float(o) for o in offsets), key=abs):
        if s * here < 0:
            raise ValueError("offsets must all have the same sign")
        res = integrate_geodesic(amb, x, v, s - here, track_focal=True, start_speed2=start, det0=det0, **kw)
        x, v, here = res.x, res.v, s
        steps += res.steps
        drift = max(drift, res.drift)
        focal = focal | res.focal
        out[s] = ParallelResult(s, _offset_H(amb, x, v, focal), focal.copy(), steps, drift)
    return [out[float(o)] for o in offsets]


def _offset_H(amb: AmbientSpace, x: Jet, v: Jet, focal: np.ndarray) -> np.ndarray:
    geo = _local_geometry(x, amb, orient=v.value)
    g, II = geo["g"].value, geo["II"].value
    eig = np.linalg.eigvalsh(g)
    bad = focal | (eig[:, 0] <= FOCAL_TOL * np.maximum(eig[:, -1], 1.0))
    focal |= bad
    H = np.full(len(g), np.nan)
    ok = ~bad
    if ok.any():
        H[ok] = np.trace(np.linalg.solve(g[ok], II[ok]), axis1=-2, axis2=-1) / 3.0
    return H


def parallel_mean_curvature(imm: Immersion, u, s: float, **kw) -> ParallelResult:
    """Single-offset form of :func:`parallel_mean_curvatures`."""
    return parallel_mean_curvatures(imm, u, [s], **kw)[0]


def clifford_parallel_oracle(r1: float, r2: float, s: float, h0: float) -> float:
    """Closed-form offset mean curvature of S^1(r1) x S^1(r2) x R in S^3 x R.

    Offsetting rotates the radii to (cos(s0 -+ s), sin(s0 +- s)), s0 = atan2(r2, r1);
    the branch is the one whose zero-offset value matches ``h0``.
    """
    s0 = math.atan2(r2, r1)

    def h(sig: float) -> float:
        return (math.tan(sig) - 1.0 / math.tan(sig)) / 3.0

    plus, minus = h(s0 + s), -h(s0 - s)
    return plus if abs(h(s0) - h0) <= abs(-h(s0) - h0) else minus
