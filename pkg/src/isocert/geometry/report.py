"""Grid verification of a family and its JSON report."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from .ambient import DomainError
from .families import Immersion
from .geodesic import StepBudgetError, clifford_parallel_oracle, parallel_mean_curvatures
from .homogeneity import random_group_checks
from .shape import RankError, ShapeBatch, shape_batch

DEFAULT_OFFSETS = (0.1, 0.2, 0.3)
DISTINCT_GAP = 1e-6
_EVAL_ERRORS = (DomainError, RankError, StepBudgetError, np.linalg.LinAlgError, FloatingPointError)


@dataclass
class Tolerances:
    curvature: float = 1e-7
    constancy: float = 1e-8
    cos_constancy: float = 1e-9
    vertical_cos: float = 1e-10
    unit: float = 1e-10
    self_adjoint: float = 1e-9
    residual: float = 1e-7
    parallel: float = 1e-6
    graph: float = 1e-12
    pullback: float = 1e-10

    def to_json(self) -> Dict[str, float]:
        return asdict(self)


def _num(x):
    """JSON-safe float (nan/inf become None)."""
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_num(v) for v in x]
    x = float(x)
    return x if math.isfinite(x) else None


@dataclass
class Criterion:
    name: str
    expected: Any
    observed: Any
    passed: bool
    detail: Optional[str] = None

    def to_json(self) -> Dict[str, Any]:
        out = {"name": self.name, "expected": self.expected, "observed": self.observed, "pass": bool(self.passed)}
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class GeometryReport:
    family: str
    epsilon: int
    params: Dict[str, float]
    box: List[List[float]]
    grid: Dict[str, Any]
    tolerances: Tolerances
    criteria: List[Criterion] = field(default_factory=list)
    samples_summary: Dict[str, Any] = field(default_factory=dict)
    parallel_table: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.criteria) and all(c.passed for c in self.criteria)

    def criterion(self, name: str) -> Criterion:
        for c in self.criteria:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> List[str]:
        return [c.name for c in self.criteria if not c.passed]

    def to_json(self) -> Dict[str, Any]:
        return {
            "family": self.family,
            "epsilon": self.epsilon,
            "params": self.params,
            "box": self.box,
            "grid": self.grid,
            "tolerances": self.tolerances.to_json(),
            "criteria": [c.to_json() for c in self.criteria],
            "samples_summary": self.samples_summary,
            "parallel_table": self.parallel_table,
            "pass": self.passed,
        }


def grid_points(imm: Immersion, n: int) -> np.ndarray:
    """n x n x n nodes spanning the parameter box, endpoints included."""
    if n < 1:
        raise ValueError("grid resolution must be positive")
    axes = [np.linspace(lo, hi, n) if n > 1 else np.array([(lo + hi) / 2]) for lo, hi in imm.box]
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 3)


def _locate_failure(imm: Immersion, u: np.ndarray, fn) -> Criterion:
    for row in u:
        try:
            fn(imm, row[None, :])
        except _EVAL_ERRORS as exc:
            return Criterion("evaluation", "all grid nodes evaluable", {"u": _num(row), "error": str(exc)}, False)
    return Criterion("evaluation", "all grid nodes evaluable", "batch failure not reproducible per node", False)


def distinct_values(values: Sequence[float], gap: float = DISTINCT_GAP) -> List[float]:
    out: List[float] = []
    for v in sorted(values):
        if not out or v - out[-1] > gap:
            out.append(v)
    return out


def _curvature_error(k: np.ndarray, expected: Sequence[float]) -> np.ndarray:
    e = np.asarray(sorted(expected))
    flipped = np.asarray(sorted(-e))
    return np.minimum(np.abs(k - e).max(axis=1), np.abs(k - flipped).max(axis=1))


def _shape_criteria(imm: Immersion, b: ShapeBatch, tol: Tolerances) -> List[Criterion]:
    out: List[Criterion] = []
    k = b.curvatures
    expected = imm.expected_curvatures()
    err = _curvature_error(k, expected)
    worst = int(np.argmax(err))
    out.append(Criterion(
        "principal-curvatures-closed-form", _num(expected), _num(k[worst]), err.max() <= tol.curvature,
        f"max deviation {err.max():.3e} (either normal orientation accepted)",
    ))
    spread = k.max(axis=0) - k.min(axis=0)
    out.append(Criterion("curvature-constancy", f"max-min <= {tol.constancy}", _num(spread), spread.max() <= tol.constancy))
    g_expected = len(distinct_values(expected))
    g_observed = distinct_values(k.mean(axis=0))
    out.append(Criterion("distinct-curvature-count", g_expected, len(g_observed), len(g_observed) == g_expected))

    c = b.cos_theta
    out.append(Criterion("cos-theta-constancy", f"max-min <= {tol.cos_constancy}", _num(c.max() - c.min()),
                         c.max() - c.min() <= tol.cos_constancy))
    cexp = imm.expected_cos_theta()
    ctol = tol.vertical_cos if imm.vertical else tol.cos_constancy
    cerr = np.abs(c - cexp).max()
    out.append(Criterion("cos-theta-closed-form", cexp, _num([c.min(), c.max()]), cerr <= ctol, f"max deviation {cerr:.3e}"))
    if imm.family == "parabolic-helicoid":
        inside = bool(np.all((np.abs(c) > 1e-6) & (np.abs(c) < 1 - 1e-6)))
        out.append(Criterion("cos-theta-not-0-or-1", "0 < |cos| < 1", _num([c.min(), c.max()]), inside))

    r = b.residuals
    for name, key, t in (
        ("t-norm-identity", "t_norm", tol.unit),
        ("unit-normal", "n_norm", tol.unit),
        ("self-adjoint", "self_adjoint", tol.self_adjoint),
        ("gauss-residual", "gauss", tol.residual),
        ("codazzi-residual", "codazzi", tol.residual),
        ("nabla-T-residual", "t_deriv", tol.residual),
        ("x-cos-residual", "xcos", tol.residual),
    ):
        m = float(r[key].max())
        out.append(Criterion(name, f"<= {t}", m, m <= t))
    m = float(b.ST.max())
    out.append(Criterion("T-in-zero-eigenspace", f"|ST| <= {tol.residual}", m, m <= tol.residual))
    return out


def _summary(b: ShapeBatch) -> Dict[str, Any]:
    k = b.curvatures
    return {
        "points": int(len(b)),
        "curvatures": {"mean": _num(k.mean(axis=0)), "min": _num(k.min(axis=0)), "max": _num(k.max(axis=0))},
        "cos_theta": {"min": _num(b.cos_theta.min()), "max": _num(b.cos_theta.max())},
        "residuals": {n: {"max": _num(v.max()), "mean": _num(v.mean())} for n, v in sorted(b.residuals.items())},
        "ST_norm": {"max": _num(b.ST.max()), "mean": _num(b.ST.mean())},
    }


def verify_parallel(
    imm: Immersion, offsets: Sequence[float], n: int, tol: Tolerances
) -> tuple:
    """Offset mean-curvature table and its criteria on an n^3 base grid."""
    u = grid_points(imm, n)
    criteria: List[Criterion] = []
    table: List[Dict[str, Any]] = []
    try:
        results = parallel_mean_curvatures(imm, u, list(offsets))
    except _EVAL_ERRORS as exc:
        return [Criterion("parallel-evaluation", "offset geodesics stay in the chart", str(exc), False)], table
    oracle_h0 = None
    if imm.family == "sphere-torus-cylinder":
        oracle_h0 = float(np.trace(shape_batch(imm, u[:1], residuals=False).S[0]) / 3.0)
    for res in results:
        row: Dict[str, Any] = {"offset": res.offset, "steps": res.steps, "speed_drift": res.drift,
                               "focal_points": int(res.focal.sum())}
        ok = ~res.focal
        if res.focal.any():
            first = u[int(np.argmax(res.focal))]
            criteria.append(Criterion(
                f"parallel-no-focal@{res.offset:g}", 0, int(res.focal.sum()), False,
                f"offset metric degenerates (focal) first at u = {_num(first)}",
            ))
        H = res.H[ok]
        sigma = float(H.std()) if H.size else float("nan")
        row.update({"H_mean": _num(H.mean()) if H.size else None, "H_std": _num(sigma)})
        criteria.append(Criterion(f"parallel-H-constancy@{res.offset:g}", f"std <= {tol.parallel}", _num(sigma),
                                  bool(H.size) and res.focal.sum() == 0 and sigma <= tol.parallel))
        if oracle_h0 is not None:
            ref = clifford_parallel_oracle(imm.params["r1"], imm.params["r2"], res.offset, oracle_h0)
            dev = float(np.abs(H - ref).max()) if H.size else float("nan")
            row["H_oracle"] = ref
            criteria.append(Criterion(f"parallel-H-oracle@{res.offset:g}", ref, _num(H.mean()) if H.size else None,
                                      bool(H.size) and dev <= tol.parallel, f"max deviation {dev:.3e}"))
        table.append(row)
    return criteria, table


def grid_verify(
    imm: Immersion,
    grid: int = 10,
    tol: Optional[Tolerances] = None,
    offsets: Sequence[float] = DEFAULT_OFFSETS,
    parallel_grid: int = 5,
    shape: bool = True,
    parallel: bool = True,
    homogeneity_seed: int = 0,
    homogeneity_n: int = 20,
) -> GeometryReport:
    """Evaluate every requested criterion for ``imm`` and collect them into a report."""
    tol = tol or Tolerances()
    d = imm.describe()
    rep = GeometryReport(
        family=imm.family,
        epsilon=imm.epsilon,
        params=d["params"],
        box=d["box"],
        grid={"resolution": grid if shape else None, "parallel_resolution": parallel_grid if parallel else None,
              "offsets": list(offsets) if parallel else []},
        tolerances=tol,
    )
    if imm.constraint_defect() is not None:
        defect = imm.constraint_defect()
        rep.samples_summary["constraint_defect"] = defect
    if shape:
        u = grid_points(imm, grid)
        try:
            b = shape_batch(imm, u)
        except _EVAL_ERRORS:
            rep.criteria.append(_locate_failure(imm, u, shape_batch))
        else:
            rep.criteria.extend(_shape_criteria(imm, b, tol))
            rep.samples_summary.update(_summary(b))
    if parallel and offsets:
        crit, table = verify_parallel(imm, offsets, parallel_grid, tol)
        rep.criteria.extend(crit)
        rep.parallel_table = table
    if shape and imm.family == "parabolic-helicoid" and homogeneity_n > 0:
        checks = random_group_checks(imm.params["B"], homogeneity_n, homogeneity_seed)
        gmax = max(c.graph_residual for c in checks)
        pmax = max(c.pullback_residual for c in checks)
        ok = all(c.graph_residual <= tol.graph and c.pullback_residual <= tol.pullback for c in checks)
        rep.criteria.append(Criterion(
            "homogeneity", {"graph": tol.graph, "pullback": tol.pullback, "elements": homogeneity_n},
            {"graph": gmax, "pullback": pmax}, ok,
        ))
    return rep
