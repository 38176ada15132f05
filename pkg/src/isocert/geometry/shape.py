"""Shape operator, angle function and fundamental-equation residuals.

Everything is computed on batches of parameter points: the chart map is
evaluated on third-order jets, which gives exact first, second and third
derivatives of the immersion without finite differences.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from .ambient import AmbientSpace, christoffel_from
from .families import Immersion
from .jets import Jet, jeinsum, jdet3, jet_space, jinv, stack

ORIENTATION_TOL = 1e-9
CHUNK = 128
RESIDUAL_NAMES = ("gauss", "codazzi", "t_deriv", "xcos", "t_norm", "n_norm", "self_adjoint")


class RankError(ValueError):
    """The immersion (or an offset of it) is not of rank 3 at some point."""


@dataclass
class CurvatureSample:
    point: np.ndarray
    induced_metric: np.ndarray
    second_fund: np.ndarray
    shape: np.ndarray
    principal_curvatures: np.ndarray
    normal: np.ndarray
    cos_theta: float
    T_components: np.ndarray
    residuals: Dict[str, float]


@dataclass
class ShapeBatch:
    """Per-point geometric data for a batch of parameter points (leading axis)."""

    u: np.ndarray
    x: np.ndarray
    g: np.ndarray
    II: np.ndarray
    S: np.ndarray
    curvatures: np.ndarray
    normal: np.ndarray
    cos_theta: np.ndarray
    T: np.ndarray
    ST: np.ndarray
    residuals: Dict[str, np.ndarray]

    def __len__(self) -> int:
        return self.u.shape[0]

    def sample(self, k: int) -> CurvatureSample:
        return CurvatureSample(
            point=self.x[k],
            induced_metric=self.g[k],
            second_fund=self.II[k],
            shape=self.S[k],
            principal_curvatures=self.curvatures[k],
            normal=self.normal[k],
            cos_theta=float(self.cos_theta[k]),
            T_components=self.T[k],
            residuals={name: float(arr[k]) for name, arr in self.residuals.items()},
        )

    @staticmethod
    def concat(parts) -> "ShapeBatch":
        parts = list(parts)
        fields = ("u", "x", "g", "II", "S", "curvatures", "normal", "cos_theta", "T", "ST")
        kw = {f: np.concatenate([getattr(p, f) for p in parts]) for f in fields}
        names = parts[0].residuals.keys()
        kw["residuals"] = {n: np.concatenate([p.residuals[n] for p in parts]) for n in names}
        return ShapeBatch(**kw)


def unit_normal_covector(dF: Jet) -> Jet:
    """Cofactor covector nu with nu(V) = det[dF_1, dF_2, dF_3, V]."""
    comps = []
    for a in range(4):
        rows = [r for r in range(4) if r != a]
        minor = jdet3(Jet(dF.space, dF.c[..., rows, :], 2, dF.order))
        comps.append(minor if a % 2 else -minor)
    return stack(comps)


def _frame(g: np.ndarray):
    """Cholesky factor L (g = L L^T) and the g-orthonormal frame E = L^{-T}."""
    L = np.linalg.cholesky(g)
    E = np.linalg.inv(L).swapaxes(-1, -2)
    return L, E


def principal_curvatures(g: np.ndarray, II: np.ndarray) -> np.ndarray:
    """Eigenvalues of the pencil (II, g), sorted ascending, batched via the Cholesky reduction."""
    _, E = _frame(g)
    M = np.einsum("...ai,...ab,...bj->...ij", E, II, E)
    return np.linalg.eigvalsh(0.5 * (M + M.swapaxes(-1, -2)))


def _local_geometry(X: Jet, amb: AmbientSpace, orient: Optional[Jet] = None):
    """First and second fundamental forms of the chart-point jet ``X`` in parameters 0..2.

    ``orient`` optionally supplies a 4-vector (values only are used) against
    which the normal is oriented; otherwise the angle-function rule applies.
    """
    G, Gam = amb.geometry_along(X)
    dF = X.grad([0, 1, 2])  # dF[a, i]
    d2F = dF.grad([0, 1, 2])  # d2F[a, i, j]
    GdF = jeinsum("ab,bj->aj", G, dF)
    g = jeinsum("ai,aj->ij", dF, GdF)
    nu = unit_normal_covector(dF)
    Ginv = jinv(G)
    Nsharp = jeinsum("ab,b->a", Ginv, nu)
    norm = jeinsum("a,a->", nu, Nsharp).sqrt()
    if orient is None:
        cos0 = nu.value[..., 3] / norm.value
        sign = np.where(np.abs(cos0) > ORIENTATION_TOL, np.sign(cos0), 1.0)
    else:
        sign = np.sign(np.einsum("...a,...a->...", nu.value, orient))
        sign = np.where(sign == 0, 1.0, sign)
    scale = norm.reciprocal() * sign
    N = _scale_vector(Nsharp, scale)
    Nflat = _scale_vector(nu, scale)
    H = d2F + jeinsum("aci,cj->aij", jeinsum("abc,bi->aci", Gam, dF), dF)
    II = jeinsum("a,aij->ij", Nflat, H)
    return {"G": G, "Gam": Gam, "dF": dF, "GdF": GdF, "g": g, "N": N, "Nflat": Nflat, "II": II}


def _scale_vector(v: Jet, s: Jet) -> Jet:
    """Multiply a tensor jet by a scalar jet with matching batch shape."""
    sc = Jet(s.space, s.c[(Ellipsis,) + (None,) * v.tdim], v.tdim, s.order)
    return v * sc


def _batch_core(imm: Immersion, u: np.ndarray, residuals: bool) -> ShapeBatch:
    amb = imm.ambient
    eps = imm.epsilon
    K = 3 if residuals else 2
    space = jet_space((3, K))
    uj = [Jet.variable(space, i, u[:, i]) for i in range(3)]
    X = stack(imm.chart_map(uj))
    geo = _local_geometry(X, amb)
    g, II, GdF = geo["g"], geo["II"], geo["GdF"]
    g0 = g.value
    try:
        L, E = _frame(g0)
    except np.linalg.LinAlgError as exc:
        raise RankError("induced metric is not positive definite (rank deficiency)") from exc
    ginv = jinv(g)
    S = jeinsum("ik,kj->ij", ginv, II)
    Tflat = GdF[3]  # <d_j F, d_t>
    T = jeinsum("ij,j->i", ginv, Tflat)
    cos_t = geo["Nflat"][3]
    N = geo["N"]

    S0, T0, II0, cos0 = S.value, T.value, II.value, cos_t.value
    res: Dict[str, np.ndarray] = {}
    res["t_norm"] = np.abs(np.einsum("...i,...ij,...j->...", T0, g0, T0) + cos0**2 - 1.0)
    G0 = geo["G"].value
    res["n_norm"] = np.abs(np.einsum("...a,...ab,...b->...", N.value, G0, N.value) - 1.0)
    IIf = np.einsum("...ai,...ab,...bj->...ij", E, II0, E)
    res["self_adjoint"] = np.abs(IIf - IIf.swapaxes(-1, -2)).max(axis=(-1, -2))
    LT = L.swapaxes(-1, -2)
    ST0 = np.einsum("...ij,...j->...i", S0, T0)

    if residuals:
        dg = g.grad([0, 1, 2])  # dg[l, j, i] = d_i g_lj
        gam = christoffel_from(ginv, dg)  # order 1
        dgam = gam.grad([0, 1, 2]).value  # [e, b, c, a] = d_a Gamma^e_bc
        gm = gam.value
        R = (
            np.einsum("...ebca->...ecab", dgam)
            - np.einsum("...eacb->...ecab", dgam)
            + np.einsum("...eaf,...fbc->...ecab", gm, gm)
            - np.einsum("...ebf,...fac->...ecab", gm, gm)
        )
        Rlow = np.einsum("...de,...ecab->...abcd", g0, R)
        Tl = Tflat.value
        gg = g0
        rhs = eps * (
            np.einsum("...ad,...bc->...abcd", gg, gg)
            - np.einsum("...ac,...bd->...abcd", gg, gg)
            + np.einsum("...a,...c,...bd->...abcd", Tl, Tl, gg)
            + np.einsum("...b,...d,...ac->...abcd", Tl, Tl, gg)
            - np.einsum("...b,...c,...ad->...abcd", Tl, Tl, gg)
            - np.einsum("...a,...d,...bc->...abcd", Tl, Tl, gg)
        ) + np.einsum("...ad,...bc->...abcd", II0, II0) - np.einsum("...ac,...bd->...abcd", II0, II0)
        diff = np.einsum("...abcd,...ai,...bj,...ck,...dl->...ijkl", Rlow - rhs, E, E, E, E)
        res["gauss"] = np.abs(diff).reshape(len(u), -1).max(axis=1)

        dS = S.grad([0, 1, 2]).value  # [a, c, b] = d_b S^a_c
        nablaS = (
            dS.swapaxes(-1, -2)  # [a, b, c]
            + np.einsum("...abk,...kc->...abc", gm, S0)
            - np.einsum("...kbc,...ak->...abc", gm, S0)
        )
        delta = np.eye(3)
        cod = nablaS - nablaS.swapaxes(-1, -2) - eps * cos0[:, None, None, None] * (
            np.einsum("...c,ab->...abc", Tl, delta) - np.einsum("...b,ac->...abc", Tl, delta)
        )
        codf = np.einsum("...ia,...abc,...bj,...ck->...ijk", LT, cod, E, E)
        res["codazzi"] = np.abs(codf).reshape(len(u), -1).max(axis=1)

        dT = T.grad([0, 1, 2]).value  # [a, b] = d_b T^a
        nablaT = dT + np.einsum("...abk,...k->...ab", gm, T0)
        td = nablaT - cos0[:, None, None] * S0
        tdf = np.einsum("...ia,...ab,...bj->...ij", LT, td, E)
        res["t_deriv"] = np.abs(tdf).reshape(len(u), -1).max(axis=1)

        dcos = cos_t.grad([0, 1, 2]).value
        xc = dcos + np.einsum("...bc,...c->...b", II0, T0)
        res["xcos"] = np.abs(np.einsum("...b,...bj->...j", xc, E)).max(axis=1)

    return ShapeBatch(
        u=u,
        x=X.value,
        g=g0,
        II=II0,
        S=S0,
        curvatures=principal_curvatures(g0, II0),
        normal=N.value,
        cos_theta=cos0,
        T=T0,
        ST=np.sqrt(np.einsum("...i,...ij,...j->...", ST0, g0, ST0)),
        residuals=res,
    )


def shape_batch(imm: Immersion, u, residuals: bool = True, chunk: int = CHUNK) -> ShapeBatch:
    """Shape data at every row of ``u`` (shape (n, 3)), processed in memory-bounded chunks."""
    u = np.atleast_2d(np.asarray(u, dtype=float))
    if u.shape[-1] != 3:
        raise ValueError("parameter points must have 3 coordinates")
    parts = [_batch_core(imm, u[i : i + chunk], residuals) for i in range(0, len(u), chunk)]
    return ShapeBatch.concat(parts)


def shape_operator_at(imm: Immersion, u) -> CurvatureSample:
    """Curvature sample (with residuals) at a single parameter point."""
    return shape_batch(imm, np.asarray(u, dtype=float).reshape(1, 3)).sample(0)


def fundamental_residuals(sample: CurvatureSample) -> Dict[str, float]:
    """Residual map carried by a sample computed with third-order jets."""
    return dict(sample.residuals)
