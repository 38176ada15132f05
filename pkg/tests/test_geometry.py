import math

import numpy as np
import pytest

from isocert.geometry import (
    ConfigError,
    Immersion,
    StepBudgetError,
    Tolerances,
    clifford_parallel_oracle,
    geodesic_exp,
    grid_points,
    grid_verify,
    helicoid_homogeneity_check,
    metric_at,
    parallel_mean_curvature,
    parallel_mean_curvatures,
    random_group_checks,
    shape_batch,
    shape_operator_at,
)
from isocert.geometry.ambient import AmbientSpace
from isocert.geometry.geodesic import _speed2
from isocert.geometry.homogeneity import graph_height
from isocert.geometry.report import distinct_values

ALL = [
    ("slice", 1),
    ("slice", -1),
    ("totally-geodesic-cylinder", 1),
    ("totally-geodesic-cylinder", -1),
    ("umbilical-cylinder", 1),
    ("umbilical-cylinder", -1),
    ("sphere-torus-cylinder", 1),
    ("hyperbolic-torus-cylinder", -1),
    ("parabolic-helicoid", -1),
]


# finite-difference oracle for the principal curvatures ---------------------------------


def _fd_christoffel(amb, x, h=1e-5):
    Ginv = np.linalg.inv(metric_at(amb, x))
    dG = []
    for i in range(4):
        e = np.zeros(4)
        e[i] = h
        dG.append((metric_at(amb, x + e) - metric_at(amb, x - e)) / (2 * h))
    gam = np.zeros((4, 4, 4))
    for k in range(4):
        for i in range(4):
            for j in range(4):
                gam[k, i, j] = 0.5 * sum(Ginv[k, l] * (dG[i][l, j] + dG[j][l, i] - dG[l][i, j]) for l in range(4))
    return gam


def fd_curvatures(imm, u, h=1e-4):
    u = np.asarray(u, dtype=float)
    f = lambda p: np.array(imm.chart_map(list(p)), dtype=float)
    amb = imm.ambient
    x = f(u)
    E = np.eye(3) * h
    dF = np.stack([(f(u + E[i]) - f(u - E[i])) / (2 * h) for i in range(3)], axis=1)
    d2F = np.zeros((4, 3, 3))
    for i in range(3):
        for j in range(3):
            d2F[:, i, j] = (f(u + E[i] + E[j]) - f(u + E[i] - E[j]) - f(u - E[i] + E[j]) + f(u - E[i] - E[j])) / (4 * h * h)
    G = metric_at(amb, x)
    # normal: G-orthogonal complement of the tangent columns
    null = np.linalg.svd((G @ dF).T)[2][-1]
    N = null / math.sqrt(null @ G @ null)
    gam = _fd_christoffel(amb, x)
    acc = d2F + np.einsum("kab,ai,bj->kij", gam, dF, dF)
    II = np.einsum("k,kl,lij->ij", N, G, acc)
    g = dF.T @ G @ dF
    return np.sort(np.linalg.eigvals(np.linalg.solve(g, II)).real)


def _close_up_to_sign(k, expected, tol):
    e = np.sort(expected)
    return np.abs(np.sort(k) - e).max() <= tol or np.abs(np.sort(k) - np.sort(-e)).max() <= tol


# families and configuration -------------------------------------------------------------


def test_defaults_and_sign_inference():
    imm = Immersion.create("sphere-torus-cylinder")
    assert imm.epsilon == 1 and imm.params == {"r1": 0.6, "r2": 0.8}
    assert Immersion.create("parabolic-helicoid").epsilon == -1


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(family="sphere-torus-cylinder", r1=0.6, r2=0.9),
        dict(family="hyperbolic-torus-cylinder", r1=1.0, r2=1.0),
        dict(family="sphere-torus-cylinder", epsilon=-1),
        dict(family="umbilical-cylinder", epsilon=1, r1=-0.5),
        dict(family="umbilical-cylinder", epsilon=2),
        dict(family="no-such-family", epsilon=1),
        dict(family="slice", epsilon=1, B=1.0),
    ],
)
def test_config_errors(kwargs):
    fam = kwargs.pop("family")
    eps = kwargs.pop("epsilon", None)
    with pytest.raises(ConfigError):
        Immersion.create(fam, eps, **kwargs)


def test_equal_radii_torus_accepted():
    r = math.sqrt(0.5)
    assert Immersion.create("sphere-torus-cylinder", r1=r, r2=r).expected_curvatures() == pytest.approx((-1.0, 0.0, 1.0))


def test_unchecked_construction_keeps_defect():
    imm = Immersion.create("sphere-torus-cylinder", r1=0.6, r2=0.801, check=False)
    assert imm.constraint_defect() == pytest.approx(0.6**2 + 0.801**2 - 1)
    assert not imm.checked


# curvature data ----------------------------------------------------------------------


@pytest.mark.parametrize("family, eps", ALL)
def test_curvatures_agree_with_finite_difference_oracle(family, eps):
    imm = Immersion.create(family, eps)
    rng = np.random.default_rng(7)
    for _ in range(5):
        u = [rng.uniform(lo, hi) for lo, hi in imm.box]
        k = shape_operator_at(imm, u).principal_curvatures
        assert _close_up_to_sign(k, fd_curvatures(imm, u), 2e-5)
        assert _close_up_to_sign(k, imm.expected_curvatures(), 1e-9)


def test_torus_curvature_values():
    k = shape_operator_at(Immersion.create("sphere-torus-cylinder"), [1.0, 4.0, 0.5]).principal_curvatures
    assert _close_up_to_sign(k, (-0.75, 0.0, 4 / 3), 1e-9)
    k = shape_operator_at(Immersion.create("hyperbolic-torus-cylinder"), [0.2, 1.0, 0.5]).principal_curvatures
    assert _close_up_to_sign(k, (-1 / math.sqrt(2), 0.0, -math.sqrt(2)), 1e-9)


def test_umbilical_values():
    for eps, r, k in ((1, 1.0, 1 / math.tan(1.0)), (-1, 0.7, 1 / math.tanh(0.7))):
        imm = Immersion.create("umbilical-cylinder", eps, r1=r)
        assert _close_up_to_sign(shape_operator_at(imm, [1.2, 0.4, 0.3]).principal_curvatures, (0, k, k), 1e-9)


@pytest.mark.parametrize("B", [0.5, 1.0, 2.0])
def test_helicoid_angle_and_curvatures(B):
    imm = Immersion.create("parabolic-helicoid", B=B)
    b = shape_batch(imm, grid_points(imm, 4))
    assert np.abs(b.cos_theta - 1 / math.sqrt(1 + B * B)).max() < 1e-12
    assert len(distinct_values(b.curvatures.mean(axis=0))) == 2


@pytest.mark.parametrize("eps", [1, -1])
def test_slice_is_totally_geodesic_with_unit_angle(eps):
    imm = Immersion.create("slice", eps)
    b = shape_batch(imm, grid_points(imm, 3))
    assert np.abs(b.curvatures).max() < 1e-12
    assert np.allclose(b.cos_theta, 1.0)
    assert max(float(v.max()) for v in b.residuals.values()) < 1e-12


@pytest.mark.parametrize("family, eps", ALL)
def test_fundamental_residuals_small(family, eps):
    imm = Immersion.create(family, eps)
    b = shape_batch(imm, grid_points(imm, 3))
    for name, v in b.residuals.items():
        assert v.max() < 1e-9, name
    assert b.ST.max() < 1e-9


# geodesics ----------------------------------------------------------------------------


def test_half_space_vertical_geodesic():
    x = geodesic_exp(AmbientSpace(-1), [0, 0, 1, 0], [0, 0, 1, 0], math.log(2))
    assert x == pytest.approx([0, 0, 2, 0], abs=1e-9)


def test_height_geodesic_is_a_line():
    x = geodesic_exp(AmbientSpace(1), [0.1, 0.2, 0.3, 0], [0, 0, 0, 1], 0.75)
    assert x == pytest.approx([0.1, 0.2, 0.3, 0.75], abs=1e-12)


def test_half_space_semicircle():
    # unit-speed geodesic through (0,0,1) tangent to u: the unit semicircle
    x = geodesic_exp(AmbientSpace(-1), [0, 0, 1, 0], [1, 0, 0, 0], 1.0)
    assert x[0] == pytest.approx(math.tanh(1.0), abs=1e-9)
    assert x[2] == pytest.approx(1 / math.cosh(1.0), abs=1e-9)


def test_stereographic_great_circle_length():
    # from the origin along e1 with unit speed: x1 = tan(s/2)
    x = geodesic_exp(AmbientSpace(1), [0, 0, 0, 0], [0.5, 0, 0, 0], 1.0)
    assert x[0] == pytest.approx(math.tan(0.5), abs=1e-9)


@pytest.mark.parametrize("eps", [1, -1])
def test_speed_conserved(eps):
    from isocert.geometry.geodesic import integrate_geodesic
    from isocert.geometry.jets import Jet, jet_space

    amb = AmbientSpace(eps)
    rng = np.random.default_rng(3)
    p = rng.uniform(-0.5, 0.5, size=(20, 4))
    p[:, 2] += 1.5
    v = rng.normal(size=(20, 4))
    sp = jet_space((0, 0))
    res = integrate_geodesic(amb, Jet.const(sp, p, 1), Jet.const(sp, v, 1), 1.0)
    assert np.abs(_speed2(amb, res.x.value, res.v.value) - _speed2(amb, p, v)).max() <= 1e-9


def test_step_budget_error():
    with pytest.raises(StepBudgetError):
        geodesic_exp(AmbientSpace(-1), [0, 0, 1, 0], [5, 0, 0, 0], 2.0, drift_tol=1e-30, max_steps=64)


# parallel hypersurfaces ------------------------------------------------------------------


def test_zero_offset_reproduces_mean_curvature():
    imm = Immersion.create("hyperbolic-torus-cylinder")
    u = grid_points(imm, 2)
    H0 = np.trace(shape_batch(imm, u).S, axis1=1, axis2=2) / 3
    res = parallel_mean_curvature(imm, u, 0.0)
    assert np.allclose(res.H, H0, atol=1e-12)


def test_torus_offsets_match_closed_form():
    imm = Immersion.create("sphere-torus-cylinder")
    u = grid_points(imm, 3)
    h0 = float(np.trace(shape_batch(imm, u[:1]).S[0]) / 3)
    for res in parallel_mean_curvatures(imm, u, [0.1, 0.2, 0.3]):
        assert not res.focal.any()
        assert np.abs(res.H - clifford_parallel_oracle(0.6, 0.8, res.offset, h0)).max() < 1e-8


def test_clifford_oracle_at_zero_offset():
    # principal curvatures 0, r2/r1, -r1/r2 in one orientation
    h0 = (0.8 / 0.6 - 0.6 / 0.8) / 3
    assert clifford_parallel_oracle(0.6, 0.8, 0.0, h0) == pytest.approx(h0)
    assert clifford_parallel_oracle(0.6, 0.8, 0.0, -h0) == pytest.approx(-h0)


def test_focal_points_reported():
    imm = Immersion.create("umbilical-cylinder", 1, r1=0.2)
    res = parallel_mean_curvatures(imm, grid_points(imm, 2), [0.1, 0.3])
    assert not res[0].focal.any()
    assert res[1].focal.all() and np.isnan(res[1].H).all()


def test_mixed_offset_signs_rejected():
    imm = Immersion.create("slice", 1)
    with pytest.raises(ValueError):
        parallel_mean_curvatures(imm, grid_points(imm, 2), [0.1, -0.1])


# homogeneity --------------------------------------------------------------------------


def _graph_point(B, u, v, w):
    return (u, v, w, float(graph_height(B, w)))


def test_identity_element():
    r = helicoid_homogeneity_check(1.0, 0.0, (0.0, 0.0), _graph_point(1.0, 0.3, 0.1, 1.2))
    assert r.passed and r.graph_residual == 0 and r.pullback_residual == 0


@pytest.mark.parametrize("lam, shift, B", [(0.0, (3.0, -2.0), 1.0), (math.log(2), (0.0, 0.0), 1.0), (-0.4, (1.0, 1.0), 2.5)])
def test_group_elements_preserve_graph_and_metric(lam, shift, B):
    r = helicoid_homogeneity_check(B, lam, shift, _graph_point(B, -0.2, 0.7, 1.5))
    assert r.graph_residual <= 1e-12 and r.pullback_residual <= 1e-10 and r.passed


def test_dilation_by_log2_lands_on_the_graph():
    r = helicoid_homogeneity_check(1.0, math.log(2), (0, 0), (0.0, 0.0, 1.0, 0.0))
    assert r.passed


def test_off_graph_point_rejected():
    with pytest.raises(ValueError):
        helicoid_homogeneity_check(1.0, 0.1, (0, 0), (0, 0, 1.0, 0.5))
    with pytest.raises(ValueError):
        helicoid_homogeneity_check(1.0, 0.1, (0, 0), (0, 0, -1.0, 0.0))


def test_random_group_checks_seeded():
    a = [c.to_json() for c in random_group_checks(1.0, 5, seed=3)]
    b = [c.to_json() for c in random_group_checks(1.0, 5, seed=3)]
    assert a == b and all(c["pass"] for c in a)


# reports ------------------------------------------------------------------------------


def test_report_for_torus_passes():
    rep = grid_verify(Immersion.create("sphere-torus-cylinder"), grid=4, parallel_grid=2)
    assert rep.passed, rep.failures()
    assert rep.criterion("distinct-curvature-count").observed == 3


def test_report_flags_off_constraint_torus():
    imm = Immersion.create("sphere-torus-cylinder", r1=0.6, r2=0.801, check=False)
    rep = grid_verify(imm, grid=4, parallel_grid=2)
    assert not rep.passed
    assert "principal-curvatures-closed-form" in rep.failures()
    assert "curvature-constancy" in rep.failures()


def test_report_records_tolerances():
    tol = Tolerances(parallel=1e-4)
    rep = grid_verify(Immersion.create("slice", -1), grid=2, parallel_grid=2, tol=tol)
    doc = rep.to_json()
    assert doc["tolerances"]["parallel"] == 1e-4 and doc["pass"]


def test_helicoid_report_includes_homogeneity():
    rep = grid_verify(Immersion.create("parabolic-helicoid"), grid=3, parallel=False)
    assert rep.criterion("homogeneity").passed
    assert rep.criterion("cos-theta-not-0-or-1").passed
    assert rep.criterion("distinct-curvature-count").observed == 2
