"""Run the elimination end to end, recording every object and check."""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Dict, List, Optional, Sequence

from ..algebra import MultiPoly, RatFunc
from .oracle import SamplePoint, lagrange_derivative, raw_point, relation_oracle
from .pipeline import (
    BSquaredSolution,
    Check,
    GaussRelation,
    LinearSystem2,
    PipelineError,
    build_gauss_relations,
    check_epsilon,
    cramer2,
    derivative_identity_polys,
    eliminate_A,
    extract_mu_row,
    solve_b_squared,
    solve_mu_system,
    substitute_b3,
    t5_coefficients,
    verify_leading_ratios,
)
from .reference import (
    PAIRS,
    cubic_chains,
    detm_expansion,
    generic_a2_coeff,
    reference_targets,
    symbols,
)

DEFAULT_SEED = 20240607
MIN_POINTS = 100


def rf_text(x) -> str:
    if isinstance(x, RatFunc):
        if x.den.is_constant() and x.den.constant_value() == 1:
            return x.num.to_text()
        return f"({x.num.to_text()}) / ({x.den.to_text()})"
    if isinstance(x, MultiPoly):
        return x.to_text()
    return str(x)


def _short(text: str, limit: int = 400) -> str:
    return text if len(text) <= limit else text[:limit] + " ..."


@dataclass
class Stage:
    name: str
    objects: Dict[str, str] = field(default_factory=dict)
    checks: List[Check] = field(default_factory=list)

    def check(self, name: str, passed: bool, witness: str = "") -> bool:
        self.checks.append(Check(name, bool(passed), witness))
        return bool(passed)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {"name": self.name, "objects": dict(self.objects), "checks": [c.to_json() for c in self.checks]}


@dataclass
class EliminationTrace:
    epsilon: int
    seed: int
    stages: List[Stage] = field(default_factory=list)
    diagnostics: List[Check] = field(default_factory=list)
    relations: List[GaussRelation] = field(default_factory=list)
    reduced: tuple = ()
    system: Optional[LinearSystem2] = None
    solution: Optional[BSquaredSolution] = None
    derivative_polys: tuple = ()
    t5_coeffs: tuple = ()
    mu_kernel: list = field(default_factory=list)
    n_points: int = 0
    error: str = ""

    @property
    def certified(self) -> bool:
        return not self.error and bool(self.stages) and all(s.passed for s in self.stages)

    @property
    def first_failure(self) -> Optional[str]:
        for s in self.stages:
            for c in s.checks:
                if not c.passed:
                    return f"{s.name}: {c.name}"
        return self.error or None

    def to_json(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "seed": self.seed,
            "random_points": self.n_points,
            "stages": [s.to_json() for s in self.stages],
            "diagnostics": [c.to_json() for c in self.diagnostics],
            "certified": self.certified,
            "first_failure": self.first_failure,
        }

    def t5_texts(self) -> Dict[str, str]:
        return {f"t5-P{i}": c.to_text() for i, (_, c) in enumerate(self.t5_coeffs, start=1)}


def sample_points(eps: int, sol: BSquaredSolution, n: int, seed: int):
    """Seeded admissible points with their relation-oracle solutions."""
    rng = random.Random(seed)
    out = []
    attempts = 0
    while len(out) < n:
        attempts += 1
        if attempts > 50 * n:
            raise PipelineError("could not find enough admissible sample points")
        pt = raw_point(rng)
        m1, m2, m3 = pt.mu
        if m1 == m2 or m1 == m3 or m2 == m3 or pt.t == 0:
            continue
        if sol.q.evaluate(pt.coords) == 0 or sol.detM.num.evaluate(pt.coords) == 0:
            continue
        orc = relation_oracle(eps, pt)
        if orc is None:
            continue
        out.append((pt, orc))
    return out


def _ev(x, pt: SamplePoint) -> Fraction:
    if isinstance(x, (RatFunc, MultiPoly)):
        return x.evaluate(pt.coords)
    return Fraction(x)


def _ev_form(form, pt: SamplePoint, values: Dict[str, Fraction]) -> Fraction:
    acc = _ev(form.const, pt)
    for k, v in form.coeffs.items():
        acc += _ev(v, pt) * values[k]
    return acc


def _first_bad(points, fn) -> Optional[str]:
    for i, (pt, orc) in enumerate(points):
        w = fn(pt, orc)
        if w:
            return f"point #{i} mu={tuple(map(str, pt.mu))} t={pt.t}: {w}"
    return None


def _point_check(stage: Stage, name: str, points, fn) -> bool:
    bad = _first_bad(points, fn)
    return stage.check(f"{name} [{len(points)} points]", bad is None, bad or "")


def _eq(a, b) -> bool:
    try:
        return RatFunc.coerce(a) == RatFunc.coerce(b)
    except TypeError:
        return a == b


def run_certification(
    eps: int,
    seed: int = DEFAULT_SEED,
    n_points: int = MIN_POINTS,
    targets: Optional[Dict[str, object]] = None,
    relations: Optional[Sequence[GaussRelation]] = None,
    fail_fast: bool = False,
) -> EliminationTrace:
    """Run every stage for one sign of epsilon.

    ``targets`` replaces the reference objects and ``relations`` replaces the
    starting relations; both exist so that corrupted inputs can be shown to
    break certification.  With ``fail_fast`` the run stops after the first
    stage that has a failing check.
    """
    eps = check_epsilon(eps)
    if n_points < MIN_POINTS:
        raise ValueError(f"at least {MIN_POINTS} random points are required, got {n_points}")
    ref = reference_targets(eps) if targets is None else targets
    trace = EliminationTrace(epsilon=eps, seed=seed)
    try:
        _run(trace, eps, seed, n_points, ref, relations, fail_fast)
    except _Stop:
        pass
    except PipelineError as exc:
        trace.error = f"pipeline error: {exc}"
    return trace


class _Stop(Exception):
    pass


def _run(trace, eps, seed, n_points, ref, relations, fail_fast) -> None:
    m, t = symbols()
    m1, m2, m3 = m

    def begin(name: str) -> Stage:
        if fail_fast and trace.stages and not trace.stages[-1].passed:
            raise _Stop
        stage = Stage(name)
        trace.stages.append(stage)
        return stage

    # relations -----------------------------------------------------------
    st = begin("gauss_relations")
    rels = list(relations) if relations is not None else build_gauss_relations(eps)
    trace.relations = rels
    st.check("three relations for pairs (1,2), (2,3), (1,3)", sorted(r.pair for r in rels) == sorted(PAIRS))
    for r in rels:
        tag = f"relation-{r.pair[0]}{r.pair[1]}"
        for name in r.form().names():
            st.objects[f"{tag}/{name}"] = rf_text(r.form().coeff(name))
        st.objects[f"{tag}/const"] = rf_text(r.form().const)
        st.check(f"{tag} A2 coefficient", _eq(r.a2_coeff, ref[f"{tag}/A2"]), rf_text(r.a2_coeff))
        st.check(f"{tag} A2 coefficient nonzero", not RatFunc.coerce(r.a2_coeff).is_zero())
        generic = generic_a2_coeff(m, t, r.pair)
        agree = _eq(generic, r.a2_coeff)
        trace.diagnostics.append(
            Check(
                f"{tag} A2 coefficient agrees with the generic (m,n) frame relation",
                agree,
                "" if agree else f"generic {rf_text(generic)} vs used {rf_text(r.a2_coeff)}",
            )
        )

    # eliminate A -----------------------------------------------------------
    st = begin("eliminate_A")
    red = eliminate_A(rels)
    trace.reduced = red
    by_pair = {r.pair: r for r in rels}
    a2 = by_pair[(1, 2)].rhs / by_pair[(1, 2)].a2_coeff
    for idx, form in enumerate(red, start=1):
        for name in ("b1sq", "b2sq", "b3sq", "const"):
            val = form.const if name == "const" else form.coeff(name)
            st.objects[f"reduced-{idx}/{name}"] = rf_text(val)
            st.check(f"reduced-{idx}/{name} matches reference", _eq(val, ref[f"reduced-{idx}/{name}"]), rf_text(val))
        st.check(f"reduced-{idx} free of A2", _eq(form.coeff("A2"), 0))
    back = by_pair[(1, 2)].form().substitute("A2", a2)
    st.check(
        "relation (1,2) holds identically after back-substitution",
        all(_eq(back.coeff(n), 0) for n in ("b1sq", "b2sq", "b3sq")) and _eq(back.const, 0),
    )
    for pair, form in zip(((2, 3), (1, 3)), red):
        back = by_pair[pair].form().substitute("A2", a2) * (m2 - m1) - form
        st.check(
            f"relation {pair} after back-substitution equals its reduced form",
            all(_eq(back.coeff(n), 0) for n in ("b1sq", "b2sq", "b3sq")) and _eq(back.const, 0),
        )

    # substitute b3 -----------------------------------------------------------
    st = begin("substitute_b3")
    subst, sys = substitute_b3(red)
    trace.system = sys
    for idx, form in enumerate(subst, start=1):
        for name in ("b1sq", "b2sq", "const"):
            val = form.const if name == "const" else form.coeff(name)
            st.check(f"substituted-{idx}/{name} matches reference", _eq(val, ref[f"substituted-{idx}/{name}"]), rf_text(val))
    for i in range(2):
        for j in range(2):
            key = f"M{i + 1}{j + 1}"
            entry = sys.M[i][j]
            st.objects[key] = rf_text(entry)
            shaped = (ref[f"{key}/t-numerator"] * t + sys.C[f"C{i + 1}{j + 1}"]) / ref[f"{key}/den"]
            st.check(f"{key} = (t-numerator * t + C{i + 1}{j + 1}) / den", _eq(entry, shaped), rf_text(entry))
    for key, val in sys.C.items():
        st.objects[key] = rf_text(val)
        st.check(f"{key} is free of t", val.den.degree_t() == 0 and val.degree_t() == 0)
    for i, L in enumerate(sys.L, start=1):
        st.objects[f"L{i}"] = rf_text(L)
        st.objects[f"rhs{i}"] = rf_text(sys.rhs[i - 1])
        Lr = sys.rhs[i - 1] - ref[f"rhs{i}/t2"] * t**2
        st.check(f"rhs{i} = t^2 term - L{i} with deg_t(L{i}) <= 1", Lr.degree_t() <= 1, rf_text(Lr))
    det = sys.M[0][0] * sys.M[1][1] - sys.M[0][1] * sys.M[1][0]
    st.check("det M is not the zero function", not det.is_zero())
    st.check(
        "det M equals its expansion through C11, C12, C21, C22",
        _eq(det, detm_expansion(m, t, sys.C["C11"], sys.C["C12"], sys.C["C21"], sys.C["C22"])),
    )

    # solve -----------------------------------------------------------------
    st = begin("solve_b_squared")
    sol = solve_b_squared(sys)
    trace.solution = sol
    st.objects["q"] = sol.q.to_text()
    for i, p in enumerate(sol.p, start=1):
        st.objects[f"p{i}"] = p.to_text()
    for i, num in enumerate(sol.cramer_numerators, start=1):
        ok = num.den.degree_t() == 0 and num.degree_t() == 3
        st.check(f"cleared Cramer numerator {i} has t-degree 3", ok, f"degree {num.num.degree_t()}")
        if ok:
            c3 = num.coeff_t(3)
            st.check(f"cleared Cramer numerator {i} t^3 coefficient", _eq(c3, ref[f"cramer-{i}/t3"]), rf_text(c3))
    st.check("deg_t(q) = 2", sol.q.degree_t() == 2, f"{sol.q.degree_t()}")
    q2 = RatFunc(sol.q.coeff_t(2))
    st.check("q t^2 coefficient matches the bracket form", _eq(q2, ref["detM/t2-bracket"]), rf_text(q2))
    st.check("q t^2 coefficient matches the factored form", _eq(q2, ref["detM/t2"]), rf_text(q2))
    for i, (b, p) in enumerate(zip(sol.b, sol.p), start=1):
        st.check(f"b{i}^2 = p{i}/q", _eq(b, RatFunc(p, sol.q)))
    st.check("b3^2 = 1 - t - b1^2 - b2^2", _eq(sol.b3sq, 1 - t - sol.b1sq - sol.b2sq))
    chains = {k: [ref[f"{k}/{i}"] for i in range(4)] for k in cubic_chains(m)}
    for name, chain in chains.items():
        for i in range(len(chain) - 1):
            st.check(f"{name} step {i} -> {i + 1}", _eq(chain[i], chain[i + 1]))
    lhs = chains["cubic-c"][0].evaluate((1, 2, 4, 0))
    rhs = chains["cubic-c"][-1].evaluate((1, 2, 4, 0))
    st.check("cubic-c spot value at mu=(1,2,4) is -18", lhs == rhs == -18, f"lhs={lhs} rhs={rhs}")

    # leading ratios ------------------------------------------------------------
    st = begin("leading_terms")
    lead_ref = {k: ref[k] for k in ("lead-p1", "lead-p2", "lead-p3", "lead-q")}
    st.checks.extend(verify_leading_ratios(sol, lead_ref))
    for name, poly in (("lead-p1", sol.p[0]), ("lead-p2", sol.p[1]), ("lead-p3", sol.p[2]), ("lead-q", sol.q)):
        lc = poly.leading_term_t()[1]
        st.objects[name] = lc.to_text()
        target = RatFunc.coerce(ref[name])
        same = target.is_polynomial() and target.as_poly() == lc
        st.check(f"{name} structurally equal to reference", same, lc.to_text())

    # derivative identities -------------------------------------------------------
    st = begin("derivative_identities")
    P = derivative_identity_polys(sol, eps)
    trace.derivative_polys = P
    for i, poly in enumerate(P, start=1):
        st.objects[f"P{i}"] = f"<{len(poly)} terms, t-degree {poly.degree_t()}>"

    # t^5 coefficients ---------------------------------------------------------------
    st = begin("t5_coefficients")
    lt = t5_coefficients(P)
    trace.t5_coeffs = tuple(lt)
    rows = []
    for i, (deg, coeff) in enumerate(lt, start=1):
        st.objects[f"t5-P{i}"] = coeff.to_text()
        st.check(f"P{i} has t-degree 5", deg == 5, str(deg))
        target = RatFunc.coerce(ref[f"t5-P{i}"])
        same = target.is_polynomial() and target.as_poly() == coeff
        st.check(f"t5-P{i} structurally equal to reference", same, _short(coeff.to_text()))
        diag = all(coeff.evaluate((a, a, a, 0)) == 0 for a in (1, -3, Fraction(7, 2)))
        st.check(f"t5-P{i} vanishes on mu1 = mu2 = mu3", diag)
        row = extract_mu_row(coeff)
        st.check(f"t5-P{i} reduces to one linear factor in mu", row is not None, str(row))
        rows.append(row)

    # mu system -------------------------------------------------------------------------
    st = begin("mu_system")
    target_rows = [list(r) for r in ref["mu-system"]]
    st.objects["matrix"] = json.dumps(target_rows)
    st.check("extracted linear factors equal the mu-system rows", rows == target_rows, f"extracted {rows}")
    rank, kernel = solve_mu_system(target_rows)
    trace.mu_kernel = kernel
    st.objects["kernel"] = json.dumps([[str(x) for x in v] for v in kernel])
    st.check("rank 2", rank == 2, str(rank))
    st.check("kernel is span{(1,1,1)}", len(kernel) == 1 and _parallel(kernel[0], (1, 1, 1)), str(kernel))
    st.check("(1,1,1) annihilated by every row", all(sum(target_rows[i]) == 0 for i in range(3)))

    # random-point cross-validation ---------------------------------------------------------
    st = begin("random_point_cross_validation")
    points = sample_points(eps, sol, n_points, seed)
    trace.n_points = len(points)
    st.objects["points"] = str(len(points))
    st.objects["seed"] = str(seed)

    def rel_resid(pt, orc):
        for r in rels:
            v = _ev_form(r.form(), pt, orc)
            if v != 0:
                return f"relation {r.pair} residual {v}"

    def red_resid(pt, orc):
        for i, f in enumerate(red, start=1):
            v = _ev_form(f, pt, orc)
            if v != 0:
                return f"reduced-{i} residual {v}"

    def sys_resid(pt, orc):
        b = (orc["b1sq"], orc["b2sq"])
        for i in range(2):
            lhs = _ev(sys.M[i][0], pt) * b[0] + _ev(sys.M[i][1], pt) * b[1]
            if lhs != _ev(sys.rhs[i], pt):
                return f"row {i + 1}: {lhs} != {_ev(sys.rhs[i], pt)}"

    def cramer(pt, orc):
        Ms = [[_ev(sys.M[i][j], pt) for j in range(2)] for i in range(2)]
        rs = [_ev(sys.rhs[i], pt) for i in range(2)]
        d, n1, n2 = cramer2(Ms, rs)
        exp = {"b1sq": n1 / d, "b2sq": n2 / d}
        exp["b3sq"] = 1 - pt.t - exp["b1sq"] - exp["b2sq"]
        if _ev(sol.detM, pt) != d:
            return "det M"
        for i, name in enumerate(("b1sq", "b2sq", "b3sq")):
            got = _ev(sol.b[i], pt)
            if got != exp[name] or got != orc[name]:
                return f"{name}: symbolic {got}, Cramer {exp[name]}, relation oracle {orc[name]}"

    def p_over_q(pt, orc):
        qv = sol.q.evaluate(pt.coords)
        for i, p in enumerate(sol.p, start=1):
            if p.evaluate(pt.coords) / qv != orc[f"b{i}sq"]:
                return f"p{i}/q"

    def deriv(pt, orc):
        nodes = [pt.t + k for k in range(4)]
        pv = [[p.evaluate((*pt.mu, x)) for x in nodes] for p in sol.p]
        qv = [sol.q.evaluate((*pt.mu, x)) for x in nodes]
        dp = [lagrange_derivative(nodes, v, pt.t) for v in pv]
        dq = lagrange_derivative(nodes, qv, pt.t)
        p0 = [v[0] for v in pv]
        q0 = qv[0]
        mu = pt.mu
        for n in range(3):
            ks = [k for k in range(3) if k != n]
            comb = sum((mu[3 - n - k] - mu[n]) * p0[k] for k in ks)
            pref = mu[n] * (mu[ks[0]] - mu[n]) * (mu[ks[1]] - mu[n])
            exp = eps * q0 * comb - pref * (dp[n] * q0 - p0[n] * dq + q0 * q0)
            if P[n].evaluate(pt.coords) != exp:
                return f"P{n + 1}"

    _point_check(st, "Gauss relations vanish at the direct 4x4 solution", points, rel_resid)
    _point_check(st, "reduced relations vanish at the direct solution", points, red_resid)
    _point_check(st, "M b = rhs at the direct solution", points, sys_resid)
    _point_check(st, "b1^2, b2^2, b3^2, det M equal the specialized Cramer solve", points, cramer)
    _point_check(st, "p_i/q equal the direct solution", points, p_over_q)
    _point_check(st, "P_n equal the combination of evaluated p_i, q and interpolated derivatives", points, deriv)


def _parallel(v: Sequence[Fraction], w: Sequence[int]) -> bool:
    ratio = None
    for a, b in zip(v, w):
        if b == 0:
            if a != 0:
                return False
            continue
        r = Fraction(a) / b
        if ratio is None:
            ratio = r
        elif r != ratio:
            return False
    return ratio not in (None, 0)


# golden files ---------------------------------------------------------------


def load_golden(path: Optional[str] = None) -> Dict[str, Dict[str, str]]:
    if path is None:
        text = resources.files("isocert.elimination").joinpath("data/t5_golden.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    return json.loads(text)


def compare_golden(trace: EliminationTrace, golden: Dict[str, Dict[str, str]]) -> List[Check]:
    expected = golden.get(str(trace.epsilon))
    if expected is None:
        return [Check(f"golden entry for epsilon={trace.epsilon}", False, "missing")]
    got = trace.t5_texts()
    out = []
    for name in sorted(expected):
        out.append(Check(f"golden {name} (epsilon={trace.epsilon})", got.get(name) == expected[name], "" if got.get(name) == expected[name] else "text differs"))
    return out


def golden_document(traces: Sequence[EliminationTrace]) -> Dict[str, Dict[str, str]]:
    return {str(tr.epsilon): tr.t5_texts() for tr in traces}
