"""The elimination stages, from the three Gauss relations to the μ-system."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from ..algebra import MultiPoly, RatFunc
from ..algebra import m1 as P1, m2 as P2, m3 as P3
from .affine import AffineForm
from .reference import (
    MU_SYSTEM,
    PAIRS,
    displayed_a2_coeff,
    quadratic_form_k,
    relation_rhs,
    symbols,
)


class PipelineError(RuntimeError):
    """A stage met a degenerate object that cannot occur for distinct curvatures."""


def check_epsilon(eps) -> int:
    if eps not in (1, -1) or isinstance(eps, bool):
        raise ValueError(f"epsilon must be +1 or -1, got {eps!r}")
    return int(eps)


@dataclass
class GaussRelation:
    pair: Tuple[int, int]
    a2_coeff: object
    rhs: AffineForm

    def form(self) -> AffineForm:
        """The relation as ``a2_coeff * A2 - rhs = 0``."""
        return AffineForm({"A2": self.a2_coeff}) - self.rhs


@dataclass
class LinearSystem2:
    M: List[List[RatFunc]]
    rhs: List[RatFunc]
    C: Dict[str, RatFunc]
    L: Tuple[RatFunc, RatFunc]
    provenance: str = "relation-12 solved for A2, substituted into relations 23 and 13, then b3sq = 1 - t - b1sq - b2sq"


@dataclass
class BSquaredSolution:
    b1sq: RatFunc
    b2sq: RatFunc
    b3sq: RatFunc
    detM: RatFunc
    cramer_numerators: Tuple[RatFunc, RatFunc]
    p: Tuple[MultiPoly, MultiPoly, MultiPoly]
    q: MultiPoly

    @property
    def b(self) -> Tuple[RatFunc, RatFunc, RatFunc]:
        return (self.b1sq, self.b2sq, self.b3sq)


def build_gauss_relations(eps: int, m: Sequence = None, t=None) -> List[GaussRelation]:
    """The three relations for pairs (1,2), (2,3), (1,3) over the ring of ``m``, ``t``."""
    eps = check_epsilon(eps)
    if m is None:
        m, t = symbols()
    return [GaussRelation(p, displayed_a2_coeff(m, t, p), relation_rhs(eps, m, t, p)) for p in PAIRS]


def _diff12(m):
    return m[1] - m[0]


def eliminate_A(relations: Sequence[GaussRelation], m: Sequence = None) -> Tuple[AffineForm, AffineForm]:
    """Solve relation (1,2) for A^2 and substitute into (2,3) and (1,3).

    Each result is scaled by (m2 - m1), which is the normalization used when
    the reduced relations are displayed.
    """
    if m is None:
        m, _ = symbols()
    by_pair = {r.pair: r for r in relations}
    r12 = by_pair[(1, 2)]
    if _is_zero(r12.a2_coeff):
        raise PipelineError("A^2 coefficient of relation (1,2) vanishes")
    a2 = r12.rhs / r12.a2_coeff
    out = []
    for pair in ((2, 3), (1, 3)):
        rel = by_pair[pair]
        out.append(rel.form().substitute("A2", a2) * _diff12(m))
    return out[0], out[1]


def b3_constraint(t) -> AffineForm:
    return AffineForm({"b1sq": -1, "b2sq": -1}, 1 - t)


def substitute_b3(reduced: Sequence[AffineForm], m: Sequence = None, t=None) -> Tuple[Tuple[AffineForm, AffineForm], LinearSystem2]:
    """Eliminate b3^2 and read off M, the right-hand side, the C_ij and L_i."""
    if m is None:
        m, t = symbols()
    m1, m2, m3 = m
    subst = tuple(f.substitute("b3sq", b3_constraint(t)) for f in reduced)
    M = [[subst[i].coeff(n) for n in ("b1sq", "b2sq")] for i in range(2)]
    rhs = [-subst[i].const for i in range(2)]
    C = {
        "C11": M[0][0] * (m2 - m1) ** 2 * (m3 - m2) ** 2 - 2 * ((m3 - m2) ** 3 + (m2 - m1) ** 3) * t,
        "C12": M[0][1] * (m2 - m1) ** 2 - 2 * (m3 - m2) * t,
        "C21": M[1][0] * (m2 - m1) ** 2 - 2 * (m3 - m1) * t,
        "C22": M[1][1] * (m2 - m1) ** 2 * (m3 - m1) ** 2 - 2 * ((m3 - m1) ** 3 + (m2 - m1) ** 3) * t,
    }
    L = (
        subst[0].const - 2 * (m2 - m1) * t**2 / (m3 - m2) ** 2,
        subst[1].const - 2 * (m2 - m1) * t**2 / (m3 - m1) ** 2,
    )
    return subst, LinearSystem2(M, rhs, C, L)


def cramer2(M, rhs):
    """Cramer's rule for a 2x2 system over any field-like scalar type."""
    det = M[0][0] * M[1][1] - M[0][1] * M[1][0]
    if _is_zero(det):
        raise PipelineError("singular 2x2 system")
    n1 = rhs[0] * M[1][1] - M[0][1] * rhs[1]
    n2 = M[0][0] * rhs[1] - M[1][0] * rhs[0]
    return det, n1, n2


def clearing_factor():
    """(m2-m1)^2 (m3-m1)^2 (m3-m2)^2 as a polynomial."""
    return (P2 - P1) ** 2 * (P3 - P1) ** 2 * (P3 - P2) ** 2


def solve_b_squared(sys: LinearSystem2) -> BSquaredSolution:
    """Cramer solve, then clear denominators the way the displayed solution does.

    With D = (m2-m1)^2 (m3-m1)^2 (m3-m2)^2, the numerator of det M over the
    common denominator (m1-m2)^4 (m1-m3)^2 (m2-m3)^2 = D (m1-m2)^2 becomes q,
    and p_i = b_i^2 q.  The Cramer numerators scaled by D are kept for the
    intermediate t^3 checks.
    """
    _, t = symbols()
    det, n1, n2 = cramer2(sys.M, sys.rhs)
    b1 = n1 / det
    b2 = n2 / det
    b3 = 1 - t - b1 - b2
    D = RatFunc(clearing_factor())
    extra = RatFunc((P1 - P2) ** 2)
    q = _polynomial(det * D * extra, "cleared det M")
    p1 = _polynomial(n1 * D * extra, "cleared b1^2 numerator")
    p2 = _polynomial(n2 * D * extra, "cleared b2^2 numerator")
    p3 = q * (1 - _t_poly()) - p1 - p2
    return BSquaredSolution(b1, b2, b3, det, (n1 * D, n2 * D), (p1, p2, p3), q)


def _t_poly() -> MultiPoly:
    from ..algebra import t

    return t


def _polynomial(r: RatFunc, what: str) -> MultiPoly:
    """The polynomial value of ``r``; the denominator must divide the numerator exactly."""
    if r.is_polynomial():
        return r.as_poly()
    quo = r.num.exact_div(r.den)
    if quo is None:
        raise PipelineError(f"{what} is not a polynomial")
    return quo


@dataclass
class Check:
    name: str
    passed: bool
    witness: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "pass": bool(self.passed), "witness": self.witness}


def verify_leading_ratios(sol: BSquaredSolution, lead_ref: Dict[str, RatFunc] = None) -> List[Check]:
    """Degrees of p_i and q, and lead(p_i)/lead(q) against the reference ratio."""
    if lead_ref is None:
        from .reference import leading_reference

        m, _ = symbols()
        lead_ref = leading_reference(m)
    checks = []
    dq = sol.q.degree_t() if not sol.q.is_zero() else -1
    checks.append(Check("deg_t(q) = 2", dq == 2, f"deg_t(q) = {dq}"))
    if dq < 0:
        return checks
    lq = RatFunc(sol.q.leading_term_t()[1])
    for i, p in enumerate(sol.p, start=1):
        d = p.degree_t() if not p.is_zero() else -1
        checks.append(Check(f"deg_t(p{i}) = 3", d == 3, f"deg_t(p{i}) = {d}"))
        if d < 0:
            continue
        lp = RatFunc(p.leading_term_t()[1])
        ok = (lp / lq) == lead_ref[f"lead-p{i}"] / lead_ref["lead-q"]
        checks.append(Check(f"lead(p{i})/lead(q) ratio", ok, "" if ok else f"p{i} = {p.to_text()}"))
    return checks


def derivative_identity_polys(sol: BSquaredSolution, eps: int) -> Tuple[MultiPoly, MultiPoly, MultiPoly]:
    """P_n = eps q sum_{k != n} (mu_j - mu_n) p_k - mu_n prod_{k != n}(mu_k - mu_n) (p_n' q - p_n q' + q^2).

    In the sum, j is the index that is neither k nor n, which matches the
    pairing (mu_3 - mu_1) p_2 + (mu_2 - mu_1) p_3 for n = 1.
    """
    eps = check_epsilon(eps)
    mus = (P1, P2, P3)
    q = sol.q
    dq = q.diff_t()
    q2 = q * q
    out = []
    for n in range(3):
        others = [k for k in range(3) if k != n]
        comb = MultiPoly.constant(0)
        for k in others:
            j = 3 - n - k
            comb = comb + (mus[j] - mus[n]) * sol.p[k]
        pref = mus[n]
        for k in others:
            pref = pref * (mus[k] - mus[n])
        pn = sol.p[n]
        wr = pn.diff_t() * q - pn * dq + q2
        out.append((q * comb).scale(eps) - pref * wr)
    return tuple(out)


def t5_coefficients(P: Sequence[MultiPoly]) -> List[Tuple[int, MultiPoly]]:
    return [p.leading_term_t() for p in P]


def extract_mu_row(coeff: MultiPoly) -> List[int] | None:
    """Strip the pairwise-difference factors and K; return the remaining linear form's primitive row."""
    k = quadratic_form_k((P1, P2, P3))
    rest = coeff
    for f in (P1 - P2, P1 - P3, P2 - P3, k):
        while True:
            qq = rest.exact_div(f)
            if qq is None:
                break
            rest = qq
    if rest.total_degree() != 1 or rest.coefficient((0, 0, 0, 0)) != 0:
        return None
    row = [Fraction(rest.coefficient(e)) for e in ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0))]
    if rest.degree_t() != 0:
        return None
    den = 1
    for c in row:
        den = den * c.denominator // _gcd(den, c.denominator)
    ints = [int(c * den) for c in row]
    g = 0
    for c in ints:
        g = _gcd(g, abs(c))
    ints = [c // g for c in ints]
    first = next(c for c in ints if c != 0)
    if first < 0:
        ints = [-c for c in ints]
    return ints


def _gcd(a: int, b: int) -> int:
    from math import gcd

    return gcd(a, b)


def row_reduce(matrix: Sequence[Sequence[int]]) -> Tuple[int, List[List[Fraction]]]:
    """Exact reduced row echelon form; returns (rank, kernel basis)."""
    A = [[Fraction(x) for x in row] for row in matrix]
    nrows, ncols = len(A), len(A[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        pv = A[r][c]
        A[r] = [x / pv for x in A[r]]
        for i in range(nrows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    free = [c for c in range(ncols) if c not in pivots]
    kernel = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -A[i][fc]
        kernel.append(v)
    return len(pivots), kernel


def solve_mu_system(matrix: Sequence[Sequence[int]] = MU_SYSTEM) -> Tuple[int, List[List[Fraction]]]:
    return row_reduce(matrix)


def _is_zero(x) -> bool:
    if isinstance(x, RatFunc):
        return x.is_zero()
    return x == 0
