"""Reference forms of every displayed object in the elimination argument.

Every builder is written once against an abstract scalar ring: the
arguments ``m`` (triple of principal curvatures) and ``t`` may be RatFunc
generators or plain Fractions.  ``reference_targets`` collects the items the
certification compares against into one flat, mutable dict so that mutation
tests can corrupt any single entry.
"""
from __future__ import annotations

from typing import Dict, Sequence, Tuple

from ..algebra import RatFunc, m1 as _m1, m2 as _m2, m3 as _m3, t as _t
from .affine import AffineForm

PAIRS: Tuple[Tuple[int, int], ...] = ((1, 2), (2, 3), (1, 3))
MU_SYSTEM = ((3, -2, -1), (1, -2, 1), (1, 2, -3))


def symbols():
    """(m, t) as RatFunc generators."""
    return (RatFunc(_m1), RatFunc(_m2), RatFunc(_m3)), RatFunc(_t)


def _b(i: int) -> AffineForm:
    return AffineForm.var(f"b{i}sq")


def relation_rhs(eps: int, m: Sequence, t, pair: Tuple[int, int]) -> AffineForm:
    """Right-hand side shared by all three Gauss relations for (m, n), l the third index."""
    a, b = pair
    l = 6 - a - b
    ma, mb, ml = m[a - 1], m[b - 1], m[l - 1]
    return (
        (_b(a) * ma - _b(b) * mb) * (eps / (mb - ma))
        + (_b(a) + _b(b)) * (2 * t / (mb - ma) ** 2)
        + 2 * eps * t
        + ma * mb
        + _b(l) * eps
    )


def displayed_a2_coeff(m: Sequence, t, pair: Tuple[int, int]):
    m1, m2, m3 = m
    if pair == (1, 2):
        return 2 * t / ((m3 - m1) * (m3 - m2))
    if pair == (2, 3):
        return 2 * t / ((m2 - m1) * (m3 - m1))
    if pair == (1, 3):
        return 2 * t / ((m2 - m1) * (m3 - m2))
    raise ValueError(f"unknown index pair {pair}")


def generic_a2_coeff(m: Sequence, t, pair: Tuple[int, int]):
    """A^2 coefficient obtained by moving the generic frame relation's A^2 term across."""
    a, b = pair
    l = 6 - a - b
    mm, mn, ml = m[a - 1], m[b - 1], m[l - 1]
    return -2 * t / ((mm - ml) * (ml - mn))


def reduced_reference(eps: int, m: Sequence, t) -> Tuple[AffineForm, AffineForm]:
    m1, m2, m3 = m
    e = eps
    r1 = AffineForm(
        {
            "b1sq": e * m1 * (m3 - m2) / (m2 - m1) + 2 * (m3 - m2) * t / (m2 - m1) ** 2 - e * (m2 - m1),
            "b2sq": e * m2 * (m2 - m3) / (m2 - m1)
            - e * m2 * (m2 - m1) / (m3 - m2)
            + 2 * (m3 - m2) * t / (m2 - m1) ** 2
            - 2 * (m2 - m1) * t / (m3 - m2) ** 2,
            "b3sq": e * m3 * (m2 - m1) / (m3 - m2) - 2 * (m2 - m1) * t / (m3 - m2) ** 2 + e * (m3 - m2),
        },
        2 * e * (m3 - m2) * t - 2 * e * (m2 - m1) * t + m1 * m2 * (m3 - m2) - m2 * m3 * (m2 - m1),
    )
    r2 = AffineForm(
        {
            "b1sq": e * m1 * (m3 - m1) / (m2 - m1)
            - e * m1 * (m2 - m1) / (m3 - m1)
            + 2 * (m3 - m1) * t / (m2 - m1) ** 2
            - 2 * (m2 - m1) * t / (m3 - m1) ** 2,
            "b2sq": e * m2 * (m1 - m3) / (m2 - m1) + 2 * (m3 - m1) * t / (m2 - m1) ** 2 - e * (m2 - m1),
            "b3sq": e * m3 * (m2 - m1) / (m3 - m1) - 2 * (m2 - m1) * t / (m3 - m1) ** 2 + e * (m3 - m1),
        },
        2 * e * (m3 - m1) * t - 2 * e * (m2 - m1) * t + m1 * m2 * (m3 - m1) - m1 * m3 * (m2 - m1),
    )
    return r1, r2


def substituted_reference(eps: int, m: Sequence, t) -> Tuple[AffineForm, AffineForm]:
    """The two relations after eliminating b3^2 through the unit-length constraint."""
    m1, m2, m3 = m
    e = eps
    s1 = AffineForm(
        {
            "b1sq": e * m1 * (m3 - m2) / (m2 - m1)
            - e * m3 * (m2 - m1) / (m3 - m2)
            + 2 * (m3 - m2) * t / (m2 - m1) ** 2
            + 2 * (m2 - m1) * t / (m3 - m2) ** 2
            + e * (m1 - m3),
            "b2sq": e * m2 * (m2 - m3) / (m2 - m1)
            - e * m2 * (m2 - m1) / (m3 - m2)
            - e * m3 * (m2 - m1) / (m3 - m2)
            + 2 * (m3 - m2) * t / (m2 - m1) ** 2
            - e * (m3 - m2),
        },
        2 * (m2 - m1) * t**2 / (m3 - m2) ** 2
        + (2 * (m1 - m2) / (m3 - m2) ** 2 + e * m3 * (m1 - m2) / (m3 - m2) + e * (m3 - m2) + 2 * e * (m1 - m2)) * t
        + e * m3 * (m2 - m1) / (m3 - m2)
        + m1 * m2 * (m3 - m2)
        + m2 * m3 * (m1 - m2)
        + e * (m3 - m2),
    )
    s2 = AffineForm(
        {
            "b1sq": e * m1 * (m3 - m1) / (m2 - m1)
            - e * m1 * (m2 - m1) / (m3 - m1)
            - e * m3 * (m2 - m1) / (m3 - m1)
            + 2 * (m3 - m1) * t / (m2 - m1) ** 2
            - e * (m3 - m1),
            "b2sq": e * m2 * (m1 - m3) / (m2 - m1)
            - e * m3 * (m2 - m1) / (m3 - m1)
            + 2 * (m3 - m1) * t / (m2 - m1) ** 2
            + 2 * (m2 - m1) * t / (m3 - m1) ** 2
            - e * (m3 - m1)
            - e * (m2 - m1),
        },
        2 * (m2 - m1) * t**2 / (m3 - m1) ** 2
        + (2 * (m1 - m2) / (m3 - m1) ** 2 + e * m3 * (m1 - m2) / (m3 - m1) + e * (m3 - m1) + 2 * e * (m1 - m2)) * t
        + e * m3 * (m2 - m1) / (m3 - m1)
        + m1 * m2 * (m3 - m1)
        + m1 * m3 * (m1 - m2)
        + e * (m3 - m1),
    )
    return s1, s2


def quadratic_form_k(m: Sequence):
    """The positive definite quadratic in the differences that recurs in every leading term."""
    m1, m2, m3 = m
    return (m1 - m3) ** 2 + 3 * (m1 - m2) ** 2 + 3 * (m2 - m3) ** 2


def detm_expansion(m: Sequence, t, c11, c12, c21, c22):
    """det M written through the t-free parts C_ij of the matrix entries."""
    m1, m2, m3 = m
    alpha = (m3 - m2) ** 3 + (m2 - m1) ** 3
    beta = (m3 - m1) ** 3 + (m2 - m1) ** 3
    big = (m1 - m2) ** 4 * (m1 - m3) ** 2 * (m2 - m3) ** 2
    return (
        (4 * alpha * beta * t**2 + 2 * (c11 * beta + c22 * alpha) * t + c11 * c22) / big
        + 4 * (m1 - m3) * (m3 - m2) * t**2 / (m1 - m2) ** 4
        - (2 * (c12 * (m3 - m1) + c21 * (m3 - m2)) * t + c12 * c21) / (m1 - m2) ** 4
    )


def cubic_chains(m: Sequence) -> Dict[str, list]:
    """Each simplification identity as the chain of its displayed intermediate forms."""
    m1, m2, m3 = m
    return {
        "cubic-a": [
            4 * ((m3 - m1) ** 3 + (m2 - m1) ** 3 + (m2 - m3) ** 3),
            12 * m3**2 * (m2 - m1) - 12 * m3 * (m2**2 - m1**2) + 8 * (m2**3 - m1**3) - 12 * m1 * m2 * (m2 - m1),
            (m2 - m1) * (12 * m3**2 - 12 * m1 * m3 - 12 * m2 * m3 + 8 * m2**2 + 8 * m1**2 - 4 * m1 * m2),
            2 * (m2 - m1) * (3 * (m1 - m3) ** 2 + 3 * (m2 - m3) ** 2 + (m1 - m2) ** 2),
        ],
        "cubic-b": [
            4 * ((m3 - m2) ** 3 + (m3 - m1) ** 3 + (m2 - m1) ** 3),
            8 * (m3**3 - m1**3) - 12 * m2 * (m3**2 - m1**2) + 12 * m2**2 * (m3 - m1) - 12 * m1 * m3 * (m3 - m1),
            (m3 - m1) * (8 * m1**2 - 12 * m1 * m2 - 4 * m1 * m3 + 12 * m2**2 - 12 * m2 * m3 + 8 * m3**2),
            2 * (m3 - m1) * ((m1 - m3) ** 2 + 3 * (m1 - m2) ** 2 + 3 * (m2 - m3) ** 2),
        ],
        "cubic-c": [
            (m3 - m2) ** 3 + (m2 - m1) ** 3 + (m1 - m3) ** 3,
            3 * (m3**2 * (m1 - m2) + m3 * (m2**2 - m1**2) + m1 * m2 * (m1 - m2)),
            3 * (m1 - m2) * (m3**2 - m3 * (m1 + m2) + m1 * m2),
            3 * (m1 - m2) * (m1 - m3) * (m2 - m3),
        ],
    }


def leading_reference(m: Sequence) -> Dict[str, object]:
    m1, m2, m3 = m
    k = quadratic_form_k(m)
    return {
        "lead-p1": -2 * (m1 - m2) ** 4 * (3 * (m1 - m3) ** 2 + 3 * (m2 - m3) ** 2 + (m1 - m2) ** 2),
        "lead-p2": 12 * (m1 - m2) ** 4 * (m1 - m3) * (m2 - m3),
        "lead-p3": -2 * (m2 - m3) * (m1 - m2) ** 3 * (3 * (m1 - m2) ** 2 + 3 * (m1 - m3) ** 2 + (m2 - m3) ** 2),
        "lead-q": 2 * (m1 - m3) * (m1 - m2) ** 3 * k,
    }


def t5_reference(eps: int, m: Sequence) -> Dict[str, object]:
    m1, m2, m3 = m
    k = quadratic_form_k(m)
    return {
        "t5-P1": -8 * eps * (3 * m1 - 2 * m2 - m3) * (m1 - m2) ** 7 * (m2 - m3) ** 2 * (m1 - m3) * k,
        "t5-P2": -8 * eps * (m1 - 2 * m2 + m3) * (m1 - m2) ** 7 * (m1 - m3) ** 2 * (m2 - m3) * k,
        "t5-P3": 8 * eps * (m1 + 2 * m2 - 3 * m3) * (m1 - m2) ** 8 * (m1 - m3) * (m2 - m3) * k,
    }


def reference_targets(eps: int) -> Dict[str, object]:
    """Flat name -> expected-object map used by the certification.

    Values are RatFunc except ``mu-system`` (nested integer lists).
    """
    m, t = symbols()
    m1, m2, m3 = m
    out: Dict[str, object] = {}
    for pair in PAIRS:
        out[f"relation-{pair[0]}{pair[1]}/A2"] = displayed_a2_coeff(m, t, pair)
    for tag, forms in (("reduced", reduced_reference(eps, m, t)), ("substituted", substituted_reference(eps, m, t))):
        for idx, form in enumerate(forms, start=1):
            for name in form.names():
                out[f"{tag}-{idx}/{name}"] = form.coeff(name)
            out[f"{tag}-{idx}/const"] = form.const
    out["M11/t-numerator"] = 2 * (m3 - m2) ** 3 + 2 * (m2 - m1) ** 3
    out["M12/t-numerator"] = 2 * (m3 - m2)
    out["M21/t-numerator"] = 2 * (m3 - m1)
    out["M22/t-numerator"] = 2 * (m3 - m1) ** 3 + 2 * (m2 - m1) ** 3
    out["M11/den"] = (m2 - m1) ** 2 * (m3 - m2) ** 2
    out["M12/den"] = (m2 - m1) ** 2
    out["M21/den"] = (m2 - m1) ** 2
    out["M22/den"] = (m2 - m1) ** 2 * (m3 - m1) ** 2
    out["rhs1/t2"] = 2 * (m1 - m2) / (m3 - m2) ** 2
    out["rhs2/t2"] = 2 * (m1 - m2) / (m3 - m1) ** 2
    out["cramer-1/t3"] = 4 * (m1 - m2) * ((m3 - m1) ** 3 + (m2 - m1) ** 3 + (m2 - m3) ** 3)
    out["cramer-2/t3"] = 4 * (m1 - m2) * ((m3 - m2) ** 3 + (m2 - m1) ** 3 + (m1 - m3) ** 3)
    out["detM/t2-bracket"] = 4 * (
        ((m3 - m2) ** 3 + (m2 - m1) ** 3) * ((m3 - m1) ** 3 + (m2 - m1) ** 3) - (m3 - m1) ** 3 * (m3 - m2) ** 3
    )
    out["detM/t2"] = 4 * (m2 - m1) ** 3 * ((m3 - m2) ** 3 + (m3 - m1) ** 3 + (m2 - m1) ** 3)
    for name, chain in cubic_chains(m).items():
        for i, form in enumerate(chain):
            out[f"{name}/{i}"] = form
    out.update(leading_reference(m))
    out.update(t5_reference(eps, m))
    out["mu-system"] = [list(r) for r in MU_SYSTEM]
    return out


def perturb(targets: Dict[str, object], name: str, index: Tuple[int, int] = (0, 0)) -> Dict[str, object]:
    """Copy of ``targets`` with entry ``name`` shifted by one (matrix entries at ``index``)."""
    out = dict(targets)
    v = out[name]
    if isinstance(v, list):
        rows = [list(r) for r in v]
        rows[index[0]][index[1]] += 1
        out[name] = rows
    else:
        out[name] = v + 1
    return out
