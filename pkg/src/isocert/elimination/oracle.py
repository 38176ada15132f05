"""Independent exact oracles evaluated at random rational points."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .affine import UNKNOWNS

SAMPLE_RANGE = 10**6


@dataclass(frozen=True)
class SamplePoint:
    mu: Tuple[Fraction, Fraction, Fraction]
    t: Fraction

    @property
    def coords(self) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
        return (*self.mu, self.t)


def random_rational(rng: random.Random, bound: int = SAMPLE_RANGE) -> Fraction:
    while True:
        den = rng.randint(-bound, bound)
        if den:
            return Fraction(rng.randint(-bound, bound), den)


def raw_point(rng: random.Random) -> SamplePoint:
    return SamplePoint(tuple(random_rational(rng) for _ in range(3)), random_rational(rng))


def solve_linear(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> List[Fraction] | None:
    """Exact Gaussian elimination; None if the matrix is singular."""
    n = len(A)
    M = [list(map(Fraction, row)) + [Fraction(v)] for row, v in zip(A, b)]
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c] != 0), None)
        if piv is None:
            return None
        M[c], M[piv] = M[piv], M[c]
        for i in range(c + 1, n):
            f = M[i][c] / M[c][c]
            if f:
                M[i] = [a - f * p for a, p in zip(M[i], M[c])]
    x = [Fraction(0)] * n
    for i in reversed(range(n)):
        s = M[i][n] - sum(M[i][j] * x[j] for j in range(i + 1, n))
        x[i] = s / M[i][i]
    return x


def relation_oracle(eps: int, pt: SamplePoint) -> Dict[str, Fraction] | None:
    """Solve the three relations together with sum b_i^2 = 1 - t directly at ``pt``.

    This skips every intermediate stage: no elimination order, no Cramer
    formula, no clearing of denominators.
    """
    from .pipeline import build_gauss_relations

    rels = build_gauss_relations(eps, pt.mu, pt.t)
    rows, rhs = [], []
    for rel in rels:
        f = rel.form()
        rows.append([Fraction(f.coeff(n)) for n in UNKNOWNS])
        rhs.append(-Fraction(f.const))
    rows.append([Fraction(0), Fraction(1), Fraction(1), Fraction(1)])
    rhs.append(1 - pt.t)
    sol = solve_linear(rows, rhs)
    if sol is None:
        return None
    return dict(zip(UNKNOWNS, sol))


def lagrange_derivative(nodes: Sequence[Fraction], values: Sequence[Fraction], x: Fraction) -> Fraction:
    """Derivative at ``x`` of the interpolating polynomial through (nodes, values)."""
    total = Fraction(0)
    n = len(nodes)
    for i in range(n):
        denom = Fraction(1)
        for j in range(n):
            if j != i:
                denom *= nodes[i] - nodes[j]
        deriv = Fraction(0)
        for k in range(n):
            if k == i:
                continue
            prod = Fraction(1)
            for j in range(n):
                if j != i and j != k:
                    prod *= x - nodes[j]
            deriv += prod
        total += values[i] * deriv / denom
    return total
