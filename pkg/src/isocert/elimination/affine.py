"""Affine forms c_0 + sum_k c_k * x_k over named unknowns.

Coefficients may be any field-like type (RatFunc, Fraction, int); the same
code path therefore builds both the symbolic objects and their numeric
specializations at a sample point.
"""
from __future__ import annotations

from typing import Callable, Dict, Iterable, Mapping

UNKNOWNS = ("A2", "b1sq", "b2sq", "b3sq")


class AffineForm:
    __slots__ = ("coeffs", "const")

    def __init__(self, coeffs: Mapping[str, object] | None = None, const=0):
        self.coeffs: Dict[str, object] = dict(coeffs or {})
        self.const = const

    @classmethod
    def var(cls, name: str) -> "AffineForm":
        return cls({name: 1})

    def coeff(self, name: str):
        return self.coeffs.get(name, 0)

    def names(self) -> Iterable[str]:
        return [n for n in UNKNOWNS if n in self.coeffs] + sorted(
            n for n in self.coeffs if n not in UNKNOWNS
        )

    def __add__(self, other) -> "AffineForm":
        if not isinstance(other, AffineForm):
            return AffineForm(self.coeffs, self.const + other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] + v if k in out else v
        return AffineForm(out, self.const + other.const)

    __radd__ = __add__

    def __neg__(self) -> "AffineForm":
        return AffineForm({k: -v for k, v in self.coeffs.items()}, -self.const)

    def __sub__(self, other) -> "AffineForm":
        return self + (-other)

    def __rsub__(self, other) -> "AffineForm":
        return (-self) + other

    def __mul__(self, scalar) -> "AffineForm":
        if isinstance(scalar, AffineForm):
            raise TypeError("affine forms multiply by scalars only")
        return AffineForm({k: v * scalar for k, v in self.coeffs.items()}, self.const * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "AffineForm":
        return AffineForm({k: v / scalar for k, v in self.coeffs.items()}, self.const / scalar)

    def substitute(self, name: str, value: "AffineForm") -> "AffineForm":
        """Replace the unknown `name` by an affine form."""
        if name not in self.coeffs:
            return AffineForm(self.coeffs, self.const)
        c = self.coeffs[name]
        rest = AffineForm({k: v for k, v in self.coeffs.items() if k != name}, self.const)
        return rest + value * c

    def evaluate(self, values: Mapping[str, object]):
        acc = self.const
        for k, v in self.coeffs.items():
            acc = acc + v * values[k]
        return acc

    def map(self, fn: Callable[[object], object]) -> "AffineForm":
        return AffineForm({k: fn(v) for k, v in self.coeffs.items()}, fn(self.const))

    def __repr__(self) -> str:
        parts = [f"({self.coeffs[k]})*{k}" for k in self.names()]
        parts.append(f"({self.const})")
        return " + ".join(parts)
