"""Truncated multivariate Taylor jets with batched numpy coefficients.

A jet stores Taylor coefficients c_alpha of f(x0 + d) = sum_alpha c_alpha d^alpha
for every multi-index alpha allowed by a product truncation: the variables
are split into groups and each group has its own maximal degree.  This is
the multivariate generalization of nested dual numbers; one forward pass
yields every mixed derivative up to the truncation.

Coefficient arrays have layout (ncoef, *batch, *tensor) where the last
``tdim`` axes are tensor indices.  Elementwise operations broadcast the batch
axes and pad tensor axes; ``jeinsum`` contracts tensor axes.
"""
from __future__ import annotations

import itertools
import math
from functools import lru_cache
from typing import Iterable, List, Sequence, Tuple

import numpy as np
from scipy import sparse


class JetSpace:
    """Monomial basis and multiplication table for a product truncation."""

    def __init__(self, groups: Tuple[Tuple[int, int], ...]):
        self.groups = tuple(groups)
        self.nvars = sum(n for n, _ in self.groups)
        self.group_slices = []
        start = 0
        for n, _ in self.groups:
            self.group_slices.append(slice(start, start + n))
            start += n
        per_group = [list(_monomials(n, k)) for n, k in self.groups]
        monos = [sum(combo, ()) for combo in itertools.product(*per_group)]
        monos.sort(key=lambda a: (sum(a), tuple(-x for x in a)))
        self.monomials: List[Tuple[int, ...]] = monos
        self.index = {a: i for i, a in enumerate(monos)}
        self.ncoef = len(monos)
        self.max_degree = sum(k for _, k in self.groups)

        I, J, K = [], [], []
        for i, a in enumerate(monos):
            for j, b in enumerate(monos):
                c = tuple(x + y for x, y in zip(a, b))
                k = self.index.get(c)
                if k is not None:
                    I.append(i)
                    J.append(j)
                    K.append(k)
        self.I = np.array(I, dtype=np.intp)
        self.J = np.array(J, dtype=np.intp)
        self.scatter = sparse.csr_matrix(
            (np.ones(len(K)), (np.array(K, dtype=np.intp), np.arange(len(K)))), shape=(self.ncoef, len(K))
        )
        self.deriv_tables = []
        for v in range(self.nvars):
            src, dst, fac = [], [], []
            for i, a in enumerate(monos):
                if a[v] >= 1:
                    b = list(a)
                    b[v] -= 1
                    src.append(i)
                    dst.append(self.index[tuple(b)])
                    fac.append(float(a[v]))
            self.deriv_tables.append((np.array(src, dtype=np.intp), np.array(dst, dtype=np.intp), np.array(fac)))
        self.group_degree = np.array(
            [[sum(a[s]) for s in self.group_slices] for a in monos], dtype=np.intp
        ).reshape(self.ncoef, len(self.groups))

    def var_group(self, v: int) -> int:
        for g, s in enumerate(self.group_slices):
            if s.start <= v < s.stop:
                return g
        raise IndexError(v)

    def coef_index(self, alpha: Sequence[int]) -> int:
        return self.index[tuple(alpha)]


def _monomials(n: int, k: int) -> Iterable[Tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for d in range(k + 1):
        for combo in itertools.combinations_with_replacement(range(n), d):
            a = [0] * n
            for c in combo:
                a[c] += 1
            yield tuple(a)


@lru_cache(maxsize=None)
def jet_space(*groups: Tuple[int, int]) -> JetSpace:
    return JetSpace(tuple(groups))


class Jet:
    __slots__ = ("space", "c", "tdim", "order")

    def __init__(self, space: JetSpace, c: np.ndarray, tdim: int = 0, order: Tuple[int, ...] | None = None):
        self.space = space
        self.c = c
        self.tdim = tdim
        self.order = tuple(k for _, k in space.groups) if order is None else tuple(order)

    # construction ------------------------------------------------------
    @classmethod
    def const(cls, space: JetSpace, value, tdim: int = 0) -> "Jet":
        value = np.asarray(value, dtype=float)
        c = np.zeros((space.ncoef,) + value.shape)
        c[0] = value
        return cls(space, c, tdim)

    @classmethod
    def variable(cls, space: JetSpace, v: int, value) -> "Jet":
        value = np.asarray(value, dtype=float)
        c = np.zeros((space.ncoef,) + value.shape)
        c[0] = value
        alpha = [0] * space.nvars
        alpha[v] = 1
        c[space.coef_index(alpha)] = 1.0
        return cls(space, c, 0)

    # basic access --------------------------------------------------------
    @property
    def value(self) -> np.ndarray:
        return self.c[0]

    @property
    def vshape(self) -> Tuple[int, ...]:
        return self.c.shape[1:]

    def taylor(self, alpha: Sequence[int]) -> np.ndarray:
        """Taylor coefficient at multi-index ``alpha``; raises beyond the valid order."""
        alpha = tuple(alpha)
        for g, s in enumerate(self.space.group_slices):
            if sum(alpha[s]) > self.order[g]:
                raise ValueError(f"derivative order {alpha} exceeds the valid jet order {self.order}")
        return self.c[self.space.coef_index(alpha)]

    def partial(self, alpha: Sequence[int]) -> np.ndarray:
        """The mixed partial derivative d^alpha f at the base point."""
        return self.taylor(alpha) * math.prod(math.factorial(a) for a in alpha)

    def __getitem__(self, idx) -> "Jet":
        if not isinstance(idx, tuple):
            idx = (idx,)
        ndrop = sum(1 for i in idx if isinstance(i, (int, np.integer)))
        return Jet(self.space, self.c[(Ellipsis,) + idx + (slice(None),) * (self.tdim - len(idx))], self.tdim - ndrop, self.order)

    def transpose(self, perm: Sequence[int]) -> "Jet":
        lead = self.c.ndim - self.tdim
        axes = list(range(lead)) + [lead + p for p in perm]
        return Jet(self.space, self.c.transpose(axes), self.tdim, self.order)

    # alignment -------------------------------------------------------------
    def _padded(self, tdim: int) -> np.ndarray:
        if tdim == self.tdim:
            return self.c
        return self.c[(Ellipsis,) + (None,) * (tdim - self.tdim)]

    def _coerce(self, other) -> "Jet":
        if isinstance(other, Jet):
            if other.space is not self.space:
                raise ValueError("jets from different spaces")
            return other
        return Jet.const(self.space, other, 0)

    def _meet(self, other: "Jet") -> Tuple[int, ...]:
        return tuple(min(a, b) for a, b in zip(self.order, other.order))

    # arithmetic -----------------------------------------------------------
    def __add__(self, other) -> "Jet":
        if not isinstance(other, Jet):
            other = np.asarray(other, dtype=float)
            shape = np.broadcast_shapes(self.vshape, other.shape)
            c = np.broadcast_to(self.c, (self.space.ncoef,) + shape).copy()
            c[0] = c[0] + other
            return Jet(self.space, c, self.tdim, self.order)
        td = max(self.tdim, other.tdim)
        return Jet(self.space, self._padded(td) + other._padded(td), td, self._meet(other))

    __radd__ = __add__

    def __neg__(self) -> "Jet":
        return Jet(self.space, -self.c, self.tdim, self.order)

    def __sub__(self, other) -> "Jet":
        return self + (-other)

    def __rsub__(self, other) -> "Jet":
        return (-self) + other

    def __mul__(self, other) -> "Jet":
        if not isinstance(other, Jet):
            return Jet(self.space, self.c * np.asarray(other, dtype=float), self.tdim, self.order)
        td = max(self.tdim, other.tdim)
        a, b = self._padded(td), other._padded(td)
        prod = a[self.space.I] * b[self.space.J]
        return Jet(self.space, _scatter(self.space, prod), td, self._meet(other))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Jet":
        if not isinstance(other, Jet):
            return Jet(self.space, self.c / np.asarray(other, dtype=float), self.tdim, self.order)
        return self * other.reciprocal()

    def __rtruediv__(self, other) -> "Jet":
        return self.reciprocal() * other

    def __pow__(self, n) -> "Jet":
        if isinstance(n, (int, np.integer)):
            if n < 0:
                return (self ** (-n)).reciprocal()
            out = Jet.const(self.space, np.ones(self.vshape), self.tdim)
            out.order = self.order
            base = self
            while n:
                if n & 1:
                    out = out * base
                n >>= 1
                if n:
                    base = base * base
            return out
        return self.power(float(n))

    # univariate functions ------------------------------------------------------
    def _series(self, coeffs: List[np.ndarray]) -> "Jet":
        """sum_k coeffs[k] * (self - self.value)^k, exact because the shift is nilpotent."""
        nil = Jet(self.space, self.c.copy(), self.tdim, self.order)
        nil.c[0] = 0.0
        out = np.zeros_like(self.c)
        out[0] = coeffs[0]
        powk = nil
        for k in range(1, len(coeffs)):
            out = out + powk.c * coeffs[k]
            if k + 1 < len(coeffs):
                powk = powk * nil
        return Jet(self.space, out, self.tdim, self.order)

    def _nterms(self) -> int:
        return self.space.max_degree + 1

    def reciprocal(self) -> "Jet":
        x0 = self.value
        if np.any(x0 == 0):
            raise ZeroDivisionError("jet reciprocal at a zero value")
        return self._series([(-1.0) ** k / x0 ** (k + 1) for k in range(self._nterms())])

    def power(self, r: float) -> "Jet":
        x0 = self.value
        coeffs = []
        binom = 1.0
        for k in range(self._nterms()):
            coeffs.append(binom * x0 ** (r - k))
            binom *= (r - k) / (k + 1)
        return self._series(coeffs)

    def sqrt(self) -> "Jet":
        if np.any(self.value <= 0):
            raise ValueError("jet sqrt of a non-positive value")
        return self.power(0.5)

    def exp(self) -> "Jet":
        e = np.exp(self.value)
        return self._series([e / math.factorial(k) for k in range(self._nterms())])

    def log(self) -> "Jet":
        x0 = self.value
        if np.any(x0 <= 0):
            raise ValueError("jet log of a non-positive value")
        coeffs = [np.log(x0)] + [(-1.0) ** (k - 1) / (k * x0**k) for k in range(1, self._nterms())]
        return self._series(coeffs)

    def sin(self) -> "Jet":
        s, c = np.sin(self.value), np.cos(self.value)
        cyc = [s, c, -s, -c]
        return self._series([cyc[k % 4] / math.factorial(k) for k in range(self._nterms())])

    def cos(self) -> "Jet":
        s, c = np.sin(self.value), np.cos(self.value)
        cyc = [c, -s, -c, s]
        return self._series([cyc[k % 4] / math.factorial(k) for k in range(self._nterms())])

    def sinh(self) -> "Jet":
        s, c = np.sinh(self.value), np.cosh(self.value)
        return self._series([(s if k % 2 == 0 else c) / math.factorial(k) for k in range(self._nterms())])

    def cosh(self) -> "Jet":
        s, c = np.sinh(self.value), np.cosh(self.value)
        return self._series([(c if k % 2 == 0 else s) / math.factorial(k) for k in range(self._nterms())])

    # calculus ----------------------------------------------------------------
    def d(self, v: int) -> "Jet":
        """Partial derivative in variable ``v``; the valid order of its group drops by one."""
        src, dst, fac = self.space.deriv_tables[v]
        out = np.zeros_like(self.c)
        out[dst] = self.c[src] * fac.reshape((-1,) + (1,) * (self.c.ndim - 1))
        order = list(self.order)
        g = self.space.var_group(v)
        order[g] -= 1
        if order[g] < 0:
            raise ValueError("derivative beyond the jet order")
        return Jet(self.space, out, self.tdim, tuple(order))

    def grad(self, vars_: Sequence[int]) -> "Jet":
        """Stack of partial derivatives as a new trailing tensor axis."""
        return stack([self.d(v) for v in vars_])

    def project(self, target: JetSpace) -> "Jet":
        """Restrict to ``target`` by setting the trailing variable groups to zero."""
        ng = len(target.groups)
        if self.space.groups[:ng] != target.groups:
            raise ValueError("target space must be a leading sub-product")
        nv = target.nvars
        idx = [self.space.index[a + (0,) * (self.space.nvars - nv)] for a in target.monomials]
        return Jet(target, self.c[np.array(idx)], self.tdim, self.order[:ng])

    def truncate(self, target: JetSpace) -> "Jet":
        """Drop Taylor terms beyond the (lower) group orders of ``target``."""
        if len(target.groups) != len(self.space.groups) or any(
            a[0] != b[0] or a[1] > b[1] for a, b in zip(target.groups, self.space.groups)
        ):
            raise ValueError("target must have the same variables and no higher orders")
        idx = [self.space.index[a] for a in target.monomials]
        order = tuple(min(o, k) for o, (_, k) in zip(self.order, target.groups))
        return Jet(target, self.c[np.array(idx)], self.tdim, order)

    def lift(self, target: JetSpace) -> "Jet":
        """Embed into a larger product space with extra trailing variable groups."""
        ng = len(self.space.groups)
        if target.groups[:ng] != self.space.groups:
            raise ValueError("source space must be a leading sub-product")
        extra = target.nvars - self.space.nvars
        idx = [target.index[a + (0,) * extra] for a in self.space.monomials]
        c = np.zeros((target.ncoef,) + self.vshape)
        c[np.array(idx)] = self.c
        order = self.order + tuple(k for _, k in target.groups[ng:])
        return Jet(target, c, self.tdim, order)


def _scatter(space: JetSpace, prod: np.ndarray) -> np.ndarray:
    flat = prod.reshape(prod.shape[0], -1)
    out = space.scatter @ flat
    return np.asarray(out).reshape((space.ncoef,) + prod.shape[1:])


def stack(jets: Sequence[Jet]) -> Jet:
    """Stack jets of equal tensor rank along a new last tensor axis."""
    td = jets[0].tdim
    space = jets[0].space
    shape = np.broadcast_shapes(*(j.vshape for j in jets))
    arrs = [np.broadcast_to(j.c, (space.ncoef,) + shape) for j in jets]
    order = tuple(min(o) for o in zip(*(j.order for j in jets)))
    return Jet(space, np.stack(arrs, axis=-1), td + 1, order)


def jeinsum(subscripts: str, a, b) -> Jet:
    """Tensor contraction of two jets (or a jet and a constant array) over tensor axes.

    ``subscripts`` names tensor axes only, e.g. ``"ij,jk->ik"``; batch axes are
    carried along implicitly.
    """
    ins, out = subscripts.split("->")
    sa, sb = ins.split(",")
    if not isinstance(a, Jet) and not isinstance(b, Jet):
        raise TypeError("jeinsum needs at least one jet")
    if not isinstance(a, Jet):
        return Jet(b.space, np.einsum(f"...{sa},p...{sb}->p...{out}", np.asarray(a), b.c), len(out), b.order)
    if not isinstance(b, Jet):
        return Jet(a.space, np.einsum(f"p...{sa},...{sb}->p...{out}", a.c, np.asarray(b)), len(out), a.order)
    space = a.space
    prod = np.einsum(f"p...{sa},p...{sb}->p...{out}", a.c[space.I], b.c[space.J])
    return Jet(space, _scatter(space, prod), len(out), a._meet(b))


def jinv(A: Jet) -> Jet:
    """Inverse of a square-matrix-valued jet by a terminating Neumann series."""
    A0 = A.value
    A0inv = np.linalg.inv(A0)
    nil = Jet(A.space, A.c.copy(), A.tdim, A.order)
    nil.c[0] = 0.0
    X = -jeinsum("ij,jk->ik", A0inv, nil)
    term = Jet.const(A.space, A0inv, 2)
    out = term
    for _ in range(A.space.max_degree):
        term = jeinsum("ij,jk->ik", X, term)
        out = out + term
    out.order = A.order
    return out


def jdet3(A: Jet) -> Jet:
    """Determinant of a 3x3 tensor jet."""
    return (
        A[0, 0] * (A[1, 1] * A[2, 2] - A[1, 2] * A[2, 1])
        - A[0, 1] * (A[1, 0] * A[2, 2] - A[1, 2] * A[2, 0])
        + A[0, 2] * (A[1, 0] * A[2, 1] - A[1, 1] * A[2, 0])
    )


# dispatching elementary functions (jets or numpy arrays) ---------------------------


def _dispatch(name: str, npfn):
    def fn(x):
        if isinstance(x, Jet):
            return getattr(x, name)()
        return npfn(x)

    fn.__name__ = name
    return fn


sin = _dispatch("sin", np.sin)
cos = _dispatch("cos", np.cos)
sinh = _dispatch("sinh", np.sinh)
cosh = _dispatch("cosh", np.cosh)
exp = _dispatch("exp", np.exp)
log = _dispatch("log", np.log)
sqrt = _dispatch("sqrt", np.sqrt)


def value_of(x) -> np.ndarray:
    return x.value if isinstance(x, Jet) else np.asarray(x, dtype=float)
