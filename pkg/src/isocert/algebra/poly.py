"""Sparse multivariate polynomials over Q in the variables (m1, m2, m3, t).

Monomials are packed into a single integer, 16 bits per exponent with m1 in
the most significant field, so that monomial multiplication is integer
addition and lexicographic comparison is integer comparison.  The monomial
order used for printing and leading terms is graded-lexicographic with
m1 > m2 > m3 > t.
"""
from __future__ import annotations

import heapq
import re
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple, Union

NVARS = 4
VAR_NAMES = ("m1", "m2", "m3", "t")
T_INDEX = 3

_BITS = 16
_MASK = (1 << _BITS) - 1
_SHIFTS = tuple(_BITS * (NVARS - 1 - i) for i in range(NVARS))
_T_UNIT = 1 << _SHIFTS[T_INDEX]

Coefficient = Union[int, Fraction]
Exponents = Tuple[int, int, int, int]


def pack(exps: Sequence[int]) -> int:
    if len(exps) != NVARS:
        raise ValueError(f"monomial needs {NVARS} exponents, got {len(exps)}")
    key = 0
    for e, s in zip(exps, _SHIFTS):
        if e < 0 or e > _MASK:
            raise ValueError(f"exponent out of range: {e}")
        key |= e << s
    return key


def unpack(key: int) -> Exponents:
    return tuple((key >> s) & _MASK for s in _SHIFTS)  # type: ignore[return-value]


def _degree(key: int) -> int:
    return sum((key >> s) & _MASK for s in _SHIFTS)


def _order_key(key: int) -> Tuple[int, int]:
    # grlex: total degree first, then lex (packed int order is lex)
    return (_degree(key), key)


def _t_exp(key: int) -> int:
    return key & _MASK


def _norm(c: Coefficient) -> Coefficient:
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _as_rational(c) -> Coefficient:
    if isinstance(c, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return _norm(c)
    raise TypeError(f"unsupported coefficient type {type(c).__name__}")


class MultiPoly:
    """Immutable sparse polynomial in (m1, m2, m3, t) with rational coefficients.

    No stored coefficient is ever zero, so structural equality (``==``) is
    polynomial equality.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, Coefficient] | None = None, *, _trusted: bool = False):
        if _trusted:
            self._terms: Dict[int, Coefficient] = terms  # type: ignore[assignment]
        else:
            clean: Dict[int, Coefficient] = {}
            for k, c in (terms or {}).items():
                c = _as_rational(c)
                if c != 0:
                    clean[k] = c
            self._terms = clean
        self._hash = None

    # construction -----------------------------------------------------
    @classmethod
    def from_exponents(cls, terms: Mapping[Sequence[int], Coefficient]) -> "MultiPoly":
        acc: Dict[int, Coefficient] = {}
        for exps, c in terms.items():
            k = pack(tuple(exps))
            acc[k] = _norm(acc.get(k, 0) + _as_rational(c))
        return cls(acc)

    @classmethod
    def constant(cls, c: Coefficient) -> "MultiPoly":
        c = _as_rational(c)
        return cls({0: c}) if c != 0 else cls()

    @classmethod
    def var(cls, index: int) -> "MultiPoly":
        exps = [0] * NVARS
        exps[index] = 1
        return cls({pack(exps): 1}, _trusted=True)

    @classmethod
    def variables(cls) -> Tuple["MultiPoly", "MultiPoly", "MultiPoly", "MultiPoly"]:
        return tuple(cls.var(i) for i in range(NVARS))  # type: ignore[return-value]

    # basic protocol ---------------------------------------------------
    def terms(self) -> Iterator[Tuple[Exponents, Coefficient]]:
        """Terms in descending monomial order."""
        for k in sorted(self._terms, key=_order_key, reverse=True):
            yield unpack(k), self._terms[k]

    def coefficient(self, exps: Sequence[int]) -> Coefficient:
        return self._terms.get(pack(tuple(exps)), 0)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and 0 in self._terms)

    def constant_value(self) -> Coefficient:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self._terms.get(0, 0)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.constant(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def total_degree(self) -> int:
        return max((_degree(k) for k in self._terms), default=-1)

    def leading(self) -> Tuple[Exponents, Coefficient]:
        """Leading monomial and coefficient in grlex order."""
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        k = max(self._terms, key=_order_key)
        return unpack(k), self._terms[k]

    def degree_in(self, index: int) -> int:
        s = _SHIFTS[index]
        return max(((k >> s) & _MASK for k in self._terms), default=-1)

    # arithmetic -------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return MultiPoly.constant(other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if len(other._terms) > len(self._terms):
            a, b = other._terms, self._terms
        else:
            a, b = self._terms, other._terms
        out = dict(a)
        for k, c in b.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = _norm(v)
            else:
                out.pop(k, None)
        return MultiPoly(out, _trusted=True)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly({k: -c for k, c in self._terms.items()}, _trusted=True)

    def __sub__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._terms, other._terms
        if not a or not b:
            return MultiPoly()
        if len(b) == 1:
            ((kb, cb),) = b.items()
            return MultiPoly({k + kb: _norm(c * cb) for k, c in a.items()}, _trusted=True)
        if len(a) == 1:
            return other * self
        out: Dict[int, Coefficient] = {}
        get = out.get
        for ka, ca in a.items():
            for kb, cb in b.items():
                k = ka + kb
                out[k] = get(k, 0) + ca * cb
        return MultiPoly({k: _norm(c) for k, c in out.items() if c}, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MultiPoly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        result = MultiPoly.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c: Coefficient) -> "MultiPoly":
        c = _as_rational(c)
        if c == 0:
            return MultiPoly()
        return MultiPoly({k: _norm(v * c) for k, v in self._terms.items()}, _trusted=True)

    # t-structure ------------------------------------------------------
    def diff_t(self) -> "MultiPoly":
        """Formal partial derivative in t."""
        out = {}
        for k, c in self._terms.items():
            e = _t_exp(k)
            if e:
                out[k - _T_UNIT] = _norm(c * e)
        return MultiPoly(out, _trusted=True)

    def degree_t(self) -> int:
        return max((_t_exp(k) for k in self._terms), default=-1)

    def coeff_t(self, d: int) -> "MultiPoly":
        """Polynomial in (m1, m2, m3) multiplying t**d."""
        return MultiPoly(
            {k - d * _T_UNIT: c for k, c in self._terms.items() if _t_exp(k) == d},
            _trusted=True,
        )

    def leading_term_t(self) -> Tuple[int, "MultiPoly"]:
        if not self._terms:
            raise ValueError("no leading term: zero polynomial")
        d = self.degree_t()
        return d, self.coeff_t(d)

    # normalisation helpers -------------------------------------------
    def content(self) -> Fraction:
        """Positive rational c with self / c having coprime integer coefficients."""
        if not self._terms:
            return Fraction(1)
        num = 0
        den = 1
        for c in self._terms.values():
            c = Fraction(c)
            num = gcd(num, c.numerator)
            den = den * c.denominator // gcd(den, c.denominator)
        return Fraction(num, den)

    def monomial_gcd(self) -> int:
        """Packed key of the largest monomial dividing every term."""
        if not self._terms:
            return 0
        mins = [min((k >> s) & _MASK for k in self._terms) for s in _SHIFTS]
        return pack(mins)

    def shift_down(self, key: int) -> "MultiPoly":
        return MultiPoly({k - key: c for k, c in self._terms.items()}, _trusted=True)

    def exact_div(self, d: "MultiPoly") -> "MultiPoly | None":
        """Quotient if ``d`` divides ``self`` exactly, otherwise None."""
        if not d._terms:
            raise ZeroDivisionError("division by zero polynomial")
        if not self._terms:
            return MultiPoly()
        dk = max(d._terms, key=_order_key)
        dc = Fraction(d._terms[dk])
        dexp = unpack(dk)
        rest = [(k, c) for k, c in d._terms.items() if k != dk]
        rem = dict(self._terms)
        heap = [(-_degree(k), -k) for k in rem]
        heapq.heapify(heap)
        quot: Dict[int, Coefficient] = {}
        while rem:
            while True:
                negdeg, negk = heapq.heappop(heap)
                rk = -negk
                if rk in rem:
                    break
            rexp = unpack(rk)
            if any(r < e for r, e in zip(rexp, dexp)):
                # lt(d) divides lt(q*d) for every q, so this is a certificate
                return None
            qk = rk - dk
            qc = _norm(rem.pop(rk) / dc)
            quot[qk] = qc
            for k, c in rest:
                kk = qk + k
                had = kk in rem
                v = rem.get(kk, 0) - qc * c
                if v:
                    rem[kk] = _norm(v)
                    if not had:
                        heapq.heappush(heap, (-_degree(kk), -kk))
                elif had:
                    del rem[kk]
        return MultiPoly(quot, _trusted=True)

    # evaluation -------------------------------------------------------
    def evaluate(self, point: Sequence[Coefficient]) -> Fraction:
        """Exact value at a rational point (m1, m2, m3, t).

        Accumulates over a common denominator so that only one Fraction
        reduction happens per call.
        """
        if len(point) != NVARS:
            raise ValueError(f"point needs {NVARS} coordinates")
        if not self._terms:
            return Fraction(0)
        fr = [Fraction(x) for x in point]
        maxdeg = [self.degree_in(i) for i in range(NVARS)]
        num_pows = []
        den_pows = []
        for x, dmax in zip(fr, maxdeg):
            np_, dp = [1], [1]
            for _ in range(dmax):
                np_.append(np_[-1] * x.numerator)
                dp.append(dp[-1] * x.denominator)
            num_pows.append(np_)
            den_pows.append(dp)
        lcm_den = 1
        for c in self._terms.values():
            if isinstance(c, Fraction):
                lcm_den = lcm_den * c.denominator // gcd(lcm_den, c.denominator)
        total = 0
        for k, c in self._terms.items():
            cc = c * lcm_den
            cc = cc.numerator if isinstance(cc, Fraction) else cc
            term = cc
            for i, s in enumerate(_SHIFTS):
                e = (k >> s) & _MASK
                term *= num_pows[i][e] * den_pows[i][maxdeg[i] - e]
            total += term
        common = lcm_den
        for i in range(NVARS):
            common *= den_pows[i][maxdeg[i]]
        return Fraction(total, common)

    def substitute_t(self, value: Coefficient) -> "MultiPoly":
        """Specialise t to a rational value, leaving a polynomial in m1, m2, m3."""
        value = _as_rational(value)
        out: Dict[int, Coefficient] = {}
        for k, c in self._terms.items():
            e = _t_exp(k)
            kk = k - e * _T_UNIT
            out[kk] = out.get(kk, 0) + c * Fraction(value) ** e
        return MultiPoly({k: _norm(c) for k, c in out.items() if c}, _trusted=True)

    # text form --------------------------------------------------------
    def to_text(self) -> str:
        return format_poly(self)

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"MultiPoly('{format_poly(self)}')"


def _format_coef(c: Coefficient) -> str:
    c = abs(c)
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return str(c)


def format_poly(p: MultiPoly) -> str:
    """Canonical text: grlex-descending terms ``coef*m1^a*m2^b*m3^c*t^d``.

    Factors with exponent zero are omitted, exponents are always explicit.
    """
    if p.is_zero():
        return "0"
    parts = []
    for i, (exps, c) in enumerate(p.terms()):
        factors = [_format_coef(c)]
        factors += [f"{name}^{e}" for name, e in zip(VAR_NAMES, exps) if e]
        body = "*".join(factors)
        if i == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


_TERM_RE = re.compile(
    r"""^(?:(?P<coef>\d+(?:/\d+)?)(?:\*|$))?(?P<rest>.*)$""", re.VERBOSE
)
_FACTOR_RE = re.compile(r"^(m1|m2|m3|t)(?:\^(\d+))?$")


class PolyParseError(ValueError):
    pass


def parse_poly(text: str) -> MultiPoly:
    """Parse the canonical text form (also accepts implicit 1 and ``^1``)."""
    s = text.replace(" ", "")
    if not s:
        raise PolyParseError("empty polynomial text")
    if s == "0":
        return MultiPoly()
    if s[0] not in "+-":
        s = "+" + s
    chunks = re.findall(r"[+-][^+-]+", s)
    if "".join(chunks) != s:
        raise PolyParseError(f"malformed polynomial text: {text!r}")
    acc: Dict[int, Coefficient] = {}
    for chunk in chunks:
        sign = -1 if chunk[0] == "-" else 1
        m = _TERM_RE.match(chunk[1:])
        if m is None:
            raise PolyParseError(f"malformed term {chunk!r}")
        coef = Fraction(m.group("coef")) if m.group("coef") else Fraction(1)
        rest = m.group("rest")
        exps = [0] * NVARS
        if rest:
            for factor in rest.split("*"):
                fm = _FACTOR_RE.match(factor)
                if fm is None:
                    raise PolyParseError(f"malformed factor {factor!r} in {chunk!r}")
                idx = VAR_NAMES.index(fm.group(1))
                exps[idx] += int(fm.group(2) or 1)
        elif not m.group("coef"):
            raise PolyParseError(f"empty term in {text!r}")
        k = pack(exps)
        acc[k] = _norm(acc.get(k, 0) + sign * coef)
    return MultiPoly(acc)


def poly_arith(op: str, a: MultiPoly, b: MultiPoly) -> MultiPoly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown polynomial operation {op!r}")


def eval_rational(p: MultiPoly, assignment: Iterable[Coefficient]) -> Fraction:
    return p.evaluate(tuple(assignment))


m1, m2, m3, t = MultiPoly.variables()
