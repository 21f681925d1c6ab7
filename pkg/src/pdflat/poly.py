"""Exact sparse multivariate polynomials.

A polynomial in ``n`` variables is a map from exponent tuples (multi-indices)
to nonzero exact coefficients.  Coefficients are Python ints, ``Fraction`` or
:class:`Gaussian` values; integral values are always stored as ``int`` so that
the common case of integer polynomials stays fast.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from numbers import Rational
from typing import Dict, Iterator, List, Sequence, Tuple, Union

from .errors import ArityMismatch, CapExceeded

MultiIndex = Tuple[int, ...]

DEFAULT_BASIS_CAP = 2_000_000


class Gaussian:
    """Exact complex number ``re + im*i`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _norm_rational(re)
        self.im = _norm_rational(im)

    @staticmethod
    def _coerce(other):
        if isinstance(other, Gaussian):
            return other
        if isinstance(other, (int, Fraction)):
            return Gaussian(other, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Gaussian(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return Gaussian(-self.re, -self.im)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Gaussian(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Gaussian(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self) -> "Gaussian":
        return Gaussian(self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"Gaussian({self.re}, {self.im})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}i)"


Coeff = Union[int, Fraction, Gaussian]


def _norm_rational(c):
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, Rational):
        return _norm_rational(Fraction(c.numerator, c.denominator))
    raise TypeError(f"not an exact rational: {c!r}")


def norm_coeff(c) -> Coeff:
    """Canonical form of a coefficient: ints stay ints, real Gaussians collapse."""
    if isinstance(c, Gaussian):
        if not c.im:
            return c.re
        return c
    return _norm_rational(c)


# -- monomial bases --------------------------------------------------------


def grevlex_key(exps: MultiIndex):
    """Sort key placing larger monomials (graded reverse lex) first."""
    return (-sum(exps), tuple(reversed(exps)))


def monomials(n: int, d: int) -> List[MultiIndex]:
    """All exponent vectors of degree ``d`` in ``n`` variables, grevlex-descending."""
    out = []
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(key=grevlex_key)
    return out


@dataclass(frozen=True)
class MonomialBasis:
    n: int
    d: int
    monomials: Tuple[MultiIndex, ...]
    index: Dict[MultiIndex, int] = field(repr=False, compare=False)

    def __len__(self):
        return len(self.monomials)

    def __iter__(self) -> Iterator[MultiIndex]:
        return iter(self.monomials)

    def __getitem__(self, i: int) -> MultiIndex:
        return self.monomials[i]

    def position(self, alpha: MultiIndex) -> int:
        return self.index[alpha]


def basis_size(n: int, d: int) -> int:
    return math.comb(n + d - 1, d) if n > 0 else int(d == 0)


def mono_basis(n: int, d: int, cap: int = DEFAULT_BASIS_CAP) -> MonomialBasis:
    if n < 1 or d < 0:
        raise ValueError(f"need n >= 1 and d >= 0, got n={n}, d={d}")
    size = basis_size(n, d)
    if size > cap:
        raise CapExceeded(f"basis too large: binom({n + d - 1},{d}) = {size} > cap {cap}")
    mons = tuple(monomials(n, d))
    return MonomialBasis(n, d, mons, {m: i for i, m in enumerate(mons)})


# -- polynomials ------------------------------------------------------------


def _add_exps(a: MultiIndex, b: MultiIndex) -> MultiIndex:
    return tuple(x + y for x, y in zip(a, b))


class Poly:
    """Immutable sparse polynomial in ``n`` variables ``x1..xn``."""

    __slots__ = ("n", "terms", "_hdeg")

    def __init__(self, n: int, terms=None, *, _trusted: bool = False):
        self.n = n
        if _trusted:
            self.terms = terms
        else:
            clean = {}
            for exps, c in (terms or {}).items():
                exps = tuple(int(e) for e in exps)
                if len(exps) != n:
                    raise ArityMismatch(f"exponent {exps} has length {len(exps)}, expected {n}")
                if any(e < 0 for e in exps):
                    raise ValueError(f"negative exponent in {exps}")
                c = norm_coeff(c)
                if c:
                    clean[exps] = c
            self.terms = clean
        self._hdeg = False  # not yet computed

    # constructors
    @classmethod
    def zero(cls, n: int) -> "Poly":
        return cls(n, {}, _trusted=True)

    @classmethod
    def constant(cls, n: int, c=1) -> "Poly":
        return cls(n, {(0,) * n: c})

    @classmethod
    def var(cls, n: int, i: int, c=1) -> "Poly":
        """The variable ``x_{i+1}`` (0-based ``i``)."""
        e = [0] * n
        e[i] = 1
        return cls(n, {tuple(e): c})

    @classmethod
    def monomial(cls, exps: Sequence[int], c=1) -> "Poly":
        return cls(len(exps), {tuple(exps): c})

    @classmethod
    def linear_form(cls, coeffs: Sequence) -> "Poly":
        n = len(coeffs)
        return cls(n, {tuple(int(j == i) for j in range(n)): c for i, c in enumerate(coeffs)})

    # structure
    def __len__(self):
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def homogeneous_degree(self):
        """Common degree of all terms, ``None`` if inhomogeneous or zero."""
        if self._hdeg is False:
            degs = {sum(e) for e in self.terms}
            self._hdeg = degs.pop() if len(degs) == 1 else None
        return self._hdeg

    def is_homogeneous(self) -> bool:
        return not self.terms or self.homogeneous_degree() is not None

    def coefficient(self, exps: Sequence[int]) -> Coeff:
        return self.terms.get(tuple(exps), 0)

    def items(self):
        return self.terms.items()

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: grevlex_key(t[0]))

    # arithmetic
    def _check(self, other: "Poly"):
        if self.n != other.n:
            raise ArityMismatch(f"arity mismatch: {self.n} vs {other.n}")

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.constant(self.n, other)
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = norm_coeff(out.get(e, 0) + c)
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Poly(self.n, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.n, {e: -c for e, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.constant(self.n, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Poly":
        c = norm_coeff(c)
        if not c:
            return Poly.zero(self.n)
        return Poly(self.n, {e: norm_coeff(v * c) for e, v in self.terms.items()}, _trusted=True)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        self._check(other)
        out: Dict[MultiIndex, Coeff] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = _add_exps(e1, e2)
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(self.n, {e: c for e, c in ((e, norm_coeff(c)) for e, c in out.items()) if c},
                    _trusted=True)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = Poly.constant(self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def mul_monomial(self, gamma: MultiIndex) -> "Poly":
        return Poly(self.n, {_add_exps(e, gamma): c for e, c in self.terms.items()}, _trusted=True)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, (int, Fraction, Gaussian)):
            return self == Poly.constant(self.n, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    # calculus
    def diff(self, beta: Sequence[int]) -> "Poly":
        return diff(self, beta)

    def partial(self, i: int) -> "Poly":
        beta = [0] * self.n
        beta[i] = 1
        return diff(self, beta)

    def substitute(self, images: Sequence["Poly"]) -> "Poly":
        return substitute(self, images)

    def evaluate(self, point: Sequence):
        total = 0
        for e, c in self.terms.items():
            t = c
            for x, k in zip(point, e):
                if k:
                    t = t * x ** k
            total = total + t
        return norm_coeff(total)

    # display / io
    def __repr__(self):
        return f"Poly({self.n}, {self!s})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mon = "*".join(f"x{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
            if not mon:
                parts.append(str(c))
            elif c == 1:
                parts.append(mon)
            elif c == -1:
                parts.append("-" + mon)
            else:
                parts.append(f"{c}*{mon}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json_obj(self) -> dict:
        terms = []
        for e, c in self.sorted_terms():
            if isinstance(c, Gaussian):
                raise ValueError("JSON format carries rational coefficients only")
            c = Fraction(c)
            terms.append({"exp": list(e), "num": str(c.numerator), "den": str(c.denominator)})
        return {"n": self.n, "terms": terms}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Poly":
        n = int(obj["n"])
        terms: Dict[MultiIndex, Coeff] = {}
        for t in obj["terms"]:
            exps = tuple(int(x) for x in t["exp"])
            if len(exps) != n:
                raise ValueError(f"exponent vector {list(exps)} has wrong length (n={n})")
            den = int(t["den"])
            if den == 0:
                raise ValueError("zero denominator")
            terms[exps] = norm_coeff(terms.get(exps, 0) + Fraction(int(t["num"]), den))
        return cls(n, terms)

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json(cls, text: str) -> "Poly":
        return cls.from_json_obj(json.loads(text))


# -- module-level operations ----------------------------------------------


def poly_add(p: Poly, q: Poly) -> Poly:
    p._check(q)
    return p + q


def poly_mul(p: Poly, q: Poly) -> Poly:
    p._check(q)
    return p * q


def falling(a: int, b: int) -> int:
    """a (a-1) ... (a-b+1)."""
    return math.perm(a, b)


def diff(p: Poly, beta: Sequence[int]) -> Poly:
    """Iterated partial derivative d^|beta| p / dx^beta, integer factors kept."""
    beta = tuple(beta)
    if len(beta) != p.n:
        raise ArityMismatch(f"derivative index {beta} has length {len(beta)}, expected {p.n}")
    out = {}
    for e, c in p.terms.items():
        f = 1
        for a, b in zip(e, beta):
            if a < b:
                break
            f *= math.perm(a, b)
        else:
            out[tuple(a - b for a, b in zip(e, beta))] = norm_coeff(c * f)
    return Poly(p.n, out, _trusted=True)


def substitute(p: Poly, images: Sequence[Poly]) -> Poly:
    """Replace ``x_i`` by ``images[i]`` and expand."""
    if len(images) != p.n:
        raise ArityMismatch(f"{len(images)} images for {p.n} variables")
    if not images:
        return p
    m = images[0].n
    for im in images:
        if im.n != m:
            raise ArityMismatch("substitution images have differing arities")
    powers: Dict[Tuple[int, int], Poly] = {}

    def power(i: int, k: int) -> Poly:
        key = (i, k)
        if key not in powers:
            powers[key] = images[i] if k == 1 else power(i, k - 1) * images[i]
        return powers[key]

    acc: Dict[MultiIndex, Coeff] = {}
    one = Poly.constant(m, 1)
    for e, c in p.terms.items():
        term = one
        for i, k in enumerate(e):
            if k:
                term = term * power(i, k)
                if not term:
                    break
        for te, tc in term.terms.items():
            acc[te] = acc.get(te, 0) + c * tc
    return Poly(m, acc)


def leading_term(p: Poly):
    """(exponent, coefficient) of the grevlex-largest term."""
    e = min(p.terms, key=grevlex_key)
    return e, p.terms[e]


def divide_exact(p: Poly, g: Poly):
    """Quotient p / g when g divides p exactly, else ``None`` (rational coefficients)."""
    p._check(g)
    if not g:
        raise ZeroDivisionError("division by the zero polynomial")
    ge, gc = leading_term(g)
    quotient: Dict[MultiIndex, Coeff] = {}
    rem = p
    while rem:
        re_, rc = leading_term(rem)
        shift = tuple(a - b for a, b in zip(re_, ge))
        if any(x < 0 for x in shift):
            return None
        c = norm_coeff(Fraction(rc) / Fraction(gc))
        quotient[shift] = c
        rem = rem - g.mul_monomial(shift).scale(c)
    return Poly(p.n, quotient)
