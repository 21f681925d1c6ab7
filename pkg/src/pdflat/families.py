"""Explicit polynomial families and symbolic specialization matrices."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from itertools import combinations, permutations, product
from typing import Callable, Dict, List, Sequence, Tuple

from .errors import ArityMismatch, CapExceeded, PreconditionError
from .poly import Gaussian, Poly, monomials, substitute

DEFAULT_TERM_CAP = 500_000


def _check_cap(count: int, cap: int, what: str):
    if count > cap:
        raise CapExceeded(f"{what} too large: {count} terms exceed cap {cap}")


def _unit(n: int, i: int, k: int = 1) -> Tuple[int, ...]:
    e = [0] * n
    e[i] = k
    return tuple(e)


def power_sum(n: int, d: int) -> Poly:
    if n < 1 or d < 1:
        raise ValueError("power_sum needs n >= 1, d >= 1")
    return Poly(n, {_unit(n, i, d): 1 for i in range(n)})


def linear_sum(n: int) -> Poly:
    """x1 + ... + xn."""
    return power_sum(n, 1)


def complete_symmetric(n: int, d: int, cap: int = DEFAULT_TERM_CAP) -> Poly:
    if n < 1 or d < 0:
        raise ValueError("complete_symmetric needs n >= 1, d >= 0")
    _check_cap(math.comb(n + d - 1, d), cap, "h_{n,d}")
    return Poly(n, {e: 1 for e in monomials(n, d)})


def elementary_symmetric(n: int, d: int, cap: int = DEFAULT_TERM_CAP) -> Poly:
    if n < 1 or d < 0:
        raise ValueError("elementary_symmetric needs n >= 1, d >= 0")
    if d > n:
        return Poly.zero(n)
    _check_cap(math.comb(n, d), cap, "e_{n,d}")
    terms = {}
    for idx in combinations(range(n), d):
        e = [0] * n
        for i in idx:
            e[i] = 1
        terms[tuple(e)] = 1
    return Poly(n, terms)


def f_family(n: int, k: int) -> Poly:
    """(x1^2 + ... + xn^2)^k."""
    if n < 1 or k < 1:
        raise ValueError("f_family needs n >= 1, k >= 1")
    return power_sum(n, 2) ** k


def ftilde_family(n: int, k: int) -> Poly:
    """(x1 + ... + xn) (x1^2 + ... + xn^2)^k."""
    return linear_sum(n) * f_family(n, k)


def bierman(n: int, d: int) -> Poly:
    if n < 1 or d < 1:
        raise ValueError("bierman needs n >= 1, d >= 1")
    total = Poly.zero(n)
    for alpha in monomials(n, d):
        total = total + Poly.linear_form(alpha) ** d
    return total


def permanent(m: int, cap: int = DEFAULT_TERM_CAP) -> Poly:
    """Permanent of the m x m matrix of variables x_{ij} (index i*m + j)."""
    return _perm_det(m, cap, signed=False)


def determinant(m: int, cap: int = DEFAULT_TERM_CAP) -> Poly:
    return _perm_det(m, cap, signed=True)


def _perm_sign(sigma: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(sigma)
    for i in range(len(sigma)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = sigma[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _perm_det(m: int, cap: int, signed: bool) -> Poly:
    if m < 1:
        raise ValueError("matrix size must be >= 1")
    _check_cap(math.factorial(m), cap, "permanent/determinant")
    nv = m * m
    terms = {}
    for sigma in permutations(range(m)):
        e = [0] * nv
        for i, j in enumerate(sigma):
            e[i * m + j] = 1
        terms[tuple(e)] = _perm_sign(sigma) if signed else 1
    return Poly(nv, terms)


def imm(n: int, d: int, cap: int = DEFAULT_TERM_CAP) -> Poly:
    """trace(X_1 ... X_d) for d generic n x n matrices.

    Variables are slot-major, row-major within a slot: entry (i, j) of X_{a+1}
    is variable ``a*n*n + i*n + j``.
    """
    if n < 1 or d < 1:
        raise ValueError("imm needs n >= 1, d >= 1")
    _check_cap(n ** d, cap, "IMM")
    nv = d * n * n
    terms = {}
    for idx in product(range(n), repeat=d):
        e = [0] * nv
        for a in range(d):
            i, j = idx[a], idx[(a + 1) % d]
            e[a * n * n + i * n + j] += 1
        terms[tuple(e)] = 1
    return Poly(nv, terms)


def pow_trace(n: int, d: int, cap: int = DEFAULT_TERM_CAP) -> Poly:
    """trace(X^d) for a generic n x n matrix X (variable i*n + j)."""
    if n < 1 or d < 1:
        raise ValueError("pow_trace needs n >= 1, d >= 1")
    _check_cap(n ** d, cap, "matrix powering")
    nv = n * n
    terms: Dict[Tuple[int, ...], int] = {}
    for idx in product(range(n), repeat=d):
        e = [0] * nv
        for a in range(d):
            e[idx[a] * n + idx[(a + 1) % d]] += 1
        e = tuple(e)
        terms[e] = terms.get(e, 0) + 1
    return Poly(nv, terms)


def random_form(n: int, d: int, seed: int = 0, bound: int = 100) -> Poly:
    """Homogeneous form with independent uniform integer coefficients in [-bound, bound]."""
    rng = random.Random(seed)
    return Poly(n, {e: rng.randint(-bound, bound) for e in monomials(n, d)})


# -- symbolic matrices --------------------------------------------------------


@dataclass(frozen=True)
class SymbolicMatrix:
    rows: int
    cols: int
    entries: Tuple[Tuple[Poly, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entry grid does not match the stated shape")
        arities = {p.n for r in self.entries for p in r}
        if len(arities) > 1:
            raise ArityMismatch(f"entries have mixed arities {sorted(arities)}")

    @property
    def nvars(self) -> int:
        return self.entries[0][0].n

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Poly]]) -> "SymbolicMatrix":
        return cls(len(rows), len(rows[0]), tuple(tuple(r) for r in rows))

    @classmethod
    def identity(cls, size: int, nvars: int, scalar: Poly = None) -> "SymbolicMatrix":
        one = scalar if scalar is not None else Poly.constant(nvars, 1)
        zero = Poly.zero(nvars)
        return cls.from_rows([[one if i == j else zero for j in range(size)] for i in range(size)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other: "SymbolicMatrix") -> "SymbolicMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        zero = Poly.zero(self.nvars)
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = zero
                for t in range(self.cols):
                    a, b = self.entries[i][t], other.entries[t][j]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return SymbolicMatrix.from_rows(out)

    def __pow__(self, k: int) -> "SymbolicMatrix":
        if self.rows != self.cols:
            raise ValueError("power of a non-square matrix")
        result = SymbolicMatrix.identity(self.rows, self.nvars)
        for _ in range(k):
            result = result @ self
        return result

    def trace(self) -> Poly:
        if self.rows != self.cols:
            raise ValueError("trace of a non-square matrix")
        acc = Poly.zero(self.nvars)
        for i in range(self.rows):
            acc = acc + self.entries[i][i]
        return acc

    def flat(self) -> List[Poly]:
        return [p for r in self.entries for p in r]


def qm_matrix(n: int) -> SymbolicMatrix:
    """Arrow-shaped matrix whose even power traces are 2 (x1^2 + ... + xn^2)^k.

    First row (0, y1+, ..., ym+, [x_n]), first column (0, y1-, ..., ym-, [x_n]),
    zeros elsewhere, where yj(+/-) = x_{2j-1} +/- i x_{2j}; the trailing x_n
    entry (and its row/column) is present only for odd n.
    """
    if n < 2:
        raise ValueError("qm_matrix needs n >= 2")
    m = n // 2
    odd = n % 2 == 1
    size = m + 2 if odd else m + 1
    zero = Poly.zero(n)
    grid = [[zero] * size for _ in range(size)]
    for j in range(m):
        x, y = Poly.var(n, 2 * j), Poly.var(n, 2 * j + 1)
        grid[0][j + 1] = x + y.scale(Gaussian(0, 1))
        grid[j + 1][0] = x + y.scale(Gaussian(0, -1))
    if odd:
        grid[0][size - 1] = Poly.var(n, n - 1)
        grid[size - 1][0] = Poly.var(n, n - 1)
    return SymbolicMatrix.from_rows(grid)


def verify_pow_specialization(n: int, k: int, cap: int = 12) -> bool:
    """trace(Q^{2k}) == 2 f_{n,k} exactly."""
    if n > cap or k > cap:
        raise CapExceeded(f"(n, k) = ({n}, {k}) beyond cap {cap}")
    q = qm_matrix(n)
    return (q ** (2 * k)).trace() == f_family(n, k).scale(2)


def diagonal_specialization(m: int, n: int) -> List[Poly]:
    """Images of the IMM^m_n variables: every X_a becomes diag(y1..y_{m^2}, 0, ...)."""
    if m * m > n:
        raise PreconditionError(f"need m^2 <= n, got m={m}, n={n}")
    nv = m * m
    images = []
    for _a in range(m):
        for i in range(n):
            for j in range(n):
                images.append(Poly.var(nv, i) if i == j and i < nv else Poly.zero(nv))
    return images


def verify_imm_diagonal_specialization(m: int, n: int, cap: int = DEFAULT_TERM_CAP) -> bool:
    p = imm(n, m, cap=cap)
    return substitute(p, diagonal_specialization(m, n)) == power_sum(m * m, m)


# -- registry used by the CLI ---------------------------------------------------


@dataclass(frozen=True)
class FamilySpec:
    name: str
    params: Tuple[str, ...]
    build: Callable[..., Poly]
    doc: str


FAMILIES: Dict[str, FamilySpec] = {
    s.name: s
    for s in [
        FamilySpec("power", ("n", "d"), power_sum, "power sum x1^d + ... + xn^d"),
        FamilySpec("h", ("n", "d"), complete_symmetric, "complete symmetric h_{n,d}"),
        FamilySpec("e", ("n", "d"), elementary_symmetric, "elementary symmetric e_{n,d}"),
        FamilySpec("f", ("n", "k"), f_family, "(x1^2+...+xn^2)^k"),
        FamilySpec("ftilde", ("n", "k"), ftilde_family, "(x1+...+xn)(x1^2+...+xn^2)^k"),
        FamilySpec("bierman", ("n", "d"), bierman, "sum over |a|=d of (a.x)^d"),
        FamilySpec("perm", ("m",), permanent, "permanent of an m x m variable matrix"),
        FamilySpec("det", ("m",), determinant, "determinant of an m x m variable matrix"),
        FamilySpec("imm", ("n", "d"), imm, "trace(X1...Xd), n x n matrices"),
        FamilySpec("pow", ("n", "d"), pow_trace, "trace(X^d), n x n matrix"),
        FamilySpec("generic", ("n", "d", "seed"), random_form,
                   "random integer form, coefficients uniform in [-100, 100]"),
    ]
}


def build_family(name: str, **params) -> Poly:
    try:
        spec = FAMILIES[name]
    except KeyError:
        raise ValueError(f"unknown family {name!r}; known: {', '.join(FAMILIES)}") from None
    missing = [p for p in spec.params if p not in params and p != "seed"]
    if missing:
        raise ValueError(f"family {name!r} needs parameters {', '.join(missing)}")
    args = {p: params[p] for p in spec.params if p in params}
    return spec.build(**args)


def family_degree(name: str, **params) -> int:
    """Degree of a family member without building it."""
    if name in ("f",):
        return 2 * params["k"]
    if name == "ftilde":
        return 2 * params["k"] + 1
    if name in ("perm", "det"):
        return params["m"]
    return params["d"]
