"""Exact and certified matrix rank over Q.

Matrices are stored as lists of sparse row dicts.  Rank is computed modulo
random 62-bit primes first (a modular rank is always a lower bound for the
rational rank) and confirmed by fraction-free integer elimination when the
modular rank is not already maximal.
"""
from __future__ import annotations

import heapq
import math
import os
import random
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence

import gmpy2

from .errors import BadPrime, CapExceeded, PreconditionError
from .poly import norm_coeff

Row = Dict[int, object]

EXACT = "exact"
LOWER_BOUND = "certified-lower-bound"
PROBABLY_EXACT = "probabilistic-exact"

DEFAULT_EXACT_CAP = 4_000_000


class ExactMatrix:
    """Sparse matrix with exact rational entries, or residues modulo ``modulus``."""

    __slots__ = ("rows", "cols", "data", "modulus")

    def __init__(self, rows: int, cols: int, data: Optional[List[Row]] = None, modulus: Optional[int] = None):
        self.rows = rows
        self.cols = cols
        self.modulus = modulus
        if data is None:
            data = [{} for _ in range(rows)]
        if len(data) != rows:
            raise ValueError(f"{len(data)} row dicts for {rows} rows")
        clean = []
        for r in data:
            if modulus is None:
                row = {j: v for j, v in ((j, norm_coeff(v)) for j, v in r.items()) if v}
            else:
                row = {j: v for j, v in ((j, v % modulus) for j, v in r.items()) if v}
            if any(not 0 <= j < cols for j in row):
                raise IndexError("column index out of range")
            clean.append(row)
        self.data = clean

    @classmethod
    def from_dense(cls, grid: Sequence[Sequence], modulus: Optional[int] = None) -> "ExactMatrix":
        rows = len(grid)
        cols = len(grid[0]) if rows else 0
        if any(len(r) != cols for r in grid):
            raise ValueError("ragged dense matrix")
        return cls(rows, cols, [{j: v for j, v in enumerate(r) if v} for r in grid], modulus)

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls(n, n, [{i: 1} for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExactMatrix":
        return cls(rows, cols)

    @property
    def shape(self):
        return (self.rows, self.cols)

    def nnz(self) -> int:
        return sum(len(r) for r in self.data)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i].get(j, 0)

    def to_dense(self) -> List[List]:
        return [[r.get(j, 0) for j in range(self.cols)] for r in self.data]

    def transpose(self) -> "ExactMatrix":
        out: List[Row] = [{} for _ in range(self.cols)]
        for i, r in enumerate(self.data):
            for j, v in r.items():
                out[j][i] = v
        return ExactMatrix(self.cols, self.rows, out, self.modulus)

    def is_symmetric(self) -> bool:
        if self.rows != self.cols:
            return False
        return all(self.data[j].get(i, 0) == v for i, r in enumerate(self.data) for j, v in r.items())

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "ExactMatrix":
        pos = {c: k for k, c in enumerate(cols)}
        data = [{pos[j]: v for j, v in self.data[i].items() if j in pos} for i in rows]
        return ExactMatrix(len(rows), len(cols), data, self.modulus)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in product")
        out = []
        for r in self.data:
            acc: Row = {}
            for t, a in r.items():
                for j, b in other.data[t].items():
                    acc[j] = acc.get(j, 0) + a * b
            out.append(acc)
        return ExactMatrix(self.rows, other.cols, out, self.modulus)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self.modulus == other.modulus and self.data == other.data

    def __repr__(self):
        tag = f", mod {self.modulus}" if self.modulus else ""
        return f"ExactMatrix({self.rows}x{self.cols}, nnz={self.nnz()}{tag})"

    def reduce_mod(self, p: int) -> "ExactMatrix":
        """Image of the matrix in (Z/p)^{rows x cols}."""
        if self.modulus is not None:
            if self.modulus != p:
                raise ValueError(f"matrix is already reduced modulo {self.modulus}")
            return self
        data = [row_mod(r, p) for r in self.data]
        m = ExactMatrix.__new__(ExactMatrix)
        m.rows, m.cols, m.data, m.modulus = self.rows, self.cols, data, p
        return m


def row_mod(row: Row, p: int) -> Row:
    """Reduce a sparse rational row modulo p."""
    out = {}
    for j, v in row.items():
        if isinstance(v, int):
            x = v % p
        else:
            v = Fraction(v)
            if v.denominator % p == 0:
                raise BadPrime(f"prime {p} divides denominator {v.denominator}; retry with another prime")
            x = v.numerator * pow(v.denominator, -1, p) % p
        if x:
            out[j] = x
    return out


# -- elimination -------------------------------------------------------------


class StreamingEchelon:
    """Incremental row echelon form, modulo a prime or fraction-free over Z.

    ``add`` reduces a row against the pivots seen so far and keeps it when it
    is independent.  Pivot row ``k`` never contains the pivot columns of rows
    ``0..k-1``, so a heap over pivot insertion order drives the reduction.
    When a row becomes a pivot, its pivot column is the nonzero column with the
    lowest ``col_weight`` (a Markowitz-style fill-in heuristic).
    """

    def __init__(self, modulus: Optional[int] = None, col_weight: Optional[Dict[int, int]] = None):
        self.modulus = modulus
        self.col_weight = col_weight or {}
        self.pivot_rows: List[Row] = []
        self.pivot_cols: List[int] = []
        self.col_to_pivot: Dict[int, int] = {}

    @property
    def rank(self) -> int:
        return len(self.pivot_rows)

    def add(self, row: Row) -> bool:
        row = dict(row)
        heap = [self.col_to_pivot[c] for c in row if c in self.col_to_pivot]
        heapq.heapify(heap)
        p = self.modulus
        while heap:
            k = heapq.heappop(heap)
            c = self.pivot_cols[k]
            a = row.get(c)
            if not a:
                continue
            prow = self.pivot_rows[k]
            if p is not None:
                # pivot rows are monic at their pivot column
                for j, v in prow.items():
                    x = (row.get(j, 0) - a * v) % p
                    if x:
                        if j not in row and j in self.col_to_pivot:
                            heapq.heappush(heap, self.col_to_pivot[j])
                        row[j] = x
                    else:
                        row.pop(j, None)
            else:
                b = prow[c]
                g = math.gcd(a, b)
                fa, fb = b // g, a // g
                new = {}
                for j, v in row.items():
                    new[j] = v * fa
                for j, v in prow.items():
                    x = new.get(j, 0) - fb * v
                    if x:
                        if j not in new and j in self.col_to_pivot:
                            heapq.heappush(heap, self.col_to_pivot[j])
                        new[j] = x
                    else:
                        new.pop(j, None)
                row = _primitive(new)
        if not row:
            return False
        w = self.col_weight
        c = min(row, key=lambda j: (w.get(j, 0), j))
        if p is not None:
            inv = pow(row[c], -1, p)
            row = {j: v * inv % p for j, v in row.items()}
        self.col_to_pivot[c] = len(self.pivot_rows)
        self.pivot_rows.append(row)
        self.pivot_cols.append(c)
        return True


def _primitive(row: Row) -> Row:
    g = 0
    for v in row.values():
        g = math.gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {j: v // g for j, v in row.items()}
    return row


def integer_row(row: Row) -> Row:
    """Clear denominators of a rational row (a nonzero rescaling)."""
    den = 1
    for v in row.values():
        if isinstance(v, Fraction):
            den = math.lcm(den, v.denominator)
    if den == 1:
        return {j: int(v) for j, v in row.items()}
    return {j: int(v * den) for j, v in row.items()}


def _column_weights(data: Iterable[Row]) -> Dict[int, int]:
    w: Dict[int, int] = {}
    for r in data:
        for j in r:
            w[j] = w.get(j, 0) + 1
    return w


def _eliminate(data: List[Row], cols: int, modulus: Optional[int]) -> int:
    order = sorted(range(len(data)), key=lambda i: len(data[i]))
    ech = StreamingEchelon(modulus, _column_weights(data))
    limit = min(len(data), cols)
    for i in order:
        if data[i]:
            ech.add(data[i])
            if ech.rank == limit:
                break
    return ech.rank


def rank_mod_p(M: ExactMatrix, p: int) -> int:
    """Rank of M reduced modulo the prime p (raises BadPrime on bad reduction)."""
    Mp = M.reduce_mod(p)
    return _eliminate(Mp.data, Mp.cols, p)


def rank_exact_rational(M: ExactMatrix, cap: int = DEFAULT_EXACT_CAP) -> "RankReport":
    if M.modulus is not None:
        raise ValueError("rational rank requested for a modular matrix")
    if M.rows * M.cols > cap:
        raise CapExceeded(f"{M.rows}x{M.cols} exceeds exact-elimination cap {cap}; use modular path")
    t0 = time.perf_counter()
    data = [_primitive(integer_row(r)) for r in M.data]
    r = _eliminate(data, M.cols, None)
    return RankReport(M.rows, M.cols, r, EXACT, [], "fraction-free", time.perf_counter() - t0)


# -- primes and reports ----------------------------------------------------------


def random_primes(count: int, seed: int = 0, bits: int = 62) -> List[int]:
    rng = random.Random(seed)
    out: List[int] = []
    while len(out) < count:
        cand = rng.getrandbits(bits) | (1 << (bits - 1))
        p = int(gmpy2.next_prime(cand))
        if p not in out:
            out.append(p)
    return out


@dataclass
class RankReport:
    rows: int
    cols: int
    rank: int
    certainty: str
    primes: List[int] = field(default_factory=list)
    method: str = ""
    elapsed: float = 0.0

    @property
    def full_rank(self) -> bool:
        return self.rank == min(self.rows, self.cols)

    @property
    def is_exact(self) -> bool:
        return self.certainty == EXACT

    def to_dict(self, include_elapsed: bool = False) -> dict:
        d = asdict(self)
        if not include_elapsed:
            d.pop("elapsed")
        d["full_rank"] = self.full_rank
        return d


def rank_certified(M: ExactMatrix, primes: Sequence[int], agree_count: int = 3) -> RankReport:
    """Max modular rank over ``primes``, labelled by how much it certifies.

    A rank equal to min(rows, cols) is exact (full-rank witness).  A deficient
    rank on which at least ``agree_count`` primes agree is labelled
    probabilistic-exact; otherwise it is only a certified lower bound.
    """
    if not primes:
        raise PreconditionError("rank_certified needs at least one prime")
    t0 = time.perf_counter()
    full = min(M.rows, M.cols)
    if full == 0 or M.nnz() == 0:
        return RankReport(M.rows, M.cols, 0, EXACT, [], "trivial", time.perf_counter() - t0)
    ranks, used = [], []
    for p in primes:
        try:
            r = rank_mod_p(M, p)
        except BadPrime:
            continue
        ranks.append(r)
        used.append(p)
        if r == full:
            break
    if not ranks:
        raise BadPrime("every supplied prime divides a denominator; rerun with a different seed or more primes")
    best = max(ranks)
    if best == full:
        certainty = EXACT
    elif len(ranks) >= agree_count and all(r == best for r in ranks):
        certainty = PROBABLY_EXACT
    else:
        certainty = LOWER_BOUND
    return RankReport(M.rows, M.cols, best, certainty, used, "modular", time.perf_counter() - t0)


@dataclass
class RankConfig:
    n_primes: int = 2
    seed: int = 0
    certify: bool = True
    exact_cap: int = DEFAULT_EXACT_CAP

    @classmethod
    def from_env(cls) -> "RankConfig":
        env = os.environ
        return cls(
            n_primes=int(env.get("PDFLAT_PRIMES", 2)),
            seed=int(env.get("PDFLAT_SEED", 0)),
            certify=env.get("PDFLAT_CERTIFY", "1") not in ("0", "false", "no"),
            exact_cap=int(env.get("PDFLAT_EXACT_CAP", DEFAULT_EXACT_CAP)),
        )

    def primes(self) -> List[int]:
        return random_primes(max(1, self.n_primes), self.seed)


def compute_rank(M: ExactMatrix, config: Optional[RankConfig] = None) -> RankReport:
    """Modular rank, upgraded to an exact rational rank when it is not maximal."""
    config = config or RankConfig()
    rep = rank_certified(M, config.primes())
    if rep.certainty == EXACT or not config.certify or M.rows * M.cols > config.exact_cap:
        return rep
    t0 = time.perf_counter()
    exact = rank_exact_rational(M, config.exact_cap)
    return RankReport(M.rows, M.cols, exact.rank, EXACT, rep.primes, "modular+fraction-free",
                      rep.elapsed + time.perf_counter() - t0)


# -- determinants ------------------------------------------------------------------


def _exact_div(a, b):
    if isinstance(a, int) and isinstance(b, int):
        return a // b
    return norm_coeff(Fraction(a) / b)


def determinant(M: ExactMatrix):
    """Exact determinant by Bareiss elimination with row pivoting."""
    if M.rows != M.cols:
        raise ValueError("determinant of a non-square matrix")
    n = M.rows
    a = M.to_dense()
    sign, prev = 1, 1
    for k in range(n - 1):
        if not a[k][k]:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = _exact_div(a[i][j] * a[k][k] - a[i][k] * a[k][j], prev)
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


def leading_principal_minors(M: ExactMatrix) -> List:
    """det of the k x k leading submatrices, k = 1..n (Bareiss without pivoting)."""
    if M.rows != M.cols:
        raise ValueError("leading minors of a non-square matrix")
    n = M.rows
    a = M.to_dense()
    minors = []
    prev = 1
    for k in range(n):
        if not a[k][k]:
            minors.append(0)
            minors.extend(determinant(M.submatrix(range(t), range(t))) for t in range(k + 2, n + 1))
            return minors
        minors.append(a[k][k])
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = _exact_div(a[i][j] * a[k][k] - a[i][k] * a[k][j], prev)
        prev = a[k][k]
    return minors
