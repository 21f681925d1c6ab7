"""Koszul flattenings p^{wedge q}_{s,d-s} and the border-rank bounds they give.

Basis elements of the exterior power are strictly increasing 0-based index
tuples in lexicographic order.  Row and column bases are wedge-major,
monomial-minor.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Tuple

from .errors import CapExceeded, PreconditionError
from .flattening import form_degree
from .poly import MonomialBasis, Poly, diff, mono_basis
from .rank import ExactMatrix, RankConfig, RankReport, compute_rank

WedgeIndex = Tuple[int, ...]

DEFAULT_CELL_CAP = 50_000_000


def wedge_basis(N: int, q: int) -> List[WedgeIndex]:
    if not 0 <= q <= N:
        return []
    return list(combinations(range(N), q))


def wedge_insert(k: int, I: WedgeIndex):
    """x_k ^ x_I = sign * x_{sorted(k, I)}; sign 0 when k is already in I."""
    if k in I:
        return 0, None
    below = sum(1 for i in I if i < k)
    return (-1) ** below, tuple(sorted(I + (k,)))


def _pair_index(wedges: List[WedgeIndex], basis: MonomialBasis) -> Dict:
    w = len(basis)
    return {I: a * w for a, I in enumerate(wedges)}


@dataclass
class KoszulMatrix:
    poly: Poly
    s: int
    q: int
    d: int
    row_wedges: List[WedgeIndex]
    row_monomials: MonomialBasis
    col_wedges: List[WedgeIndex]
    col_monomials: MonomialBasis
    matrix: ExactMatrix

    @property
    def N(self) -> int:
        return self.poly.n

    @property
    def shape(self):
        return self.matrix.shape

    def row_label(self, i: int):
        w = len(self.row_monomials)
        return self.row_wedges[i // w], self.row_monomials[i % w]

    def col_label(self, j: int):
        w = len(self.col_monomials)
        return self.col_wedges[j // w], self.col_monomials[j % w]

    def rank_report(self, config: Optional[RankConfig] = None) -> RankReport:
        return compute_rank(self.matrix, config)


def koszul_shape(N: int, d: int, s: int, q: int) -> Tuple[int, int]:
    rows = math.comb(N, q) * math.comb(N + s - 1, s)
    cols = math.comb(N, q + 1) * math.comb(N + d - s - 2, d - s - 1)
    return rows, cols


def koszul_matrix(p: Poly, s: int, q: int, cap: int = DEFAULT_CELL_CAP) -> KoszulMatrix:
    """Matrix of x_I (x) d^J  ->  sum_k  x_k ^ x_I (x) d^{J+e_k} p."""
    d = form_degree(p)
    N = p.n
    if not 0 <= s <= d - 1:
        raise PreconditionError(f"need 0 <= s <= d-1 = {d - 1}, got s={s}")
    if not 0 <= q <= N - 1:
        raise PreconditionError(f"need 0 <= q <= N-1 = {N - 1}, got q={q}")
    nrows, ncols = koszul_shape(N, d, s, q)
    if nrows * ncols > cap:
        raise CapExceeded(f"Koszul matrix {nrows}x{ncols} exceeds cap {cap}")
    row_mons = mono_basis(N, s)
    col_mons = mono_basis(N, d - s - 1)
    row_wedges = wedge_basis(N, q)
    col_wedges = wedge_basis(N, q + 1)
    col_off = _pair_index(col_wedges, col_mons)
    # d^{J + e_k} p for every row operator J and variable k
    second = {}
    for J in row_mons:
        g = diff(p, J)
        second[J] = [g.partial(k) for k in range(N)]
    data = []
    for I in row_wedges:
        inserts = [(k,) + wedge_insert(k, I) for k in range(N)]
        for J in row_mons:
            row = {}
            for k, sign, K in inserts:
                if not sign:
                    continue
                off = col_off[K]
                for gamma, c in second[J][k].terms.items():
                    row[off + col_mons.index[gamma]] = sign * c
            data.append(row)
    M = ExactMatrix(nrows, ncols, data)
    return KoszulMatrix(p, s, q, d, row_wedges, row_mons, col_wedges, col_mons, M)


def koszul_rank(p: Poly, s: int, q: int, config: Optional[RankConfig] = None) -> int:
    return koszul_matrix(p, s, q).rank_report(config).rank


def exterior_derivative_matrix(N: int, q: int, m: int) -> ExactMatrix:
    """delta: x_I (x) g -> sum_k x_k ^ x_I (x) dg/dx_k, from L^q (x) S^m to L^{q+1} (x) S^{m-1}."""
    src_mons = mono_basis(N, m)
    dst_mons = mono_basis(N, m - 1) if m >= 1 else None
    src_w, dst_w = wedge_basis(N, q), wedge_basis(N, q + 1)
    ncols = len(dst_w) * (len(dst_mons) if dst_mons else 0)
    col_off = _pair_index(dst_w, dst_mons) if dst_mons else {}
    data = []
    for I in src_w:
        for alpha in src_mons:
            row = {}
            for k in range(N):
                sign, K = wedge_insert(k, I)
                if not sign or not alpha[k]:
                    continue
                gamma = alpha[:k] + (alpha[k] - 1,) + alpha[k + 1:]
                row[col_off[K] + dst_mons.index[gamma]] = sign * alpha[k]
            data.append(row)
    return ExactMatrix(len(data), ncols, data)


def identity_tensor_catalecticant(p: Poly, s: int, q: int) -> ExactMatrix:
    """id_{L^q} (x) (D -> D(p)), from L^q (x) S^s* to L^q (x) S^{d-s}."""
    d = form_degree(p)
    N = p.n
    rows_m, cols_m = mono_basis(N, s), mono_basis(N, d - s)
    wedges = wedge_basis(N, q)
    w = len(cols_m)
    data = []
    for a, _I in enumerate(wedges):
        for J in rows_m:
            data.append({a * w + cols_m.index[g]: c for g, c in diff(p, J).terms.items()})
    return ExactMatrix(len(data), len(wedges) * w, data)


# -- bounds ---------------------------------------------------------------------


def _binom(n: int, r: int) -> int:
    return math.comb(n, r) if 0 <= r <= n else 0


def apriori_bound(N: int, k: int, q: int) -> int:
    """sum_{j=0}^{k} (-1)^j binom(N, q-j) binom(N+k-j-1, k-j)."""
    if min(N, k, q) < 0:
        raise ValueError("parameters must be nonnegative")
    return sum((-1) ** j * _binom(N, q - j) * _binom(N + k - j - 1, k - j) for j in range(k + 1))


@dataclass(frozen=True)
class BorderRankBound:
    rank: int
    denominator: int

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.rank, self.denominator)

    @property
    def bound(self) -> int:
        """Border rank is an integer, so the ratio may be rounded up."""
        return math.ceil(self.ratio)


def koszul_border_rank_lb(p: Poly, s: int, q: int, config: Optional[RankConfig] = None) -> BorderRankBound:
    r = koszul_rank(p, s, q, config)
    return BorderRankBound(r, math.comb(p.n - 1, q))


def fknkosz_bound(n: int, k: int, q: int) -> int:
    """Rank lower bound binom(n-1, q) (binom(n+k-1, k) + q - 1) for the ftilde family."""
    if n <= 2 or not 2 * q < n:
        raise PreconditionError(f"need n > 2 and q < n/2, got n={n}, q={q}")
    return math.comb(n - 1, q) * (math.comb(n + k - 1, k) + q - 1)


# -- skew-symmetry ----------------------------------------------------------------


def _volume_sign(K: WedgeIndex, rest: WedgeIndex) -> int:
    """Sign of x_K ^ x_rest relative to x_0 ^ ... ^ x_{N-1}."""
    seq = K + rest
    inversions = sum(1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b])
    return -1 if inversions % 2 else 1


def paired_koszul_matrix(p: Poly, q: int) -> ExactMatrix:
    """Square form of p^{wedge q}_{k,k+1} when N = 2q+1 and deg p = 2k+1.

    Column (K, gamma) is sent to the row label (complement of K, gamma): the
    wedge factor by contraction with the volume form, the symmetric factor by
    the apolar pairing <d^beta, x^gamma> = gamma! delta_{beta,gamma}.
    """
    d = form_degree(p)
    N = p.n
    if N != 2 * q + 1 or d % 2 == 0:
        raise PreconditionError(f"need N = 2q+1 and odd degree, got N={N}, q={q}, d={d}")
    k = (d - 1) // 2
    K = koszul_matrix(p, k, q)
    rows_w = K.row_wedges
    row_pos = {I: a for a, I in enumerate(rows_w)}
    w = len(K.row_monomials)
    full = set(range(N))
    col_map = {}
    for b, Kw in enumerate(K.col_wedges):
        comp = tuple(sorted(full - set(Kw)))
        col_map[b] = (row_pos[comp], _volume_sign(Kw, comp))
    weights = [math.prod(math.factorial(x) for x in g) for g in K.col_monomials]
    data = []
    for r in K.matrix.data:
        row = {}
        for j, v in r.items():
            b, t = divmod(j, w)
            a, sign = col_map[b]
            row[a * w + t] = sign * weights[t] * v
        data.append(row)
    return ExactMatrix(K.matrix.rows, K.matrix.rows, data)


def skew_symmetry_check(p: Poly, q: int) -> bool:
    """Is the paired square Koszul matrix M equal to -M^T?"""
    if q % 2 == 0:
        raise PreconditionError("skew-symmetry check needs q odd")
    M = paired_koszul_matrix(p, q)
    T = M.transpose()
    return all(T.data[i].get(j, 0) == -v for i, r in enumerate(M.data) for j, v in r.items()) and \
        M.nnz() == T.nnz()
