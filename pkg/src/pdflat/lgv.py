"""Binomial (Gessel-Viennot) matrices, Hadamard products and exact definiteness."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import PreconditionError
from .families import complete_symmetric
from .flattening import catalecticant
from .poly import mono_basis, norm_coeff
from .rank import ExactMatrix, RankConfig, compute_rank, determinant, leading_principal_minors, rank_exact_rational


@dataclass
class GVMatrix:
    a: List[Tuple[int, ...]]
    matrix: ExactMatrix

    @property
    def distinct(self) -> int:
        return len(set(self.a))


def gv_entry(u: Sequence[int], v: Sequence[int]) -> int:
    return math.prod(math.comb(x + y, x) for x, y in zip(u, v))


def gv_matrix(a: Sequence[Sequence[int]]) -> GVMatrix:
    """Hadamard product over coordinates t of [binom(a_i[t] + a_j[t], a_i[t])]."""
    tuples = [tuple(int(x) for x in t) for t in a]
    if not tuples:
        raise ValueError("empty tuple list")
    m = len(tuples[0])
    if m < 1 or any(len(t) != m for t in tuples):
        raise ValueError("all tuples must share one positive length")
    if any(x < 0 for t in tuples for x in t):
        raise ValueError("tuple entries must be nonnegative")
    grid = [[gv_entry(u, v) for v in tuples] for u in tuples]
    return GVMatrix(tuples, ExactMatrix.from_dense(grid))


def gv_rank(a: Sequence[Sequence[int]], config: Optional[RankConfig] = None) -> int:
    return compute_rank(gv_matrix(a).matrix, config).rank


def hadamard(A: ExactMatrix, B: ExactMatrix) -> ExactMatrix:
    if A.shape != B.shape:
        raise ValueError(f"Hadamard product of {A.shape} and {B.shape}")
    data = [{j: v * rb[j] for j, v in ra.items() if j in rb} for ra, rb in zip(A.data, B.data)]
    return ExactMatrix(A.rows, A.cols, data)


def _require_symmetric(M: ExactMatrix):
    if not M.is_symmetric():
        raise PreconditionError("matrix is not symmetric")


def is_positive_definite(M: ExactMatrix) -> bool:
    """Sylvester's criterion: every leading principal minor is positive."""
    _require_symmetric(M)
    for minor in leading_principal_minors(M):
        if minor <= 0:
            return False
    return True


def is_positive_semidefinite(M: ExactMatrix) -> bool:
    """Exact congruence reduction with symmetric pivoting.

    A PSD matrix with a zero diagonal entry has a zero row there, and a
    positive diagonal pivot can be eliminated by a congruence (Schur complement).
    """
    _require_symmetric(M)
    a = [[Fraction(x) for x in row] for row in M.to_dense()]
    live = list(range(M.rows))
    while live:
        for i in live:
            if a[i][i] < 0:
                return False
            if a[i][i] == 0 and any(a[i][j] for j in live):
                return False
        piv = next((i for i in live if a[i][i] > 0), None)
        if piv is None:
            return True
        live.remove(piv)
        d = a[piv][piv]
        for i in live:
            f = a[i][piv] / d
            if f:
                for j in live:
                    a[i][j] -= f * a[piv][j]
    return True


def principal_submatrix_rank_check(A: ExactMatrix, idx: Sequence[int]) -> bool:
    """Is A[idx, idx] nonsingular?  Preconditions are verified, not assumed."""
    idx = list(idx)
    _require_symmetric(A)
    if not is_positive_semidefinite(A):
        raise PreconditionError("matrix is not positive semidefinite")
    cols = A.transpose().submatrix(idx, range(A.rows))
    if rank_exact_rational(cols).rank != len(idx):
        raise PreconditionError("selected columns are not linearly independent")
    return determinant(A.submatrix(idx, idx)) != 0


def hnd_gv_crosscheck(n: int, k: int) -> bool:
    """Middle catalecticant of h_{n,2k}, rows divided by beta!, is the GV matrix of all |beta| = k."""
    cat = catalecticant(complete_symmetric(n, 2 * k), k)
    betas = list(mono_basis(n, k))
    if list(cat.col_basis) != betas:
        return False
    scaled = []
    for beta, row in zip(cat.row_basis, cat.matrix.data):
        f = math.prod(math.factorial(b) for b in beta)
        scaled.append({j: norm_coeff(Fraction(v, f)) for j, v in row.items()})
    G = gv_matrix(betas).matrix
    if ExactMatrix(len(scaled), len(betas), scaled) != G:
        return False
    return determinant(G) != 0
