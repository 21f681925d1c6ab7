"""Catalecticant (partial-derivative) matrices and shifted-partial dimensions."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

from .errors import CapExceeded, NotHomogeneous
from .families import power_sum
from .poly import MonomialBasis, Poly, diff, mono_basis
from .rank import (EXACT, LOWER_BOUND, ExactMatrix, RankConfig, RankReport, StreamingEchelon,
                   compute_rank, integer_row, rank_exact_rational, row_mod, _primitive)

DEFAULT_TARGET_CAP = 200_000


def form_degree(p: Poly, degree: Optional[int] = None) -> int:
    """Degree of a homogeneous form; the zero form needs ``degree`` supplied."""
    if p.is_zero():
        if degree is None:
            raise NotHomogeneous("the zero polynomial needs an explicit degree")
        return degree
    d = p.homogeneous_degree()
    if d is None:
        raise NotHomogeneous("polynomial is not homogeneous")
    if degree is not None and degree != d:
        raise NotHomogeneous(f"polynomial has degree {d}, not {degree}")
    return d


def coefficient_row(q: Poly, basis: MonomialBasis) -> dict:
    return {basis.index[e]: c for e, c in q.terms.items()}


@dataclass
class CatalecticantMatrix:
    """Matrix of D -> D(p) from order-e operators to degree d-e forms.

    Row beta is the coefficient vector of d^beta p; rows are operators and
    columns target monomials, both in grevlex order.
    """

    poly: Poly
    e: int
    d: int
    row_basis: MonomialBasis
    col_basis: MonomialBasis
    matrix: ExactMatrix

    @property
    def shape(self):
        return self.matrix.shape

    @property
    def max_rank(self) -> int:
        return min(self.matrix.shape)

    def rank_report(self, config: Optional[RankConfig] = None) -> RankReport:
        return compute_rank(self.matrix, config)

    def row_poly(self, i: int) -> Poly:
        """Row i read back as the polynomial d^beta p."""
        cols = self.col_basis.monomials
        return Poly(self.poly.n, {cols[j]: v for j, v in self.matrix.data[i].items()})


def catalecticant(p: Poly, e: int, degree: Optional[int] = None, cap: int = DEFAULT_TARGET_CAP) -> CatalecticantMatrix:
    d = form_degree(p, degree)
    if not 0 <= e <= d:
        raise ValueError(f"derivative order {e} outside 0..{d}")
    rows = mono_basis(p.n, e, cap)
    cols = mono_basis(p.n, d - e, cap)
    data = [coefficient_row(diff(p, beta), cols) for beta in rows]
    return CatalecticantMatrix(p, e, d, rows, cols, ExactMatrix(len(rows), len(cols), data))


def catalecticant_rank(p: Poly, e: int, config: Optional[RankConfig] = None) -> int:
    return catalecticant(p, e).rank_report(config).rank


def flattening_lower_bound(p: Poly, config: Optional[RankConfig] = None) -> int:
    """Largest catalecticant rank over all e; a lower bound for border Waring rank."""
    d = form_degree(p)
    return max(catalecticant_rank(p, e, config) for e in range(d + 1))


def span_report(polys: List[Poly], n: int, degree: int, config: Optional[RankConfig] = None) -> RankReport:
    """Dimension of the span of homogeneous degree-``degree`` forms."""
    basis = mono_basis(n, degree)
    data = [coefficient_row(q, basis) for q in polys]
    return compute_rank(ExactMatrix(len(data), len(basis), data), config)


def first_derivative_span_check(n: int, d: int, config: Optional[RankConfig] = None) -> bool:
    """Do the first partials of h * q_n (h of degree d) span all degree d+1 forms?"""
    q = power_sum(n, 2)
    gens = []
    for alpha in mono_basis(n, d):
        hq = q.mul_monomial(alpha)
        gens.extend(hq.partial(i) for i in range(n))
    rep = span_report(gens, n, d + 1, config)
    return rep.rank == math.comb(n + d, d + 1)


# -- shifted partials ----------------------------------------------------------


@dataclass
class ShiftedPartialSpace:
    """span{ x^gamma * d^beta p : |gamma| = tau, |beta| = e } inside S^{d-e+tau}."""

    n: int
    d: int
    e: int
    tau: int
    dim: int
    generator_count: int
    distinct_rows: int
    target_dim: int
    certainty: str
    primes: List[int]

    @property
    def upper_bound(self) -> int:
        return min(math.comb(self.n + self.e - 1, self.e) * math.comb(self.n + self.tau - 1, self.tau),
                   self.target_dim)


def _independent_partials(p: Poly, e: int, d: int) -> List[Poly]:
    """A subset of the order-e partials of p that is a basis of their span over Q."""
    cols = mono_basis(p.n, d - e)
    ech = StreamingEchelon(None)
    keep = []
    seen = set()
    for beta in mono_basis(p.n, e):
        q = diff(p, beta)
        if not q:
            continue
        row = _primitive(integer_row(coefficient_row(q, cols)))
        key = frozenset(row.items())
        if key in seen:
            continue
        seen.add(key)
        if ech.add(row):
            keep.append(q)
    return keep


def shifted_partials_dim(p: Poly, e: int, tau: int, config: Optional[RankConfig] = None,
                         cap: int = DEFAULT_TARGET_CAP) -> ShiftedPartialSpace:
    """Dimension of the degree d-e+tau piece of the ideal of order-e partials.

    Generators are fed one at a time into a modular echelon form, skipping exact
    duplicates, and generation stops as soon as the whole target space is
    reached.  A deficient modular rank is confirmed by exact elimination when
    ``config.certify`` is set.
    """
    config = config or RankConfig()
    d = form_degree(p)
    if not 0 <= e <= d or tau < 0:
        raise ValueError(f"need 0 <= e <= {d} and tau >= 0")
    n = p.n
    target_deg = d - e + tau
    target_dim = math.comb(n + target_deg - 1, target_deg)
    if target_dim > cap:
        raise CapExceeded(f"target space dimension {target_dim} exceeds cap {cap}")
    target = mono_basis(n, target_deg, cap)
    partials = _independent_partials(p, e, d)
    prime = config.primes()[0]
    ech = StreamingEchelon(prime)
    seen = set()
    rows = []
    generated = 0
    for gamma in mono_basis(n, tau, cap):
        for q in partials:
            generated += 1
            row = coefficient_row(q.mul_monomial(gamma), target)
            key = frozenset(row.items())
            if key in seen:
                continue
            seen.add(key)
            rows.append(row)
            ech.add(row_mod(row, prime))
            if ech.rank == target_dim:
                break
        if ech.rank == target_dim:
            break
    dim = ech.rank
    certainty = EXACT if dim in (target_dim, len(rows)) else LOWER_BOUND
    if certainty != EXACT and config.certify and len(rows) * target_dim <= config.exact_cap:
        dim = rank_exact_rational(ExactMatrix(len(rows), target_dim, rows), config.exact_cap).rank
        certainty = EXACT
    return ShiftedPartialSpace(n, d, e, tau, dim, generated, len(rows), target_dim, certainty, [prime])


# -- Macaulay growth versus the crude permanent estimate ---------------------------


def macaulay_lower_bound(n: int, s: int, tau: int) -> int:
    """Minimal degree-(s+tau) growth of an ideal generated by binom(n+s-1, s) forms."""
    return math.comb(n + s + tau - 1, s + tau)


def perm_crude_upper_bound(m: int, s: int, n: int, tau: int) -> int:
    """binom(m, s)^2 binom(n+tau-1, tau): shifted partials of perm_m, ignoring syzygies."""
    return math.comb(m, s) ** 2 * math.comb(n + tau - 1, tau)


def nestimate_holds(n: int, m: int, s: int, tau: int) -> bool:
    if min(n, m, s, tau) < 0 or s > m:
        raise ValueError("need nonnegative parameters with s <= m")
    return macaulay_lower_bound(n, s, tau) > perm_crude_upper_bound(m, s, n, tau)


def nestimate_sufficient(n: int, m: int, s: int, tau: int) -> bool:
    """(n + tau) / (tau + s) > m^2; only meaningful for s >= 1."""
    if s < 1:
        return False
    return Fraction(n + tau, tau + s) > m * m
