import math

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from oracles import sympy_terms, symbols
from pdflat.errors import CapExceeded, PreconditionError
from pdflat.families import (FAMILIES, SymbolicMatrix, bierman, build_family, complete_symmetric,
                             determinant, diagonal_specialization, elementary_symmetric, f_family,
                             family_degree, ftilde_family, imm, permanent, pow_trace, power_sum, qm_matrix,
                             random_form, verify_imm_diagonal_specialization, verify_pow_specialization)
from pdflat.poly import Gaussian, Poly, substitute

y = [Poly.var(2, i) for i in range(2)]


def test_power_sum():
    assert power_sum(2, 2) == y[0] ** 2 + y[1] ** 2
    assert power_sum(1, 3).terms == {(3,): 1}
    q3 = power_sum(3, 2)
    assert len(q3) == 3 and set(q3.terms.values()) == {1}


@pytest.mark.parametrize("n,d", [(n, d) for n in range(1, 6) for d in range(0, 7)])
def test_complete_symmetric_terms(n, d):
    h = complete_symmetric(n, d)
    assert len(h) == math.comb(n + d - 1, d)
    assert set(h.terms.values()) <= {1}
    assert h.is_homogeneous()


def test_complete_symmetric_examples():
    assert complete_symmetric(2, 2) == y[0] ** 2 + y[0] * y[1] + y[1] ** 2
    assert complete_symmetric(4, 0) == Poly.constant(4)
    assert len(complete_symmetric(3, 3)) == 10


def test_elementary_symmetric():
    x = [Poly.var(3, i) for i in range(3)]
    assert elementary_symmetric(3, 2) == x[0] * x[1] + x[0] * x[2] + x[1] * x[2]
    assert elementary_symmetric(5, 1) == power_sum(5, 1)
    assert elementary_symmetric(4, 4).terms == {(1, 1, 1, 1): 1}
    assert elementary_symmetric(3, 4).is_zero()
    assert len(elementary_symmetric(6, 3)) == 20


def test_f_and_ftilde():
    assert f_family(2, 1) == power_sum(2, 2)
    assert f_family(2, 2) == Poly(2, {(4, 0): 1, (2, 2): 2, (0, 4): 1})
    assert ftilde_family(2, 1) == (y[0] + y[1]) * (y[0] ** 2 + y[1] ** 2)
    assert ftilde_family(4, 3).homogeneous_degree() == 7


def test_bierman():
    assert bierman(1, 2).terms == {(2,): 4}
    assert bierman(2, 2) == Poly(2, {(2, 0): 5, (1, 1): 2, (0, 2): 5})


def test_permanent_determinant():
    p2, d2 = permanent(2), determinant(2)
    # variables x11, x12, x21, x22
    assert p2.terms == {(1, 0, 0, 1): 1, (0, 1, 1, 0): 1}
    assert d2.terms == {(1, 0, 0, 1): 1, (0, 1, 1, 0): -1}
    p3 = permanent(3)
    assert len(p3) == 6 and set(p3.terms.values()) == {1}


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_permanent_and_determinant_against_sympy(m):
    xs = symbols(m * m)
    M = sympy.Matrix(m, m, xs)
    assert permanent(m).terms == sympy_terms(sympy.expand(M.per()), m * m)
    assert determinant(m).terms == sympy_terms(sympy.expand(M.det()), m * m)
    assert {e: abs(c) for e, c in determinant(m).terms.items()} == permanent(m).terms


def test_permanent_cap():
    with pytest.raises(CapExceeded):
        permanent(9, cap=1000)


def test_imm_and_pow_examples():
    assert imm(1, 3).terms == {(1, 1, 1): 1}
    # pow_trace(2, 2): variables x11, x12, x21, x22
    assert pow_trace(2, 2).terms == {(2, 0, 0, 0): 1, (0, 1, 1, 0): 2, (0, 0, 0, 2): 1}
    assert len(imm(2, 2)) == 4
    assert imm(3, 4).homogeneous_degree() == 4


@pytest.mark.parametrize("n,d", [(2, 2), (2, 3), (3, 2), (2, 4)])
def test_imm_against_symbolic_product(n, d):
    nv = d * n * n
    mats = [SymbolicMatrix.from_rows([[Poly.var(nv, a * n * n + i * n + j) for j in range(n)]
                                      for i in range(n)]) for a in range(d)]
    prod = mats[0]
    for M in mats[1:]:
        prod = prod @ M
    assert prod.trace() == imm(n, d)


@pytest.mark.parametrize("n,d", [(2, 3), (3, 3), (2, 4)])
def test_imm_cyclic_invariance(n, d):
    p = imm(n, d)
    block = n * n
    # rename slot a -> slot a+1 (mod d)
    images = [Poly.var(p.n, ((v // block + 1) % d) * block + v % block) for v in range(p.n)]
    assert substitute(p, images) == p


def test_pow_trace_is_imm_on_equal_slots():
    n, d = 2, 3
    images = [Poly.var(n * n, v % (n * n)) for v in range(d * n * n)]
    assert substitute(imm(n, d), images) == pow_trace(n, d)


def test_qm_matrix_n2():
    Q = qm_matrix(2)
    assert (Q.rows, Q.cols) == (2, 2)
    assert Q[0, 1] == Poly(2, {(1, 0): 1, (0, 1): Gaussian(0, 1)})
    assert Q[1, 0] == Poly(2, {(1, 0): 1, (0, 1): Gaussian(0, -1)})
    assert Q[0, 0].is_zero() and Q[1, 1].is_zero()
    assert (Q ** 2).trace() == f_family(2, 1).scale(2)


@pytest.mark.parametrize("n,size", [(2, 2), (3, 3), (4, 3), (5, 4), (6, 4)])
def test_qm_matrix_size(n, size):
    Q = qm_matrix(n)
    assert (Q.rows, Q.cols) == (size, size)


@pytest.mark.parametrize("n", range(2, 7))
def test_odd_power_traces_vanish(n):
    Q = qm_matrix(n)
    P = Q
    for d in range(1, 8, 2):
        assert P.trace().is_zero(), d
        P = P @ Q @ Q


@pytest.mark.parametrize("n,k", [(2, 1), (3, 2), (4, 1), (5, 3), (6, 2)])
def test_pow_specialization(n, k):
    assert verify_pow_specialization(n, k)


@pytest.mark.parametrize("m,n", [(2, 4), (3, 9), (1, 1), (2, 5)])
def test_imm_diagonal_specialization(m, n):
    assert verify_imm_diagonal_specialization(m, n)


def test_diagonal_specialization_needs_room():
    with pytest.raises(PreconditionError):
        diagonal_specialization(2, 3)


def test_perm2_diagonal_pattern_gives_power_sum():
    # perm of diag(y1, y2) is y1*y2; the permanent of the 2x2 matrix [[y1,y2],[y2,y1]] is y1^2 + y2^2
    got = substitute(permanent(2), [y[0], y[1], y[1], y[0]])
    assert got == power_sum(2, 2)


def test_random_form_is_seeded():
    assert random_form(3, 3, seed=5) == random_form(3, 3, seed=5)
    assert random_form(3, 3, seed=5) != random_form(3, 3, seed=6)
    assert all(-100 <= c <= 100 for c in random_form(3, 4, seed=1).terms.values())


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(sorted(FAMILIES)), st.integers(1, 3), st.integers(1, 3))
def test_registry_degree(name, a, b):
    params = dict(zip(FAMILIES[name].params, (a, b, 0)))
    p = build_family(name, **params)
    if p:
        assert p.homogeneous_degree() == family_degree(name, **params)


def test_registry_errors():
    with pytest.raises(ValueError, match="unknown family"):
        build_family("nope", n=2)
    with pytest.raises(ValueError, match="needs parameters"):
        build_family("h", n=2)


def test_symbolic_matrix_identity_power():
    Q = qm_matrix(3)
    assert (Q ** 0).trace() == Poly.constant(3, Q.rows)
    assert (Q ** 2).trace() == f_family(3, 1).scale(2)
