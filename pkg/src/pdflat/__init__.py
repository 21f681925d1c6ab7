"""Exact partial-derivative, shifted-partial and Koszul flattening ranks of explicit polynomials."""

from .families import (bierman, complete_symmetric, determinant, elementary_symmetric, f_family,
                       ftilde_family, imm, permanent, pow_trace, power_sum, qm_matrix, random_form,
                       verify_imm_diagonal_specialization, verify_pow_specialization)
from .flattening import (catalecticant, catalecticant_rank, first_derivative_span_check,
                         flattening_lower_bound, macaulay_lower_bound, nestimate_holds,
                         perm_crude_upper_bound, shifted_partials_dim)
from .koszul import (apriori_bound, fknkosz_bound, koszul_border_rank_lb, koszul_matrix, koszul_rank,
                     skew_symmetry_check)
from .lgv import (gv_matrix, gv_rank, hadamard, hnd_gv_crosscheck, is_positive_definite,
                  is_positive_semidefinite, principal_submatrix_rank_check)
from .poly import Gaussian, MonomialBasis, Poly, diff, mono_basis, poly_add, poly_mul, substitute
from .rank import (ExactMatrix, RankConfig, RankReport, compute_rank, rank_certified, rank_exact_rational,
                   rank_mod_p)

__version__ = "0.1.0"
