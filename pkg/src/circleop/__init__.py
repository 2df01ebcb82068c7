"""Numerical toolkit for the operators ``S_{alpha,beta} f = alpha P f + beta Q f`` on L^2(S^1).

``P`` and ``Q`` are the Riesz projections onto H^2 and its orthogonal
complement; symbols are finite Laurent series (:class:`Symbol`) or grid
samplings of continuous functions.
"""
from .errors import CircleOpError, CurveTouchesPoint, GridTooCoarse, SymbolParseError, WindowTooSmall
from .symbol import (
    DELTA_WIND, ONE, TAU_EQ, ZBAR, ZERO, GridSampling, Symbol, Z, analytic_inverse, format_symbol,
    from_samples, in_essential_range, is_analytic, is_coanalytic, make_symbol, parse_symbol, sample,
    sample_function, sup_norm, vanishing_on_arc, winding_number, zero_set_measure,
)
from .operators import (
    CoeffVector, OperatorMatrix, apply, apply_adjoint, build_matrix, build_remark_operator,
    operator_matrix, riesz_p, riesz_q, shift_power, verify_structure,
)
from .norm import norm_bounds, norm_case_classifier, ny_norm_estimate, ny_objective, operator_norm
from .algebra import (
    commutator_residual, commute_check, product_form, product_matrix, two_shift_commutant_check,
    zero_product_class,
)
from .spectral import (
    GridSpec, essential_range_in_approx_spectrum, half_spectrum, index_via_roots, invertible_by_index,
    resolvent_lower_bound, resolvent_min_sv, solve_shifted_adjoint, spectrum_continuous,
)
from .structure import (
    BlaschkeProduct, blaschke_coeffs, canonical_subspace, compact_distance_ratio, injectivity_classifier,
    invariance_residual, invariant_subspace_basis, kernel_basis, noncompactness_witness, reducing_check,
)

__version__ = "0.1.0"
