"""Exact polynomial integrals over the orthogonal group.

Exact rational Weingarten tables, closed forms for one/two-row, cross, spark
and three-row diagonal shapes, the hyperoctahedral normalization tower, a
quaternion-parametrization oracle for the 3x3 rotation group, and seeded
Monte Carlo cross-checks.
"""

from .exactnum import BracketSpec, Rational, bracket, dfact, format_rational, parse_rational
from .matrices import ExponentMatrix, parse_matrix_spec
from .pairings import Pairing, enumerate_pairings, join_block_count, pairing_type
# the module ogint.weingarten also exposes weingarten(k, n, pi, sigma);
# re-exporting it here would shadow the submodule name
from .weingarten import (
    GramSingularError,
    WeingartenTable,
    asymptotic_check,
    gram,
    integral,
    integral_monomial,
    weingarten_table,
)
from .integrals import (
    cross_j,
    elementary_expansion,
    flip_f,
    integral_value,
    j_value,
    n2_closed,
    one_row,
    spark_j,
    two_row_j,
)
from .normalization import gamma, phi, phi_property_battery, solve_normalization_exponents
from .threerow import ThreeRowConfig, conjecture73, diagonal_moments, j3_closed, j3_recurrence
from .spheremodel import (
    ModelMatrix,
    SparsePolynomial,
    euler_rodrigues_matrix,
    exact_model_moment,
    integrate_so3,
    model_battery,
    sphere_moment,
    xi_polynomial,
)

__version__ = "0.1.0"
