"""Degree-zero Poisson homology of B_n / D_n invariants via the BEG equation."""

from .poly import Polynomial, parse, poisson_bracket, shift_substitute, coefficient_of, pfaffian_x
from .weyl import (
    SignedPermutation,
    WeylGroup,
    act,
    reynolds,
    sign_kill_test,
    partitions,
    partition_count,
    even_part_count,
    hh0_dimension,
)
from .sl2 import (
    Sl2Triple,
    PfaffianWord,
    Hw0Basis,
    sl2_generators,
    weight_of,
    is_hw0,
    hw0_dim_formula,
    hw0_basis,
    invariant_hw0_basis,
    pfaffian_expand,
)
from .beg import (
    beg_apply,
    beg_int,
    beg_prime,
    sl2_coefficients,
    solve_degree,
    hp0_report,
    SolutionReport,
    InconsistencyError,
)

__version__ = "0.1.0"
