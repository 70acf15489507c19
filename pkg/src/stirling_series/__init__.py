"""Stirling's series for log n!: exact coefficients, enveloping evaluation,
Wallis brackets, Schaar's integral remainder and De Moivre's log tables."""
from .bernoulli import bernoulli_number, bernoulli_numbers, faulhaber_sum
from .coefficients import (
    CoefficientTable,
    base10_modulus,
    closed_form_stirling,
    coefficient_table,
    demoivre_coefficient,
    printed_coefficient,
    solve_stirling_system,
)
from .exceptions import (
    AlignmentError,
    DomainError,
    InsufficientPrecisionError,
    MalformedDigitsError,
    PositionError,
    QuadratureError,
    RowMismatchError,
    StirlingError,
)
from .histtable import (
    cast_out_nines,
    compare_tables,
    generate_table,
    inject_errors,
    load_dataset,
    log10_factorial,
)
from .numerics import DEFAULT_PRECISION, ExactRational, ExtFloat
from .schaar import QuadratureSpec, expm1_recip_partial_fraction, schaar_log_gamma, schaar_remainder
from .series import (
    constant_series_partials,
    eval_demoivre,
    eval_F,
    eval_stirling,
    log_factorial,
    sum_log_arith_progression,
    truncation_report,
)
from .wallis import constant_bracket, pi_bracket, wallis_partial_product

__version__ = "0.1.0"
