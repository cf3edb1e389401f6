"""Arithmetic/analytic decomposition of divisor-sum error terms."""

from .arith import (
    SieveTable,
    build_sieve,
    floor_sum_identity_check,
    mertens,
    summatory_divcount,
    summatory_phi,
    summatory_sigma1,
)
from .decomp import (
    DecompositionSample,
    analytic_part,
    decompose,
    er_value,
    f_value,
    g_value,
    r_value,
    volterra_residual,
)
from .growth import Envelope, envelope_value, scan
from .mellin import mellin_ean, mellin_f2, mellin_summatory
from .seeds import LIOUVILLE, MU, UNIT, ArithmeticSeed, get_seed
from .zeta import CONSTANTS, dirichlet_phi, dirichlet_sigma1, zeta

__version__ = "0.1.0"
