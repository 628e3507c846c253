"""Exact arithmetic for Carlitz twists over F_q[t].

Finite fields, polynomial rings, truncated Tate-algebra series, zeta
polynomials at negative twists, class-module determinants and the torsion
polynomials of positive twists.
"""

from __future__ import annotations

from .classmod import (
    PolyMatrix,
    Report,
    check_conjecture,
    fitting_data,
    gamma_matrix_oracle,
    mn_matrix,
    pn_poly,
    reduced_matrix,
)
from .ff import Embedding, FieldSpec, GFElem, enumerate_field, ext_field, ff_make, lucas_binom
from .motcoh import (
    en_compute,
    epsilon_computed,
    epsilon_formula,
    epsilon_root_degrees,
    ext_structure,
    gn_compute,
    root_locus,
)
from .polyring import BiPoly, PolyT, XPoly, content_t, expand_at_one, gcd_t, twist
from .tate import (
    LaurentTheta,
    NotInvertibleError,
    PrecisionError,
    TateSeries,
    TwistParams,
    decompose,
    ell_of,
    nu,
    omega_pow,
    polylog,
    solve_small,
    ts_invert,
    ts_twist,
    xi_series,
)
from .zeta import WorkLimitExceeded, Z_direct, Z_goss, power_sum, zeta_pos, zeta_star_neg

__version__ = "0.1.0"
