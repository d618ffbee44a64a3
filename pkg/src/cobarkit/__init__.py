"""Cobar complex computations for (BP_*, BP_*BP) at p = 2, Ext tables and
the algebraic Atiyah-Hirzebruch spectral sequence over F_2[q_0, q_1, ...].
"""

from .coefficients import Residue, binom_mod, congruence_rule
from .hopf_algebroid import DEFAULT_CONFIG, RightUnitDisabledError, StructureConfig, comultiply
from .cobar import (
    KEY_COCYCLE_CONFIG,
    CobarElement,
    VerificationReport,
    differential,
    face_map,
    make_correction,
    make_T,
    residual,
    verify_key_cocycle,
    verify_stabilization,
    verify_witness,
    word,
)
from .may import MayClass, e1_class, leading_part, may_weight
from .ext_tables import ExtClass, QMonomial, degree_of, ext_class, normalize_product, regrade
from .algah import DegreeFamily, apply_differentials, emit_chart, enumerate_e1, figure, survivors

__version__ = "0.1.0"
