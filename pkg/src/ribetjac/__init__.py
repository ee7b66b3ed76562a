"""Exact arithmetic on generalized Jacobians of one-node curves.

The package glues a CM elliptic curve over a small finite field at a pair
of opposite points (q, -q), works with degree-zero divisor classes on the
resulting nodal curve, and certifies the exact torsion order of the
section class built from the antisymmetric pullback/pushforward divisor
of (q) - (-q).  Everything is exact integer / finite-field arithmetic.
"""

from .errors import *  # noqa: F401,F403
from .finite_field import (  # noqa: F401
    DESK_SCALE_BOUND,
    FieldElement,
    FieldSpec,
    factorize,
    is_prime,
    mult_order,
    parse_field,
)
from .elliptic_curve import (  # noqa: F401
    INFINITY,
    CurvePoint,
    CurveSpec,
    parse_curve,
)
from .divisor import Divisor, div_combine  # noqa: F401
from .cm import CMStructure, Endo, EISENSTEIN, GAUSSIAN, parse_endo  # noqa: F401
from .function_eval import (  # noqa: F401
    EvalPair,
    LineProgram,
    eval_ratio,
    function_with_divisor,
    norm_along,
    weil_pairing,
    weil_reciprocity_check,
)
from .gen_jacobian import JacClass, NodalFiber  # noqa: F401
from .ribet_section import (  # noqa: F401
    FiberReport,
    RibetConfig,
    beta_class,
    beta_divisor,
    lambda_two_path,
    raw_beta_divisor,
    scan_lifting,
    search_max_order_fiber,
    verify_fiber,
)
from .cli import ExperimentConfig, auto_extend_field, run  # noqa: F401
