"""
Motive Workbench

Exact Schubert calculus on Grassmannians and projective spaces, correspondences
between them, rational-cycle witnesses, a rewrite engine for motivic
decompositions of twisted flag varieties, and the verification pipeline for the
decomposition of the motive of SB₂(A) of a degree-5 division algebra.
"""

from .combinatorics import (
    IntPolynomial,
    Partition,
    complement,
    gaussian_binomial,
    gensb_polynomial,
    partitions_in_box,
    phi,
    proofgensb_identity,
    psi,
)
from .chow_ring import (
    INTEGERS,
    RATIONALS,
    ChowClass,
    CoefficientRing,
    GrassmannSpace,
    basis_class,
    degree,
    giambelli_oracle,
    integers_mod,
    multiply,
    named_generator,
    pieri,
    projective_space,
)
from .correspondence import (
    ProductClass,
    TwistFrame,
    check_iso_pair,
    compose,
    denominator_support,
    diagonal,
    eq_mod,
    external_product,
    is_projector,
    reduce_mod,
    tensor_line_chern,
    transpose,
)
from .rationality import RationalWitness, combine, segre_chern, verify
from .rewriter import (
    FlagDescriptor,
    GroupDescriptor,
    MotiveExpr,
    decompose_chain,
    gensb_expand,
    krull_schmidt_report,
    poincare_polynomial,
)
from .expression import evaluate, parse
from .sb2_verifier import VerificationReport, build_context, run_algebra, run_all
from .config import WorkbenchConfig, create_workbench_config, get_workbench_config, set_workbench_config
from .errors import WorkbenchError

__version__ = "0.1.0"

__all__ = [
    # Combinatorics
    "Partition",
    "partitions_in_box",
    "complement",
    "IntPolynomial",
    "gaussian_binomial",
    "phi",
    "psi",
    "gensb_polynomial",
    "proofgensb_identity",

    # Chow rings
    "CoefficientRing",
    "INTEGERS",
    "RATIONALS",
    "integers_mod",
    "GrassmannSpace",
    "projective_space",
    "ChowClass",
    "basis_class",
    "named_generator",
    "pieri",
    "multiply",
    "giambelli_oracle",
    "degree",

    # Correspondences
    "ProductClass",
    "external_product",
    "transpose",
    "compose",
    "diagonal",
    "is_projector",
    "TwistFrame",
    "check_iso_pair",
    "reduce_mod",
    "eq_mod",
    "denominator_support",
    "tensor_line_chern",

    # Rationality witnesses
    "RationalWitness",
    "segre_chern",
    "combine",
    "verify",

    # Rewriter
    "GroupDescriptor",
    "FlagDescriptor",
    "MotiveExpr",
    "decompose_chain",
    "gensb_expand",
    "poincare_polynomial",
    "krull_schmidt_report",

    # Expressions and verification
    "parse",
    "evaluate",
    "build_context",
    "run_all",
    "run_algebra",
    "VerificationReport",

    # Configuration
    "WorkbenchConfig",
    "create_workbench_config",
    "get_workbench_config",
    "set_workbench_config",
    "WorkbenchError",
]
