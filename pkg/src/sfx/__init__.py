"""Exact-arithmetic toolkit for quasi-Frobenius Lie superalgebras.

Build orthosymplectic and periplectic standard-model double extensions from
(xi, gamma, epsilon) data, reduce by isotropic ideals, decompose algebras
with degenerate center, extract standard-model data from abstractly given
extensions, and verify tau-equivalences -- all over exact rationals.
"""

from .superlinalg import (
    EVEN, ODD, Scalar, SuperSpace, GradedLinearMap, Subspace,
    shuffles, theta_sign, solve_linear,
)
from .liesuper import LieSuperAlgebra, abelian_algebra
from .symplectic import SuperForm, QuasiFrobenius
from .cohomology import Cochain, d_ce, d_xi, wedge, ev_pairing
from .doubleext import (
    ExtensionData, StandardModel, TauMap,
    derive_beta, derive_alpha, check_conditions,
    build_orthosymplectic, build_periplectic, build_model,
    canonical_quadruple, quadruple_from_ideal, extract_standard,
    tau_transform, tau_equivalence_map, verify_equivalence,
)

__version__ = "0.1.0"
