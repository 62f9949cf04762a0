"""Exact toric minimal model program toolkit.

Fans, divisors and morphisms live in rebased integer coordinates; all
arithmetic is done with ``int`` and ``fractions.Fraction``.
"""

from .completion import CompletedMorphism, CompletionResult, complete_fan, complete_morphism, is_projective
from .cone import Cone, QPolyhedron, double_description, lattice_points_under
from .divisor import (
    CartierData,
    TDivisor,
    boundary_divisor,
    canonical_divisor,
    cartier_data,
    is_ample_over,
    is_nef_over,
    is_qcartier,
    picard_number,
    principal_divisor,
    relative_picard_rank,
)
from .errors import *  # noqa: F401,F403
from .fan import Fan, Wall, fan_iso, same_fan, validate_fan
from .intersection import ExtremalRay, contract_ray, intersect, mori_extremal_rays
from .lattice import Lattice
from .linalg import snf
from .mmp import (
    blowdown_prescribed,
    dagger_model,
    elementary_transform,
    extremal_length_check,
    mmp_run,
    negativity_check,
    relative_proj,
)
from .morphism import ToricMorphism, check_morphism, classify_birational, fiber_fan, is_proper, pullback_divisor
from .scenarios import run_scenario
from .singularity import QuotientSpec, classify, discrepancy, is_odp, is_qgorenstein, quotient_fan

__version__ = "0.1.0"
