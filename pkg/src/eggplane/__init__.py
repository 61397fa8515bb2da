"""Finite-geometry toolkit: eggs, semifield spreads, translation planes,
and the unital of the order-3^10 commutative-semifield plane, with
verification certificates for every construction.

The catalog module names the shipped objects ("pw", "d243", "m1", ...);
each build_* / verify_* pair constructs an object and certifies its
defining axioms at a scale-appropriate level (exhaustive, symmetry
reduced, or seeded sampling).  The command line entry point is
``eggplane`` (see cli.py).
"""

from .catalog import (
    EGGS,
    SEMIFIELDS,
    classical9_egg,
    d9_semifield,
    egg_by_name,
    f9_semifield,
    kk9_egg,
    m1_egg,
    pw_egg,
    pw_semifield,
    semifield_by_name,
)
from .egg import (
    Egg,
    Flock,
    build_egg,
    elementary_egg,
    shear_matrix,
    verify_egg,
    verify_flock,
    verify_goodness,
    verify_shears,
)
from .field import GF, FieldElement, FieldError, FiniteField
from .linpoly import EggCoefficients, EggForms, LinearizedPoly
from .plane import (
    BruckBosePlane,
    CoordinatePlane,
    check_dictionary,
    dickson_dictionary,
    phi_bar_order_certificate,
    regular_dictionary,
    verify_bb_axioms,
    verify_plane_axioms,
)
from .polarity import (
    Duality,
    absolute_points_certificate,
    non_polarity_certificate,
    verify_duality,
)
from .report import Certificate, config_hash, substream
from .spread import (
    DicksonSemifield,
    Spread,
    SpreadSet,
    nuclei,
    nucleus_membership,
    spread_from_tau,
    verify_semifield,
    verify_spread,
    verify_spread_set,
    verify_tau_correspondence,
)
from .unital import (
    Unital,
    blocking_certificate,
    solvability_certificate,
    unital_model,
    verify_trace_match,
    verify_unital,
)

__version__ = "0.1.0"
