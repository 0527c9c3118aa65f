"""gepnerstab: exact stability data for graded matrix factorizations.

Modules:
    exactmath   cyclotomic field arithmetic, certified enclosures, phases
    polynomials weighted-homogeneous polynomials over the rationals
    mfcore      graded matrix factorizations and the supertrace charge
    classify    weight-system enumeration and target geometry
    geomcharge  eigen-row central charges on elliptic/K3 targets
    hearts      the five numerical heart lattices, phases, windows
    extcalc     graded Ext tables along the 2-periodic resolution
    gfield      small finite fields and subspace enumeration
    quiverrep   heart quivers, named objects, stability, HN filtrations
    cli         the command-line surface
"""

from .exactmath import CycloNum, RationalPhase, cyclo, embed, phase_of
from .mfcore import GradedFreeModule, GradedMF, WeightedType, koszul_c, shift, tau, zg
from .classify import enumerate_types, k3_constraint, normalize_gcd, table_rows
from .geomcharge import ChClass, MukaiVector, build_M, constants, mukai, solve_alpha, zg_geom, zg_k3
from .hearts import (
    CaseLattice,
    build_lattice,
    finite_phases,
    lattice_for,
    phase_table,
    slope_mu,
    verify_gepner,
    zg_class,
)
from .extcalc import ext_cc, ext_cm, split_w, yoneda_relations
from .quiverrep import (
    QuiverRep,
    StabilitySpec,
    all_subreps,
    heart_quiver,
    hn_filtration,
    is_stable,
    named_object,
    reduce_rep,
)

__version__ = "0.1.0"
