"""Exact integral lattices for hyperkähler periods: discriminant forms,
overlattice gluing, and primitive isotropic vectors up to isometry."""

from .catalog import CatalogEntry, catalog, catalog_names, is_parabolic
from .discriminant import (
    FiniteQuadraticForm,
    IsotropicSubgroup,
    NikulinReport,
    StableVerdict,
    disc_bilinear,
    disc_form_isomorphic,
    disc_quadratic,
    discriminant_group,
    isotropic_subgroups,
    overlattice_from_isotropic,
    stably_equivalent_check,
    verify_nikulin,
)
from .errors import LatticeError
from .fujiki import FujikiData, bbf_via_kahler, fujiki_from_lattice, fujiki_recover_q
from .lattice import (
    Lattice,
    Signature,
    Sublattice,
    b_eval,
    direct_sum,
    discriminant,
    embedding_index,
    is_primitive,
    make_lattice,
    orthogonal_complement,
    primitive_part,
    q_eval,
    saturate,
    signature,
)
from .parabolic import (
    OrbitReport,
    complement_pair,
    divisor,
    enumerate_primitive_isotropic,
    isotropic_plane,
    lemma_alpha_divides,
    minimal_partner,
    orbit_census,
    orbit_invariant,
    orthogonal_group_bruteforce,
    reflection_generators,
)
from .periods import (
    PeriodLine,
    density_hypothesis_check,
    period_eta_slice,
    period_membership,
    positive_cone_component,
)

__version__ = "0.1.0"
