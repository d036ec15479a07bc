"""orbitsym: recover a hidden finite group of isometries from generic orbits.

The library is organized bottom-up: numerics (tolerances, clustering,
rank), gramgraph (the pairwise inner-product invariant), pointsym
(symmetry enumeration and the union action), groupcore (multiplication
tables), reptheory (characters and orbit-count thresholds), reconstruct
(isometry fitting), simulate (forward direction), and cli/fileio/viz
(interfaces).
"""

from .errors import (
    AmbiguousLabels,
    ClosureFailure,
    DimensionMismatch,
    EmptyInput,
    FieldMismatch,
    GenericityFailure,
    HeterogeneousNorms,
    InconsistentTraces,
    InsufficientOrbits,
    InsufficientOrbitsWarning,
    NonGenericOrbit,
    NonGenericPair,
    NonIntegralMultiplicity,
    NotAGroup,
    NotFinite,
    NotIsometric,
    NumericalDegeneracy,
    OrbitsymError,
    RealFieldUnsupported,
    RegularDecompositionMismatch,
    ResidualTooLarge,
    TrivialGroup,
)
from .gramgraph import GramGraph, build_gram_graph, gram_invariants, graphs_isomorphic
from .groupcore import (
    MultiplicationTable,
    cayley_from_gram,
    group_invariants,
    identify_small_group,
    isomorphic,
    table_from_perm_group,
    validate_group,
)
from .numerics import (
    FieldTag,
    TolerancePolicy,
    cluster_scalars,
    inner_product,
    span_rank,
)
from .pointsym import (
    PermutationGroup,
    orbit_pairing,
    point_automorphisms,
    union_action,
)
from .reconstruct import (
    ConcreteGroup,
    RecoveryReport,
    extend_to_isometry,
    recover_concrete_group,
    verify_group,
)
from .reptheory import (
    CharacterTable,
    ThresholdReport,
    character_table,
    conjugacy_classes,
    irreps_over_field,
    min_nontrivial_dim,
    multiplicity,
    orbit_threshold,
    rep_character,
)
from .simulate import CATALOG, GroupSpec, build_group, sample_orbits

__version__ = "0.1.0"
