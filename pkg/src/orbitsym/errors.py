"""Failure taxonomy for orbit-based group recovery.

Every way the pipeline can refuse an input gets its own class with a stable
name, so callers (and the CLI) can report machine-readable error names
instead of guessing from messages.  All of these indicate either genuinely
non-generic input or a numerical breakdown at the working tolerance; none
of them should occur for points sampled from a continuous distribution.
"""


class OrbitsymError(Exception):
    """Base class for recovery failures (non-generic input or numerics)."""

    @property
    def name(self) -> str:
        return type(self).__name__


class DimensionMismatch(OrbitsymError):
    """Operands live in different ambient dimensions."""


class FieldMismatch(OrbitsymError):
    """Real-tagged data mixed with genuinely complex data."""


class EmptyInput(OrbitsymError):
    """An operation that needs at least one value received none."""


class AmbiguousLabels(OrbitsymError):
    """Scalar clusters are not cleanly separated: the gap between label
    classes is too small relative to their internal spread, so the input
    sits numerically close to a non-generic configuration."""


class HeterogeneousNorms(OrbitsymError):
    """Diagonal Gram labels fall into several classes, so the point set
    cannot be a single orbit of an isometry group."""


class NonGenericPair(OrbitsymError):
    """Nearest-point pairing between two orbits is not a clean bijection
    (a distance tie, repeated norms, or a non-injective assignment)."""


class InsufficientOrbits(OrbitsymError):
    """A single real orbit cannot certify the group; supply a second orbit
    or pass allow_insufficient to accept a possibly larger symmetry group."""


class NotAGroup(OrbitsymError):
    """A recovered permutation set failed closure/identity/inverse checks,
    which signals tolerance breakdown rather than legitimate input."""


class RealFieldUnsupported(OrbitsymError):
    """Cayley-table reading off a Gram graph needs complex data; real Gram
    labels collapse inverse pairs."""


class NonGenericOrbit(OrbitsymError):
    """Orbit Gram structure is degenerate (duplicate points, repeated
    out-labels, or inconsistent products)."""


class NumericalDegeneracy(OrbitsymError):
    """Character extraction failed to separate eigenvectors within the
    retry budget, or produced non-integral invariants."""


class InconsistentTraces(OrbitsymError):
    """Matrix traces disagree across members of one conjugacy class."""


class NonIntegralMultiplicity(OrbitsymError):
    """A character inner product landed too far from an integer."""


class RegularDecompositionMismatch(OrbitsymError):
    """Field-irreducible bookkeeping does not add up to the group order."""


class TrivialGroup(OrbitsymError):
    """The group has no nontrivial irreducible representation."""


class NotIsometric(OrbitsymError):
    """Source and target point sets have different Gram structure, so no
    isometry can map one onto the other."""


class ResidualTooLarge(OrbitsymError):
    """A fitted map failed its residual or isometry check."""


class ClosureFailure(OrbitsymError):
    """Recovered matrices are not closed under products at tolerance."""


class GenericityFailure(OrbitsymError):
    """Orbit sampling kept producing non-generic configurations; this
    points at a configuration bug, not bad luck."""


class NotFinite(OrbitsymError):
    """Generator closure exceeded the element budget."""


class InsufficientOrbitsWarning(UserWarning):
    """Emitted when a single real orbit is accepted on request: the result
    may strictly contain the hidden group."""
