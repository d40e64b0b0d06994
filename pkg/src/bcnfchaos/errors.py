"""Exception types shared across the package."""


class BcnfChaosError(Exception):
    """Base class for all errors raised by this package."""


class DegenerateMap(BcnfChaosError):
    """The general two-piece map cannot be normalised (b = 0 or xi = 0)."""


class NotInvertible(BcnfChaosError):
    """Inverse requested for a map with det(A_L) * det(A_R) <= 0."""


class DegenerateTangent(BcnfChaosError):
    """A zero tangent vector was supplied where a direction is required."""


class ResonantAngle(BcnfChaosError):
    """Closed-form slope undefined: sin(p * phi) vanishes."""


class OutsideDomain(BcnfChaosError):
    """Point lies outside the left half-plane."""


class CapExceeded(BcnfChaosError):
    """Iteration cap reached without resolution; signals numerical inconsistency."""


class DegenerateChain(BcnfChaosError):
    """Polygon construction hit coincident points."""


class SelfIntersecting(BcnfChaosError):
    """Polygon chain failed the simplicity check."""


class EpsilonTooLarge(BcnfChaosError):
    """Shrink offset exceeds a vertex norm."""


class InconsistentEscape(BcnfChaosError):
    """Escape time came back infinite where the geometry guarantees it finite."""


class NotExpanding(BcnfChaosError):
    """Expansion factor c <= 1 supplied where c > 1 is required."""


class InvalidRegime(BcnfChaosError):
    """Certification requires the orientation-preserving regime (both determinants positive)."""


class FailureC1(BcnfChaosError):
    """Stage C1: the seed orbit never reached the opposite half-plane within its caps."""

    stage = "C1"


class FailureC2(BcnfChaosError):
    """Stage C2: a placement condition for the candidate polygon failed."""

    stage = "C2"


class FailureC3(BcnfChaosError):
    """Stage C3: a word matrix is inadmissible for the slope-map construction."""

    stage = "C3"
