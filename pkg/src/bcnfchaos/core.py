"""Two-piece piecewise-linear planar maps and their tangent dynamics.

The central object is the four-parameter normal form

    f(x) = A_L x + b   for x1 <= 0,
    f(x) = A_R x + b   for x1 >= 0,

with A_S = [[tau_S, 1], [-delta_S, 0]] and b = (1, 0).  The two pieces agree
on the switching line Sigma = {x1 = 0}, so f is continuous, and the pieces
differ only in the first matrix column.  This module provides the map, its
inverse, the reduction of a general two-piece affine map to this form, the
tangent-bundle step driven by one-sided directional derivatives, symbolic
itineraries, word-indexed matrix products, and finite-time Lyapunov
estimates.

Everything here is a pure function of immutable values; no shared state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DegenerateMap, DegenerateTangent, NotInvertible

Point = tuple[float, float]
Mat2 = tuple[tuple[float, float], tuple[float, float]]

#: Half-width of the band around x1 = 0 treated as lying on the switching line.
SIGMA_TOL = 1e-12


@dataclass(frozen=True)
class BcnfParams:
    """Normal-form parameters (tau_L, tau_R, delta_L, delta_R).

    delta_S is the determinant of the matrix acting on the side S; the
    orientation-preserving regime used for certification has both positive.
    The constructor accepts any real values so that degenerate regimes can
    still be iterated; certification entry points validate the regime.
    """

    tau_L: float
    tau_R: float
    delta_L: float
    delta_R: float

    def matrix(self, symbol: str) -> Mat2:
        """Branch matrix for symbol 'L' or 'R' as a nested tuple."""
        if symbol == "L":
            return ((self.tau_L, 1.0), (-self.delta_L, 0.0))
        if symbol == "R":
            return ((self.tau_R, 1.0), (-self.delta_R, 0.0))
        raise ValueError(f"unknown symbol {symbol!r}")

    @property
    def A_L(self) -> np.ndarray:
        return np.array(self.matrix("L"))

    @property
    def A_R(self) -> np.ndarray:
        return np.array(self.matrix("R"))

    @property
    def b(self) -> np.ndarray:
        return np.array([1.0, 0.0])

    @property
    def zeta(self) -> np.ndarray:
        """First-column difference: A_R - A_L = zeta e1^T."""
        return np.array([self.tau_R - self.tau_L, self.delta_L - self.delta_R])

    @property
    def is_orientation_preserving(self) -> bool:
        return self.delta_L > 0.0 and self.delta_R > 0.0

    @property
    def is_invertible(self) -> bool:
        return self.delta_L * self.delta_R > 0.0


@dataclass(frozen=True)
class GeneralPwlMap:
    """A continuous planar map, affine on each side of x1 = 0.

    The eight coefficients are the entries of the two matrices
    [[a_S, b], [c_S, d]] (S in {L, R}) and the shared translation (p, q).
    Sharing b, d, p, q across the pieces is exactly the continuity
    constraint on the switching line.
    """

    a_L: float
    a_R: float
    b: float
    c_L: float
    c_R: float
    d: float
    p: float
    q: float

    @property
    def xi(self) -> float:
        """Normalisability discriminant (1 - d) p + b q."""
        return (1.0 - self.d) * self.p + self.b * self.q

    def apply(self, x: Point) -> Point:
        a = self.a_L if x[0] <= 0.0 else self.a_R
        c = self.c_L if x[0] <= 0.0 else self.c_R
        return (a * x[0] + self.b * x[1] + self.p,
                c * x[0] + self.d * x[1] + self.q)


@dataclass(frozen=True)
class CoordinateChange:
    """Affine change of variables x -> M x + t."""

    matrix: Mat2
    offset: Point

    def __call__(self, x: Point) -> Point:
        (m00, m01), (m10, m11) = self.matrix
        return (m00 * x[0] + m01 * x[1] + self.offset[0],
                m10 * x[0] + m11 * x[1] + self.offset[1])


@dataclass(frozen=True)
class TangentState:
    """A point of the tangent bundle: base point x and direction v."""

    x: Point
    v: Point


@dataclass(frozen=True)
class WordSet:
    """A finite, nonempty collection of words over {L, R}.

    The canonical family used for certification is {R L^p | 0 <= p <= p_max}.
    """

    words: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.words:
            raise ValueError("word set must be nonempty")
        for w in self.words:
            _validate_word(w)

    @classmethod
    def canonical(cls, p_max: int) -> "WordSet":
        """The family {R L^p | 0 <= p <= p_max}."""
        if p_max < 0:
            raise ValueError("p_max must be >= 0")
        return cls(tuple("R" + "L" * p for p in range(p_max + 1)))

    @property
    def l_max(self) -> int:
        """Length of the longest word."""
        return max(len(w) for w in self.words)

    def __iter__(self):
        return iter(self.words)

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self.words


def _validate_word(word: str) -> None:
    if not word:
        raise ValueError("words must be nonempty")
    if set(word) - {"L", "R"}:
        raise ValueError(f"word {word!r} contains symbols outside {{L, R}}")


def normalize_to_bcnf(g: GeneralPwlMap) -> tuple[BcnfParams, CoordinateChange]:
    """Reduce a general two-piece affine map to the normal form.

    Requires b != 0 (the image of the switching line crosses it exactly once)
    and xi != 0 (that crossing is not a fixed point).  Returns the parameters
    together with the affine change of variables h satisfying
    h(g(x)) = f(h(x)) pointwise.  When xi < 0 the change of variables flips
    the half-planes, so the roles of the two pieces swap.
    """
    if g.b == 0.0:
        raise DegenerateMap("b = 0: image of the switching line does not cross it transversally")
    xi = g.xi
    if xi == 0.0:
        raise DegenerateMap("xi = 0: the crossing point is a fixed point")
    change = CoordinateChange(
        matrix=((1.0 / xi, 0.0), (-g.d / xi, g.b / xi)),
        offset=(0.0, (g.d * g.p - g.b * g.q) / xi),
    )
    if xi > 0.0:
        params = BcnfParams(
            tau_L=g.a_L + g.d,
            tau_R=g.a_R + g.d,
            delta_L=g.a_L * g.d - g.b * g.c_L,
            delta_R=g.a_R * g.d - g.b * g.c_R,
        )
    else:
        params = BcnfParams(
            tau_L=g.a_R + g.d,
            tau_R=g.a_L + g.d,
            delta_L=g.a_R * g.d - g.b * g.c_R,
            delta_R=g.a_L * g.d - g.b * g.c_L,
        )
    return params, change


def apply(m: BcnfParams, x: Point) -> Point:
    """One step of the map.  The two branches agree when x1 = 0."""
    x1, x2 = float(x[0]), float(x[1])
    if x1 <= 0.0:
        return (m.tau_L * x1 + x2 + 1.0, -m.delta_L * x1)
    return (m.tau_R * x1 + x2 + 1.0, -m.delta_R * x1)


def apply_inverse(m: BcnfParams, y: Point) -> Point:
    """The unique preimage of y; requires delta_L * delta_R > 0.

    Each piece is inverted and the candidate whose first coordinate matches
    the sign of its piece is selected.  Since f(x)_2 = -delta * x1, the sign
    of y2 identifies the piece directly, and both inverses coincide on the
    image of the switching line (y2 = 0).
    """
    if not m.is_invertible:
        raise NotInvertible("delta_L * delta_R <= 0")
    y1, y2 = float(y[0]), float(y[1])
    if y2 > 0.0:
        return (-y2 / m.delta_L, (y1 - 1.0) + m.tau_L * y2 / m.delta_L)
    if y2 < 0.0:
        return (-y2 / m.delta_R, (y1 - 1.0) + m.tau_R * y2 / m.delta_R)
    return (0.0, y1 - 1.0)


def gamma(s: TangentState, tol_sigma: float = SIGMA_TOL) -> str:
    """Active symbol for a tangent-bundle point.

    Off the switching line the base point decides; on it the direction
    decides, with v1 >= 0 mapped to 'R'.  That tie-break is immaterial
    because both branch matrices act identically on vectors with v1 = 0.
    """
    x1 = s.x[0]
    if x1 < -tol_sigma:
        return "L"
    if x1 > tol_sigma:
        return "R"
    return "L" if s.v[0] < 0.0 else "R"


def gamma_set(x: Point, tol_sigma: float = SIGMA_TOL) -> frozenset[str]:
    """Set of symbols compatible with a base point: both on the switching line."""
    if x[0] < -tol_sigma:
        return frozenset("L")
    if x[0] > tol_sigma:
        return frozenset("R")
    return frozenset("LR")


def tangent_step(m: BcnfParams, s: TangentState, tol_sigma: float = SIGMA_TOL) -> TangentState:
    """One step of the tangent-bundle map (f(x), D+_v f(x)).

    The direction is multiplied by the branch matrix selected by
    :func:`gamma`; n-fold iteration realises the one-sided directional
    derivative of f^n.
    """
    sym = gamma(s, tol_sigma)
    (a00, a01), (a10, a11) = m.matrix(sym)
    v1, v2 = s.v
    return TangentState(apply(m, s.x), (a00 * v1 + a01 * v2, a10 * v1 + a11 * v2))


def itineraries(m: BcnfParams, x: Point, n: int, tol_sigma: float = SIGMA_TOL) -> frozenset[str]:
    """All length-n words compatible with the forward orbit of x.

    Each iterate landing on the switching line contributes both symbols, so
    the result has cardinality 2**(number of such iterates).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    choices = []
    pt = (float(x[0]), float(x[1]))
    for _ in range(n):
        choices.append(sorted(gamma_set(pt, tol_sigma)))
        pt = apply(m, pt)
    words = [""]
    for opts in choices:
        words = [w + s for w in words for s in opts]
    return frozenset(words)


def mat_mul(a: Mat2, b: Mat2) -> Mat2:
    """Product of two 2x2 tuple matrices."""
    (a00, a01), (a10, a11) = a
    (b00, b01), (b10, b11) = b
    return (
        (a00 * b00 + a01 * b10, a00 * b01 + a01 * b11),
        (a10 * b00 + a11 * b10, a10 * b01 + a11 * b11),
    )


def word_product(m: BcnfParams, word: str) -> Mat2:
    """Matrix product along a word with the first symbol applied first.

    The first symbol's matrix is the rightmost factor, so the product acts
    on a tangent vector exactly as n tangent steps along a matching orbit.
    """
    _validate_word(word)
    out = m.matrix(word[0])
    for sym in word[1:]:
        out = mat_mul(m.matrix(sym), out)
    return out


def phi(m: BcnfParams, w: str) -> np.ndarray:
    """Array view of :func:`word_product`."""
    return np.array(word_product(m, w))


def is_generated_by(w: str, ws) -> bool:
    """True iff w is an exact concatenation of members of ws.

    Full decomposition search (dynamic program over prefixes); greedy
    longest-match would be wrong because canonical families are not
    prefix codes.
    """
    _validate_word(w)
    pieces = tuple(ws)
    n = len(w)
    reachable = [False] * (n + 1)
    reachable[0] = True
    for i in range(1, n + 1):
        for piece in pieces:
            k = len(piece)
            if k <= i and reachable[i - k] and w[i - k:i] == piece:
                reachable[i] = True
                break
    return reachable[n]


def lyapunov_estimate(
    m: BcnfParams,
    s: TangentState,
    n: int,
    renorm_every: int = 32,
    tol_sigma: float = SIGMA_TOL,
) -> float:
    """Finite-time stretching rate (1/n) ln(|v_n| / |v_0|) along the tangent orbit.

    The direction is renormalised every ``renorm_every`` steps; the
    accumulated logarithms are unchanged by the rescaling, so long runs do
    not overflow.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    v1, v2 = float(s.v[0]), float(s.v[1])
    if v1 == 0.0 and v2 == 0.0:
        raise DegenerateTangent("zero direction has no stretching rate")
    total = kernels.tangent_stretch(
        m.tau_L, m.tau_R, m.delta_L, m.delta_R,
        float(s.x[0]), float(s.x[1]), v1, v2,
        n, renorm_every, tol_sigma,
    )
    return total / n


def orbit(m: BcnfParams, x: Point, n: int) -> list[Point]:
    """The iterates f(x), ..., f^n(x)."""
    out = []
    pt = (float(x[0]), float(x[1]))
    for _ in range(n):
        pt = apply(m, pt)
        out.append(pt)
    return out


def backward_orbit(m: BcnfParams, x: Point, n: int) -> list[Point]:
    """The preimages f^{-1}(x), ..., f^{-n}(x)."""
    out = []
    pt = (float(x[0]), float(x[1]))
    for _ in range(n):
        pt = apply_inverse(m, pt)
        out.append(pt)
    return out
