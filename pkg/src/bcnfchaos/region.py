"""Candidate invariant polygon built from the orbit of a seed on the x2-axis.

From X = (0, beta) the chain

    U, f^{-(ell-2)}(X), ..., f^{-1}(X), X, f(X), ..., f^{r-1}(X), Z

closes back from Z to U, where r and ell are the first forward/backward
indices at which the orbit crosses into the opposite half-plane,
Z = f^r(X), V = f^{-(ell-1)}(X), U is where the line through V and f(V)
meets the image of the switching line (the x1-axis: both branch matrices
send (0, s) to (s + 1, 0)), and Y is where the line through Z and
f^{-1}(Z) meets the switching line.  Three placement conditions on Y and Z
make the polygon forward invariant, and shrinking its vertices toward the
origin by geometrically decaying offsets produces a region that maps into
its own interior.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import BcnfParams, Point, WordSet, apply, apply_inverse, is_generated_by, itineraries
from .errors import (
    DegenerateChain,
    EpsilonTooLarge,
    FailureC1,
    InconsistentEscape,
    NotInvertible,
    SelfIntersecting,
)
from . import escape

#: Placement margins closer to a boundary than this reject certification.
MARGIN_TOL = 1e-12

#: Default band around the polygon boundary counted as inside.
BOUNDARY_TOL = 1e-10


@dataclass(frozen=True)
class InvariantPolygon:
    """The closed chain with its marked points.

    ``vertices`` is the chain in order (U first, Z last); U, V, Y, Z are the
    marked points, with V = f^{-(ell-1)}(X) lying outside the chain and Y on
    the closing side of the switching line.
    """

    beta: float
    r: int
    ell: int
    vertices: tuple[Point, ...]
    U: Point
    V: Point
    Y: Point
    Z: Point

    @property
    def X(self) -> Point:
        return (0.0, self.beta)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.vertices, dtype=float)


@dataclass(frozen=True)
class TrapPolygon:
    """Vertex-wise shrink of an invariant polygon toward the origin."""

    epsilon: float
    vertices: tuple[Point, ...]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.vertices, dtype=float)


def find_escape_indices(
    m: BcnfParams, beta: float, r_max: int = 15, ell_max: int = 15
) -> tuple[int, int]:
    """Smallest r with f^r(X)_1 <= 0 and smallest ell with f^{-ell}(X)_1 >= 0.

    Both indices are at least 2: the first image is (beta + 1, 0) and the
    first preimage has x1 = -beta / delta_L.  Raises FailureC1 when either
    cap is exhausted (stage C1).
    """
    if beta <= 0.0:
        raise ValueError("beta must be positive")
    if not m.is_invertible:
        raise NotInvertible("backward orbit requires delta_L * delta_R > 0")
    x = (0.0, float(beta))
    r = None
    pt = x
    for i in range(1, r_max + 1):
        pt = apply(m, pt)
        if pt[0] <= 0.0:
            r = i
            break
    if r is None:
        raise FailureC1(f"forward orbit stayed in x1 > 0 for {r_max} steps")
    ell = None
    pt = x
    for j in range(1, ell_max + 1):
        pt = apply_inverse(m, pt)
        if pt[0] >= 0.0:
            ell = j
            break
    if ell is None:
        raise FailureC1(f"backward orbit stayed in x1 < 0 for {ell_max} steps")
    return r, ell


def _intersect_sigma(z: Point, w: Point) -> Point:
    """Intersection of the line through z and w with the switching line."""
    t = z[0] / (z[0] - w[0])
    return (0.0, z[1] + t * (w[1] - z[1]))


def _intersect_axis(v: Point, fv: Point) -> Point:
    """Intersection of the line through v and fv with the x1-axis."""
    s = v[1] / (v[1] - fv[1])
    return (v[0] + s * (fv[0] - v[0]), 0.0)


def build_polygon(m: BcnfParams, beta: float, r: int, ell: int) -> InvariantPolygon:
    """Assemble the chain and marked points; validate it is a simple polygon.

    Raises DegenerateChain on coincident construction points and
    SelfIntersecting if the simplicity scan fails; under exact arithmetic
    neither can happen once stage C1 holds, so either signals a numerical
    inconsistency.
    """
    x = (0.0, float(beta))
    forward = [x]
    for _ in range(r):
        forward.append(apply(m, forward[-1]))
    backward = [x]
    for _ in range(ell):
        backward.append(apply_inverse(m, backward[-1]))

    z = forward[r]
    w = forward[r - 1]
    v = backward[ell - 1]
    fv = backward[ell - 2]

    if z == w:
        raise DegenerateChain("Z coincides with its preimage; seed orbit is periodic")
    if v == fv:
        raise DegenerateChain("V coincides with its image")

    y = _intersect_sigma(z, w)
    u = _intersect_axis(v, fv)

    vertices: list[Point] = [u]
    vertices.extend(backward[j] for j in range(ell - 2, 0, -1))
    vertices.append(x)
    vertices.extend(forward[1:r])
    vertices.append(z)

    for a, b in zip(vertices, vertices[1:] + vertices[:1]):
        if a == b:
            raise DegenerateChain(f"consecutive vertices coincide at {a}")
    _check_simple(vertices)

    return InvariantPolygon(
        beta=float(beta), r=r, ell=ell, vertices=tuple(vertices), U=u, V=v, Y=y, Z=z
    )


def _orientation(a: Point, b: Point, c: Point) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _segments_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool:
    d1 = _orientation(q1, q2, p1)
    d2 = _orientation(q1, q2, p2)
    d3 = _orientation(p1, p2, q1)
    d4 = _orientation(p1, p2, q2)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and (
        (d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)
    ):
        return True

    def on_segment(a: Point, b: Point, c: Point) -> bool:
        return (
            min(a[0], b[0]) <= c[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])
        )

    if d1 == 0 and on_segment(q1, q2, p1):
        return True
    if d2 == 0 and on_segment(q1, q2, p2):
        return True
    if d3 == 0 and on_segment(p1, p2, q1):
        return True
    if d4 == 0 and on_segment(p1, p2, q2):
        return True
    return False


def _check_simple(vertices: list[Point]) -> None:
    n = len(vertices)
    edges = [(vertices[i], vertices[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue
            if _segments_intersect(*edges[i], *edges[j]):
                raise SelfIntersecting(f"edges {i} and {j} intersect")


def condition_margins(m: BcnfParams, poly: InvariantPolygon) -> tuple[float, float, float]:
    """Signed margins of the three placement conditions (positive = satisfied).

    (1) Y above f^{-1}(U), both on the switching line; (2) Z above the line
    through f^{-1}(U) and V; (3) Z to the right of the directed line from V
    to f(V).  Margins 2 and 3 are distances (cross products normalised by
    segment length).
    """
    v1, v2 = poly.V
    z1, z2 = poly.Z
    # f(V) is the chain point after U: f^{-(ell-2)}(X), or X itself when ell = 2.
    g1, g2 = poly.vertices[1]
    pu2 = poly.U[0] - 1.0  # f^{-1}(U) = (0, U1 - 1) since U2 = 0
    m1 = poly.Y[1] - pu2
    m2 = ((0.0 - v1) * (z2 - v2) - (pu2 - v2) * (z1 - v1)) / math.hypot(0.0 - v1, pu2 - v2)
    m3 = ((g2 - v2) * (z1 - v1) - (g1 - v1) * (z2 - v2)) / math.hypot(g1 - v1, g2 - v2)
    return m1, m2, m3


def check_invariance_conditions(
    m: BcnfParams, poly: InvariantPolygon, margin_tol: float = MARGIN_TOL
) -> bool:
    """Stage C2: all three placement margins strictly exceed the band.

    Borderline geometry (any margin inside the band) rejects, so a True
    answer is robust to the rounding of the construction.
    """
    m1, m2, m3 = condition_margins(m, poly)
    return m1 > margin_tol and m2 > margin_tol and m3 > margin_tol


def compute_p_max(m: BcnfParams, poly: InvariantPolygon) -> int:
    """max(chi_L(Y), chi_L(Z)); finite whenever the placement conditions hold."""
    chi_y = escape.chi_L(m, poly.Y)
    chi_z = escape.chi_L(m, poly.Z)
    if chi_y is escape.INFINITE or chi_z is escape.INFINITE:
        raise InconsistentEscape("escape time of a marked point came back infinite")
    return max(chi_y, chi_z)


def shrink_to_trap(poly: InvariantPolygon, epsilon: float) -> TrapPolygon:
    """Move vertex j a distance epsilon**j toward the origin (j = 1 at U).

    The decaying offsets keep each shifted vertex strictly inside the image
    of the previous one, which is what makes the shrunk polygon map into its
    own interior.  Validation artifact: the certificate itself only relies
    on the unshrunk polygon's forward invariance.
    """
    if epsilon <= 0.0:
        raise ValueError("epsilon must be positive")
    shrunk: list[Point] = []
    for j, vert in enumerate(poly.vertices, start=1):
        norm = math.hypot(vert[0], vert[1])
        offset = epsilon**j
        if norm == 0.0 or 1.0 - offset / norm <= 0.0:
            raise EpsilonTooLarge(f"offset {offset} exceeds vertex norm {norm}")
        factor = 1.0 - offset / norm
        shrunk.append((factor * vert[0], factor * vert[1]))
    return TrapPolygon(epsilon=float(epsilon), vertices=tuple(shrunk))


def contains_many(vertices: np.ndarray, points: np.ndarray, tol: float = BOUNDARY_TOL) -> np.ndarray:
    """Vectorised point-in-polygon with an inclusive boundary band.

    Even-odd ray casting decides the interior; any point within ``tol`` of an
    edge counts as inside.  ``points`` has shape (n, 2).
    """
    verts = np.asarray(vertices, dtype=float)
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    ax = verts[:, 0]
    ay = verts[:, 1]
    bx = np.roll(ax, -1)
    by = np.roll(ay, -1)
    ex = bx - ax
    ey = by - ay

    px = pts[:, 0][:, None]
    py = pts[:, 1][:, None]

    # distance to each edge segment
    seg2 = ex * ex + ey * ey
    seg2 = np.where(seg2 == 0.0, 1.0, seg2)
    t = ((px - ax) * ex + (py - ay) * ey) / seg2
    t = np.clip(t, 0.0, 1.0)
    dx = px - (ax + t * ex)
    dy = py - (ay + t * ey)
    on_boundary = (dx * dx + dy * dy <= tol * tol).any(axis=1)

    # even-odd crossing count against a horizontal ray
    straddles = (ay > py) != (by > py)
    with np.errstate(divide="ignore", invalid="ignore"):
        x_cross = ax + (py - ay) * ex / ey
    hits = straddles & (px < x_cross)
    inside = hits.sum(axis=1) % 2 == 1
    return inside | on_boundary


def contains(poly, x: Point, tol: float = BOUNDARY_TOL) -> bool:
    """True iff x is inside the polygon or within ``tol`` of its boundary."""
    verts = poly.as_array() if hasattr(poly, "as_array") else np.asarray(poly, dtype=float)
    return bool(contains_many(verts, np.asarray([x], dtype=float), tol)[0])


def sample_points(
    poly,
    n: int,
    rng: np.random.Generator,
    positive_x1: bool = False,
    tol: float = 0.0,
    max_batches: int = 10_000,
) -> np.ndarray:
    """Uniform samples of the polygon interior by bounding-box rejection."""
    verts = poly.as_array() if hasattr(poly, "as_array") else np.asarray(poly, dtype=float)
    lo = verts.min(axis=0)
    hi = verts.max(axis=0)
    out = np.empty((n, 2), dtype=float)
    filled = 0
    for _ in range(max_batches):
        want = n - filled
        batch = rng.uniform(lo, hi, size=(max(4 * want, 128), 2))
        keep = contains_many(verts, batch, tol)
        if positive_x1:
            keep &= batch[:, 0] > 0.0
        found = batch[keep]
        take = min(len(found), want)
        out[filled:filled + take] = found[:take]
        filled += take
        if filled == n:
            return out
    raise RuntimeError("rejection sampling failed to fill the request")


def verify_recurrence_sampled(
    m: BcnfParams,
    poly: InvariantPolygon,
    ws: WordSet,
    samples: int = 1000,
    rng: np.random.Generator | None = None,
) -> bool:
    """Check sampled first returns to {x1 > 0} decompose over the word set.

    For each sampled point of the polygon with x1 > 0 the orbit is followed
    to its first return to x1 > 0 and every compatible word of that block is
    tested for exact decomposition.  Return times beyond l_max + 1 already
    falsify the property.
    """
    if rng is None:
        rng = np.random.default_rng()
    cap = ws.l_max + 1
    pts = sample_points(poly, samples, rng, positive_x1=True)
    for x0 in pts:
        x = (float(x0[0]), float(x0[1]))
        pt = x
        ret = None
        for k in range(1, cap + 1):
            pt = apply(m, pt)
            if pt[0] > 0.0:
                ret = k
                break
        if ret is None:
            return False
        for word in itineraries(m, x, ret):
            if not is_generated_by(word, ws):
                return False
    return True
