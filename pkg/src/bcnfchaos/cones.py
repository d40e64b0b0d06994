"""Invariant expanding cones for a family of 2x2 matrices.

A direction (1, m) is tracked through a matrix M = [[a, b], [c, d]] by two
scalar functions: the induced slope map

    G(m) = (c + d m) / (a + b m),

whose fixed points are the eigendirections, and the squared norm gain

    H(m) = |M (1, m)|^2 - |(1, m)|^2
         = (b^2 + d^2 - 1) m^2 + 2 (a b + c d) m + a^2 + c^2 - 1.

When M has two real eigenvalues of distinct modulus and b != 0, G has a
stable fixed point (derivative in (0, 1)) and an unstable one (reciprocal
derivative).  The interval J spanned by the stable slopes of a family
defines the cone {t (1, m) | m in J}; keeping every unstable slope outside
J makes the cone invariant, and H_j > 0 on J for every member makes it
expanding with a factor that can be minimised in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import FailureC3

#: Admissibility and ordering margins closer than this to zero reject.
CONE_TOL = 1e-12


@dataclass(frozen=True)
class SlopeQuadruple:
    """Entries of one 2x2 matrix in row-major order."""

    a: float
    b: float
    c: float
    d: float

    @classmethod
    def from_matrix(cls, mat) -> "SlopeQuadruple":
        (a, b), (c, d) = mat
        return cls(float(a), float(b), float(c), float(d))

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> float:
        return self.a + self.d

    def g(self, m: float) -> float | None:
        """Slope map value, or None at the blow-up slope."""
        denom = self.a + self.b * m
        if abs(denom) < 1e-300:
            return None
        return (self.c + self.d * m) / denom

    def h(self, m: float) -> float:
        """Squared norm gain of the direction (1, m)."""
        return (
            (self.b * self.b + self.d * self.d - 1.0) * m * m
            + 2.0 * (self.a * self.b + self.c * self.d) * m
            + self.a * self.a + self.c * self.c - 1.0
        )

    def gain(self, m: float) -> float:
        """Norm ratio |M (1, m)| / |(1, m)|."""
        num = (self.a + self.b * m) ** 2 + (self.c + self.d * m) ** 2
        return math.sqrt(num / (1.0 + m * m))


@dataclass(frozen=True)
class SlopeFixedPoints:
    """Fixed slopes of one matrix's slope map.

    ``eta`` is the slope-map derivative at the stable fixed point (the
    eigenvalue ratio); the derivative at the unstable one is 1/eta.  The
    unstable slope always separates the stable slope from the blow-up slope
    -a/b.
    """

    m_stab: float
    m_unstab: float
    eta: float
    m_blowup: float


@dataclass(frozen=True)
class ConeInterval:
    """Slope interval J = [lo, hi] spanning the stable slopes of a family."""

    lo: float
    hi: float
    expansion_c: float | None = None

    def with_expansion(self, c: float) -> "ConeInterval":
        return replace(self, expansion_c=c)


@dataclass(frozen=True)
class ExpansionDiagnostic:
    """Per-matrix outcome of the expansion test.

    For the quadratic kind ``roots`` is (increasing root, decreasing root),
    labelled by the sign of H' there; for the linear kind it holds the single
    root; constants have none.
    """

    index: int
    kind: str  # "quadratic" | "linear" | "constant"
    passed: bool
    reason: str | None
    roots: tuple[float, ...]
    c_j: float | None


@dataclass(frozen=True)
class ExpansionResult:
    ok: bool
    c: float | None
    per_matrix: tuple[ExpansionDiagnostic, ...]


def slope_fixed_points(M: SlopeQuadruple, tol: float = CONE_TOL) -> SlopeFixedPoints:
    """Both fixed slopes of the slope map, after the admissibility check.

    Stage C3: requires 0 < det(M) < trace(M)^2 / 4 and b != 0, with margins
    beyond the rejection band; raises FailureC3 otherwise.  The stable slope
    is (lambda_1 - a) / b for the dominant eigenvalue lambda_1.
    """
    det = M.det
    tr = M.trace
    if det <= tol:
        raise FailureC3(f"det = {det} not positive")
    if tr * tr / 4.0 - det <= tol:
        raise FailureC3("eigenvalues not real and distinct (trace^2/4 - det too small)")
    if abs(M.b) <= tol:
        raise FailureC3("upper-right entry vanishes; slope map degenerate")
    disc = math.sqrt(tr * tr - 4.0 * det)
    lam1 = (tr + disc) / 2.0 if tr > 0.0 else (tr - disc) / 2.0
    lam2 = det / lam1
    return SlopeFixedPoints(
        m_stab=(lam1 - M.a) / M.b,
        m_unstab=(lam2 - M.a) / M.b,
        eta=lam2 / lam1,
        m_blowup=-M.a / M.b,
    )


def build_cone_interval(fps: list[SlopeFixedPoints] | tuple[SlopeFixedPoints, ...]) -> ConeInterval:
    """Smallest interval containing every stable slope."""
    if not fps:
        raise ValueError("need at least one fixed-point record")
    stabs = [fp.m_stab for fp in fps]
    return ConeInterval(lo=min(stabs), hi=max(stabs))


def check_cone_invariance(
    J: ConeInterval, fps: list[SlopeFixedPoints] | tuple[SlopeFixedPoints, ...],
    tol: float = CONE_TOL,
) -> bool:
    """Stage C4: every unstable slope lies strictly outside J.

    An unstable slope within ``tol`` of an endpoint counts as inside and
    rejects; endpoint ties are not provably invariant.
    """
    for fp in fps:
        if J.lo - tol <= fp.m_unstab <= J.hi + tol:
            return False
    return True


def _min_gain(M: SlopeQuadruple, lo: float, hi: float) -> float:
    """Exact minimum of the norm ratio over the slope interval.

    The squared ratio is a rational function of m whose derivative has a
    quadratic numerator; its real roots inside the interval plus the two
    endpoints are the only candidates.
    """
    k1 = M.a * M.b + M.c * M.d
    k2 = M.b * M.b + M.d * M.d - M.a * M.a - M.c * M.c
    cands = [lo, hi]
    if k1 != 0.0:
        disc = k2 * k2 + 4.0 * k1 * k1
        root = math.sqrt(disc)
        for mm in ((k2 + root) / (2.0 * k1), (k2 - root) / (2.0 * k1)):
            if lo < mm < hi:
                cands.append(mm)
    elif k2 != 0.0 and lo < 0.0 < hi:
        cands.append(0.0)
    best = min(
        ((M.a + M.b * m) ** 2 + (M.c + M.d * m) ** 2) / (1.0 + m * m) for m in cands
    )
    return math.sqrt(best)


def check_cone_expansion(
    J: ConeInterval,
    Ms: list[SlopeQuadruple] | tuple[SlopeQuadruple, ...],
    tol: float = CONE_TOL,
) -> ExpansionResult:
    """Stage C5: every H_j positive on J, with the expansion factor on success.

    A genuinely quadratic H_j must have two distinct real roots and satisfy
    two of the three orderings (J left of the decreasing root, roots
    inverted, J right of the increasing root); near-vanishing leading
    coefficient routes to the single-root test, and a constant H_j passes
    only if positive.  The returned c is the least norm gain over J across
    the family and exceeds 1 whenever the test passes.
    """
    diagnostics: list[ExpansionDiagnostic] = []
    ok = True
    for j, M in enumerate(Ms, start=1):
        lead = M.b * M.b + M.d * M.d - 1.0
        lin = 2.0 * (M.a * M.b + M.c * M.d)
        const = M.a * M.a + M.c * M.c - 1.0
        if abs(lead) < tol:
            if abs(lin) < tol:
                passed = bool(const > tol)
                diagnostics.append(
                    ExpansionDiagnostic(j, "constant", passed,
                                        None if passed else "LinearRootFailed", (), None)
                )
            else:
                m_root = -const / lin
                passed = bool((m_root - J.hi > tol) if lin < 0.0 else (J.lo - m_root > tol))
                diagnostics.append(
                    ExpansionDiagnostic(j, "linear", passed,
                                        None if passed else "LinearRootFailed", (m_root,), None)
                )
        else:
            disc = lin * lin - 4.0 * lead * const
            if disc <= tol:
                diagnostics.append(
                    ExpansionDiagnostic(j, "quadratic", False, "NoRealRoots", (), None)
                )
                ok = False
                continue
            root = math.sqrt(disc)
            r1 = (-lin + root) / (2.0 * lead)
            r2 = (-lin - root) / (2.0 * lead)
            # H is increasing at a root iff H' > 0 there
            if 2.0 * lead * r1 + lin > 0.0:
                m_incr, m_decr = r1, r2
            else:
                m_incr, m_decr = r2, r1
            # int casts: numpy bools add as logical-or, which would break the
            # two-of-three count when interval endpoints arrive as np.float64
            holds = (
                int(m_decr - J.hi > tol)
                + int(m_incr - m_decr > tol)
                + int(J.lo - m_incr > tol)
            )
            passed = holds >= 2
            diagnostics.append(
                ExpansionDiagnostic(j, "quadratic", passed,
                                    None if passed else "OrderingFailed",
                                    (m_incr, m_decr), None)
            )
        if not diagnostics[-1].passed:
            ok = False

    if not ok:
        return ExpansionResult(ok=False, c=None, per_matrix=tuple(diagnostics))

    finished = []
    c = math.inf
    for diag, M in zip(diagnostics, Ms):
        c_j = _min_gain(M, J.lo, J.hi)
        finished.append(replace(diag, c_j=c_j))
        c = min(c, c_j)
    return ExpansionResult(ok=True, c=c, per_matrix=tuple(finished))
