"""End-to-end certification of a chaotic attractor at one parameter point.

The pipeline scans seed heights beta on a fixed grid until the candidate
polygon exists (C1) and its placement conditions hold (C2); the first such
beta is kept and never revisited.  The escape times of the marked points Y
and Z bound the word lengths, the word matrices A_L^(j-1) A_R are checked
for admissibility (C3), their stable slopes span a cone whose invariance
(C4) and expansion (C5) are verified, and a positive certified lower bound
ln(c) / L_max on the Lyapunov exponent results.  A later-stage failure
reverts the flag to false without re-entering the beta loop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels, region
from .cones import (
    ConeInterval,
    ExpansionResult,
    SlopeFixedPoints,
    SlopeQuadruple,
    build_cone_interval,
    check_cone_expansion,
    check_cone_invariance,
    slope_fixed_points,
)
from .core import BcnfParams, WordSet, mat_mul
from .errors import FailureC3, InvalidRegime, NotExpanding
from .region import InvariantPolygon, MARGIN_TOL


@dataclass(frozen=True)
class SearchConfig:
    """Seed grid and orbit caps for the certification scan."""

    beta_min: float = 0.01
    beta_step: float = 0.01
    beta_max: float = 5.0
    r_max: int = 15
    ell_max: int = 15

    def __post_init__(self) -> None:
        if self.beta_min <= 0.0 or self.beta_step <= 0.0:
            raise ValueError("beta_min and beta_step must be positive")
        if self.beta_min > self.beta_max:
            raise ValueError("beta_min must not exceed beta_max")
        if self.r_max < 0 or self.ell_max < 0:
            raise ValueError("orbit caps must be nonnegative")


@dataclass(frozen=True)
class ChaosCertificate:
    """Full outcome of one certification run.

    ``chi_chaos`` is True exactly when ``fail_stage`` is None, in which case
    ``expansion_c`` exceeds 1 and ``lambda_bound`` is positive.  Fields that
    a failing stage never reached are None.
    """

    params: BcnfParams
    chi_chaos: bool
    beta: float | None = None
    r: int | None = None
    ell: int | None = None
    p_max: int | None = None
    word_set: WordSet | None = None
    polygon: InvariantPolygon | None = None
    cone: ConeInterval | None = None
    fixed_points: tuple[SlopeFixedPoints, ...] | None = None
    expansion: ExpansionResult | None = None
    expansion_c: float | None = None
    lambda_bound: float | None = None
    fail_stage: str | None = None
    fail_detail: str | None = None


def lambda_bound(c: float, L_max: int) -> float:
    """Certified Lyapunov lower bound ln(c) / L_max; requires c > 1."""
    if L_max < 1:
        raise ValueError("L_max must be >= 1")
    if c <= 1.0:
        raise NotExpanding(f"expansion factor {c} does not exceed 1")
    return math.log(c) / L_max


def word_matrices(m: BcnfParams, p_max: int) -> list[SlopeQuadruple]:
    """The products A_L^(j-1) A_R for j = 1..p_max+1, by repeated multiplication."""
    mats = []
    a_l = m.matrix("L")
    current = m.matrix("R")
    for j in range(1, p_max + 2):
        if j > 1:
            current = mat_mul(a_l, current)
        (a, b), (c, d) = current
        mats.append(SlopeQuadruple(a, b, c, d))
    return mats


def certify(m: BcnfParams, cfg: SearchConfig | None = None) -> ChaosCertificate:
    """Run the full five-stage pipeline at one parameter point.

    Requires the orientation-preserving regime delta_L, delta_R > 0.  The
    beta scan accepts the smallest grid value beta_min + k * beta_step
    passing C1 and C2; the cone stages can still revert the flag to false,
    in which case the accepted beta and the stage that failed are recorded.
    """
    if cfg is None:
        cfg = SearchConfig()
    if m.delta_L <= 0.0 or m.delta_R <= 0.0:
        raise InvalidRegime("certification requires delta_L > 0 and delta_R > 0")

    k, r, ell, n_c1 = kernels.scan_beta(
        m.tau_L, m.tau_R, m.delta_L, m.delta_R,
        cfg.beta_min, cfg.beta_step, cfg.beta_max,
        cfg.r_max, cfg.ell_max, MARGIN_TOL,
    )
    if k < 0:
        stage = "C2" if n_c1 > 0 else "C1"
        detail = (
            f"beta grid exhausted: {n_c1} candidates reached the placement check"
            if n_c1 > 0
            else "beta grid exhausted: no candidate produced both escape indices"
        )
        return ChaosCertificate(params=m, chi_chaos=False, fail_stage=stage, fail_detail=detail)

    beta = cfg.beta_min + k * cfg.beta_step
    poly = region.build_polygon(m, beta, r, ell)
    p_max = region.compute_p_max(m, poly)
    words = WordSet.canonical(p_max)
    base = dict(params=m, beta=beta, r=r, ell=ell, p_max=p_max, word_set=words, polygon=poly)

    quads = word_matrices(m, p_max)
    fps: list[SlopeFixedPoints] = []
    for j, quad in enumerate(quads, start=1):
        try:
            fps.append(slope_fixed_points(quad))
        except FailureC3 as exc:
            return ChaosCertificate(
                chi_chaos=False, fail_stage="C3",
                fail_detail=f"word matrix {j}: {exc}", **base,
            )

    cone = build_cone_interval(fps)
    base.update(cone=cone, fixed_points=tuple(fps))
    if not check_cone_invariance(cone, fps):
        culprits = [
            str(j) for j, fp in enumerate(fps, start=1)
            if cone.lo <= fp.m_unstab <= cone.hi
        ]
        return ChaosCertificate(
            chi_chaos=False, fail_stage="C4",
            fail_detail="unstable slope inside the cone interval for j in {"
            + ", ".join(culprits or ["boundary tie"]) + "}",
            **base,
        )

    result = check_cone_expansion(cone, quads)
    base.update(expansion=result)
    if not result.ok:
        failures = [
            f"H_{d.index}: {d.reason}" for d in result.per_matrix if not d.passed
        ]
        return ChaosCertificate(
            chi_chaos=False, fail_stage="C5", fail_detail="; ".join(failures), **base,
        )

    c = result.c
    bound = lambda_bound(c, words.l_max)
    base.update(cone=cone.with_expansion(c))
    return ChaosCertificate(
        chi_chaos=True, expansion_c=c, lambda_bound=bound, **base,
    )


@dataclass(frozen=True)
class ValidationReport:
    """Numerical cross-checks of a successful certificate.

    ``lyapunov_ok``: finite-time tangent estimates from sampled starts all
    reach the certified bound.  ``growth_ok``: at every completed word along
    those runs the accumulated stretch kept pace with c^j up to the slack.
    ``invariance_ok``: sampled polygon points map back into the polygon.
    ``recurrence_ok``: sampled first returns decompose over the word set.
    """

    lambda_bound: float
    lyapunov_ok: bool
    lyapunov_estimates: tuple[float, ...]
    growth_ok: bool
    growth_min_margin: float
    max_word_run: int
    invariance_ok: bool
    invariance_failures: int
    recurrence_ok: bool
    checks: tuple[str, ...] = field(default=("lyapunov", "growth", "invariance", "recurrence"))

    @property
    def all_ok(self) -> bool:
        return self.lyapunov_ok and self.growth_ok and self.invariance_ok and self.recurrence_ok


def cross_validate(
    cert: ChaosCertificate,
    m: BcnfParams,
    n_orbit: int = 100_000,
    n_samples: int = 10_000,
    n_starts: int = 10,
    recurrence_samples: int = 1000,
    growth_slack: float = 1e-9,
    estimate_tol: float = 1e-9,
    rng: np.random.Generator | None = None,
) -> ValidationReport:
    """Check a successful certificate against direct numerics.

    Tangent orbits start at sampled points of the polygon's x1 > 0 slice
    with direction (1, m) at the cone midpoint slope.  The growth check uses
    the certificate's own expansion factor, so an inflated c is caught.
    """
    if not cert.chi_chaos:
        raise ValueError("cross-validation applies to successful certificates only")
    if rng is None:
        rng = np.random.default_rng()

    poly = cert.polygon
    cone = cert.cone
    ln_c = math.log(cert.expansion_c)
    mid = 0.5 * (cone.lo + cone.hi)
    bound = cert.lambda_bound

    starts = region.sample_points(poly, n_starts, rng, positive_x1=True)
    estimates = []
    min_margin = math.inf
    max_run = 0
    for x0 in starts:
        total, _words, margin, run = kernels.tangent_word_stats(
            m.tau_L, m.tau_R, m.delta_L, m.delta_R,
            float(x0[0]), float(x0[1]), 1.0, mid,
            n_orbit, 32, 1e-12, ln_c,
        )
        estimates.append(total / n_orbit)
        min_margin = min(min_margin, margin)
        max_run = max(max_run, run)
    lyapunov_ok = all(est >= bound - estimate_tol for est in estimates)
    growth_ok = min_margin >= math.log1p(-growth_slack)

    pts = region.sample_points(poly, n_samples, rng)
    images = np.empty_like(pts)
    tau = np.where(pts[:, 0] <= 0.0, m.tau_L, m.tau_R)
    delta = np.where(pts[:, 0] <= 0.0, m.delta_L, m.delta_R)
    images[:, 0] = tau * pts[:, 0] + pts[:, 1] + 1.0
    images[:, 1] = -delta * pts[:, 0]
    inside = region.contains_many(poly.as_array(), images, tol=1e-9)
    invariance_failures = int((~inside).sum())

    recurrence_ok = region.verify_recurrence_sampled(
        m, poly, cert.word_set, samples=recurrence_samples, rng=rng
    )

    return ValidationReport(
        lambda_bound=bound,
        lyapunov_ok=lyapunov_ok,
        lyapunov_estimates=tuple(estimates),
        growth_ok=growth_ok,
        growth_min_margin=min_margin,
        max_word_run=max_run,
        invariance_ok=invariance_failures == 0,
        invariance_failures=invariance_failures,
        recurrence_ok=recurrence_ok,
    )
