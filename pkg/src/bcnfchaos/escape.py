"""Escape-time partition of the left half-plane.

The preimages of the switching line under the left half-map are lines
x2 = m_p x1 + c_p whose slopes and intercepts obey

    m_1 = -tau_L,  c_1 = -1,
    m_{p+1} = -delta_L / m_p - tau_L,
    c_{p+1} = -c_p / m_p - 1.

While the slopes stay negative the lines stack strictly downward, and the
bands between consecutive lines are exactly the sets of points needing a
fixed number of left-map steps to reach x1 > 0.  The escape horizon p_star
is the first index with m_p >= 0; when tau_L >= 2 sqrt(delta_L) it never
occurs and a forward-invariant core below the limiting line never escapes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Union

from . import kernels
from .core import BcnfParams, Point
from .errors import CapExceeded, OutsideDomain, ResonantAngle

#: Residuals within this band of a partition line are snapped to zero before
#: the strict/closed comparisons are applied.
SNAP_TOL = 1e-12

_CLASSIFY_CAP = 100_000


class _Infinite:
    """Explicit marker for an infinite escape horizon or escape time."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFINITE"


class _CoreE:
    """Marker for the never-escaping core of the left half-plane."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "CORE_E"


INFINITE = _Infinite()
CORE_E = _CoreE()

Horizon = Union[int, _Infinite]


class LadderEntry(NamedTuple):
    p: int
    m: float
    c: float


@dataclass(frozen=True)
class PreimageLadder:
    """Slopes and intercepts of the switching-line preimages, plus the horizon.

    ``entries`` holds (p, m_p, c_p) up to min(p_star, max stored).  When the
    horizon is infinite, ``m_inf`` is the limiting slope; ``c_inf`` is the
    limiting intercept and is set only when the intercepts converge
    (tau_L > 1 + delta_L), in which case the line x2 = m_inf x1 + c_inf
    bounds the never-escaping core from above.  ``phi_angle`` is the
    rotation angle of the left matrix, defined only in the complex-eigenvalue
    regime 0 < tau_L < 2 sqrt(delta_L).
    """

    tau_L: float
    delta_L: float
    entries: tuple[LadderEntry, ...]
    p_star: Horizon
    phi_angle: float | None = None
    m_inf: float | None = None
    c_inf: float | None = None


def p_star_closed_form(tau_L: float, delta_L: float) -> Horizon:
    """Escape horizon without iterating the recurrence.

    1 when tau_L <= 0; ceil(pi/phi - 1) with phi = arccos(tau_L / (2 sqrt(delta_L)))
    in the rotation regime; infinite once tau_L >= 2 sqrt(delta_L).
    """
    if delta_L <= 0.0:
        raise ValueError("closed form requires delta_L > 0")
    if tau_L <= 0.0:
        return 1
    crit = 2.0 * math.sqrt(delta_L)
    if tau_L >= crit:
        return INFINITE
    phi = math.acos(tau_L / crit)
    return math.ceil(math.pi / phi - 1.0)


def m_p_explicit(p: int, tau_L: float, delta_L: float) -> float:
    """Closed-form slope -sin((p+1) phi) / sin(p phi) * sqrt(delta_L).

    Only valid in the rotation regime 0 < tau_L < 2 sqrt(delta_L).
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    crit = 2.0 * math.sqrt(delta_L)
    if not (0.0 < tau_L < crit):
        raise ValueError("explicit slope requires 0 < tau_L < 2 sqrt(delta_L)")
    phi = math.acos(tau_L / crit)
    s = math.sin(p * phi)
    if abs(s) < 1e-14:
        raise ResonantAngle(f"sin({p} phi) vanishes")
    return -math.sin((p + 1) * phi) / s * math.sqrt(delta_L)


def build_ladder(m: BcnfParams, max_entries: int = 64) -> PreimageLadder:
    """Iterate the slope/intercept recurrences until the horizon is reached.

    At most ``max_entries`` entries are stored; a finite horizon beyond that
    is taken from the closed form (only the leading entries are ever consumed
    downstream).  An infinite horizon is a value, not an error.
    """
    tau_L, delta_L = m.tau_L, m.delta_L
    if delta_L == 0.0:
        raise ValueError("preimage lines require delta_L != 0")

    phi_angle = None
    if delta_L > 0.0 and 0.0 < tau_L < 2.0 * math.sqrt(delta_L):
        phi_angle = math.acos(tau_L / (2.0 * math.sqrt(delta_L)))

    entries = []
    mp, cp = -tau_L, -1.0
    p = 1
    p_star: Horizon | None = None
    while True:
        entries.append(LadderEntry(p, mp, cp))
        if mp >= 0.0:
            p_star = p
            break
        if p >= max_entries:
            break
        mp, cp = -delta_L / mp - tau_L, -cp / mp - 1.0
        p += 1

    if p_star is None:
        # beyond the stored entries: defer to the closed form
        if delta_L > 0.0:
            p_star = p_star_closed_form(tau_L, delta_L)
        else:
            p_star = INFINITE

    m_inf = c_inf = None
    if p_star is INFINITE:
        disc = tau_L * tau_L - 4.0 * delta_L
        root = math.sqrt(disc) if disc > 0.0 else 0.0
        m_inf = 0.5 * (-tau_L - root)
        # The intercepts converge to the fixed point of their recurrence only
        # when |m_inf| > 1 (the left matrix has an eigenvalue above 1, i.e.
        # tau_L > 1 + delta_L).  For 2 sqrt(delta_L) <= tau_L <= 1 + delta_L
        # they fall to -inf: the lines sweep out the whole half-plane and the
        # never-escaping core is empty, so no limiting line is recorded.
        if m_inf < -1.0:
            c_inf = -m_inf / (m_inf + 1.0)

    return PreimageLadder(
        tau_L=tau_L,
        delta_L=delta_L,
        entries=tuple(entries),
        p_star=p_star,
        phi_angle=phi_angle,
        m_inf=m_inf,
        c_inf=c_inf,
    )


def _iter_lines(ladder: PreimageLadder) -> Iterator[LadderEntry]:
    """Stored entries, then the recurrence continued past the stored tail."""
    yield from ladder.entries
    _, mp, cp = ladder.entries[-1]
    p = ladder.entries[-1].p
    while True:
        mp, cp = -ladder.delta_L / mp - ladder.tau_L, -cp / mp - 1.0
        p += 1
        yield LadderEntry(p, mp, cp)


def _snapped_residual(x: Point, slope: float, intercept: float) -> float:
    s = x[1] - (slope * x[0] + intercept)
    return 0.0 if abs(s) <= SNAP_TOL else s


def classify_region(ladder: PreimageLadder, x: Point):
    """Index of the escape band containing x, or CORE_E below the limit line.

    Bands are open below and closed above, matching the strict/closed
    inequality pattern of the partition; residuals inside the snap band
    count as lying on the line.
    """
    if x[0] > 0.0:
        raise OutsideDomain(f"x1 = {x[0]} > 0")

    if ladder.p_star is INFINITE and ladder.c_inf is not None:
        s_inf = _snapped_residual(x, ladder.m_inf, ladder.c_inf)
        if s_inf <= 0.0:
            return CORE_E

    p_star = ladder.p_star
    for entry in _iter_lines(ladder):
        if _snapped_residual(x, entry.m, entry.c) > 0.0:
            return entry.p
        if p_star is not INFINITE and entry.p >= p_star:
            return p_star + 1
        if entry.p > _CLASSIFY_CAP:
            raise CapExceeded("classification did not resolve below the line cap")


def chi_L(m: BcnfParams, x: Point, cap: int = _CLASSIFY_CAP) -> Horizon:
    """Escape time of x under the left half-map, by direct iteration.

    Grazing the switching line (first coordinate exactly zero) counts as not
    yet escaped.  Returns INFINITE for points of the never-escaping core;
    exceeding the cap with a finite horizon signals numerical inconsistency.
    """
    if x[0] > 0.0:
        raise OutsideDomain(f"x1 = {x[0]} > 0")
    if m.delta_L > 0.0:
        p_star = p_star_closed_form(m.tau_L, m.delta_L)
        if p_star is INFINITE:
            disc = m.tau_L * m.tau_L - 4.0 * m.delta_L
            m_inf = 0.5 * (-m.tau_L - (math.sqrt(disc) if disc > 0.0 else 0.0))
            if m_inf < -1.0:
                c_inf = -m_inf / (m_inf + 1.0)
                if _snapped_residual(x, m_inf, c_inf) <= 0.0:
                    return INFINITE
    steps = kernels.escape_steps(m.tau_L, m.delta_L, float(x[0]), float(x[1]), cap)
    if steps < 0:
        raise CapExceeded(f"no escape within {cap} iterations")
    return steps
