"""Pure-Python hot loops.

Reference implementation of the numerical kernels; `_kernels_cy.pyx` is a
line-for-line translation.  Expressions are kept in the same order in both
so the backends produce identical doubles.
"""

from __future__ import annotations

import math


def scan_beta(
    tau_L: float, tau_R: float, delta_L: float, delta_R: float,
    beta_min: float, beta_step: float, beta_max: float,
    r_max: int, ell_max: int, margin_tol: float,
) -> tuple[int, int, int, int]:
    """Scan the seed grid for the first beta passing stages C1 and C2.

    For each beta = beta_min + k * beta_step the seed X = (0, beta) is
    iterated forward until its first coordinate drops to <= 0 (index r) and
    backward until it rises to >= 0 (index ell); if both exist within their
    caps, the three placement margins for the candidate polygon are checked.
    Returns (k, r, ell, n_c1) with k = -1 if the grid is exhausted; n_c1
    counts grid values that passed C1.
    """
    n_c1 = 0
    k = 0
    while True:
        beta = beta_min + k * beta_step
        if beta > beta_max:
            return (-1, 0, 0, n_c1)

        # forward orbit: find r, keep Z = f^r(X) and W = f^{r-1}(X)
        r = -1
        z1 = 0.0
        z2 = 0.0
        w1 = 0.0
        w2 = 0.0
        c1 = 0.0
        c2 = beta
        for i in range(1, r_max + 1):
            if c1 <= 0.0:
                n1 = tau_L * c1 + c2 + 1.0
                n2 = -delta_L * c1
            else:
                n1 = tau_R * c1 + c2 + 1.0
                n2 = -delta_R * c1
            if n1 <= 0.0:
                r = i
                z1 = n1
                z2 = n2
                w1 = c1
                w2 = c2
                break
            c1 = n1
            c2 = n2

        # backward orbit: find ell, keep V = f^{-(ell-1)}(X), fV = f^{-(ell-2)}(X)
        ell = -1
        v1 = 0.0
        v2 = 0.0
        g1 = 0.0
        g2 = 0.0
        b1 = 0.0
        b2 = beta
        p1 = 0.0
        p2 = beta
        for j in range(1, ell_max + 1):
            if b2 > 0.0:
                n1 = -b2 / delta_L
                n2 = (b1 - 1.0) + tau_L * b2 / delta_L
            elif b2 < 0.0:
                n1 = -b2 / delta_R
                n2 = (b1 - 1.0) + tau_R * b2 / delta_R
            else:
                n1 = 0.0
                n2 = b1 - 1.0
            if n1 >= 0.0:
                ell = j
                v1 = b1
                v2 = b2
                g1 = p1
                g2 = p2
                break
            p1 = b1
            p2 = b2
            b1 = n1
            b2 = n2

        if r > 0 and ell > 0:
            n_c1 += 1
            # Y on the switching line from Z and W
            t = z1 / (z1 - w1)
            y2 = z2 + t * (w2 - z2)
            # U on the x1-axis from V and f(V)
            s = v2 / (v2 - g2)
            u1 = v1 + s * (g1 - v1)
            pu2 = u1 - 1.0  # f^{-1}(U) = (0, U1 - 1)
            m1 = y2 - pu2
            m2 = ((0.0 - v1) * (z2 - v2) - (pu2 - v2) * (z1 - v1)) / math.hypot(0.0 - v1, pu2 - v2)
            m3 = ((g2 - v2) * (z1 - v1) - (g1 - v1) * (z2 - v2)) / math.hypot(g1 - v1, g2 - v2)
            if m1 > margin_tol and m2 > margin_tol and m3 > margin_tol:
                return (k, r, ell, n_c1)
        k += 1


def escape_steps(tau_L: float, delta_L: float, x1: float, x2: float, cap: int) -> int:
    """Iterations of the left half-map until the first coordinate exceeds 0.

    Returns -1 if the cap passes without escape.
    """
    for p in range(1, cap + 1):
        n1 = tau_L * x1 + x2 + 1.0
        n2 = -delta_L * x1
        x1 = n1
        x2 = n2
        if x1 > 0.0:
            return p
    return -1


def tangent_stretch(
    tau_L: float, tau_R: float, delta_L: float, delta_R: float,
    x1: float, x2: float, v1: float, v2: float,
    n: int, renorm_every: int, tol_sigma: float,
) -> float:
    """Total log stretching ln(|v_n| / |v_0|) over n tangent-bundle steps."""
    total = -0.5 * math.log(v1 * v1 + v2 * v2)
    since = 0
    for _ in range(n):
        if x1 < -tol_sigma:
            left = True
        elif x1 > tol_sigma:
            left = False
        else:
            left = v1 < 0.0
        if left:
            nv1 = tau_L * v1 + v2
            nv2 = -delta_L * v1
        else:
            nv1 = tau_R * v1 + v2
            nv2 = -delta_R * v1
        v1 = nv1
        v2 = nv2
        if x1 <= 0.0:
            n1 = tau_L * x1 + x2 + 1.0
            n2 = -delta_L * x1
        else:
            n1 = tau_R * x1 + x2 + 1.0
            n2 = -delta_R * x1
        x1 = n1
        x2 = n2
        since += 1
        if since >= renorm_every:
            norm = math.sqrt(v1 * v1 + v2 * v2)
            total += math.log(norm)
            v1 /= norm
            v2 /= norm
            since = 0
    total += 0.5 * math.log(v1 * v1 + v2 * v2)
    return total


def tangent_word_stats(
    tau_L: float, tau_R: float, delta_L: float, delta_R: float,
    x1: float, x2: float, v1: float, v2: float,
    n: int, renorm_every: int, tol_sigma: float, ln_c: float,
) -> tuple[float, int, float, int]:
    """Tangent run with bookkeeping at completed-word boundaries.

    Words of the canonical family each contain exactly one R, so a word
    completes whenever a new R symbol starts.  At the j-th completion the
    margin ln(|v|/|v_0|) - j * ln_c is recorded.  Returns
    (total_log_stretch, words_completed, min_margin, max_left_run).
    """
    log0 = 0.5 * math.log(v1 * v1 + v2 * v2)
    carried = 0.0
    since = 0
    words = 0
    min_margin = math.inf
    run = 0
    max_run = 0
    for i in range(n):
        if x1 < -tol_sigma:
            left = True
        elif x1 > tol_sigma:
            left = False
        else:
            left = v1 < 0.0
        if not left and i > 0:
            words += 1
            margin = carried + 0.5 * math.log(v1 * v1 + v2 * v2) - log0 - words * ln_c
            if margin < min_margin:
                min_margin = margin
            if run > max_run:
                max_run = run
            run = 0
        if left:
            run += 1
            nv1 = tau_L * v1 + v2
            nv2 = -delta_L * v1
        else:
            nv1 = tau_R * v1 + v2
            nv2 = -delta_R * v1
        v1 = nv1
        v2 = nv2
        if x1 <= 0.0:
            n1 = tau_L * x1 + x2 + 1.0
            n2 = -delta_L * x1
        else:
            n1 = tau_R * x1 + x2 + 1.0
            n2 = -delta_R * x1
        x1 = n1
        x2 = n2
        since += 1
        if since >= renorm_every:
            norm = math.sqrt(v1 * v1 + v2 * v2)
            carried += math.log(norm)
            v1 /= norm
            v2 /= norm
            since = 0
    total = carried + 0.5 * math.log(v1 * v1 + v2 * v2) - log0
    return (total, words, min_margin, max_run)


def simulate_into(
    tau_L: float, tau_R: float, delta_L: float, delta_R: float,
    x1: float, x2: float, n: int, guard: float, out,
) -> int:
    """Fill out[i] with f^{i+1}(x) for i < n; stop early if |x| exceeds guard.

    Returns the number of rows written (== n when the orbit stayed bounded).
    """
    guard2 = guard * guard
    for i in range(n):
        if x1 <= 0.0:
            n1 = tau_L * x1 + x2 + 1.0
            n2 = -delta_L * x1
        else:
            n1 = tau_R * x1 + x2 + 1.0
            n2 = -delta_R * x1
        x1 = n1
        x2 = n2
        if x1 * x1 + x2 * x2 > guard2:
            return i
        out[i, 0] = x1
        out[i, 1] = x2
    return n
