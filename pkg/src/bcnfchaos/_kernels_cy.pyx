# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops; line-for-line translation of `_kernels_py`.

Expression order matches the pure backend so both produce identical doubles.
Built without fast-math so IEEE semantics are preserved.
"""

from libc.math cimport hypot, log, sqrt, INFINITY


cpdef tuple scan_beta(
    double tau_L, double tau_R, double delta_L, double delta_R,
    double beta_min, double beta_step, double beta_max,
    int r_max, int ell_max, double margin_tol,
):
    """First beta on the grid passing stages C1 and C2; see the pure twin."""
    cdef int n_c1 = 0
    cdef int k = 0
    cdef int r, ell, i, j
    cdef double beta, c1, c2, n1, n2
    cdef double z1, z2, w1, w2
    cdef double b1, b2, p1, p2, v1, v2, g1, g2
    cdef double t, y2, s, u1, pu2, m1, m2, m3
    while True:
        beta = beta_min + k * beta_step
        if beta > beta_max:
            return (-1, 0, 0, n_c1)

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
            t = z1 / (z1 - w1)
            y2 = z2 + t * (w2 - z2)
            s = v2 / (v2 - g2)
            u1 = v1 + s * (g1 - v1)
            pu2 = u1 - 1.0
            m1 = y2 - pu2
            m2 = ((0.0 - v1) * (z2 - v2) - (pu2 - v2) * (z1 - v1)) / hypot(0.0 - v1, pu2 - v2)
            m3 = ((g2 - v2) * (z1 - v1) - (g1 - v1) * (z2 - v2)) / hypot(g1 - v1, g2 - v2)
            if m1 > margin_tol and m2 > margin_tol and m3 > margin_tol:
                return (k, r, ell, n_c1)
        k += 1


cpdef int escape_steps(double tau_L, double delta_L, double x1, double x2, long cap):
    """Left half-map iterations until the first coordinate exceeds 0; -1 at cap."""
    cdef long p
    cdef double n1, n2
    for p in range(1, cap + 1):
        n1 = tau_L * x1 + x2 + 1.0
        n2 = -delta_L * x1
        x1 = n1
        x2 = n2
        if x1 > 0.0:
            return p
    return -1


cpdef double tangent_stretch(
    double tau_L, double tau_R, double delta_L, double delta_R,
    double x1, double x2, double v1, double v2,
    long n, int renorm_every, double tol_sigma,
):
    """Total log stretching ln(|v_n| / |v_0|) over n tangent-bundle steps."""
    cdef double total = -0.5 * log(v1 * v1 + v2 * v2)
    cdef int since = 0
    cdef long i
    cdef bint left
    cdef double nv1, nv2, n1, n2, norm
    for i in range(n):
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
            norm = sqrt(v1 * v1 + v2 * v2)
            total += log(norm)
            v1 /= norm
            v2 /= norm
            since = 0
    total += 0.5 * log(v1 * v1 + v2 * v2)
    return total


cpdef tuple tangent_word_stats(
    double tau_L, double tau_R, double delta_L, double delta_R,
    double x1, double x2, double v1, double v2,
    long n, int renorm_every, double tol_sigma, double ln_c,
):
    """Tangent run with completed-word bookkeeping; see the pure twin."""
    cdef double log0 = 0.5 * log(v1 * v1 + v2 * v2)
    cdef double carried = 0.0
    cdef int since = 0
    cdef long words = 0
    cdef double min_margin = INFINITY
    cdef long run = 0
    cdef long max_run = 0
    cdef long i
    cdef bint left
    cdef double nv1, nv2, n1, n2, norm, margin, total
    for i in range(n):
        if x1 < -tol_sigma:
            left = True
        elif x1 > tol_sigma:
            left = False
        else:
            left = v1 < 0.0
        if (not left) and i > 0:
            words += 1
            margin = carried + 0.5 * log(v1 * v1 + v2 * v2) - log0 - words * ln_c
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
            norm = sqrt(v1 * v1 + v2 * v2)
            carried += log(norm)
            v1 /= norm
            v2 /= norm
            since = 0
    total = carried + 0.5 * log(v1 * v1 + v2 * v2) - log0
    return (total, words, min_margin, max_run)


cpdef long simulate_into(
    double tau_L, double tau_R, double delta_L, double delta_R,
    double x1, double x2, long n, double guard, double[:, ::1] out,
):
    """Fill out[i] with f^{i+1}(x); stop early past the divergence guard."""
    cdef double guard2 = guard * guard
    cdef double n1, n2
    cdef long i
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
