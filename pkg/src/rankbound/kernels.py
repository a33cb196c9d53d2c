"""Hot numeric kernels: local search with step counting and the DP
segmentation engines.

All kernels are plain-loop numpy code decorated with ``maybe_njit``:
jitted by default, pure-Python fallback when RANKBOUND_DISABLE_NUMBA is
set (see ``rankbound._accel``).  Both paths run the same statements in
the same order, so outputs are identical.

Conventions shared by every searcher: `keys` is sorted ascending, the
answer is the rank r = #{keys <= q} (an integer in [0, n]), and the
returned step count is the number of key comparisons the strategy
performs, never including the model-routing comparisons (those are
counted separately by `route_segment`).

DP kernels approximate the target by its piecewise-linear interpolant
on the tabulation nodes and the measure by per-panel uniform mass, then
do exact arithmetic on that discretisation: per-panel L1 integrals of a
linear residual have closed forms (including the sign-change case), and
the best constant of a monotone cell is read off the half-mass point.
Costs use only additions, multiplications, divisions, selections and
fixed iteration budgets, so they are positively homogeneous in the
tabulated values in exact arithmetic (and bitwise so under power-of-two
scaling).
"""

import numpy as np

from ._accel import maybe_njit

# ---------------------------------------------------------------------
# local search
# ---------------------------------------------------------------------


@maybe_njit(cache=True)
def linear_scan(keys, q, p0):
    """Scan one position at a time from p0; steps = positions moved, min 1."""
    n = keys.shape[0]
    r = p0
    steps = 0
    while r > 0 and keys[r - 1] > q:
        r -= 1
        steps += 1
    if steps == 0:
        while r < n and keys[r] <= q:
            r += 1
            steps += 1
    if steps == 0:
        steps = 1
    return r, steps


@maybe_njit(cache=True)
def exponential_scan(keys, q, p0):
    """Doubling probes from p0 (offsets 1, 2, 4, ...) toward the answer,
    then bisection inside the final bracket.  Steps = key comparisons."""
    n = keys.shape[0]
    steps = 0
    low = False
    if p0 < n:
        steps += 1
        low = keys[p0] <= q
    if low:
        # answer is right of p0: find bracket (lo, hi] by doubling
        lo = p0
        off = 1
        hi = n
        while p0 + off < n:
            steps += 1
            if keys[p0 + off] <= q:
                lo = p0 + off
                off <<= 1
            else:
                hi = p0 + off
                break
        a = lo
        c = hi
    else:
        high = False
        if p0 > 0:
            steps += 1
            high = keys[p0 - 1] > q
        if not high:
            return p0, steps
        # answer is left of p0: bracket [lo, hi) by doubling
        hi = p0
        off = 1
        lo = 0
        while True:
            p = p0 - off
            if p <= 0:
                break
            steps += 1
            if keys[p - 1] > q:
                hi = p
                off <<= 1
            else:
                lo = p
                break
        a = lo - 1
        c = hi - 1
    while c - a > 1:
        mid = (a + c) >> 1
        steps += 1
        if keys[mid] <= q:
            a = mid
        else:
            c = mid
    return c, steps


@maybe_njit(cache=True)
def window_search(keys, q, p0, w):
    """Bisection over the window [p0 - w, p0 + w] clamped to [0, n]."""
    n = keys.shape[0]
    a = p0 - w - 1
    c = p0 + w
    if a < -1:
        a = -1
    if c > n:
        c = n
    steps = 0
    while c - a > 1:
        mid = (a + c) >> 1
        steps += 1
        if keys[mid] <= q:
            a = mid
        else:
            c = mid
    return c, steps


@maybe_njit(cache=True)
def full_binary_search(keys, q):
    """Classic bisection over the whole array; the baseline comparator."""
    n = keys.shape[0]
    a = -1
    c = n
    steps = 0
    while c - a > 1:
        mid = (a + c) >> 1
        steps += 1
        if keys[mid] <= q:
            a = mid
        else:
            c = mid
    return c, steps


@maybe_njit(cache=True)
def route_segment(bps_interior, q):
    """Locate the model segment by bisection over interior breakpoints."""
    a = 0
    c = bps_interior.shape[0]
    steps = 0
    while a < c:
        mid = (a + c) >> 1
        steps += 1
        if q >= bps_interior[mid]:
            a = mid + 1
        else:
            c = mid
    return a, steps


@maybe_njit(cache=True)
def rank_batch(keys, queries, bps_interior, slopes, intercepts, strategy, w):
    """Answer every query, recording rank, epsilon and step counts.

    strategy: 0 linear, 1 exponential, 2 binary-window.
    Position predictions round half-up and clamp to [0, n]; epsilon is
    |prediction - rank| before rounding.
    """
    n = keys.shape[0]
    m = queries.shape[0]
    ranks = np.empty(m, dtype=np.int64)
    eps = np.empty(m, dtype=np.float64)
    routing = np.empty(m, dtype=np.int64)
    steps = np.empty(m, dtype=np.int64)
    for t in range(m):
        q = queries[t]
        seg, rsteps = route_segment(bps_interior, q)
        h = intercepts[seg] + slopes[seg] * q
        if h < 0.0:
            h = 0.0
        elif h > n:
            h = float(n)
        p0 = int(np.floor(h + 0.5))
        if p0 < 0:
            p0 = 0
        elif p0 > n:
            p0 = n
        if strategy == 0:
            r, s = linear_scan(keys, q, p0)
        elif strategy == 1:
            r, s = exponential_scan(keys, q, p0)
        else:
            r, s = window_search(keys, q, p0, w)
        ranks[t] = r
        eps[t] = abs(h - r)
        routing[t] = rsteps
        steps[t] = s
    return ranks, eps, routing, steps


# ---------------------------------------------------------------------
# shared L1 integration pieces
# ---------------------------------------------------------------------


@maybe_njit(cache=True)
def prefix_arrays(xs, ys, wmass):
    """Prefix mass and prefix moment (integral of target * density)."""
    p = wmass.shape[0]
    pm = np.zeros(p + 1, dtype=np.float64)
    pt = np.zeros(p + 1, dtype=np.float64)
    for i in range(p):
        pm[i + 1] = pm[i] + wmass[i]
        pt[i + 1] = pt[i] + wmass[i] * 0.5 * (ys[i] + ys[i + 1])
    return pm, pt


@maybe_njit(cache=True)
def line_error(xs, ys, wmass, i, j, a, b):
    """Exact L1 error of the line a + b*x against the panel-linear target
    over panels i..j-1, with the in-panel sign change integrated exactly."""
    total = 0.0
    rl = ys[i] - (a + b * xs[i])
    for p in range(i, j):
        rr = ys[p + 1] - (a + b * xs[p + 1])
        m = wmass[p]
        if rl >= 0.0:
            if rr >= 0.0:
                total += m * 0.5 * (rl + rr)
            else:
                total += m * 0.5 * (rl * rl + rr * rr) / (rl - rr)
        else:
            if rr <= 0.0:
                total += m * 0.5 * (-rl - rr)
            else:
                total += m * 0.5 * (rl * rl + rr * rr) / (rr - rl)
        rl = rr
    return total


@maybe_njit(cache=True)
def median_split_cost(ys, wmass, pm, pt, i, j, mp):
    """L1 cost of the best constant on cell [i, j], given the panel mp
    containing the half-mass point.  Returns (cost, theta) where theta
    is the fractional position of the split inside panel mp."""
    half = 0.5 * (pm[i] + pm[j])
    m = wmass[mp]
    if m > 0.0:
        theta = (half - pm[mp]) / m
    else:
        theta = 0.0
    dy = ys[mp + 1] - ys[mp]
    pmom = m * (theta * ys[mp] + 0.5 * theta * theta * dy)
    tleft = (pt[mp] - pt[i]) + pmom
    tright = (pt[j] - pt[mp]) - pmom
    cost = tright - tleft
    if cost < 0.0:
        cost = 0.0
    return cost, theta


@maybe_njit(cache=True)
def locate_median_panel(pm, i, j):
    """Largest panel index mp in [i, j) with pm[mp] <= half-mass."""
    half = 0.5 * (pm[i] + pm[j])
    lo = i
    hi = j - 1
    while lo < hi:
        mid = (lo + hi + 1) >> 1
        if pm[mid] <= half:
            lo = mid
        else:
            hi = mid - 1
    return lo


# ---------------------------------------------------------------------
# DP over grid nodes, piecewise-constant class
# ---------------------------------------------------------------------


@maybe_njit(cache=True)
def dp_p0(xs, ys, wmass, kmax):
    """At-most-kmax segmentation with per-cell best constants.

    Returns (errors, choices): errors[k] is the best error with <= k+1
    segments; choices[k, j] is the split node for the last segment of
    the prefix 0..j (or -1 when the k-segment solution is carried over).
    """
    nn = xs.shape[0]
    g = nn - 1
    pm, pt = prefix_arrays(xs, ys, wmass)
    dprev = np.empty(nn, dtype=np.float64)
    dcur = np.empty(nn, dtype=np.float64)
    choices = np.full((kmax, nn), -2, dtype=np.int64)
    errors = np.empty(kmax, dtype=np.float64)

    dprev[0] = 0.0
    for j in range(1, nn):
        mp = locate_median_panel(pm, 0, j)
        c, _ = median_split_cost(ys, wmass, pm, pt, 0, j, mp)
        dprev[j] = c
        choices[0, j] = 0
    errors[0] = dprev[g]

    for k in range(1, kmax):
        dcur[0] = 0.0
        for j in range(1, nn):
            best = dprev[j]
            arg = -1
            half = 0.0
            mp = j - 1
            for i in range(j - 1, -1, -1):
                half = 0.5 * (pm[i] + pm[j])
                while mp > i and pm[mp] > half:
                    mp -= 1
                c, _ = median_split_cost(ys, wmass, pm, pt, i, j, mp)
                cand = dprev[i] + c
                if cand < best:
                    best = cand
                    arg = i
            dcur[j] = best
            choices[k, j] = arg
        errors[k] = dcur[g]
        for j in range(nn):
            dprev[j] = dcur[j]
    return errors, choices


# ---------------------------------------------------------------------
# per-cell affine fit (piecewise-linear class)
# ---------------------------------------------------------------------


@maybe_njit(cache=True)
def _interp_value(xs, ys, i, j, x):
    # piecewise-linear value of the tabulated target at x within [xs[i], xs[j]]
    lo = i
    hi = j
    while hi - lo > 1:
        mid = (lo + hi) >> 1
        if xs[mid] <= x:
            lo = mid
        else:
            hi = mid
    h = xs[lo + 1] - xs[lo]
    if h <= 0.0:
        return ys[lo]
    t = (x - xs[lo]) / h
    return ys[lo] + t * (ys[lo + 1] - ys[lo])


@maybe_njit(cache=True)
def affine_cell_fit(xs, ys, wmass, pm, pt, i, j, nm_iters):
    """Best affine on cell [i, j]: candidate lines, then Nelder-Mead.

    Candidates: the best constant (half-mass median), the endpoint
    secant, and the quarter-point interpolant (L1-optimal for convex
    cells under uniform mass).  A fixed-budget Nelder-Mead polishes the
    winner.  Returns (intercept, slope, error); the error is always the
    exact discretised L1 error of the returned line, so it is an
    achievable (upper-bound) cell cost.
    """
    x0 = xs[i]
    x1 = xs[j]
    span = x1 - x0

    ymin = ys[i]
    ymax = ys[i]
    for p in range(i, j + 1):
        if ys[p] < ymin:
            ymin = ys[p]
        if ys[p] > ymax:
            ymax = ys[p]
    spread = ymax - ymin

    # best constant via the median split
    mp = locate_median_panel(pm, i, j)
    ccost, theta = median_split_cost(ys, wmass, pm, pt, i, j, mp)
    cval = ys[mp] + theta * (ys[mp + 1] - ys[mp])
    best_a = cval
    best_b = 0.0
    best_e = ccost
    if spread <= 0.0:
        return best_a, best_b, 0.0

    # endpoint secant
    sb = (ys[j] - ys[i]) / span
    sa = ys[i] - sb * x0
    se = line_error(xs, ys, wmass, i, j, sa, sb)
    if se < best_e:
        best_a = sa
        best_b = sb
        best_e = se

    # quarter-point interpolant
    xq1 = x0 + 0.25 * span
    xq2 = x0 + 0.75 * span
    yq1 = _interp_value(xs, ys, i, j, xq1)
    yq2 = _interp_value(xs, ys, i, j, xq2)
    qb = (yq2 - yq1) / (xq2 - xq1)
    qa = yq1 - qb * xq1
    qe = line_error(xs, ys, wmass, i, j, qa, qb)
    if qe < best_e:
        best_a = qa
        best_b = qb
        best_e = qe

    if best_e <= 0.0:
        return best_a, best_b, best_e

    # Nelder-Mead on (intercept, slope), data-scaled simplex, fixed budget
    va0, vb0, f0 = best_a, best_b, best_e
    va1 = best_a + 0.25 * spread
    vb1 = best_b
    f1 = line_error(xs, ys, wmass, i, j, va1, vb1)
    db = 0.5 * spread / span
    va2 = best_a - db * 0.5 * (x0 + x1)
    vb2 = best_b + db
    f2 = line_error(xs, ys, wmass, i, j, va2, vb2)

    for _ in range(nm_iters):
        # order the three vertices
        if f1 < f0:
            va0, va1 = va1, va0
            vb0, vb1 = vb1, vb0
            f0, f1 = f1, f0
        if f2 < f1:
            va1, va2 = va2, va1
            vb1, vb2 = vb2, vb1
            f1, f2 = f2, f1
        if f1 < f0:
            va0, va1 = va1, va0
            vb0, vb1 = vb1, vb0
            f0, f1 = f1, f0
        ca = 0.5 * (va0 + va1)
        cb = 0.5 * (vb0 + vb1)
        ra = ca + (ca - va2)
        rb = cb + (cb - vb2)
        fr = line_error(xs, ys, wmass, i, j, ra, rb)
        if fr < f0:
            ea = ca + 2.0 * (ca - va2)
            eb = cb + 2.0 * (cb - vb2)
            fe = line_error(xs, ys, wmass, i, j, ea, eb)
            if fe < fr:
                va2, vb2, f2 = ea, eb, fe
            else:
                va2, vb2, f2 = ra, rb, fr
        elif fr < f1:
            va2, vb2, f2 = ra, rb, fr
        else:
            if fr < f2:
                va2, vb2, f2 = ra, rb, fr
            ka = ca + 0.5 * (va2 - ca)
            kb = cb + 0.5 * (vb2 - cb)
            fk = line_error(xs, ys, wmass, i, j, ka, kb)
            if fk < f2:
                va2, vb2, f2 = ka, kb, fk
            else:
                # shrink toward the best vertex
                va1 = va0 + 0.5 * (va1 - va0)
                vb1 = vb0 + 0.5 * (vb1 - vb0)
                f1 = line_error(xs, ys, wmass, i, j, va1, vb1)
                va2 = va0 + 0.5 * (va2 - va0)
                vb2 = vb0 + 0.5 * (vb2 - vb0)
                f2 = line_error(xs, ys, wmass, i, j, va2, vb2)

    if f1 < f0:
        va0, vb0, f0 = va1, vb1, f1
    if f2 < f0:
        va0, vb0, f0 = va2, vb2, f2
    if f0 < best_e:
        best_a, best_b, best_e = va0, vb0, f0
    return best_a, best_b, best_e


@maybe_njit(cache=True)
def p1_cost_matrix(xs, ys, wmass, nm_iters):
    """Dense upper-triangular matrix of per-cell best-affine costs."""
    nn = xs.shape[0]
    pm, pt = prefix_arrays(xs, ys, wmass)
    costs = np.zeros((nn, nn), dtype=np.float64)
    for i in range(nn - 1):
        for j in range(i + 1, nn):
            _, _, e = affine_cell_fit(xs, ys, wmass, pm, pt, i, j, nm_iters)
            costs[i, j] = e
    return costs


@maybe_njit(cache=True)
def dp_from_costs(costs, kmax):
    """At-most-kmax DP over a precomputed cell-cost matrix."""
    nn = costs.shape[0]
    g = nn - 1
    dprev = np.empty(nn, dtype=np.float64)
    dcur = np.empty(nn, dtype=np.float64)
    choices = np.full((kmax, nn), -2, dtype=np.int64)
    errors = np.empty(kmax, dtype=np.float64)
    dprev[0] = 0.0
    for j in range(1, nn):
        dprev[j] = costs[0, j]
        choices[0, j] = 0
    errors[0] = dprev[g]
    for k in range(1, kmax):
        dcur[0] = 0.0
        for j in range(1, nn):
            best = dprev[j]
            arg = -1
            for i in range(j - 1, -1, -1):
                cand = dprev[i] + costs[i, j]
                if cand < best:
                    best = cand
                    arg = i
            dcur[j] = best
            choices[k, j] = arg
        errors[k] = dcur[g]
        for j in range(nn):
            dprev[j] = dcur[j]
    return errors, choices


# ---------------------------------------------------------------------
# quantizer DP in rank space (piecewise-constant, node-snapped points)
# ---------------------------------------------------------------------


@maybe_njit(cache=True)
def node_point_cost(us, pm, pt, i, j, p):
    """L1 cost of representing cell [i, j] by the node value us[p]."""
    c = us[p]
    left = c * (pm[p] - pm[i]) - (pt[p] - pt[i])
    right = (pt[j] - pt[p]) - c * (pm[j] - pm[p])
    cost = left + right
    if cost < 0.0:
        cost = 0.0
    return cost


@maybe_njit(cache=True)
def dp_quantizer(us, wmass, kmax):
    """At-most-kmax quantizer with cell points snapped to grid nodes."""
    nn = us.shape[0]
    g = nn - 1
    pm = np.zeros(nn, dtype=np.float64)
    pt = np.zeros(nn, dtype=np.float64)
    for p in range(nn - 1):
        pm[p + 1] = pm[p] + wmass[p]
        pt[p + 1] = pt[p] + wmass[p] * 0.5 * (us[p] + us[p + 1])
    dprev = np.empty(nn, dtype=np.float64)
    dcur = np.empty(nn, dtype=np.float64)
    choices = np.full((kmax, nn), -2, dtype=np.int64)
    errors = np.empty(kmax, dtype=np.float64)

    dprev[0] = 0.0
    for j in range(1, nn):
        mp = locate_median_panel(pm, 0, j)
        c0 = node_point_cost(us, pm, pt, 0, j, mp)
        c1 = node_point_cost(us, pm, pt, 0, j, mp + 1)
        dprev[j] = c0 if c0 <= c1 else c1
        choices[0, j] = 0
    errors[0] = dprev[g]

    for k in range(1, kmax):
        dcur[0] = 0.0
        for j in range(1, nn):
            best = dprev[j]
            arg = -1
            mp = j - 1
            for i in range(j - 1, -1, -1):
                half = 0.5 * (pm[i] + pm[j])
                while mp > i and pm[mp] > half:
                    mp -= 1
                c0 = node_point_cost(us, pm, pt, i, j, mp)
                c1 = node_point_cost(us, pm, pt, i, j, mp + 1)
                c = c0 if c0 <= c1 else c1
                cand = dprev[i] + c
                if cand < best:
                    best = cand
                    arg = i
            dcur[j] = best
            choices[k, j] = arg
        errors[k] = dcur[g]
        for j in range(nn):
            dprev[j] = dcur[j]
    return errors, choices


@maybe_njit(cache=True)
def best_node_point(us, wmass, i, j):
    """Best node index for cell [i, j] (half-mass node or its neighbour)."""
    nn = us.shape[0]
    pm = np.zeros(nn, dtype=np.float64)
    pt = np.zeros(nn, dtype=np.float64)
    for p in range(nn - 1):
        pm[p + 1] = pm[p] + wmass[p]
        pt[p + 1] = pt[p] + wmass[p] * 0.5 * (us[p] + us[p + 1])
    mp = locate_median_panel(pm, i, j)
    c0 = node_point_cost(us, pm, pt, i, j, mp)
    c1 = node_point_cost(us, pm, pt, i, j, mp + 1)
    if c0 <= c1:
        return mp
    return mp + 1
