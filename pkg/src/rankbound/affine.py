"""Single best-affine L1 fit: coarse seed grid, then simplex descent."""

import numpy as np
from scipy import optimize

from .errors import ResolutionError
from .kernels import line_error
from .measures import density_fn, lebesgue


def _tabulate(target, measure, grid, interval=None):
    a, b = target.support
    if interval is not None:
        lo, hi = interval
        if not (a <= lo < hi <= b):
            raise ResolutionError(f"interval [{lo}, {hi}] not inside support [{a}, {b}]")
        a, b = lo, hi
    xs = np.linspace(a, b, int(grid) + 1)
    ys = np.asarray(target.cdf(xs), dtype=np.float64)
    dens = np.asarray(density_fn(measure, target)(xs), dtype=np.float64)
    masses = 0.5 * (dens[:-1] + dens[1:]) * np.diff(xs)
    return xs, ys, masses


def best_affine_on_table(xs, ys, masses=None):
    """Best-affine fit of a tabulated function (any shape, not just CDFs).

    Seeds a 33x33 (slope, intercept) grid: the slope axis spans the hull
    of the one-sided endpoint secants, and for each slope the intercept
    axis spans the translates that touch the tabulated graph from below
    and above.  The best seed is polished by Nelder-Mead down to 1e-8
    simplex size.  Deterministic for fixed inputs.

    Returns (slope, intercept, error); error is the L1 distance under
    per-panel masses (uniform probability on the span when omitted).
    """
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    ys = np.ascontiguousarray(ys, dtype=np.float64)
    if masses is None:
        masses = np.diff(xs) / (xs[-1] - xs[0])
    masses = np.ascontiguousarray(masses, dtype=np.float64)
    last = len(xs) - 1

    with np.errstate(divide="ignore", invalid="ignore"):
        s_from_left = (ys[1:] - ys[0]) / (xs[1:] - xs[0])
        s_from_right = (ys[-1] - ys[:-1]) / (xs[-1] - xs[:-1])
    secants = np.concatenate([s_from_left, s_from_right])
    secants = secants[np.isfinite(secants)]
    s_lo = float(secants.min())
    s_hi = float(secants.max())
    pad = 0.05 * (s_hi - s_lo) + 1e-12
    slopes = np.linspace(s_lo - pad, s_hi + pad, 33)

    best = (np.inf, 0.0, 0.0)
    for b in slopes:
        resid = ys - b * xs
        a_lo, a_hi = float(resid.min()), float(resid.max())
        for a in np.linspace(a_lo, a_hi, 33):
            e = line_error(xs, ys, masses, 0, last, a, b)
            if e < best[0]:
                best = (e, a, b)

    e0, a0, b0 = best
    da = max((best[1] != 0.0) * abs(best[1]), (ys.max() - ys.min())) * 0.02 + 1e-9
    db = (s_hi - s_lo) * 0.02 + 1e-9

    def objective(v):
        return line_error(xs, ys, masses, 0, last, v[0], v[1])

    res = optimize.minimize(
        objective,
        x0=np.array([a0, b0]),
        method="Nelder-Mead",
        options={
            "initial_simplex": np.array(
                [[a0, b0], [a0 + da, b0], [a0, b0 + db]]
            ),
            "xatol": 1e-8,
            "fatol": 1e-14,
            "maxiter": 4000,
            "maxfev": 4000,
        },
    )
    a1, b1 = float(res.x[0]), float(res.x[1])
    e1 = float(objective(res.x))
    if e1 <= e0:
        return b1, a1, e1
    return b0, a0, e0


def best_affine_l1(target, interval=None, measure=None, grid=2048):
    """Minimise integral |F - (intercept + slope*x)| d(mu) over lines.

    Tabulates the target CDF on `grid` panels (optionally restricted to
    a subinterval) and delegates to best_affine_on_table.  Returns
    (slope, intercept, error).
    """
    if grid < 64:
        raise ResolutionError("best_affine_l1 needs grid >= 64")
    if measure is None:
        measure = lebesgue()
    xs, ys, masses = _tabulate(target, measure, grid, interval)
    return best_affine_on_table(xs, ys, masses)
