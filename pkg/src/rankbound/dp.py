"""Grid-restricted DP oracles for optimal piecewise approximation.

These are the independent check on the closed forms: breakpoints are
restricted to tabulation nodes, per-cell costs are computed for the
piecewise-linear rendering of the target and per-panel-uniform measure,
and a dynamic program picks the best partition into at most K cells.
Because the search space only shrinks, the DP error is always an
achievable model error, i.e. an upper bound on the true infimum, and it
is nonincreasing in K by construction.
"""

import numpy as np

from . import kernels
from .distributions import CdfModel
from .errors import DomainError, ResolutionError
from .measures import density_fn, explicit, lebesgue
from .piecewise import ApproxResult, PiecewiseModel, make_model, pushforward_density

_NM_ITERS = 60
_P1_GRID_CAP = 1200


def _tabulate(target, measure, grid):
    a, b = target.support
    xs = np.linspace(a, b, int(grid) + 1)
    ys = np.asarray(target.cdf(xs), dtype=np.float64)
    dens = np.asarray(density_fn(measure, target)(xs), dtype=np.float64)
    masses = 0.5 * (dens[:-1] + dens[1:]) * np.diff(xs)
    return xs, ys, masses


def _cells_from_choices(choices, kmax, g):
    cells = []
    k = kmax - 1
    j = g
    while j > 0:
        ch = int(choices[k, j])
        if ch == -1:
            k -= 1
            continue
        if ch < 0:
            raise AssertionError("DP reconstruction hit an unset state")
        cells.append((ch, j))
        j = ch
        k -= 1
    cells.reverse()
    return cells


def dp_segment_values(xs, ys, masses, k, model_class):
    """DP on an explicit tabulation; returns (error, cells, params).

    cells are (i, j) node-index pairs; params are (slope, intercept)
    per cell.  This is the entry the scaling tests exercise directly:
    the pipeline is positively homogeneous in `ys`.
    """
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    ys = np.ascontiguousarray(ys, dtype=np.float64)
    masses = np.ascontiguousarray(masses, dtype=np.float64)
    g = len(xs) - 1
    if k < 1 or int(k) != k:
        raise DomainError("k must be a positive integer")
    k = int(k)
    if g < k:
        raise ResolutionError("grid must have at least k panels")

    if model_class == "p0":
        errors, choices = kernels.dp_p0(xs, ys, masses, k)
        cells = _cells_from_choices(choices, k, g)
        pm, pt = kernels.prefix_arrays(xs, ys, masses)
        params = []
        for i, j in cells:
            mp = kernels.locate_median_panel(pm, i, j)
            _, theta = kernels.median_split_cost(ys, masses, pm, pt, i, j, mp)
            c = ys[mp] + theta * (ys[mp + 1] - ys[mp])
            params.append((0.0, c))
        return float(errors[k - 1]), cells, params

    if model_class == "p1":
        if g > _P1_GRID_CAP:
            raise ResolutionError(
                f"piecewise-affine DP caps the grid at {_P1_GRID_CAP} panels "
                "(cell-cost matrix is quadratic in the grid)"
            )
        costs = kernels.p1_cost_matrix(xs, ys, masses, _NM_ITERS)
        errors, choices = kernels.dp_from_costs(costs, k)
        cells = _cells_from_choices(choices, k, g)
        pm, pt = kernels.prefix_arrays(xs, ys, masses)
        params = []
        for i, j in cells:
            a, b, _ = kernels.affine_cell_fit(xs, ys, masses, pm, pt, i, j, _NM_ITERS)
            params.append((b, a))
        return float(errors[k - 1]), cells, params

    raise DomainError(f"unknown model class {model_class!r}")


def _model_from_cells(xs, cells, params, model_class):
    bps = [xs[cells[0][0]]] + [xs[j] for _, j in cells]
    slopes = [p[0] for p in params]
    intercepts = [p[1] for p in params]
    return make_model(np.array(bps), np.array(slopes), np.array(intercepts), model_class)


def optimal_piecewise_dp(target, k, model_class="p0", measure=None, grid=None):
    """Exact-on-grid optimal piecewise model of the target CDF."""
    if measure is None:
        measure = lebesgue()
    if grid is None:
        grid = max(2048, 20 * int(k)) if model_class == "p0" else max(320, 20 * int(k))
    if grid < 20 * k:
        raise ResolutionError("optimal_piecewise_dp needs grid >= 20*k")
    xs, ys, masses = _tabulate(target, measure, grid)
    err, cells, params = dp_segment_values(xs, ys, masses, k, model_class)
    model = _model_from_cells(xs, cells, params, model_class)
    return ApproxResult(model=model, error=err, method="DpOracle", grid=int(grid))


def optimal_p0_general(data_model, measure, k, grid=4096):
    """L1-optimal K-level quantizer of the pushforward law, mapped back.

    Works in rank space: tabulates f_Y(u) = g(F^-1(u)) / f(F^-1(u)) on
    a uniform u-grid, solves the at-most-K quantizer DP with levels
    snapped to grid nodes, then maps cell boundaries back through the
    quantile function.  The reported error is the x-space L1(mu) error
    of the returned piecewise-constant model (the substitution u = F(x)
    makes the two integrals equal).  `measure` may be a MeasureSpec or
    a bare CdfModel for the query law.
    """
    if isinstance(measure, CdfModel):
        measure = explicit(measure)
    if k < 1 or int(k) != k:
        raise DomainError("k must be a positive integer")
    k = int(k)
    if grid < 20 * k:
        raise ResolutionError("optimal_p0_general needs grid >= 20*k")
    us = np.linspace(0.0, 1.0, int(grid) + 1)
    fy = np.asarray(pushforward_density(data_model, measure, us), dtype=np.float64)
    masses = 0.5 * (fy[:-1] + fy[1:]) * np.diff(us)
    errors, choices = kernels.dp_quantizer(us, masses, k)
    cells = _cells_from_choices(choices, k, int(grid))
    bounds_u = [us[cells[0][0]]] + [us[j] for _, j in cells]
    bps = np.asarray(data_model.inverse(np.array(bounds_u)), dtype=np.float64)
    if np.any(np.diff(bps) <= 0):
        raise ResolutionError("quantile map collapsed adjacent cell boundaries; refine the grid")
    levels = [us[kernels.best_node_point(us, masses, i, j)] for i, j in cells]
    model = make_model(bps, np.zeros(len(levels)), np.array(levels), "p0")
    return ApproxResult(model=model, error=float(errors[k - 1]), method="LloydQuantizer", grid=int(grid))
