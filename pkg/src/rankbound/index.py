"""A model-predicted rank index over a sorted key array.

The index stores a piecewise predictor in position units (rank fraction
times n), answers rank queries by predicting a position and then
running a step-counted local search, and keeps routing comparisons
(finding the segment) separate from search comparisons (probing keys).
Three search strategies are provided:

    linear   one position per step away from the prediction;
    exp      doubling offsets, then bisection in the final bracket;
    binary   bisection over a precomputed window [p - W, p + W].

For the binary strategy W is exact, not sampled: the prediction error
epsilon is evaluated over the finite critical set (every key from both
sides, every segment endpoint), where its supremum over the whole line
is attained, and W is the ceiling of that supremum.  The window search
can therefore never miss the true rank.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .distributions import KeySample
from .dp import dp_segment_values
from .errors import DomainError, InvariantViolation, UnsupportedError
from .measures import density_fn, matched
from .piecewise import PiecewiseModel, make_model, optimal_p0_matched

STRATEGIES = ("linear", "exp", "binary")
FITS = ("opt", "dp", "interp")
_STRATEGY_CODE = {"linear": 0, "exp": 1, "binary": 2}

_DP_NODE_CAPS = {"p0": 8192, "p1": 1200}


@dataclass(frozen=True, eq=False)
class CostBreakdown:
    rank: int
    epsilon: float
    routing_steps: int
    search_steps: int


@dataclass(frozen=True, eq=False)
class LearnedIndex:
    """Immutable after build; any number of readers may query it."""

    sample: KeySample
    model: PiecewiseModel
    strategy: str
    window: int
    fit: str
    sup_epsilon: float

    @property
    def n(self):
        return self.sample.n

    def predict(self, q):
        """Predicted position of q, clamped to [0, n] (pre-rounding)."""
        h = np.clip(np.asarray(self.model.evaluate(q), dtype=np.float64), 0.0, self.n)
        return h if h.ndim else float(h)

    def epsilon(self, q):
        """|predict(q) - rank(q)| in position units."""
        r = np.searchsorted(self.sample.keys, np.asarray(q, dtype=np.float64), side="right")
        e = np.abs(self.predict(q) - r)
        return e if e.ndim else float(e)

    def worst_case_epsilon(self):
        """Exact sup of epsilon over the line (see module docstring)."""
        return self.sup_epsilon

    def rank(self, q):
        """Exact rank #{keys <= q} plus the cost breakdown for this query."""
        ranks, eps, routing, steps = self.rank_many(np.array([float(q)]))
        return int(ranks[0]), CostBreakdown(
            rank=int(ranks[0]),
            epsilon=float(eps[0]),
            routing_steps=int(routing[0]),
            search_steps=int(steps[0]),
        )

    def rank_many(self, queries):
        """Vector form: arrays (ranks, epsilons, routing_steps, search_steps)."""
        queries = np.ascontiguousarray(queries, dtype=np.float64)
        ranks, eps, routing, steps = kernels.rank_batch(
            self.sample.keys,
            queries,
            self.model.breakpoints[1:-1],
            self.model.slopes,
            self.model.intercepts,
            _STRATEGY_CODE[self.strategy],
            self.window,
        )
        if self.strategy == "binary":
            # a window miss silently returns a window edge, so check the
            # answers themselves: r is the rank iff keys[r-1] <= q < keys[r]
            keys, n = self.sample.keys, self.n
            ok_lo = (ranks == 0) | (keys[np.maximum(ranks - 1, 0)] <= queries)
            ok_hi = (ranks == n) | (keys[np.minimum(ranks, n - 1)] > queries)
            if not np.all(ok_lo & ok_hi):
                raise InvariantViolation(
                    "binary window missed the true rank; the window bound is broken"
                )
        return ranks, eps, routing, steps


def _sup_epsilon(keys, model_pos):
    """Exact sup of |h - rank| over the critical set.

    Between consecutive critical points both h and the rank are affine/
    constant, so the sup over the closure is attained at one-sided
    limits of critical points: (right value of h, rank counting <= x)
    and (left limit of h, rank counting < x).
    """
    n = len(keys)
    pts = np.unique(np.concatenate([keys, model_pos.breakpoints]))
    hr = np.clip(model_pos.evaluate(pts), 0.0, float(n))
    idx_left = np.clip(
        np.searchsorted(model_pos.breakpoints, pts, side="left") - 1, 0, model_pos.k - 1
    )
    hl = np.clip(model_pos.intercepts[idx_left] + model_pos.slopes[idx_left] * pts, 0.0, float(n))
    r_right = np.searchsorted(keys, pts, side="right")
    r_left = np.searchsorted(keys, pts, side="left")
    return float(max(np.max(np.abs(hr - r_right)), np.max(np.abs(hl - r_left))))


def _ecdf_nodes(sample, grid):
    a, b = sample.source.support
    nodes = np.unique(np.concatenate([np.linspace(a, b, int(grid) + 1), sample.keys]))
    fracs = np.searchsorted(sample.keys, nodes, side="right") / sample.n
    return nodes, fracs


def _fit_dp(sample, k, model_class, grid):
    # DP oracle on the sample's own ECDF, rendered piecewise-linearly on
    # the node grid and weighted by the source density (the measure the
    # closed form optimises too).  Verification path: cost is quadratic
    # in the node count, hence the cap.
    nodes, fracs = _ecdf_nodes(sample, grid)
    if len(nodes) - 1 > _DP_NODE_CAPS[model_class]:
        raise DomainError(
            f"dp fit with {len(nodes) - 1} panels exceeds the {model_class} cap "
            f"{_DP_NODE_CAPS[model_class]}; lower n or the grid"
        )
    dens = np.asarray(density_fn(matched(), sample.source)(nodes), dtype=np.float64)
    masses = 0.5 * (dens[:-1] + dens[1:]) * np.diff(nodes)
    _, cells, params = dp_segment_values(nodes, fracs, masses, k, model_class)
    bps = np.array([nodes[cells[0][0]]] + [nodes[j] for _, j in cells])
    slopes = np.array([p[0] for p in params])
    intercepts = np.array([p[1] for p in params])
    return make_model(bps, slopes, intercepts, model_class)


def _fit_interp(sample, k, model_class):
    # equal-width cells; affine segments interpolate the ECDF at cell
    # edges, constant segments take the ECDF value at the cell midpoint
    a, b = sample.source.support
    bp = np.linspace(a, b, k + 1)
    if model_class == "p1":
        vals = np.searchsorted(sample.keys, bp, side="right") / sample.n
        vals[0] = 0.0
        vals[-1] = 1.0
        slopes = np.diff(vals) / np.diff(bp)
        intercepts = vals[:-1] - slopes * bp[:-1]
        return make_model(bp, slopes, intercepts, "p1")
    mids = 0.5 * (bp[:-1] + bp[1:])
    levels = np.searchsorted(sample.keys, mids, side="right") / sample.n
    return make_model(bp, np.zeros(k), levels, "p0")


def build(sample, k, model_class="p0", strategy="binary", fit="opt", grid=None):
    """Construct a LearnedIndex over the sample.

    fit selects how the predictor is obtained:
      opt     closed-form matched-optimal constants of the source CDF
              (piecewise-constant class only);
      dp      DP oracle on the sample's own ECDF (modest n only);
      interp  equal-width interpolation of the ECDF.
    The fitted rank-fraction model is scaled by n into position units.
    Deterministic: identical inputs give bit-identical indexes.
    """
    if not isinstance(sample, KeySample):
        raise DomainError("build needs a KeySample")
    if k < 1 or int(k) != k:
        raise DomainError("k must be a positive integer")
    k = int(k)
    if k > sample.n:
        raise DomainError(f"k = {k} exceeds the sample size n = {sample.n}")
    if strategy not in STRATEGIES:
        raise DomainError(f"strategy must be one of {STRATEGIES}")
    if fit not in FITS:
        raise DomainError(f"fit must be one of {FITS}")

    if fit == "opt":
        if model_class != "p0":
            raise UnsupportedError("the closed-form optimum exists for the constant class only")
        frac_model = optimal_p0_matched(sample.source, k).model
    elif fit == "dp":
        if grid is None:
            grid = 2048 if model_class == "p0" else 320
        frac_model = _fit_dp(sample, k, model_class, grid)
    else:
        frac_model = _fit_interp(sample, k, model_class)

    model_pos = frac_model.scaled(float(sample.n))
    sup_eps = _sup_epsilon(sample.keys, model_pos)
    window = int(np.ceil(sup_eps))
    return LearnedIndex(
        sample=sample,
        model=model_pos,
        strategy=strategy,
        window=window,
        fit=fit,
        sup_epsilon=sup_eps,
    )
