"""Piecewise predictors over a support interval, and their L1 error.

A PiecewiseModel is K segments on consecutive breakpoint intervals
[b_k, b_{k+1}) (the last interval closed).  Segments are stored as
(slope, intercept) pairs; the piecewise-constant class is slope == 0
everywhere, tagged "p0", the piecewise-affine class is tagged "p1".
Values live in rank-fraction units unless a caller scales them.
"""

import math
from dataclasses import dataclass

import numpy as np

from .distributions import CdfModel, tabulated_cdf
from .errors import (
    DomainError,
    InvariantViolation,
    ResolutionError,
    SingularityError,
    UnsupportedError,
)
from .measures import density_fn, explicit, lebesgue

CLASSES = ("p0", "p1")
METHODS = ("ClosedForm", "DpOracle", "LloydQuantizer", "Interpolation")


@dataclass(frozen=True, eq=False)
class PiecewiseModel:
    breakpoints: np.ndarray
    slopes: np.ndarray
    intercepts: np.ndarray
    model_class: str

    @property
    def k(self):
        return len(self.slopes)

    def segment_of(self, x):
        idx = np.searchsorted(self.breakpoints, np.asarray(x, dtype=np.float64), side="right") - 1
        return np.clip(idx, 0, self.k - 1)

    def evaluate(self, x):
        x = np.asarray(x, dtype=np.float64)
        idx = self.segment_of(x)
        v = self.intercepts[idx] + self.slopes[idx] * x
        return v if v.ndim else float(v)

    def scaled(self, factor):
        """Same breakpoints, values multiplied by factor."""
        return PiecewiseModel(
            self.breakpoints,
            self.slopes * factor,
            self.intercepts * factor,
            self.model_class,
        )


def make_model(breakpoints, slopes, intercepts, model_class):
    bp = np.ascontiguousarray(breakpoints, dtype=np.float64)
    sl = np.ascontiguousarray(slopes, dtype=np.float64)
    ic = np.ascontiguousarray(intercepts, dtype=np.float64)
    if model_class not in CLASSES:
        raise DomainError(f"model class must be one of {CLASSES}")
    if len(bp) != len(sl) + 1 or len(sl) != len(ic) or len(sl) < 1:
        raise DomainError("breakpoints must number one more than segments")
    if np.any(np.diff(bp) <= 0):
        raise DomainError("breakpoints must be strictly increasing")
    if model_class == "p0" and np.any(sl != 0.0):
        raise DomainError("p0 segments must be constants")
    return PiecewiseModel(bp, sl, ic, model_class)


@dataclass(frozen=True, eq=False)
class ApproxResult:
    model: PiecewiseModel
    error: float
    method: str
    grid: int


def l1_error(model, target, measure=None, grid=2048):
    """integral |F - h| d(mu), splitting panels at sign changes.

    Mesh nodes are the uniform grid joined with the model breakpoints;
    a bisection refines each panel where the residual F - h changes
    sign, so the trapezoid rule never integrates across a kink of the
    absolute value.
    """
    if grid < 1000:
        raise ResolutionError("l1_error needs grid >= 1e3")
    if measure is None:
        measure = lebesgue()
    a, b = target.support
    g = density_fn(measure, target)
    nodes = np.unique(
        np.clip(np.concatenate([np.linspace(a, b, int(grid) + 1), model.breakpoints]), a, b)
    )
    resid = np.asarray(target.cdf(nodes)) - np.asarray(model.evaluate(nodes))

    # bisect panels with a sign change and insert the crossing points
    sl, sr = resid[:-1], resid[1:]
    flip = np.nonzero(sl * sr < 0.0)[0]
    extra = np.empty(len(flip), dtype=np.float64)
    for t, p in enumerate(flip):
        lo, hi = nodes[p], nodes[p + 1]
        flo = resid[p]
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            fm = float(target.cdf(mid)) - float(model.evaluate(mid))
            if (fm > 0.0) == (flo > 0.0):
                lo = mid
                flo = fm
            else:
                hi = mid
        extra[t] = 0.5 * (lo + hi)
    if len(extra):
        nodes = np.unique(np.concatenate([nodes, extra]))
        resid = np.asarray(target.cdf(nodes)) - np.asarray(model.evaluate(nodes))

    dens = np.asarray(g(nodes))
    vals = np.abs(resid) * dens
    return float(np.sum(0.5 * (vals[:-1] + vals[1:]) * np.diff(nodes)))


# ---------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------


def optimal_p0_matched(target, k):
    """The matched-measure optimal K-constant model: breakpoints at the
    K-quantiles, levels at the mid-quantiles, error exactly 1/(4K)."""
    if k < 1 or int(k) != k:
        raise DomainError("k must be a positive integer")
    k = int(k)
    qs = np.arange(0, k + 1) / k
    bp = np.asarray(target.inverse(qs), dtype=np.float64)
    if np.any(np.diff(bp) <= 0):
        raise UnsupportedError("target quantiles are not strictly increasing at this k")
    levels = (2.0 * np.arange(1, k + 1) - 1.0) / (2.0 * k)
    model = make_model(bp, np.zeros(k), levels, "p0")
    return ApproxResult(model=model, error=0.25 / k, method="ClosedForm", grid=0)


def pushforward_density(data_model, measure, u):
    """Density of the query law pushed through F, i.e. g(F^-1(u))/f(F^-1(u)).

    `measure` may be a MeasureSpec or a bare CdfModel for the query law.
    """
    if isinstance(measure, CdfModel):
        measure = explicit(measure)
    if measure.kind == "matched":
        out = np.ones_like(np.asarray(u, dtype=np.float64))
        return out if out.ndim else float(out)
    g = density_fn(measure, data_model)
    x = np.asarray(data_model.inverse(u), dtype=np.float64)
    fv = np.asarray(data_model.density(x), dtype=np.float64)
    gv = np.asarray(g(x), dtype=np.float64)
    bad = (fv <= 0.0) & (gv > 0.0)
    if np.any(bad) or not np.all(np.isfinite(gv / np.where(fv > 0, fv, 1.0))):
        raise SingularityError(
            "query/data density ratio degenerates on the rank grid; "
            "use the matched measure or the direct DP oracle"
        )
    ratio = np.where(fv > 0.0, gv / np.where(fv > 0.0, fv, 1.0), 0.0)
    return ratio if ratio.ndim else float(ratio)


def adversarial_lower_bound(k):
    """Staircase witness: step count M = 2(K-1) and the error floor
    1/(64(K-1)) that any K-piece affine model must pay on it."""
    if k < 2 or int(k) != k:
        raise DomainError("adversarial witness needs k >= 2")
    k = int(k)
    return 2 * (k - 1), 1.0 / (64.0 * (k - 1))


def interpolation_upper_bound(target, k, smoothness, grid=4096):
    """Equal-width piecewise-linear interpolant plus its error ceiling.

    smoothness is ("lipschitz", M) with M >= sup density, giving the
    ceiling M*L/K, or ("c2", M) with M >= sup |F''|, giving M*L^2/(6K^2)
    (L = support length; both reduce to the unit-support forms M/K and
    M/(6K^2)).  The measured L1 error against the uniform measure is
    asserted to sit below the ceiling.
    """
    kind, mconst = smoothness
    if kind not in ("lipschitz", "c2"):
        raise UnsupportedError("smoothness must be ('lipschitz', M) or ('c2', M)")
    if not (np.isfinite(mconst) and mconst >= 0):
        raise DomainError("smoothness constant must be finite and nonnegative")
    if k < 1 or int(k) != k:
        raise DomainError("k must be a positive integer")
    k = int(k)
    a, b = target.support
    length = b - a
    bp = np.linspace(a, b, k + 1)
    vals = np.asarray(target.cdf(bp), dtype=np.float64)
    slopes = np.diff(vals) / np.diff(bp)
    intercepts = vals[:-1] - slopes * bp[:-1]
    model = make_model(bp, slopes, intercepts, "p1")
    measured = l1_error(model, target, lebesgue(), grid=max(grid, 40 * k, 1000))
    if kind == "lipschitz":
        ceiling = mconst * length / k
    else:
        ceiling = mconst * length * length / (6.0 * k * k)
    if measured > ceiling + 1e-9:
        raise InvariantViolation(
            f"interpolant error {measured} exceeds the {kind} ceiling {ceiling}"
        )
    return ApproxResult(model=model, error=measured, method="Interpolation", grid=grid), ceiling


def cdf_from_lipschitz(xs, fs):
    """Embed a 1-Lipschitz function on [0,1] into a CDF.

    Fhat = (F + 2x - F(0)) / (F(1) + 2 - F(0)).  The normaliser lies in
    [1, 3], Fhat(0) = 0 and Fhat(1) = 1 exactly, and the slope is at
    least 1/normaliser, so Fhat is a strictly increasing CDF.  Distances
    to any fit class containing constants and linears shrink by at most
    a factor 3, which is what makes the embedding hardness-preserving.

    Returns (model, normalizer) where model is a tabulated CdfModel.
    """
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    fs = np.ascontiguousarray(fs, dtype=np.float64)
    if xs.ndim != 1 or xs.shape != fs.shape or len(xs) < 2:
        raise DomainError("need matching 1-d tables of length >= 2")
    if abs(xs[0]) > 1e-12 or abs(xs[-1] - 1.0) > 1e-12:
        raise DomainError("the table must span [0, 1]")
    xs = xs.copy()
    xs[0], xs[-1] = 0.0, 1.0
    dx = np.diff(xs)
    if np.any(dx <= 0):
        raise DomainError("abscissae must be strictly increasing")
    if np.any(np.abs(np.diff(fs)) > dx + 1e-12):
        raise DomainError("table is not 1-Lipschitz")
    norm = fs[-1] + 2.0 - fs[0]
    if not (1.0 - 1e-12 <= norm <= 3.0 + 1e-12):
        raise InvariantViolation(f"normalizer {norm} outside [1, 3]")
    vals = (fs + 2.0 * xs - fs[0]) / norm
    vals[0] = 0.0
    vals[-1] = 1.0
    return tabulated_cdf(xs, vals), float(norm)
