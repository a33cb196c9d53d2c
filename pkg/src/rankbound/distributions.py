"""Parametric CDF models on finite supports, with exact inverses.

Every model is a continuous, strictly-increasing-a.e. distribution
function F on a closed interval [a, b], exposing F, its inverse, its
density, and the density's infimum/supremum over the support.  Keys are
drawn by inverse-transform sampling from a counter-based generator
(numpy's Philox4x64-10), so a (model, seed) pair reproduces the same
sorted key array on every platform.

Kinds and their CLI spellings:

    uniform:a,b              flat on [a, b]
    logistic:center,scale,a,b   logistic law truncated to [a, b]
    exp:rate,a,b             exponential law truncated to [a, b]
    pow:p                    F(x) = x**p on [0, 1]
    staircase:M              M-step adversarial staircase on [0, 1]

The staircase with M steps is F(x) = (1/M)*(M*(x - i/M))**2 + i/M for
x in [i/M, (i+1)/M]; each step is a scaled parabola, so the density
sweeps 0..2 within every step.  staircase:1 coincides with pow:2.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

_KINDS = ("uniform", "logistic", "exp", "pow", "staircase", "tabulated")


def _expit(z):
    # tanh form is overflow-safe on both tails
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def _logit(u):
    return np.log(u) - np.log1p(-u)


@dataclass(frozen=True, eq=False)
class CdfModel:
    """A distribution function on the closed support [a, b].

    density_bounds holds (inf, sup) of the density over the support;
    the infimum may be 0.0 and the supremum may be math.inf (pow with
    p < 1).  Operations that need a positive or finite bound check it
    and raise rather than silently degrade.
    """

    kind: str
    params: tuple
    support: tuple
    density_bounds: tuple
    _tab: tuple = field(default=None, repr=False)

    # -- evaluation ---------------------------------------------------

    def cdf(self, x):
        """F(x), clamped so F(a) == 0.0 and F(b) == 1.0 exactly."""
        a, b = self.support
        x = np.asarray(x, dtype=np.float64)
        if np.any(np.isnan(x)):
            raise DomainError("cdf argument is NaN")
        xc = np.clip(x, a, b)
        u = self._cdf_core(xc)
        u = np.where(xc <= a, 0.0, u)
        u = np.where(xc >= b, 1.0, u)
        return u if u.ndim else float(u)

    def inverse(self, u):
        """Quantile function; inverse(0) == a and inverse(1) == b exactly."""
        a, b = self.support
        u = np.asarray(u, dtype=np.float64)
        if np.any(u < 0.0) or np.any(u > 1.0):
            raise DomainError("quantile argument outside [0, 1]")
        x = self._inv_core(np.clip(u, 0.0, 1.0))
        x = np.where(u <= 0.0, a, x)
        x = np.where(u >= 1.0, b, x)
        x = np.clip(x, a, b)
        return x if x.ndim else float(x)

    def density(self, x):
        a, b = self.support
        x = np.asarray(x, dtype=np.float64)
        if np.any(np.isnan(x)) or np.any(x < a) or np.any(x > b):
            raise DomainError("density argument outside the support")
        f = self._pdf_core(x)
        return f if f.ndim else float(f)

    # -- kind dispatch ------------------------------------------------

    def _cdf_core(self, x):
        k = self.kind
        if k == "uniform":
            a, b = self.support
            return (x - a) / (b - a)
        if k == "logistic":
            c, s, a, b = self.params
            la = _expit((a - c) / s)
            lb = _expit((b - c) / s)
            return (_expit((x - c) / s) - la) / (lb - la)
        if k == "exp":
            r, a, b = self.params
            return np.expm1(-r * (x - a)) / np.expm1(-r * (b - a))
        if k == "pow":
            (p,) = self.params
            return x**p
        if k == "staircase":
            (m,) = self.params
            i = np.minimum(np.floor(x * m), m - 1)
            return (m * (x - i / m)) ** 2 / m + i / m
        if k == "tabulated":
            xs, fs = self._tab
            return np.interp(x, xs, fs)
        raise DomainError(f"unknown kind {k!r}")

    def _inv_core(self, u):
        k = self.kind
        if k == "uniform":
            a, b = self.support
            return a + u * (b - a)
        if k == "logistic":
            c, s, a, b = self.params
            la = _expit((a - c) / s)
            lb = _expit((b - c) / s)
            return c + s * _logit(la + u * (lb - la))
        if k == "exp":
            r, a, b = self.params
            return a - np.log1p(u * np.expm1(-r * (b - a))) / r
        if k == "pow":
            (p,) = self.params
            return u ** (1.0 / p)
        if k == "staircase":
            (m,) = self.params
            i = np.minimum(np.floor(u * m), m - 1)
            return i / m + np.sqrt(np.maximum(u - i / m, 0.0) / m)
        if k == "tabulated":
            xs, fs = self._tab
            return np.interp(u, fs, xs)
        raise DomainError(f"unknown kind {k!r}")

    def _pdf_core(self, x):
        k = self.kind
        if k == "uniform":
            a, b = self.support
            return np.full_like(x, 1.0 / (b - a))
        if k == "logistic":
            c, s, a, b = self.params
            la = _expit((a - c) / s)
            lb = _expit((b - c) / s)
            z = (x - c) / s
            dens = 1.0 / (4.0 * s * np.cosh(0.5 * z) ** 2)
            return dens / (lb - la)
        if k == "exp":
            r, a, b = self.params
            return r * np.exp(-r * (x - a)) / -np.expm1(-r * (b - a))
        if k == "pow":
            (p,) = self.params
            with np.errstate(divide="ignore"):
                return p * x ** (p - 1.0)
        if k == "staircase":
            (m,) = self.params
            i = np.minimum(np.floor(x * m), m - 1)
            return 2.0 * m * (x - i / m)
        if k == "tabulated":
            xs, fs = self._tab
            idx = np.clip(np.searchsorted(xs, x, side="right") - 1, 0, len(xs) - 2)
            return (fs[idx + 1] - fs[idx]) / (xs[idx + 1] - xs[idx])
        raise DomainError(f"unknown kind {k!r}")


# -- constructors -----------------------------------------------------


def _check_interval(a, b):
    if not (np.isfinite(a) and np.isfinite(b) and a < b):
        raise DomainError(f"support must be a finite interval, got [{a}, {b}]")


def uniform(a, b):
    _check_interval(a, b)
    d = 1.0 / (b - a)
    return CdfModel("uniform", (float(a), float(b)), (float(a), float(b)), (d, d))


def truncated_logistic(center, scale, a, b):
    _check_interval(a, b)
    if scale <= 0:
        raise DomainError("logistic scale must be positive")
    m = CdfModel("logistic", (float(center), float(scale), float(a), float(b)), (float(a), float(b)), (0.0, 0.0))
    # density is unimodal with mode at `center`: extremes sit at the
    # endpoints, plus the mode when it lies inside the support
    cand = [float(m._pdf_core(np.float64(a))), float(m._pdf_core(np.float64(b)))]
    if a <= center <= b:
        cand.append(float(m._pdf_core(np.float64(center))))
    object.__setattr__(m, "density_bounds", (min(cand), max(cand)))
    return m


def truncated_exponential(rate, a, b):
    _check_interval(a, b)
    if rate <= 0:
        raise DomainError("exponential rate must be positive")
    m = CdfModel("exp", (float(rate), float(a), float(b)), (float(a), float(b)), (0.0, 0.0))
    lo = float(m._pdf_core(np.float64(b)))
    hi = float(m._pdf_core(np.float64(a)))
    object.__setattr__(m, "density_bounds", (lo, hi))
    return m


def power_law(p):
    if p <= 0:
        raise DomainError("power-law exponent must be positive")
    p = float(p)
    if p == 1.0:
        bounds = (1.0, 1.0)
    elif p > 1.0:
        bounds = (0.0, p)
    else:
        bounds = (p, np.inf)
    return CdfModel("pow", (p,), (0.0, 1.0), bounds)


def staircase(m):
    if int(m) != m or m < 1:
        raise DomainError("staircase step count must be an integer >= 1")
    return CdfModel("staircase", (int(m),), (0.0, 1.0), (0.0, 2.0))


def tabulated_cdf(xs, fs):
    """Piecewise-linear CDF through the given table (strictly increasing)."""
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    fs = np.ascontiguousarray(fs, dtype=np.float64)
    if xs.ndim != 1 or xs.shape != fs.shape or len(xs) < 2:
        raise DomainError("tabulated CDF needs matching 1-d tables of length >= 2")
    if np.any(np.diff(xs) <= 0) or np.any(np.diff(fs) <= 0):
        raise DomainError("tabulated CDF tables must be strictly increasing")
    if fs[0] != 0.0 or fs[-1] != 1.0:
        raise DomainError("tabulated CDF must run from 0 to 1")
    slopes = np.diff(fs) / np.diff(xs)
    m = CdfModel(
        "tabulated",
        (len(xs),),
        (float(xs[0]), float(xs[-1])),
        (float(slopes.min()), float(slopes.max())),
    )
    object.__setattr__(m, "_tab", (xs, fs))
    return m


# -- sampling ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class KeySample:
    """A sorted array of i.i.d. keys plus its provenance."""

    keys: np.ndarray
    n: int
    seed: int
    source: CdfModel


def sample_iid(model, n, seed):
    """Draw n keys from `model`, sorted ascending.

    Uniform variates come from Philox4x64-10 keyed with `seed` (fixed
    counter-based engine, reproducible across platforms), then map
    through the exact quantile function.
    """
    if n < 1:
        raise DomainError("sample size must be >= 1")
    gen = np.random.Generator(np.random.Philox(int(seed)))
    u = gen.random(int(n))
    keys = np.sort(np.asarray(model.inverse(u), dtype=np.float64))
    return KeySample(keys=keys, n=int(n), seed=int(seed), source=model)


# -- CLI spec parsing -------------------------------------------------


def parse_dist(spec):
    """Parse a distribution spec string like ``uniform:0,1``."""
    spec = spec.strip()
    name, _, arg = spec.partition(":")
    try:
        vals = [float(v) for v in arg.split(",")] if arg else []
    except ValueError as e:
        raise DomainError(f"bad numeric field in {spec!r}") from e
    if name == "uniform" and len(vals) == 2:
        return uniform(*vals)
    if name == "logistic" and len(vals) == 4:
        return truncated_logistic(*vals)
    if name == "exp" and len(vals) == 3:
        return truncated_exponential(*vals)
    if name == "pow" and len(vals) == 1:
        return power_law(vals[0])
    if name == "staircase" and len(vals) == 1:
        return staircase(vals[0])
    raise DomainError(
        f"cannot parse distribution {spec!r}; expected "
        "uniform:a,b | logistic:center,scale,a,b | exp:rate,a,b | pow:p | staircase:M"
    )
