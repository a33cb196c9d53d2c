"""Query measures: where integration/expectation weight comes from.

Three kinds:

* lebesgue  - uniform probability on the data model's support;
* matched   - d(mu) = dF, the data distribution itself;
* explicit  - some other CdfModel's law on the same support.

All are probability measures, so errors and deviations stay in
rank-fraction units regardless of support length.
"""

from dataclasses import dataclass

import numpy as np

from .distributions import CdfModel, parse_dist
from .errors import DomainError


@dataclass(frozen=True, eq=False)
class MeasureSpec:
    kind: str
    model: CdfModel = None


def lebesgue():
    return MeasureSpec("lebesgue")


def matched():
    return MeasureSpec("matched")


def explicit(model):
    return MeasureSpec("explicit", model)


def parse_mu(spec):
    """``lebesgue`` | ``matched`` | any distribution spec string."""
    s = spec.strip().lower()
    if s == "lebesgue":
        return lebesgue()
    if s == "matched":
        return matched()
    return explicit(parse_dist(spec))


def density_fn(measure, data_model):
    """Return g(x), the measure's density over the data support."""
    a, b = data_model.support
    if measure.kind == "lebesgue":
        h = 1.0 / (b - a)

        def g(x):
            x = np.asarray(x, dtype=np.float64)
            out = np.full_like(x, h)
            return out if out.ndim else float(out)

        return g
    if measure.kind == "matched":
        return data_model.density
    if measure.kind == "explicit":
        ma, mb = measure.model.support
        if not (np.isclose(ma, a) and np.isclose(mb, b)):
            raise DomainError(
                f"explicit measure support [{ma}, {mb}] does not match data support [{a}, {b}]"
            )
        return measure.model.density
    raise DomainError(f"unknown measure kind {measure.kind!r}")


def sample_queries(measure, data_model, count, seed):
    """Draw query points from the measure (inverse transform, Philox)."""
    gen = np.random.Generator(np.random.Philox(int(seed)))
    u = gen.random(int(count))
    if measure.kind == "lebesgue":
        a, b = data_model.support
        return a + u * (b - a)
    if measure.kind == "matched":
        return np.asarray(data_model.inverse(u), dtype=np.float64)
    if measure.kind == "explicit":
        return np.asarray(measure.model.inverse(u), dtype=np.float64)
    raise DomainError(f"unknown measure kind {measure.kind!r}")
