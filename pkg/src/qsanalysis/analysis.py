"""Quantities derived from the distributions and recurrences."""

import math
from dataclasses import dataclass, field

import numpy as np

from .distribution import mean, tail_weight
from .numerics import WideScalar, ws_factorial, ws_to_decimal
from .pivot_models import Model, ModelConfig
from .recurrences import frequency_distribution, harmonic, max_comparisons, scalar_table


@dataclass(frozen=True)
class BadCaseQuery:
    cfg: ModelConfig
    n: int
    tau: float

    def __post_init__(self):
        if not self.tau > 1:
            raise ValueError("tau must be > 1")
        if self.n < 0:
            raise ValueError("n must be >= 0")


def bad_case_probability(q, progress=False):
    """Probability that a random input needs more than tau * C-bar_n comparisons."""
    f = frequency_distribution(q.cfg, q.n, progress=progress)
    threshold = q.tau * float(mean(f))
    return tail_weight(f, threshold) / ws_factorial(q.n)


def probability_ratio(cfg, tau, n_hi=500, n_lo=250, progress=False):
    """p_{n_hi, tau} / p_{n_lo, tau}."""
    lo = bad_case_probability(BadCaseQuery(cfg, n_lo, tau), progress)
    hi = bad_case_probability(BadCaseQuery(cfg, n_hi, tau), progress)
    if lo.is_zero():
        raise ZeroDivisionError(f"p_{n_lo} is zero at tau={tau}; the ratio is undefined")
    return float(hi / lo)


_UNITS = (("s", 60.0), ("m", 60.0), ("h", 24.0), ("d", 365.0))


def _fmt_amount(x):
    # x is a WideScalar; 2 significant digits below 1, one decimal below
    # 100, whole numbers below 1000, then mantissa-exponent form
    v = float(x)
    if v < 1:
        return f"{v:.2g}"
    if v < 100:
        return f"{v:.1f}"
    if v < 1000:
        return f"{v:.0f}"
    return ws_to_decimal(x, 2)


def expected_time_to_event(p, interval_ms=1.0):
    """Expected waiting time for an event of probability p per sort,
    with one sort started every interval_ms milliseconds."""
    p = p if isinstance(p, WideScalar) else WideScalar(float(p))
    if p.is_zero():
        return "never"
    t = WideScalar(interval_ms / 1000.0) / p
    for unit, factor in _UNITS:
        if float(t) < factor:
            return f"{_fmt_amount(t)} {unit}"
        t = t / WideScalar(factor)
    return f"{_fmt_amount(t)} a"


def iliopoulos_sigma(n):
    """Closed-form standard deviation of comparisons for the middle-pivot Quicksort."""
    if n < 1:
        raise ValueError("n must be >= 1")
    h1 = harmonic(n)
    h2 = harmonic(n, 2)
    r = 7.0 * n * n - 4.0 * (n + 1) ** 2 * h2 - 2.0 * (n + 1) * h1 + 13.0 * n
    if r < 0:
        # tiny negative values are rounding noise around an exact zero (n <= 2)
        if r > -1e-9 * n * n:
            return 0.0
        raise ValueError("negative radicand")
    return math.sqrt(r)


@dataclass
class BoundReport:
    n_max: int
    max_ratio: float
    argmax: int
    violations: int
    first_violation: int
    leading: dict = field(default_factory=dict)


def worst_case_bound_check(n_max=10**6, q_min=5, n_b_max=9, fit_n=1000, c=3.8, expo=1.37):
    """Compare model-5 maxima with c * n**expo and report C-hat_n / n**2 for models 1-3."""
    cfg = ModelConfig(Model.RECURSIVE_MOM_INSERTION, q_min, n_b_max)
    max_comparisons(cfg, n_max)
    mx = scalar_table(cfg).maxima[:n_max + 1]
    n = np.arange(2, n_max + 1)
    r = mx[2:] / (c * n.astype(np.float64) ** expo)
    bad = np.flatnonzero(r > 1.0)
    leading = {m: max_comparisons(ModelConfig(m, q_min), fit_n) / fit_n**2 for m in (1, 2, 3)}
    return BoundReport(n_max, float(r.max()), int(n[r.argmax()]), len(bad),
                       int(n[bad[0]]) if len(bad) else 0, leading)
