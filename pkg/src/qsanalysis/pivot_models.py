"""The five pivot-selection models.

For every model and array size n this module provides the position kernel
p_n(i) (n times the probability that the pivot ends at index i) and the
distribution of comparisons spent on choosing the pivot.
"""

import math
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from .distribution import Distribution
from .numerics import WideScalar


class Model(IntEnum):
    SIMPLE = 1
    MEDIAN_OF_3 = 2
    MEDIAN_OF_MEDIANS = 3
    RECURSIVE_MOM = 4
    RECURSIVE_MOM_INSERTION = 5


@dataclass(frozen=True)
class ModelConfig:
    model: Model
    q_min: int = 5
    n_b_max: int = 9

    def __post_init__(self):
        try:
            object.__setattr__(self, "model", Model(self.model))
        except ValueError:
            raise ValueError("model must be 1..5") from None
        if self.q_min < 1:
            raise ValueError("q_min must be >= 1")
        if self.n_b_max < 1:
            raise ValueError("n_b_max must be >= 1")

    def canonical(self):
        """Equal configs for equal behaviour: unused parameters are reset."""
        q = self.q_min if self.model >= Model.MEDIAN_OF_MEDIANS else 5
        nb = self.n_b_max if self.model == Model.RECURSIVE_MOM_INSERTION else 9
        return ModelConfig(self.model, q, nb)

    def uses_insertion(self, n):
        return self.model == Model.RECURSIVE_MOM_INSERTION and 2 <= n <= self.n_b_max


@dataclass(frozen=True)
class PivotKernel:
    n: int
    values: np.ndarray
    m: int = 1
    i_min: int = 0


@dataclass(frozen=True)
class SelectionCost:
    fixed_shift: int
    exact_dist: Distribution
    mean: float
    max: int


def is_power_of_3(m):
    while m > 1 and m % 3 == 0:
        m //= 3
    return m == 1


def sample_size(n, q_min):
    """Largest power of 3, at least 9, with q_min <= n / m."""
    if n < 9 * q_min:
        raise ValueError("sample_size needs n >= 9*q_min")
    m = 9
    while m * 3 * q_min <= n:
        m *= 3
    return m


def i_min_of(m):
    """Guaranteed number of sample elements on each side of the recursive median."""
    if m < 3 or not is_power_of_3(m):
        raise ValueError("m must be a power of 3, at least 3")
    k = round(math.log(m, 3))
    return 2**k - 1


def sample_for(cfg, n):
    """Sample size used to pick the pivot of n elements (1 means a fixed position)."""
    model = cfg.model
    if n < 3 or model == Model.SIMPLE:
        return 1
    if model == Model.MEDIAN_OF_3 or n < 9 * cfg.q_min:
        return 3
    if model == Model.MEDIAN_OF_MEDIANS:
        return 9
    return sample_size(n, cfg.q_min)


def _log_poly(n, i_min, i):
    """log of prod_{j < i_min} (i - j)(n - 1 - i - j) for interior i."""
    if i_min * len(i) <= 200_000:
        acc = np.zeros(len(i))
        for j in range(i_min):
            acc += np.log(i - j) + np.log(n - 1 - i - j)
        return acc
    i = i.astype(np.float64)
    return (gammaln(i + 1) - gammaln(i - i_min + 1)
            + gammaln(n - i) - gammaln(n - i - i_min))


def _mirror(half, n):
    out = np.empty(n)
    h = len(half)
    out[:h] = half
    out[n - h:] = half[::-1]
    return out


def kernel_for_sample(n, m):
    """Kernel of the recursive median of an m-element sample among n."""
    if m == 1 or n < 3:
        return PivotKernel(n, np.ones(n), 1, 0)
    if m == 3:
        i = np.arange((n + 1) // 2, dtype=np.float64)
        half = 6.0 * i * (n - 1 - i) / ((n - 1) * (n - 2))
        return PivotKernel(n, _mirror(half, n), 3, 1)
    i_min = i_min_of(m)
    if n < 2 * i_min + 1:
        raise ValueError(f"sample of {m} does not fit into {n} elements")
    half_len = (n + 1) // 2
    half = np.zeros(half_len)
    i = np.arange(i_min, half_len, dtype=np.int64)
    lg = _log_poly(n, i_min, i)
    # normalize in log space so the exponentials stay near 1
    vals = np.exp(lg - lg.max())
    half[i_min:] = vals
    full = _mirror(half, n)
    # numpy sums pairwise, which keeps the error near 1e-16 * log2(n)
    full *= n / full.sum()
    full = _mirror(full[:half_len], n)
    return PivotKernel(n, full, m, i_min)


def pivot_kernel(cfg, n, m=None):
    """p_n for the model in cfg; a forced sample size m overrides the rule."""
    if n < 2:
        raise ValueError("pivot_kernel needs n >= 2")
    if m is None:
        m = sample_for(cfg, n)
    return kernel_for_sample(n, m)


@lru_cache(maxsize=None)
def _durand_exact(n):
    def ff(x, k):
        # falling factorial x (x-1) ... (x-k+1)
        r = 1
        for j in range(k):
            r *= x - j
        return r

    den = ff(n - 1, 8)
    vals = []
    for i in range(n):
        r = n - 1 - i
        poly = 3 * ff(i, 3) * ff(r, 5) + 10 * ff(i, 4) * ff(r, 4) + 3 * ff(i, 5) * ff(r, 3)
        vals.append(Fraction(36 * poly, den))
    return vals


def pivot_kernel_exact_mom(n):
    """Exact kernel of the median of three medians of nine elements."""
    if n < 9:
        raise ValueError("exact median-of-medians kernel needs n >= 9")
    vals = _durand_exact(n)
    return PivotKernel(n, np.array([float(v) for v in vals]), 9, 3)


def exact_kernel_fractions(cfg, n):
    """The kernel as exact rationals (for the integer oracle)."""
    m = sample_for(cfg, n)
    if m == 1:
        return [Fraction(1)] * n
    if m == 3:
        return [Fraction(6 * i * (n - 1 - i), (n - 1) * (n - 2)) for i in range(n)]
    i_min = i_min_of(m)
    poly = []
    for i in range(n):
        p = 1
        for j in range(i_min):
            p *= max(i - j, 0) * max(n - 1 - i - j, 0)
        poly.append(p)
    s = sum(poly)
    return [Fraction(n * p, s) for p in poly]


@lru_cache(maxsize=None)
def _binomial_selection(t):
    """Exact distribution of comparisons for t median-of-three steps.

    Each step costs 2 comparisons with probability 1/3 and 3 otherwise.
    """
    if t <= 2000:
        den = 3**t
        vals = [WideScalar.from_ratio(math.comb(t, k) * 2**k, den) for k in range(t + 1)]
        return Distribution.from_scalars(2 * t, vals)
    k = np.arange(t + 1, dtype=np.float64)
    lg2 = (gammaln(t + 1) - gammaln(k + 1) - gammaln(t - k + 1)) / math.log(2) + k - t * math.log2(3)
    # gammaln carries ~1e-12 relative error at this size; the pmf sums to 1
    # exactly, so renormalize with a compensated sum
    top = lg2.max()
    w = np.exp2(lg2 - top)
    lg2 = lg2 - top - math.log2(math.fsum(w))
    e = np.floor(lg2).astype(np.int64)
    return Distribution(2 * t, 2.0 ** (lg2 - e), e)


def selection_cost(cfg, n, m=None):
    """Comparisons spent on choosing the pivot among n elements."""
    if m is None:
        m = sample_for(cfg, n) if n >= 2 else 1
    return _selection_for_sample(m)


@lru_cache(maxsize=None)
def _selection_for_sample(m):
    if m == 1:
        return SelectionCost(0, Distribution.from_mapping({0: 1}), 0.0, 0)
    t = (m - 1) // 2
    return SelectionCost(3 * t, _binomial_selection(t), 8.0 * t / 3.0, 3 * t)


def exact_selection_fractions(m):
    if m == 1:
        return {0: Fraction(1)}
    t = (m - 1) // 2
    return {2 * t + k: Fraction(math.comb(t, k) * 2**k, 3**t) for k in range(t + 1)}
