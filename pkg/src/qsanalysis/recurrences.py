"""Dynamic-programming solvers for comparison counts.

``DistributionTable`` builds the full frequency distributions f_0 .. f_N,
``ScalarTable`` the averages and maxima.  Both are memoized per model
configuration.  ``exact_frequency_distribution`` is an independent rational
implementation used as an oracle for small n.
"""

import math
import sys
import time
from fractions import Fraction
from functools import lru_cache

import numpy as np
from numba import njit

from .distribution import Distribution, convolve, delta, pairwise_sum
from .numerics import WideScalar
from .pivot_models import Model, ModelConfig, i_min_of, pivot_kernel, sample_for, selection_cost

def harmonic(n, order=1):
    """H_n^(order) as a float, summed with fsum."""
    return math.fsum(1.0 / k**order for k in range(1, n + 1))


def insertion_closed_forms(n):
    """(average, maximum) comparisons of straight insertion on n distinct keys."""
    if n < 0:
        raise ValueError("n must be >= 0")
    avg = n * (n + 3) / 4 - harmonic(n) if n > 0 else 0.0
    return avg, n * (n - 1) // 2


def _insertion_step(n):
    # inserting the n-th element costs k comparisons, k = 1..n-1, and n-1 twice
    w = [1] * (n - 1)
    w[-1] = 2
    return Distribution.from_mapping({k + 1: w[k] for k in range(n - 1)})


class DistributionTable:
    """Memoized f_0 .. f_N for one model configuration.

    selection='shift' applies the worst-case selection cost as a shift of
    the support; selection='convolve' convolves with the exact selection
    cost distribution instead.
    """

    def __init__(self, cfg, selection="shift"):
        if selection not in ("shift", "convolve"):
            raise ValueError("selection must be 'shift' or 'convolve'")
        self.cfg = cfg.canonical()
        self.selection = selection
        self.entries = [delta(0), delta(0)]

    def __len__(self):
        return len(self.entries)

    def get(self, n, progress=False):
        if n < 0:
            raise ValueError("n must be >= 0")
        start = time.monotonic()
        first = len(self.entries)
        while len(self.entries) <= n:
            k = len(self.entries)
            self.entries.append(self._compute(k))
            if progress:
                _report(k, first, n, start)
        return self.entries[n]

    def _compute(self, n):
        cfg = self.cfg
        f = self.entries
        if cfg.uses_insertion(n):
            return convolve(_insertion_step(n), f[n - 1])
        kern = pivot_kernel(cfg, n).values
        terms = _eq8_terms(f, kern, n)
        inner = pairwise_sum(terms)
        part = Distribution.from_mapping({n - 1: Fraction(1, 2), n: Fraction(1, 2)})
        out = convolve(inner, part)
        sel = selection_cost(cfg, n)
        if self.selection == "shift":
            return out.shift(sel.fixed_shift)
        return convolve(out, sel.exact_dist)


def _eq8_terms(f, kern, n):
    """binom(n-1, i) p(i) f_i * f_{n-1-i}, with the symmetric half doubled."""
    binom = WideScalar(1.0)
    for i in range((n - 1) // 2 + 1):
        if i > 0:
            binom = binom * WideScalar(float(n - i)) / WideScalar(float(i))
        p = kern[i]
        if p == 0.0:
            continue
        c = binom * WideScalar(p)
        if i != n - 1 - i:
            c = c * WideScalar(2.0)
        yield convolve(f[i], f[n - 1 - i], c)


def _report(k, first, n, start):
    # model-1 cost grows roughly like k**5, use that for the estimate
    done = sum(j**5 for j in range(first, k + 1))
    todo = sum(j**5 for j in range(k + 1, n + 1))
    el = time.monotonic() - start
    eta = el / done * todo if done else 0.0
    print(f"\rf_{k} of f_{n}  elapsed {el:7.1f}s  eta {eta:7.1f}s", end="", file=sys.stderr)
    if k == n:
        print(file=sys.stderr)


_TABLES = {}


def distribution_table(cfg, selection="shift"):
    key = (cfg.canonical(), selection)
    if key not in _TABLES:
        _TABLES[key] = DistributionTable(cfg, selection)
    return _TABLES[key]


def frequency_distribution(cfg, n, selection="shift", progress=False):
    """f_n: number of the n! inputs that need exactly j comparisons."""
    return distribution_table(cfg, selection).get(n, progress)


# ---------------------------------------------------------------------------
# averages and extremes


@njit(cache=True)
def _sample(model, q_min, n):
    if n < 3 or model == 1:
        return 1
    if model == 2 or n < 9 * q_min:
        return 3
    if model == 3:
        return 9
    m = 9
    while m * 3 * q_min <= n:
        m *= 3
    return m


@njit(cache=True)
def _i_min(m):
    if m == 1:
        return 0
    k = 0
    while m > 1:
        m //= 3
        k += 1
    return 2**k - 1


@njit(cache=True)
def _max_table(model, q_min, nb_max, N):
    """C-hat_0..N by an exact pruned scan over the feasible splits.

    With PM the running maximum of C-hat, PM[b] + PM[n-1-i] bounds
    C-hat_i + C-hat_{n-1-i} for every i in [i, b]; whole blocks that cannot
    beat the best split found so far are skipped with galloping widths.
    """
    mx = np.zeros(N + 1, np.int64)
    pm = np.zeros(N + 1, np.int64)
    for k in range(2, N + 1):
        if model == 5 and k <= nb_max:
            mx[k] = k * (k - 1) // 2
        else:
            m = _sample(model, q_min, k)
            lo = _i_min(m)
            mid = (k - 1) // 2
            best = mx[lo] + mx[k - 1 - lo]
            i = lo + 1
            w = 1
            while i <= mid:
                b = min(i + w - 1, mid)
                if pm[b] + pm[k - 1 - i] <= best:
                    i = b + 1
                    w *= 2
                elif w > 1:
                    w //= 2
                else:
                    g = mx[i] + mx[k - 1 - i]
                    if g > best:
                        best = g
                    i += 1
            mx[k] = 3 * ((m - 1) // 2) + k + best
        pm[k] = max(pm[k - 1], mx[k])
    return mx


class ScalarTable:
    """Averages, maxima and minima for n = 0 .. N."""

    # minima are needed only at small n and use plain full scans
    MIN_SCAN_LIMIT = 20_000

    def __init__(self, cfg, selection="shift"):
        self.cfg = cfg.canonical()
        self.selection = selection
        self.averages = [0.0, 0.0]
        self.maxima = np.zeros(2, dtype=np.int64)
        self.minima = [0, 0]

    def _sel(self, n, mean):
        s = selection_cost(self.cfg, n)
        return s.mean if mean else s.fixed_shift

    def extend_averages(self, n):
        cfg = self.cfg
        avg = self.averages
        arr = np.zeros(max(n + 1, len(avg)))
        arr[:len(avg)] = avg
        while len(avg) <= n:
            k = len(avg)
            if cfg.uses_insertion(k):
                avg.append(insertion_closed_forms(k)[0])
            else:
                p = pivot_kernel(cfg, k).values
                s = float(np.dot(p, arr[:k]))
                avg.append(self._sel(k, self.selection == "mean") + k - 0.5 + 2.0 * s / k)
            arr[k] = avg[-1]
        return avg[n]

    def extend_maxima(self, n):
        if len(self.maxima) <= n:
            # the kernel is cheap; grow geometrically to avoid repeated runs
            N = max(n, 2 * len(self.maxima))
            cfg = self.cfg
            self.maxima = _max_table(int(cfg.model), cfg.q_min, cfg.n_b_max, N)
        return int(self.maxima[n])

    def extend_minima(self, n):
        if n > self.MIN_SCAN_LIMIT:
            raise ValueError(f"minima are only tabulated up to n={self.MIN_SCAN_LIMIT}")
        cfg = self.cfg
        mn = self.minima
        while len(mn) <= n:
            k = len(mn)
            if cfg.uses_insertion(k):
                mn.append(k - 1)
                continue
            m = sample_for(cfg, k)
            lo = 0 if m == 1 else i_min_of(m)
            a = np.array(mn[lo:k - lo])
            mn.append(selection_cost(cfg, k).fixed_shift + k - 1 + int((a + a[::-1]).min()))
        return mn[n]


def full_scan_maxima(cfg, N):
    """C-hat_0..N scanning every feasible split (reference for _max_table)."""
    cfg = cfg.canonical()
    mx = [0, 0]
    for k in range(2, N + 1):
        if cfg.uses_insertion(k):
            mx.append(k * (k - 1) // 2)
            continue
        m = sample_for(cfg, k)
        lo = 0 if m == 1 else i_min_of(m)
        a = np.array(mx[lo:k - lo])
        mx.append(selection_cost(cfg, k).fixed_shift + k + int((a + a[::-1]).max()))
    return mx


def non_extreme_maxima(cfg, N):
    """Sizes n <= N whose maximum is not attained at the extreme feasible split."""
    cfg = cfg.canonical()
    mx = full_scan_maxima(cfg, N)
    out = []
    for k in range(2, N + 1):
        if cfg.uses_insertion(k):
            continue
        m = sample_for(cfg, k)
        lo = 0 if m == 1 else i_min_of(m)
        sel = selection_cost(cfg, k).fixed_shift
        if mx[k] != sel + k + mx[lo] + mx[k - 1 - lo]:
            out.append(k)
    return out


_SCALARS = {}


def scalar_table(cfg, selection="shift"):
    key = (cfg.canonical(), selection)
    if key not in _SCALARS:
        _SCALARS[key] = ScalarTable(cfg, selection)
    return _SCALARS[key]


def average_comparisons(cfg, n, selection="shift"):
    """C-bar_n from the average recurrence.

    selection='shift' charges the worst-case selection cost (consistent with
    the distribution engine); selection='mean' charges its exact mean.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    return scalar_table(cfg, selection).extend_averages(n)


def max_comparisons(cfg, n):
    """C-hat_n, the largest comparison count over all inputs of size n."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return scalar_table(cfg).extend_maxima(n)


def min_comparisons(cfg, n):
    """Smallest support point of f_n (same recurrence with min for max)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return scalar_table(cfg).extend_minima(n)


# ---------------------------------------------------------------------------
# exact rational oracle


def _dconv(g, h):
    out = {}
    for a, x in g.items():
        for b, y in h.items():
            out[a + b] = out.get(a + b, 0) + x * y
    return out


@lru_cache(maxsize=None)
def _exact(cfg, n, selection):
    from .pivot_models import exact_kernel_fractions, exact_selection_fractions

    if n <= 1:
        return ((0, Fraction(1)),)
    prev = dict(_exact(cfg, n - 1, selection)) if n > 1 else None
    if cfg.uses_insertion(n):
        step = {k: Fraction(1) for k in range(1, n - 1)}
        step[n - 1] = Fraction(2)
        return tuple(sorted(_dconv(step, prev).items()))
    p = exact_kernel_fractions(cfg, n)
    inner = {}
    for i in range(n):
        if p[i] == 0:
            continue
        c = math.comb(n - 1, i) * p[i]
        term = _dconv(dict(_exact(cfg, i, selection)), dict(_exact(cfg, n - 1 - i, selection)))
        for j, w in term.items():
            inner[j] = inner.get(j, 0) + c * w
    out = _dconv(inner, {n - 1: Fraction(1, 2), n: Fraction(1, 2)})
    m = sample_for(cfg, n)
    if selection == "shift":
        s = 3 * ((m - 1) // 2)
        out = {j + s: w for j, w in out.items()}
    else:
        out = _dconv(out, exact_selection_fractions(m))
    return tuple(sorted((j, w) for j, w in out.items() if w != 0))


def exact_frequency_distribution(cfg, n, selection="shift"):
    """f_n in exact rational arithmetic as {j: Fraction}; meant for n <= 12."""
    return dict(_exact(cfg.canonical(), n, selection))
