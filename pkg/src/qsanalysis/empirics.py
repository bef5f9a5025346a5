"""Brute-force oracles, pivot simulation, the killer adversary and benchmarks."""

import math
import statistics
import time
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import sorters as S
from .pivot_models import Model

# ---------------------------------------------------------------------------
# enumeration over all permutations


def _make_enumerators(wrap, kern):
    partition = kern["partition"]
    quicksort = kern["quicksort"]

    @wrap
    def next_permutation(p):
        # lexicographic successor in place; False after the last one
        n = len(p)
        i = n - 2
        while i >= 0 and p[i] >= p[i + 1]:
            i -= 1
        if i < 0:
            return False
        j = n - 1
        while p[j] <= p[i]:
            j -= 1
        t = p[i]
        p[i] = p[j]
        p[j] = t
        lo = i + 1
        hi = n - 1
        while lo < hi:
            t = p[lo]
            p[lo] = p[hi]
            p[hi] = t
            lo += 1
            hi -= 1
        return True

    @wrap
    def partitions(scheme, n, hist, ctx):
        p = np.arange(n)
        buf = np.empty(n, np.int64)
        runs = 0
        cs = 0
        ms = 0
        while True:
            for k in range(n):
                buf[k] = p[k]
            ctx[0] = 0
            ctx[1] = 0
            partition(scheme, buf, 0, n - 1, n // 2, ctx)
            hist[ctx[0]] += 1
            cs += ctx[0]
            ms += ctx[1]
            runs += 1
            if not next_permutation(p):
                break
        return runs, cs, ms

    @wrap
    def sorts(n, model, threeway, q_min, nbmax, hist, ctx):
        p = np.arange(n)
        buf = np.empty(n, np.int64)
        runs = 0
        while True:
            for k in range(n):
                buf[k] = p[k]
            ctx[0] = 0
            quicksort(buf, n, model, threeway, q_min, nbmax, ctx)
            for k in range(n):
                if buf[k] != k:
                    return -1
            hist[ctx[0]] += 1
            runs += 1
            if not next_permutation(p):
                break
        return runs

    return dict(partitions=partitions, sorts=sorts, next_permutation=next_permutation)


@lru_cache(maxsize=None)
def _enumerators(jit):
    if jit:
        from numba import njit

        return _make_enumerators(njit, S.jit_kernels())
    return _make_enumerators(lambda f: f, S.python_kernels())


def _hist_dict(hist):
    return {int(j): int(c) for j, c in enumerate(hist) if c}


@dataclass
class PartitionEnumeration:
    n: int
    runs: int
    C_avg: Fraction
    M_avg: Fraction
    histogram: dict


def enumerate_partition_stats(alg, n, jit=True):
    """Exact average comparisons/movements of one partitioning step.

    Runs the scheme on every permutation of n distinct keys with the pivot
    taken from index n // 2.
    """
    if not 2 <= n <= 11:
        raise ValueError("n must be in 2..11")
    ctx = S.new_ctx(True) if jit else S.new_ctx(False)
    hist = np.zeros(4 * n + 8, dtype=np.int64)
    runs, cs, ms = _enumerators(jit)["partitions"](int(S.Scheme(alg)), n, hist, ctx)
    nf = math.factorial(n)
    if runs != nf:
        raise AssertionError(f"enumerated {runs} permutations, expected {nf}")
    return PartitionEnumeration(n, int(runs), Fraction(int(cs), nf), Fraction(int(ms), nf),
                                _hist_dict(hist))


def enumerate_sort_histogram(n, model=1, threeway=False, q_min=5, n_basis_max=9, jit=True):
    """Exact comparison-count histogram of the Quicksort over all n! inputs.

    The defaults (model 1, two-way) are the middle-element pivot with the
    collision partition and no insertion-sort cutoff.
    """
    if not 0 <= n <= 10:
        raise ValueError("n must be in 0..10")
    if n < 2:
        return {0: 1}
    ctx = S.new_ctx(True) if jit else S.new_ctx(False)
    hist = np.zeros(4 * n * n + 64 + 3 * n * n, dtype=np.int64)
    runs = _enumerators(jit)["sorts"](n, model, bool(threeway), q_min, n_basis_max, hist, ctx)
    if runs < 0:
        raise AssertionError("quicksort left a permutation unsorted")
    if runs != math.factorial(n):
        raise AssertionError(f"enumerated {runs} permutations, expected {math.factorial(n)}")
    return _hist_dict(hist)


# ---------------------------------------------------------------------------
# Monte-Carlo pivot positions


@lru_cache(maxsize=None)
def _simulator():
    from numba import njit

    kern = S.jit_kernels()
    select_pivot = kern["select_pivot"]
    partition = kern["partition"]

    @njit
    def run(u, n, trials, model, q_min, forced_m, bin_width, hist):
        a = np.empty(n, np.int64)
        ctx = np.zeros(4, np.int64)
        pos = 0
        for t in range(trials):
            for k in range(n):
                a[k] = k
            # Fisher-Yates driven by uniform doubles
            for k in range(n - 1, 0, -1):
                j = int(u[pos] * (k + 1))
                pos += 1
                s = a[k]
                a[k] = a[j]
                a[j] = s
            ip = select_pivot(a, 0, n, model, q_min, forced_m, ctx)
            e1, s2 = partition(4, a, 0, n - 1, ip, ctx)
            hist[(e1 + 1) // bin_width] += 1

    return run


def simulate_pivot_positions(cfg, n, trials, bin_width=10, seed=0, m=None, chunk=20_000):
    """Histogram of final pivot positions over random permutations.

    The pivot is chosen by the model's selection rule (a forced sample size
    m overrides it) and placed with the collision partition.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if cfg.model == Model.RECURSIVE_MOM_INSERTION and n <= cfg.n_b_max:
        raise ValueError("model 5 does not choose a pivot at this size")
    run = _simulator()
    hist = np.zeros((n + bin_width - 1) // bin_width, dtype=np.int64)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    done = 0
    while done < trials:
        c = min(chunk, trials - done)
        u = rng.random(c * (n - 1))
        run(u, n, c, int(cfg.model), cfg.q_min, int(m or 0), bin_width, hist)
        done += c
    return hist


# ---------------------------------------------------------------------------
# killer adversary

NSOLID, CAND, GAS, VAL = 4, 5, 6, 7


def _adv_cmp(ctx, x, y):
    ctx[0] += 1
    gas = ctx[6]
    if ctx[7 + x] == gas and ctx[7 + y] == gas:
        if x == ctx[5]:
            ctx[7 + x] = ctx[4]
        else:
            ctx[7 + y] = ctx[4]
        ctx[4] += 1
    if ctx[7 + x] == gas:
        ctx[5] = x
    elif ctx[7 + y] == gas:
        ctx[5] = y
    return ctx[7 + x] - ctx[7 + y]


def _make_adversary_kernels(wrap):
    cmp = wrap(_adv_cmp)

    def lt(ctx, x, y):
        return cmp(ctx, x, y) < 0

    def le(ctx, x, y):
        return cmp(ctx, x, y) <= 0

    def eq(ctx, x, y):
        return cmp(ctx, x, y) == 0

    return S.make_kernels(wrap, lt, le, eq)


@lru_cache(maxsize=None)
def adversary_kernels(jit):
    if jit:
        from numba import njit

        return _make_adversary_kernels(njit)
    return _make_adversary_kernels(lambda f: f)


class AdversaryError(RuntimeError):
    pass


@dataclass(frozen=True)
class SorterSpec:
    """Which instrumented sorter to run and with which options."""

    kind: str = "quicksort"  # quicksort, heapsort or insertion
    model: int = 5
    threeway: bool = False
    q_min: int = 5
    n_basis_max: int = 15
    variant: int = int(S.HeapVariant.BOTTOM_UP)

    def __post_init__(self):
        if self.kind not in ("quicksort", "heapsort", "insertion"):
            raise ValueError(f"unknown sorter kind {self.kind!r}")
        if self.model not in (1, 2, 3, 4, 5):
            raise ValueError("model must be 1..5")

    def run(self, kern, a, ctx):
        if self.kind == "quicksort":
            kern["quicksort"](a, len(a), self.model, self.threeway, self.q_min,
                              self.n_basis_max, ctx)
        elif self.kind == "heapsort":
            kern["heapsort"](a, len(a), self.variant == S.HeapVariant.BOTTOM_UP, ctx)
        elif len(a) > 1:
            kern["insertion"](a, 0, len(a) - 1, ctx)

    def label(self):
        if self.kind == "quicksort":
            return f"quicksort-m{self.model}-{'3way' if self.threeway else '2way'}"
        if self.kind == "heapsort":
            return "heapsort-" + ("bottomup" if self.variant else "classic")
        return "insertion"


@dataclass
class AdversaryResult:
    n: int
    comparisons: int
    replay_comparisons: int
    input: np.ndarray


def killer_adversary(sorter, n, jit=True):
    """Run McIlroy's gas/solid adversary against ``sorter`` on n items.

    Returns the comparison count, the materialized bad input and the count
    obtained by sorting that input again with ordinary comparisons; the two
    must agree, otherwise the sorter did not consult the comparator for
    every decision and AdversaryError is raised.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    kern = adversary_kernels(jit)
    ids = np.arange(n, dtype=np.int64) if jit else list(range(n))
    ctx = S.new_ctx(jit, extra=3 + n)
    ctx[GAS] = n - 1
    for k in range(n):
        ctx[VAL + k] = n - 1
    sorter.run(kern, ids, ctx)
    comps = int(ctx[S.CMP])
    vals = np.array(ctx[VAL:VAL + n], dtype=np.int64)
    order = vals[np.asarray(ids, dtype=np.int64)] if n else vals
    if sorted(int(i) for i in ids) != list(range(n)) or np.any(np.diff(order) < 0):
        raise AdversaryError("sorter output is not ordered by the adversary's keys")
    # a correct comparison sort compares every adjacent output pair, and
    # comparing two gas items freezes one, so at most one can be left
    if n - int(ctx[NSOLID]) > 1:
        raise AdversaryError(f"{n - int(ctx[NSOLID])} items were never resolved through the comparator")
    replay = vals.copy() if jit else [int(v) for v in vals]
    rctx = S.new_ctx(jit)
    sorter.run(S.jit_kernels() if jit else S.python_kernels(), replay, rctx)
    rcomps = int(rctx[S.CMP])
    if rcomps != comps:
        raise AdversaryError(f"replay needed {rcomps} comparisons, adversary run {comps}")
    return AdversaryResult(n, comps, rcomps, vals)


# ---------------------------------------------------------------------------
# datasets and benchmarks


class DataKind(Enum):
    RANDOM = "random"
    INCREASING = "increasing"
    DECREASING = "decreasing"
    EQUAL = "equal"
    ORGAN_PIPE = "organpipe"
    TWO_VALUED = "twovalued"


class ElementKind(Enum):
    INT4 = "int"
    FLOAT8 = "double"
    RECORD32 = "record"


EQUAL_VALUE = 7


@dataclass(frozen=True)
class DatasetSpec:
    kind: DataKind
    n: int
    seed: int = 0
    element_kind: ElementKind = ElementKind.INT4


def _keys(spec):
    n = spec.n
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(spec.seed)))
    k = spec.kind
    if k == DataKind.RANDOM:
        if spec.element_kind == ElementKind.FLOAT8:
            return rng.random(n)
        return rng.integers(-(2**31), 2**31, n, dtype=np.int64)
    if k == DataKind.INCREASING:
        return np.arange(n, dtype=np.int64)
    if k == DataKind.DECREASING:
        return np.arange(n - 1, -1, -1, dtype=np.int64)
    if k == DataKind.EQUAL:
        return np.full(n, EQUAL_VALUE, dtype=np.int64)
    if k == DataKind.ORGAN_PIPE:
        i = np.arange(n, dtype=np.int64)
        return np.minimum(i, n - 1 - i)
    return rng.integers(0, 2, n, dtype=np.int64)


def generate_dataset(spec):
    """Deterministic input for (kind, n, seed, element kind).

    Int4 gives an int32 array, Float8 a float64 array and Record32 a list of
    :class:`sorters.Record` whose payload numbers the records.
    """
    if spec.n < 0:
        raise ValueError("n must be >= 0")
    keys = _keys(spec)
    if spec.element_kind == ElementKind.INT4:
        return keys.astype(np.int32)
    if spec.element_kind == ElementKind.FLOAT8:
        return keys.astype(np.float64)
    return [S.Record(int(k), (i, 0, 0, 0, 0, 0, 0)) for i, k in enumerate(keys)]


def run_sorter(sorter, data):
    """Sort a copy of data; returns (sorted copy, SortStats)."""
    jit = isinstance(data, np.ndarray)
    a = data.copy() if jit else list(data)
    ctx = S.new_ctx(jit)
    sorter.run(S.jit_kernels() if jit else S.python_kernels(), a, ctx)
    return a, S.stats_from(ctx)


def benchmark(sorter, spec, repeats=3):
    """Median wall time over fresh copies plus the counters of one pass.

    Numeric data runs through the compiled sorters, records through the
    Python ones; the counters are always on, so times include them.
    """
    if repeats < 3:
        raise ValueError("repeats must be >= 3")
    data = generate_dataset(spec)
    _, stats = run_sorter(sorter, data)  # also warms up the JIT
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        run_sorter(sorter, data)
        times.append((time.perf_counter() - t0) * 1000.0)
    return {"median_ms": statistics.median(times), "comparisons": stats.comparisons,
            "movements": stats.movements}
