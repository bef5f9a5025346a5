"""Instrumented partitioning schemes, Quicksort, insertion sort and heapsort.

Every sorter is written once inside :func:`make_kernels` and built twice:
as plain Python (works on lists of any ordered keys, including records) and
JIT-compiled with numba (numpy arrays of ints or floats).  Keys are only
ever compared through the comparator functions passed to the factory, which
count comparisons in a context array ``ctx``:

    ctx[CMP]    element comparisons
    ctx[MOV]    data movements (assignments with an array element operand)
    ctx[SEL]    comparisons spent on choosing pivots
    ctx[DEPTH]  largest number of entries on the Quicksort stack

The killer adversary in :mod:`empirics` plugs in its own comparators that
keep additional state behind these four slots.
"""

from dataclasses import dataclass
from enum import IntEnum
from functools import lru_cache

import numpy as np

CMP, MOV, SEL, DEPTH = 0, 1, 2, 3
NCOUNTERS = 4
STACKSIZE = 2 * 64


class Scheme(IntEnum):
    SWEEP_SIMPLE = 0
    SWEEP_EXTENDED = 1
    CLASSIC_COLLISION = 2
    CLASSIC_COLLISION_EXTENDED = 3
    NEW_COLLISION = 4


THREE_WAY = (Scheme.SWEEP_EXTENDED, Scheme.CLASSIC_COLLISION_EXTENDED)


class HeapVariant(IntEnum):
    CLASSIC = 0
    BOTTOM_UP = 1


@dataclass
class SortStats:
    comparisons: int = 0
    movements: int = 0
    max_stack_depth: int = 0
    selection_comparisons: int = 0


@dataclass
class PartitionResult:
    """Subarray 1 is a[left..end1], subarray 2 is a[start2..right].

    Anything strictly between holds elements equal to the pivot (a single
    pivot for two-way schemes).
    """

    end1: int
    start2: int


def _lt(ctx, x, y):
    ctx[0] += 1
    return x < y


def _le(ctx, x, y):
    ctx[0] += 1
    return x <= y


def _eq(ctx, x, y):
    ctx[0] += 1
    return x == y


def make_kernels(wrap, lt, le, eq):
    """Build every sorter with the given comparators; ``wrap`` is the identity or a JIT."""
    LT, LE, EQ = wrap(lt), wrap(le), wrap(eq)

    @wrap
    def sweep_simple(a, left, right, ipart, ctx):
        partval = a[ipart]
        a[ipart] = a[left]
        ctx[1] += 2
        i = left
        for j in range(left + 1, right + 1):
            if LT(ctx, a[j], partval):
                i += 1
                t = a[i]
                a[i] = a[j]
                a[j] = t
                ctx[1] += 3
        a[left] = a[i]
        a[i] = partval
        ctx[1] += 2
        return i - 1, i + 1

    @wrap
    def sweep_extended(a, left, right, ipart, ctx):
        partval = a[ipart]
        ctx[1] += 1
        j = left
        for i in range(left, right + 1):
            if LT(ctx, a[i], partval):
                t = a[j]
                a[j] = a[i]
                a[i] = t
                ctx[1] += 3
                j += 1
        i = j
        for k in range(i, right + 1):
            if EQ(ctx, a[k], partval):
                t = a[i]
                a[i] = a[k]
                a[k] = t
                ctx[1] += 3
                i += 1
        return j - 1, i

    @wrap
    def classic_collision(a, left, right, ipart, ctx):
        partval = a[ipart]
        ctx[1] += 1
        i = left
        j = right
        while True:
            while LT(ctx, a[i], partval):
                i += 1
            while LT(ctx, partval, a[j]):
                j -= 1
            if i <= j:
                t = a[i]
                a[i] = a[j]
                a[j] = t
                ctx[1] += 3
                i += 1
                j -= 1
            if not i <= j:
                break
        return j, i

    @wrap
    def classic_collision_extended(a, left, right, ipart, ctx):
        partval = a[ipart]
        ctx[1] += 1
        j = left
        k = right
        while True:
            while LT(ctx, a[j], partval):
                j += 1
            while j < k and LE(ctx, partval, a[k]):
                k -= 1
            if k <= j:
                break
            t = a[j]
            a[j] = a[k]
            a[k] = t
            ctx[1] += 3
            j += 1
            k -= 1
        k = j
        i = right
        while True:
            while k <= i and EQ(ctx, partval, a[k]):
                k += 1
            while k <= i and LT(ctx, partval, a[i]):
                i -= 1
            if i <= k:
                break
            t = a[k]
            a[k] = a[i]
            a[i] = t
            ctx[1] += 3
            k += 1
            i -= 1
        return j - 1, i + 1

    @wrap
    def new_collision(a, left, right, ipart, ctx):
        partval = a[ipart]
        a[ipart] = a[right]
        a[right] = partval
        ctx[1] += 3
        i = left
        j = right - 1
        while True:
            while LT(ctx, a[i], partval):
                i += 1
            while i < j and LT(ctx, partval, a[j]):
                j -= 1
            if j <= i:
                break
            t = a[i]
            a[i] = a[j]
            a[j] = t
            ctx[1] += 3
            i += 1
            j -= 1
        a[right] = a[i]
        a[i] = partval
        ctx[1] += 2
        return i - 1, i + 1

    @wrap
    def partition(scheme, a, left, right, ipart, ctx):
        if scheme == 0:
            return sweep_simple(a, left, right, ipart, ctx)
        if scheme == 1:
            return sweep_extended(a, left, right, ipart, ctx)
        if scheme == 2:
            return classic_collision(a, left, right, ipart, ctx)
        if scheme == 3:
            return classic_collision_extended(a, left, right, ipart, ctx)
        return new_collision(a, left, right, ipart, ctx)

    @wrap
    def insertion(a, left, right, ctx):
        for i in range(left + 1, right + 1):
            j = i - 1
            if LT(ctx, a[i], a[j]):
                temp = a[i]
                a[i] = a[j]
                ctx[1] += 2
                while j > left and LT(ctx, temp, a[j - 1]):
                    a[j] = a[j - 1]
                    ctx[1] += 1
                    j -= 1
                a[j] = temp
                ctx[1] += 1

    @wrap
    def med3(a, x, y, z, ctx):
        # index of the median of a[x], a[y], a[z]; 2 or 3 comparisons
        if LE(ctx, a[x], a[y]):
            if LE(ctx, a[y], a[z]):
                return y
            return z if LT(ctx, a[x], a[z]) else x
        if LE(ctx, a[z], a[y]):
            return y
        return z if LT(ctx, a[z], a[x]) else x

    @wrap
    def medofmed(a, base, m, inc, ctx):
        # Recursive median of medians of the m = 9 * 3**d elements
        # a[base], a[base+inc], ..., evaluated as a cascade with one buffer
        # of three medians per level, which reproduces the comparison order
        # of the recursive formulation exactly.  Returns an index into a.
        d = 0
        t = m // 9
        while t > 1:
            t //= 3
            d += 1
        buf = np.empty((d + 1) * 3, np.int64)
        cnt = np.zeros(d + 1, np.int64)
        r = base
        for b in range(m // 9):
            o = base + 9 * b * inc
            i0 = med3(a, o, o + inc, o + 2 * inc, ctx)
            i1 = med3(a, o + 3 * inc, o + 4 * inc, o + 5 * inc, ctx)
            i2 = med3(a, o + 6 * inc, o + 7 * inc, o + 8 * inc, ctx)
            r = med3(a, i0, i1, i2, ctx)
            lvl = 0
            while lvl < d:
                buf[3 * lvl + cnt[lvl]] = r
                cnt[lvl] += 1
                if cnt[lvl] < 3:
                    break
                cnt[lvl] = 0
                r = med3(a, buf[3 * lvl], buf[3 * lvl + 1], buf[3 * lvl + 2], ctx)
                lvl += 1
        return r

    @wrap
    def select_pivot(a, left, nt, model, q_min, forced_m, ctx):
        """Index of the pivot for a[left .. left+nt-1] under the given model."""
        if model == 1 or nt < 3:
            return left + nt // 2
        m = forced_m
        if m == 0:
            if model == 2 or nt < 9 * q_min:
                m = 3
            elif model == 3:
                m = 9
            else:
                nc = nt // (q_min * 9)
                m = 1
                while m * 3 <= nc:
                    m *= 3
                m *= 9
        if m == 3:
            q = nt // 4
            if q == 0:
                return med3(a, left, left + 1, left + 2, ctx)
            k = left + nt // 2
            return med3(a, left + q, k, k + q, ctx)
        return medofmed(a, left, m, (nt - 1) // (m - 1), ctx)

    @wrap
    def quicksort(a, n, model, threeway, q_min, nbmax, ctx):
        stack = np.empty(128, np.int64)
        top = 0
        if n > 1:
            stack[0] = 0
            stack[1] = n - 1
            top = 2
        while top > 0:
            top -= 1
            right = stack[top]
            top -= 1
            left = stack[top]
            while left < right:
                nt = right - left + 1
                if model == 5 and nt <= nbmax:
                    insertion(a, left, right, ctx)
                    break
                c0 = ctx[0]
                ipart = select_pivot(a, left, nt, model, q_min, 0, ctx)
                ctx[2] += ctx[0] - c0
                if threeway:
                    e1, s2 = classic_collision_extended(a, left, right, ipart, ctx)
                    j = e1 + 1
                    i = s2 - 1
                else:
                    e1, s2 = new_collision(a, left, right, ipart, ctx)
                    i = e1 + 1
                    j = i
                if j - left <= right - i:
                    stack[top] = i + 1
                    stack[top + 1] = right
                    top += 2
                    right = j if j == 0 else j - 1
                else:
                    stack[top] = left
                    stack[top + 1] = j if j == 0 else j - 1
                    top += 2
                    left = i + 1
                if top > ctx[3]:
                    ctx[3] = top

    @wrap
    def sift_classic(a, root, end, ctx):
        x = a[root]
        ctx[1] += 1
        i = root
        while True:
            c = 2 * i + 1
            if c >= end:
                break
            if c + 1 < end and LT(ctx, a[c], a[c + 1]):
                c += 1
            if not LT(ctx, x, a[c]):
                break
            a[i] = a[c]
            ctx[1] += 1
            i = c
        a[i] = x
        ctx[1] += 1

    @wrap
    def sift_bottom_up(a, root, end, ctx):
        # descend to a leaf along larger children, climb back to the slot
        # of a[root], then shift that path up by one level
        j = root
        while 2 * j + 2 < end:
            j = 2 * j + 2 if LT(ctx, a[2 * j + 1], a[2 * j + 2]) else 2 * j + 1
        if 2 * j + 1 < end:
            j = 2 * j + 1
        x = a[root]
        ctx[1] += 1
        while j > root and LT(ctx, a[j], x):
            j = (j - 1) // 2
        t = a[j]
        a[j] = x
        ctx[1] += 2
        while j > root:
            j = (j - 1) // 2
            u = a[j]
            a[j] = t
            t = u
            ctx[1] += 2

    @wrap
    def heapsort(a, n, bottom_up, ctx):
        for r in range(n // 2 - 1, -1, -1):
            if bottom_up:
                sift_bottom_up(a, r, n, ctx)
            else:
                sift_classic(a, r, n, ctx)
        for end in range(n - 1, 0, -1):
            t = a[0]
            a[0] = a[end]
            a[end] = t
            ctx[1] += 3
            if bottom_up:
                sift_bottom_up(a, 0, end, ctx)
            else:
                sift_classic(a, 0, end, ctx)

    return dict(
        partition=partition, insertion=insertion, med3=med3, medofmed=medofmed,
        select_pivot=select_pivot, quicksort=quicksort, heapsort=heapsort,
    )


def _identity(f):
    return f


@lru_cache(maxsize=None)
def python_kernels():
    return make_kernels(_identity, _lt, _le, _eq)


@lru_cache(maxsize=None)
def jit_kernels():
    from numba import njit

    return make_kernels(njit(cache=False), _lt, _le, _eq)


def _use_jit(a, jit):
    if jit is None:
        return isinstance(a, np.ndarray) and a.dtype.kind in "iuf"
    return jit


def _kernels(a, jit):
    return jit_kernels() if _use_jit(a, jit) else python_kernels()


def new_ctx(jit, extra=0):
    if jit:
        return np.zeros(NCOUNTERS + extra, dtype=np.int64)
    return [0] * (NCOUNTERS + extra)


def stats_from(ctx):
    return SortStats(int(ctx[CMP]), int(ctx[MOV]), int(ctx[DEPTH]) // 2, int(ctx[SEL]))


def _prepare(a, jit):
    """Containers the kernels can index: the list itself or a numpy array."""
    if _use_jit(a, jit) and not isinstance(a, np.ndarray):
        raise TypeError("the compiled sorters need a numpy array of ints or floats")
    return a


def partition(alg, ipart, a, jit=None):
    """Partition a in place around a[ipart] with the given scheme."""
    alg = Scheme(alg)
    n = len(a)
    use = _use_jit(a, jit)
    ctx = new_ctx(use)
    if n == 0:
        return PartitionResult(-1, 0), stats_from(ctx)
    if not 0 <= ipart < n:
        raise IndexError("ipart out of range")
    k = _kernels(a, jit)
    e1, s2 = k["partition"](int(alg), _prepare(a, jit), 0, n - 1, ipart, ctx)
    return PartitionResult(int(e1), int(s2)), stats_from(ctx)


def quicksort(a, model=5, threeway=False, q_min=5, n_basis_max=15, jit=None):
    """Sort a in place with the iterative Quicksort; returns the counters.

    model selects the pivot rule: 1 middle element, 2 median of three,
    3 median of three medians, 4 adaptive recursive median of medians,
    5 like 4 plus straight insertion for subarrays of at most n_basis_max.
    """
    if model not in (1, 2, 3, 4, 5):
        raise ValueError("model must be 1..5")
    if q_min < 1 or n_basis_max < 3:
        raise ValueError("need q_min >= 1 and n_basis_max >= 3")
    use = _use_jit(a, jit)
    ctx = new_ctx(use)
    _kernels(a, jit)["quicksort"](_prepare(a, jit), len(a), model, bool(threeway),
                                  q_min, n_basis_max, ctx)
    return stats_from(ctx)


def insertion_sort(a, jit=None):
    use = _use_jit(a, jit)
    ctx = new_ctx(use)
    if len(a) > 1:
        _kernels(a, jit)["insertion"](_prepare(a, jit), 0, len(a) - 1, ctx)
    return stats_from(ctx)


def heapsort(a, variant=HeapVariant.BOTTOM_UP, jit=None):
    variant = HeapVariant(variant)
    use = _use_jit(a, jit)
    ctx = new_ctx(use)
    _kernels(a, jit)["heapsort"](_prepare(a, jit), len(a), variant == HeapVariant.BOTTOM_UP, ctx)
    return stats_from(ctx)


def medofmed_depth(m):
    """Number of combining levels above the m = 9 basis."""
    d = 0
    while m > 9:
        m //= 3
        d += 1
    return d


def medofmed(m, inc, a, jit=None):
    """Index of the recursive median of medians of a[0], a[inc], ..., a[(m-1)*inc].

    Returns (index, comparisons).
    """
    t = m
    while t > 1 and t % 3 == 0:
        t //= 3
    if m < 9 or t != 1:
        raise ValueError("m must be a power of 3, at least 9")
    if len(a) < (m - 1) * inc + 1:
        raise ValueError("array too short for this sample")
    use = _use_jit(a, jit)
    ctx = new_ctx(use)
    r = _kernels(a, jit)["medofmed"](_prepare(a, jit), 0, m, inc, ctx)
    return int(r), int(ctx[CMP])


def medofmed_recursive(m, inc, a):
    """Direct recursive formulation, used to check the cascade."""
    ctx = [0]

    def le(x, y):
        ctx[0] += 1
        return x <= y

    def lt(x, y):
        ctx[0] += 1
        return x < y

    def med3(i, j, k):
        if le(a[i], a[j]):
            if le(a[j], a[k]):
                return j
            return k if lt(a[i], a[k]) else i
        if le(a[k], a[j]):
            return j
        return k if lt(a[k], a[i]) else i

    def rec(m, base):
        if m == 9:
            return med3(med3(base, base + inc, base + 2 * inc),
                        med3(base + 3 * inc, base + 4 * inc, base + 5 * inc),
                        med3(base + 6 * inc, base + 7 * inc, base + 8 * inc))
        m3 = m // 3
        return med3(rec(m3, base), rec(m3, base + m3 * inc), rec(m3, base + 2 * m3 * inc))

    return rec(m, 0), ctx[0]


@dataclass(frozen=True)
class Record:
    """32-byte benchmark record: a 4-byte key and 28 bytes of payload."""

    key: int
    payload: tuple = (0, 0, 0, 0, 0, 0, 0)

    def __lt__(self, other):
        return self.key < other.key

    def __le__(self, other):
        return self.key <= other.key

    def __eq__(self, other):
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)
