"""Distributions over comparison counts with wide-exponent weights.

A :class:`Distribution` stores weights for the contiguous support
``lo .. lo + len - 1`` as a float64 mantissa array and an int64 exponent
array.  Convolution is direct; to stay inside the double range each operand
is cut into runs whose exponents differ by a bounded amount, every run is
scaled to ordinary floats, and the partial products are merged back with
wide addition.
"""

import math

import numpy as np

from .numerics import (
    WideScalar,
    ZERO_EXP,
    wide_add,
    wide_from_floats,
    wide_from_scalars,
    wide_get,
    wide_normalize,
    wide_scaled_floats,
    wide_sum,
)

# largest exponent spread inside one convolution run; products of two runs
# then stay above 2**-960 and never lose precision to subnormals
BAND = 480


class Distribution:
    """Non-negative weights on the integer interval [lo, hi]."""

    __slots__ = ("lo", "mant", "expo")

    def __init__(self, lo, mant, expo, trim=True):
        mant = np.asarray(mant, dtype=np.float64)
        expo = np.asarray(expo, dtype=np.int64)
        if trim:
            nz = np.flatnonzero(mant)
            if len(nz) == 0:
                lo, mant, expo = 0, mant[:0], expo[:0]
            else:
                a, b = nz[0], nz[-1] + 1
                lo, mant, expo = lo + int(a), mant[a:b], expo[a:b]
        self.lo = int(lo)
        self.mant = mant
        self.expo = expo

    @classmethod
    def empty(cls):
        return cls(0, np.zeros(0), np.zeros(0, dtype=np.int64))

    @classmethod
    def from_floats(cls, lo, values):
        m, e = wide_from_floats(values)
        return cls(lo, m, e)

    @classmethod
    def from_scalars(cls, lo, values):
        m, e = wide_from_scalars([WideScalar.from_fraction(v) if not isinstance(v, WideScalar)
                                  else v for v in values])
        return cls(lo, m, e)

    @classmethod
    def from_mapping(cls, mapping):
        """Build from {j: weight}; weights may be ints, floats, Fractions or WideScalars."""
        if not mapping:
            return cls.empty()
        lo, hi = min(mapping), max(mapping)
        vals = [mapping.get(j, 0) for j in range(lo, hi + 1)]
        return cls.from_scalars(lo, [v if isinstance(v, WideScalar) else WideScalar.from_fraction(v)
                                     for v in vals])

    def __len__(self):
        return len(self.mant)

    @property
    def hi(self):
        return self.lo + len(self.mant) - 1

    def is_empty(self):
        return len(self.mant) == 0

    def __getitem__(self, j):
        k = j - self.lo
        if k < 0 or k >= len(self.mant):
            return WideScalar()
        return wide_get(self.mant, self.expo, k)

    def items(self):
        for k in range(len(self.mant)):
            yield self.lo + k, wide_get(self.mant, self.expo, k)

    def to_dict(self):
        return dict(self.items())

    def total(self):
        return wide_sum(self.mant, self.expo)

    def shift(self, k):
        return Distribution(self.lo + k, self.mant, self.expo, trim=False)

    def scaled(self, c):
        c = c if isinstance(c, WideScalar) else WideScalar.from_fraction(c)
        if c.is_zero() or self.is_empty():
            return Distribution.empty()
        m, e = wide_normalize(self.mant * c.mantissa, self.expo + c.exponent)
        return Distribution(self.lo, m, e, trim=False)

    def scaled_floats(self):
        """(weights / 2**E, E) with E the largest exponent present."""
        nz = self.mant != 0.0
        E = int(self.expo[nz].max())
        return wide_scaled_floats(self.mant, self.expo, E), E

    def __eq__(self, other):
        if not isinstance(other, Distribution):
            return NotImplemented
        return (self.lo == other.lo and np.array_equal(self.mant, other.mant)
                and np.array_equal(self.expo[self.mant != 0], other.expo[other.mant != 0]))

    def __repr__(self):
        body = ", ".join(f"{j}: {w}" for j, w in list(self.items())[:6])
        more = ", ..." if len(self) > 6 else ""
        return f"Distribution({{{body}{more}}})"


def delta(k):
    """Unit mass at k."""
    if k < 0:
        raise ValueError("delta needs k >= 0")
    return Distribution(k, np.ones(1), np.zeros(1, dtype=np.int64), trim=False)


def _runs(mant, expo):
    """Split indices into contiguous runs with exponent spread <= BAND.

    Yields (start, stop, E) with E the largest exponent in the run.
    """
    n = len(mant)
    nz = mant != 0.0
    i = 0
    while i < n:
        while i < n and not nz[i]:
            i += 1
        if i == n:
            return
        seg = expo[i:]
        e0 = seg[0]
        masked = np.where(nz[i:], seg, e0)
        hi = np.maximum.accumulate(masked)
        lo = np.minimum.accumulate(masked)
        over = np.flatnonzero(hi - lo > BAND)
        stop = i + (int(over[0]) if len(over) else len(seg))
        yield i, stop, int(hi[stop - i - 1])
        i = stop


def convolve(g, h, c=None):
    """(g * h)(j) = sum_k g(k) h(j - k), optionally times the scalar c."""
    if g.is_empty() or h.is_empty():
        return Distribution.empty()
    lo = g.lo + h.lo
    size = len(g) + len(h) - 1
    ce = 0
    cm = 1.0
    if c is not None:
        c = c if isinstance(c, WideScalar) else WideScalar.from_fraction(c)
        if c.is_zero():
            return Distribution.empty()
        cm, ce = c.mantissa, c.exponent
    gr = list(_runs(g.mant, g.expo))
    hr = list(_runs(h.mant, h.expo))
    if len(gr) == 1 and len(hr) == 1:
        (ga, gb, ge), (ha, hb, he) = gr[0], hr[0]
        x = wide_scaled_floats(g.mant[ga:gb], g.expo[ga:gb], ge) * cm
        y = wide_scaled_floats(h.mant[ha:hb], h.expo[ha:hb], he)
        prod = np.convolve(x, y)
        m, e = wide_normalize(prod, np.full(len(prod), ge + he + ce, dtype=np.int64))
        return Distribution(lo + ga + ha, m, e)
    out_m = np.zeros(size)
    out_e = np.full(size, ZERO_EXP, dtype=np.int64)
    gs = [(a, wide_scaled_floats(g.mant[a:b], g.expo[a:b], E) * cm, E) for a, b, E in gr]
    hs = [(a, wide_scaled_floats(h.mant[a:b], h.expo[a:b], E), E) for a, b, E in hr]
    for ga, x, ge in gs:
        for ha, y, he in hs:
            prod = np.convolve(x, y)
            s = ga + ha
            t = s + len(prod)
            pm, pe = wide_normalize(prod, np.full(len(prod), ge + he + ce, dtype=np.int64))
            out_m[s:t], out_e[s:t] = wide_add(out_m[s:t], out_e[s:t], pm, pe)
    return Distribution(lo, out_m, out_e)


def add(g, h):
    """Pointwise sum of two distributions."""
    if g.is_empty():
        return h
    if h.is_empty():
        return g
    lo = min(g.lo, h.lo)
    hi = max(g.hi, h.hi)
    size = hi - lo + 1
    m = np.zeros(size)
    e = np.full(size, ZERO_EXP, dtype=np.int64)
    a = g.lo - lo
    m[a:a + len(g)], e[a:a + len(g)] = g.mant, g.expo
    b = h.lo - lo
    hm = np.zeros(size)
    he = np.full(size, ZERO_EXP, dtype=np.int64)
    hm[b:b + len(h)], he[b:b + len(h)] = h.mant, h.expo
    m, e = wide_add(m, e, hm, he)
    return Distribution(lo, m, e)


def mix(acc, g, c):
    """acc + c * g."""
    return add(acc, g.scaled(c))


def pairwise_sum(terms):
    """Sum an iterable of distributions with a balanced (binary counter) tree.

    Only O(log n) partial sums are alive at any time, and the summation order
    depends on the number of terms alone, so results are reproducible.
    """
    stack = []  # (level, distribution)
    for t in terms:
        level = 0
        while stack and stack[-1][0] == level:
            t = add(stack.pop()[1], t)
            level += 1
        stack.append((level, t))
    out = Distribution.empty()
    while stack:
        out = add(stack.pop()[1], out)
    return out


def _check(f):
    if f.is_empty():
        raise ValueError("empty distribution")


def _moments(f):
    w, _ = f.scaled_floats()
    j = np.arange(f.lo, f.hi + 1, dtype=np.float64)
    s0 = math.fsum(w)
    mu = math.fsum(j * w) / s0
    return w, j, s0, mu


def mean(f):
    """Expected value of the support point under weights f."""
    _check(f)
    return WideScalar(_moments(f)[3])


def stddev_of(f):
    """Standard deviation, two-pass with compensated sums."""
    _check(f)
    w, j, s0, mu = _moments(f)
    d = j - mu
    # second pass corrects the mean by the residual first moment
    corr = math.fsum(d * w) / s0
    var = math.fsum(d * d * w) / s0 - corr * corr
    return WideScalar(math.sqrt(max(var, 0.0)))


def tail_weight(f, threshold):
    """Sum of f(j) over j strictly greater than threshold."""
    if f.is_empty():
        return WideScalar()
    first = math.floor(threshold) + 1
    k = max(first - f.lo, 0)
    if k >= len(f):
        return WideScalar()
    m, e = f.mant[k:], f.expo[k:]
    nz = m != 0.0
    E = int(e[nz].max())
    vals = wide_scaled_floats(m, e, E)[::-1]
    return WideScalar(math.fsum(vals), E)


def two_point(a, b, wa, wb):
    """Distribution with weight wa at a and wb at b (a < b)."""
    return Distribution.from_mapping({a: wa, b: wb})
