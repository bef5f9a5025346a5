"""Wide-exponent arithmetic.

Frequencies grow like n! (about 1e1134 at n = 500) and tail probabilities
shrink far below the double range, so values are kept as a double mantissa
in [1, 2) times a power of two with an unbounded integer exponent.

Scalars are represented by :class:`WideScalar`.  Whole arrays of weights use
a struct-of-arrays layout (a float64 mantissa array and an int64 exponent
array) manipulated by the ``wide_*`` helpers below.
"""

import math
from decimal import Decimal, localcontext, ROUND_HALF_EVEN
from fractions import Fraction
from functools import total_ordering

import numpy as np

EXP_LIMIT = 2**63 - 1
# exponent stored for zero entries in wide arrays; far below anything real
ZERO_EXP = -(2**60)


def _split(x):
    """Split a positive finite float into (mantissa in [1, 2), exponent)."""
    m, e = math.frexp(x)
    return m * 2.0, e - 1


@total_ordering
class WideScalar:
    """Non-negative real ``mantissa * 2**exponent`` with an unbounded exponent.

    Instances are immutable.  Zero has mantissa 0 and exponent 0.
    """

    __slots__ = ("_m", "_e")

    def __init__(self, mantissa=0.0, exponent=0):
        mantissa = float(mantissa)
        if mantissa < 0 or not math.isfinite(mantissa):
            raise ValueError(f"WideScalar must be finite and non-negative, got {mantissa!r}")
        if mantissa == 0.0:
            self._m, self._e = 0.0, 0
            return
        m, e = _split(mantissa)
        e += int(exponent)
        if abs(e) > EXP_LIMIT:
            raise OverflowError("WideScalar exponent out of range")
        self._m, self._e = m, e

    @classmethod
    def _raw(cls, m, e):
        obj = object.__new__(cls)
        obj._m, obj._e = m, e
        return obj

    @classmethod
    def from_int(cls, k):
        """Correctly rounded conversion of a non-negative integer of any size."""
        k = int(k)
        if k < 0:
            raise ValueError("WideScalar cannot hold negative values")
        return cls.from_ratio(k, 1)

    @classmethod
    def from_ratio(cls, num, den):
        """Correctly rounded value of num/den for non-negative integers."""
        num, den = int(num), int(den)
        if den <= 0 or num < 0:
            raise ValueError("from_ratio needs num >= 0 and den > 0")
        if num == 0:
            return cls()
        k = num.bit_length() - den.bit_length()
        # int / int true division is correctly rounded; keep it in (0.5, 2)
        x = num / (den << k) if k >= 0 else (num << -k) / den
        return cls(x, k)

    @classmethod
    def from_fraction(cls, q):
        q = Fraction(q)
        return cls.from_ratio(q.numerator, q.denominator)

    @classmethod
    def from_log2(cls, lg):
        """Value 2**lg for a real lg (relative error about |lg| * 2**-53)."""
        e = math.floor(lg)
        return cls(2.0 ** (lg - e), e)

    @property
    def mantissa(self):
        return self._m

    @property
    def exponent(self):
        return self._e

    def is_zero(self):
        return self._m == 0.0

    def __bool__(self):
        return self._m != 0.0

    # arithmetic
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self._m == 0.0:
            return other
        if other._m == 0.0:
            return self
        a, b = (self, other) if self._e >= other._e else (other, self)
        d = b._e - a._e
        m = a._m + (math.ldexp(b._m, d) if d > -1100 else 0.0)
        if m >= 2.0:
            return WideScalar._raw(m * 0.5, a._e + 1)
        return WideScalar._raw(m, a._e)

    __radd__ = __add__

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self._m == 0.0 or other._m == 0.0:
            return WideScalar()
        m = self._m * other._m
        e = self._e + other._e
        if m >= 2.0:
            m *= 0.5
            e += 1
        if abs(e) > EXP_LIMIT:
            raise OverflowError("WideScalar exponent out of range")
        return WideScalar._raw(m, e)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if other._m == 0.0:
            raise ZeroDivisionError("WideScalar division by zero")
        if self._m == 0.0:
            return WideScalar()
        m = self._m / other._m
        e = self._e - other._e
        if m < 1.0:
            m *= 2.0
            e -= 1
        return WideScalar._raw(m, e)

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    # comparisons
    def _key(self):
        return (0, 0, 0.0) if self._m == 0.0 else (1, self._e, self._m)

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self._key() == other._key()

    def __lt__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self._key() < other._key()

    def __hash__(self):
        return hash(self._key())

    # conversions
    def __float__(self):
        if self._m == 0.0:
            return 0.0
        if self._e > 1023:
            return math.inf
        return math.ldexp(self._m, max(self._e, -1100))

    def log2(self):
        if self._m == 0.0:
            return -math.inf
        return self._e + math.log2(self._m)

    def log10(self):
        if self._m == 0.0:
            return -math.inf
        return self._e * math.log10(2.0) + math.log10(self._m)

    def sqrt(self):
        if self._m == 0.0:
            return WideScalar()
        m, e = self._m, self._e
        if e % 2:
            m *= 2.0
            e -= 1
        return WideScalar(math.sqrt(m), e // 2)

    def to_fraction(self):
        M = int(self._m * 2**52)
        E = self._e - 52
        return Fraction(M * 2**E) if E >= 0 else Fraction(M, 2**-E)

    def __repr__(self):
        return f"WideScalar({self._m!r}, {self._e})"

    def __str__(self):
        return ws_to_decimal(self, 6)


def _coerce(x):
    if isinstance(x, WideScalar):
        return x
    if isinstance(x, int):
        return WideScalar.from_int(x)
    if isinstance(x, float):
        return WideScalar(x)
    if isinstance(x, Fraction):
        return WideScalar.from_fraction(x)
    return NotImplemented


ADD, MUL, DIV = "add", "mul", "div"


def ws_arith(a, b, op):
    """Apply ``op`` ('add', 'mul' or 'div') to two WideScalars."""
    if op == ADD:
        return a + b
    if op == MUL:
        return a * b
    if op == DIV:
        return a / b
    raise ValueError(f"unknown op {op!r}")


def ws_factorial(n):
    """n! by repeated multiplication."""
    if n < 0:
        raise ValueError("factorial of a negative number")
    acc = WideScalar(1.0)
    for k in range(2, n + 1):
        acc = acc * WideScalar(float(k))
    return acc


def exact_factorial(n):
    return math.factorial(n)


def _round_div(num, den):
    """num/den rounded half-even, both positive integers."""
    q, r = divmod(num, den)
    r2 = 2 * r
    if r2 > den or (r2 == den and q & 1):
        q += 1
    return q


def ws_to_decimal(a, digits=6):
    """Scientific notation with ``digits`` significant digits, e.g. '1.024e3'.

    Rounding is half-even on the exact binary value.
    """
    if not 1 <= digits <= 17:
        raise ValueError("digits must be in 1..17")
    if isinstance(a, (int, float, Fraction)):
        a = _coerce(a)
    if a.is_zero():
        return "0"
    M = int(a.mantissa * 2**52)
    E = a.exponent - 52
    if abs(E) > 2**22:
        return _to_decimal_big(M, E, digits)
    num, den = (M << E, 1) if E >= 0 else (M, 1 << -E)
    d = math.floor(a.log10())
    while True:
        s = d - digits + 1
        n_, d_ = (num, den * 10**s) if s >= 0 else (num * 10**-s, den)
        lo = n_ // d_
        if lo >= 10**digits:
            d += 1
        elif lo < 10 ** (digits - 1):
            d -= 1
        else:
            break
    q = _round_div(n_, d_)
    if q == 10**digits:
        q //= 10
        d += 1
    return _format(str(q), d)


def _format(ds, d):
    mant = ds[0] + ("." + ds[1:] if len(ds) > 1 else "")
    return f"{mant}e{d}"


def _to_decimal_big(M, E, digits):
    # huge binary exponents: go through a high-precision decimal logarithm
    with localcontext() as ctx:
        ctx.prec = digits + 40
        ctx.rounding = ROUND_HALF_EVEN
        lg = Decimal(M).log10() + Decimal(E) * Decimal(2).log10()
        d = int(lg.to_integral_value(rounding="ROUND_FLOOR"))
        mant = (Decimal(10) ** (lg - d)).scaleb(digits - 1)
        q = int(mant.to_integral_value())
    if q >= 10**digits:
        q //= 10
        d += 1
    return _format(str(q), d)


# ---------------------------------------------------------------------------
# wide arrays: (mantissa float64[], exponent int64[]) pairs


def wide_from_floats(x):
    """Normalize a float array into wide (mantissa, exponent) arrays."""
    x = np.asarray(x, dtype=np.float64)
    if np.any(x < 0) or not np.all(np.isfinite(x)):
        raise ValueError("wide arrays hold finite non-negative values only")
    m, e = np.frexp(x)
    m = m * 2.0
    e = e.astype(np.int64) - 1
    e[m == 0.0] = ZERO_EXP
    return m, e


def wide_from_scalars(vals):
    m = np.array([v.mantissa for v in vals], dtype=np.float64)
    e = np.array([v.exponent if v.mantissa else ZERO_EXP for v in vals], dtype=np.int64)
    return m, e


def wide_normalize(m, e):
    """Renormalize mantissas that drifted outside [1, 2) after an operation."""
    f, de = np.frexp(m)
    out_e = e + de.astype(np.int64) - 1
    out_m = f * 2.0
    out_e[out_m == 0.0] = ZERO_EXP
    return out_m, out_e


def wide_add(m1, e1, m2, e2):
    """Elementwise sum of two equally long wide arrays."""
    E = np.maximum(e1, e2)
    s = np.ldexp(m1, np.clip(e1 - E, -1100, 0)) + np.ldexp(m2, np.clip(e2 - E, -1100, 0))
    return wide_normalize(s, E)


def wide_scaled_floats(m, e, E):
    """Values divided by 2**E as plain floats (tiny ones flush to zero)."""
    return np.ldexp(m, np.clip(e - E, -1100, 1000))


def wide_max_exponent(m, e):
    nz = m != 0.0
    return int(e[nz].max()) if nz.any() else None


def wide_sum(m, e):
    """Accurate sum of a wide array as a WideScalar."""
    E = wide_max_exponent(m, e)
    if E is None:
        return WideScalar()
    return WideScalar(math.fsum(wide_scaled_floats(m, e, E)), E)


def wide_get(m, e, j):
    if m[j] == 0.0:
        return WideScalar()
    return WideScalar._raw(float(m[j]), int(e[j]))
