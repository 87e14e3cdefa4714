"""Scalar fields: rationals, Gaussian rationals, cyclotomic numbers and
certified high-precision complex floats.

Exact scalars are immutable and interoperate through the usual operators;
mixing a Gaussian rational with a cyclotomic number lifts both into the
cyclotomic field whose conductor is the lcm of the two.  Anything combined
with an :class:`ApproxComplex` is embedded at that value's precision.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from math import gcd

import mpmath
from mpmath.ctx_mp import MPContext

from .errors import DomainError, FieldMismatchError, ParseError

DEFAULT_PRECISION = 128

Rational = Fraction

_INFLATE = 1.0 + 2.0**-50


def _lcm(a, b):
    return a * b // gcd(a, b)


# ---------------------------------------------------------------------------
# Gaussian rationals
# ---------------------------------------------------------------------------


class GaussianRational:
    """(a + b i) / d with integers a, b and d > 0 in lowest terms."""

    __slots__ = ("_a", "_b", "_d")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussianRational):
            if im:
                raise TypeError("GaussianRational(z, im) needs a real z")
            self._a, self._b, self._d = re._a, re._b, re._d
            return
        re = Fraction(re)
        im = Fraction(im)
        d = _lcm(re.denominator, im.denominator)
        self._a = re.numerator * (d // re.denominator)
        self._b = im.numerator * (d // im.denominator)
        self._d = d

    @classmethod
    def _raw(cls, a, b, d):
        if d < 0:
            a, b, d = -a, -b, -d
        g = gcd(gcd(a, b), d)
        if g != 1:
            a //= g
            b //= g
            d //= g
        obj = object.__new__(cls)
        obj._a, obj._b, obj._d = a, b, d
        return obj

    @property
    def re(self):
        return Fraction(self._a, self._d)

    @property
    def im(self):
        return Fraction(self._b, self._d)

    real = re
    imag = im

    def is_zero(self):
        return self._a == 0 and self._b == 0

    def is_real(self):
        return self._b == 0

    def __bool__(self):
        return not self.is_zero()

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussianRational):
            return other._a, other._b, other._d
        if isinstance(other, int):
            return other, 0, 1
        if isinstance(other, Fraction):
            return other.numerator, 0, other.denominator
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b, d = o
        if d == self._d:
            return GaussianRational._raw(self._a + a, self._b + b, d)
        return GaussianRational._raw(self._a * d + a * self._d, self._b * d + b * self._d, self._d * d)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational._raw(-self._a, -self._b, self._d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b, d = o
        if d == self._d:
            return GaussianRational._raw(self._a - a, self._b - b, d)
        return GaussianRational._raw(self._a * d - a * self._d, self._b * d - b * self._d, self._d * d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational._raw(*o) - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b, d = o
        sa, sb = self._a, self._b
        return GaussianRational._raw(sa * a - sb * b, sa * b + sb * a, self._d * d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        c, d, e = o
        n = c * c + d * d
        if n == 0:
            raise ZeroDivisionError("GaussianRational division by zero")
        a, b = self._a, self._b
        return GaussianRational._raw(e * (a * c + b * d), e * (b * c - a * d), self._d * n)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational._raw(*o) / self

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return (1 / self) ** (-k)
        result = GaussianRational._raw(1, 0, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self):
        return GaussianRational._raw(self._a, -self._b, self._d)

    def abs_squared(self):
        return Fraction(self._a * self._a + self._b * self._b, self._d * self._d)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b, d = o
        return self._a * d == a * self._d and self._b * d == b * self._d

    def __hash__(self):
        if self._b == 0:
            return hash(Fraction(self._a, self._d))
        return hash((self._a, self._b, self._d))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)

    def __reduce__(self):
        return (GaussianRational._raw, (self._a, self._b, self._d))


# ---------------------------------------------------------------------------
# Cyclotomic fields
# ---------------------------------------------------------------------------


def _divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


@lru_cache(maxsize=None)
def cyclotomic_poly(n):
    """Integer coefficients of the n-th cyclotomic polynomial, low degree first."""
    if n < 1:
        raise DomainError("cyclotomic polynomial needs n >= 1")
    num = [-1] + [0] * (n - 1) + [1]
    for d in _divisors(n)[:-1]:
        num = _exact_monic_div(num, cyclotomic_poly(d))
    return tuple(num)


def _exact_monic_div(num, den):
    num = list(num)
    dn = len(den) - 1
    out = [0] * (len(num) - dn)
    for k in range(len(num) - 1, dn - 1, -1):
        c = num[k]
        out[k - dn] = c
        if c:
            for j in range(dn + 1):
                num[k - dn + j] -= c * den[j]
    assert not any(num[:dn]), "inexact cyclotomic division"
    return out


def euler_phi(n):
    return len(cyclotomic_poly(n)) - 1


class _CycloField:
    """Per-conductor tables: x^k mod Phi_N and the conjugation map."""

    def __init__(self, N):
        self.N = N
        poly = cyclotomic_poly(N)
        phi = len(poly) - 1
        self.phi = phi
        top = max(N, 2 * phi - 1)
        rows = []
        cur = [1] + [0] * (phi - 1) if phi > 0 else []
        for _ in range(top):
            rows.append(tuple(cur))
            # multiply by x and reduce
            carry = cur[-1]
            nxt = [0] + cur[:-1]
            if carry:
                for j in range(phi):
                    nxt[j] -= carry * poly[j]
            cur = nxt
        self.red = rows
        self.conj_rows = [rows[(-k) % N] for k in range(phi)]


@lru_cache(maxsize=None)
def _field(N):
    return _CycloField(N)


def _reduce_vector(F, coeffs):
    """Reduce an arbitrary-length integer coefficient list into the power basis."""
    phi = F.phi
    out = list(coeffs[:phi]) + [0] * max(0, phi - len(coeffs))
    for k in range(phi, len(coeffs)):
        c = coeffs[k]
        if c:
            row = F.red[k % F.N]
            for j in range(phi):
                if row[j]:
                    out[j] += c * row[j]
    return out


class CyclotomicNumber:
    """Element of Q(zeta_N), stored as integer power-basis coefficients over a
    common positive denominator, fully reduced modulo Phi_N."""

    __slots__ = ("_N", "_num", "_den")

    def __init__(self, N, coeffs=(), den=1):
        if not isinstance(N, int) or N < 1:
            raise DomainError(f"conductor must be a positive integer, got {N!r}")
        F = _field(N)
        fr = [Fraction(c) for c in coeffs]
        d = Fraction(den)
        if d == 0:
            raise ZeroDivisionError("zero denominator")
        common = 1
        for c in fr:
            common = _lcm(common, c.denominator)
        ints = [c.numerator * (common // c.denominator) * d.denominator for c in fr]
        self._N = N
        self._set(_reduce_vector(F, ints), common * d.numerator)

    def _set(self, num, den):
        if den < 0:
            num = [-c for c in num]
            den = -den
        g = gcd(den, *num) if num else den
        if g > 1:
            num = [c // g for c in num]
            den //= g
        if not any(num):
            den = 1
        self._num = tuple(num)
        self._den = den

    @classmethod
    def _raw(cls, N, num, den):
        obj = object.__new__(cls)
        obj._N = N
        obj._set(num, den)
        return obj

    # constructors -----------------------------------------------------
    @classmethod
    def root(cls, N, exponent=1):
        """zeta_N ** exponent."""
        if not isinstance(N, int) or N < 1:
            raise DomainError("cyclotomic conductor must be >= 1")
        F = _field(N)
        return cls._raw(N, list(F.red[exponent % N]), 1)

    @classmethod
    def from_rational(cls, N, q):
        q = Fraction(q)
        F = _field(N)
        num = [0] * F.phi
        num[0] = q.numerator
        return cls._raw(N, num, q.denominator)

    @classmethod
    def from_gaussian(cls, N, z):
        if N % 4:
            raise FieldMismatchError(f"Q(i) is not contained in Q(zeta_{N})")
        z = GaussianRational(z)
        F = _field(N)
        num = [0] * F.phi
        num[0] = z._a
        i_row = F.red[N // 4]
        for j, c in enumerate(i_row):
            num[j] += z._b * c
        return cls._raw(N, num, z._d)

    # accessors --------------------------------------------------------
    @property
    def conductor(self):
        return self._N

    @property
    def coeffs(self):
        return tuple(Fraction(c, self._den) for c in self._num)

    @property
    def numerators(self):
        return self._num

    @property
    def denominator(self):
        return self._den

    def is_zero(self):
        return not any(self._num)

    def __bool__(self):
        return not self.is_zero()

    def is_rational(self):
        return not any(self._num[1:])

    def to_rational(self):
        if not self.is_rational():
            raise FieldMismatchError("cyclotomic value is not rational")
        return Fraction(self._num[0], self._den)

    def is_real(self):
        return self == self.conjugate()

    def to_gaussian(self):
        """Return the value as a GaussianRational, if it lies in Q(i)."""
        if self.is_rational():
            return GaussianRational(self.to_rational())
        if self._N % 4:
            raise FieldMismatchError("cyclotomic value is not in Q(i)")
        c = self.conjugate()
        re_part = (self + c) * Fraction(1, 2)
        i = CyclotomicNumber.root(self._N, self._N // 4)
        im_part = (self - c) * Fraction(1, 2) * (-i)
        if not (re_part.is_rational() and im_part.is_rational()):
            raise FieldMismatchError("cyclotomic value is not in Q(i)")
        return GaussianRational(re_part.to_rational(), im_part.to_rational())

    def lift(self, L):
        """Same value viewed in Q(zeta_L), L a multiple of the conductor."""
        if L == self._N:
            return self
        if L % self._N:
            raise FieldMismatchError(f"cannot lift conductor {self._N} to {L}")
        s = L // self._N
        spread = [0] * L
        for k, c in enumerate(self._num):
            spread[k * s] = c
        return CyclotomicNumber._raw(L, _reduce_vector(_field(L), spread), self._den)

    # arithmetic -------------------------------------------------------
    def _align(self, other):
        if isinstance(other, CyclotomicNumber):
            if other._N == self._N:
                return self, other
            L = _lcm(self._N, other._N)
            return self.lift(L), other.lift(L)
        if isinstance(other, (int, Fraction)):
            return self, CyclotomicNumber.from_rational(self._N, other)
        if isinstance(other, GaussianRational):
            if other.is_real():
                return self, CyclotomicNumber.from_rational(self._N, other.re)
            L = _lcm(self._N, 4)
            return self.lift(L), CyclotomicNumber.from_gaussian(L, other)
        return None

    def __add__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            q = Fraction(other)
            num = list(self._num)
            d = self._den
            num = [c * q.denominator for c in num]
            num[0] += q.numerator * d
            return CyclotomicNumber._raw(self._N, num, d * q.denominator)
        pair = self._align(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        if x._den == y._den:
            return CyclotomicNumber._raw(x._N, [a + b for a, b in zip(x._num, y._num)], x._den)
        return CyclotomicNumber._raw(
            x._N, [a * y._den + b * x._den for a, b in zip(x._num, y._num)], x._den * y._den
        )

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber._raw(self._N, [-c for c in self._num], self._den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        pair = self._align(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        return x + (-y)

    def __rsub__(self, other):
        pair = self._align(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        return y + (-x)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            q = Fraction(other)
            return CyclotomicNumber._raw(
                self._N, [c * q.numerator for c in self._num], self._den * q.denominator
            )
        pair = self._align(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        F = _field(x._N)
        phi = F.phi
        a, b = x._num, y._num
        out = [0] * (2 * phi - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        out[i + j] += ai * bj
        red = F.red
        res = out[:phi]
        for k in range(phi, 2 * phi - 1):
            c = out[k]
            if c:
                row = red[k]
                for j in range(phi):
                    r = row[j]
                    if r:
                        res[j] += c * r
        return CyclotomicNumber._raw(x._N, res, x._den * y._den)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("cyclotomic division by zero")
        F = _field(self._N)
        phi = F.phi
        # columns: coefficient vectors of p * zeta^j, p the integer numerator
        cols = []
        p = CyclotomicNumber._raw(self._N, list(self._num), 1)
        for j in range(phi):
            prod = p * CyclotomicNumber.root(self._N, j)
            cols.append([Fraction(c, prod._den) for c in prod._num])
        rows = [[cols[j][i] for j in range(phi)] for i in range(phi)]
        rhs = [Fraction(1)] + [Fraction(0)] * (phi - 1)
        sol = _solve_fraction(rows, rhs)
        return CyclotomicNumber(self._N, sol) * self._den

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("cyclotomic division by zero")
            return self * (1 / Fraction(other))
        pair = self._align(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        return x * y.inverse()

    def __rtruediv__(self, other):
        pair = self._align(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        return y * x.inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = CyclotomicNumber.from_rational(self._N, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self):
        F = _field(self._N)
        out = [0] * F.phi
        for k, c in enumerate(self._num):
            if c:
                for j, r in enumerate(F.conj_rows[k]):
                    if r:
                        out[j] += c * r
        return CyclotomicNumber._raw(self._N, out, self._den)

    def abs_squared(self):
        return self * self.conjugate()

    def __eq__(self, other):
        pair = self._align(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        return x._den == y._den and x._num == y._num

    def __hash__(self):
        if self.is_rational():
            return hash(self.to_rational())
        if self._N % 4 == 0:
            try:
                return hash(self.to_gaussian())
            except FieldMismatchError:
                pass
        return hash((self._N, self._num, self._den))

    def __complex__(self):
        return complex(embed(self, 64).value)

    def __repr__(self):
        return f"CyclotomicNumber({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)

    def __reduce__(self):
        return (CyclotomicNumber._raw, (self._N, list(self._num), self._den))


def cyclo_make(N, exponent):
    """Canonical representation of zeta_N ** exponent."""
    if not isinstance(N, int) or N < 1:
        raise DomainError("cyclo_make needs N >= 1")
    return CyclotomicNumber.root(N, exponent)


def _solve_fraction(rows, rhs):
    n = len(rows)
    M = [list(r) + [b] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        prow = [v / pv for v in M[col]]
        M[col] = prow
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * b for a, b in zip(M[r], prow)]
    return [M[r][n] for r in range(n)]


# ---------------------------------------------------------------------------
# Certified approximate complex numbers
# ---------------------------------------------------------------------------

_CONTEXTS = {}


def mp_context(prec):
    ctx = _CONTEXTS.get(prec)
    if ctx is None:
        if prec < 53:
            raise DomainError("working precision must be at least 53 bits")
        ctx = MPContext()
        ctx.prec = prec
        _CONTEXTS[prec] = ctx
    return ctx


def unit_roundoff(prec):
    return math.ldexp(1.0, -prec)


class ApproxComplex:
    """Complex value at `prec` bits together with an absolute error radius.

    The true value lies in the closed disc of the given radius around
    `value`.  Radii follow first-order forward bounds inflated slightly to
    absorb rounding of the radius itself.
    """

    __slots__ = ("value", "radius", "prec")

    def __init__(self, re=0, im=0, radius=0.0, prec=DEFAULT_PRECISION):
        ctx = mp_context(prec)
        self.value = ctx.mpc(re, im)
        self.radius = float(radius)
        self.prec = prec

    @classmethod
    def _make(cls, value, radius, prec):
        obj = object.__new__(cls)
        obj.value = value
        obj.radius = radius
        obj.prec = prec
        return obj

    @property
    def real(self):
        return self.value.real

    @property
    def imag(self):
        return self.value.imag

    def mag(self):
        return float(abs(self.value))

    def _coerce(self, other):
        if isinstance(other, ApproxComplex):
            if other.prec != self.prec:
                return embed(other, self.prec)
            return other
        try:
            return embed(other, self.prec)
        except TypeError:
            return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        v = self.value + o.value
        u = unit_roundoff(self.prec)
        r = (self.radius + o.radius + 2 * u * float(abs(v))) * _INFLATE
        return ApproxComplex._make(v, r, self.prec)

    __radd__ = __add__

    def __neg__(self):
        return ApproxComplex._make(-self.value, self.radius, self.prec)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        v = self.value * o.value
        u = unit_roundoff(self.prec)
        r = self.mag() * o.radius + o.mag() * self.radius + self.radius * o.radius
        r = (r + 4 * u * float(abs(v))) * _INFLATE
        return ApproxComplex._make(v, r, self.prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        dm = o.mag()
        if dm <= o.radius:
            raise ZeroDivisionError("divisor disc contains zero")
        v = self.value / o.value
        u = unit_roundoff(self.prec)
        q = float(abs(v))
        r = (self.radius + q * o.radius) / (dm - o.radius)
        r = (r + 6 * u * q) * _INFLATE
        return ApproxComplex._make(v, r, self.prec)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = embed(1, self.prec)
        for _ in range(k):
            result = result * self
        return result

    def conjugate(self):
        return ApproxComplex._make(self.value.conjugate(), self.radius, self.prec)

    def abs_squared(self):
        p = self * self.conjugate()
        return ApproxComplex._make(mp_context(self.prec).mpc(p.value.real, 0), p.radius, self.prec)

    def modulus(self):
        ctx = mp_context(self.prec)
        m = abs(self.value)
        r = (self.radius + 2 * unit_roundoff(self.prec) * float(m)) * _INFLATE
        return ApproxComplex._make(ctx.mpc(m, 0), r, self.prec)

    def sqrt(self):
        """Square root of a value whose disc lies in the closed right half-line."""
        ctx = mp_context(self.prec)
        x = self.value.real
        if x + self.radius < 0:
            raise DomainError("square root of a negative value")
        s = ctx.sqrt(ctx.mpf(max(x, 0)))
        hi = math.sqrt(float(x) + self.radius)
        lo = math.sqrt(max(float(x) - self.radius, 0.0))
        r = (max(hi - float(s), float(s) - lo) + 2 * unit_roundoff(self.prec) * float(s)) * _INFLATE
        return ApproxComplex._make(ctx.mpc(s, 0), r + 1e-300, self.prec)

    def real_part(self):
        ctx = mp_context(self.prec)
        return ApproxComplex._make(ctx.mpc(self.value.real, 0), self.radius, self.prec)

    def is_real_within(self):
        return abs(float(self.value.imag)) <= self.radius

    def certainly_positive(self):
        return float(self.value.real) > self.radius

    def certainly_negative(self):
        return float(self.value.real) < -self.radius

    def contains(self, x, slack=0.0):
        e = embed(x, self.prec)
        return float(abs(e.value - self.value)) <= self.radius + e.radius + slack

    def __float__(self):
        return float(self.value.real)

    def __complex__(self):
        return complex(self.value)

    def __eq__(self, other):
        if not isinstance(other, ApproxComplex):
            return NotImplemented
        return self.value == other.value and self.radius == other.radius

    def __hash__(self):
        return hash((self.value, self.radius))

    def __repr__(self):
        return f"ApproxComplex({format_scalar(self)!r}, radius={self.radius:.3g})"

    def __str__(self):
        return format_scalar(self)

    def __reduce__(self):
        return (
            _approx_from_strings,
            (mpmath.nstr(self.value.real, self.prec // 3 + 5), mpmath.nstr(self.value.imag, self.prec // 3 + 5),
             self.radius, self.prec),
        )


def _approx_from_strings(re, im, radius, prec):
    return ApproxComplex(re, im, radius, prec)


@lru_cache(maxsize=256)
def _root_powers(N, prec):
    ctx = mp_context(prec + 32)
    return [ctx.mpc(ctx.cospi(ctx.mpf(2 * k) / N), ctx.sinpi(ctx.mpf(2 * k) / N)) for k in range(euler_phi(N))]


def embed(x, prec=DEFAULT_PRECISION):
    """Image of any scalar as an ApproxComplex at `prec` bits."""
    ctx = mp_context(prec)
    u = unit_roundoff(prec)
    if isinstance(x, ApproxComplex):
        if x.prec == prec:
            return x
        v = ctx.mpc(x.value)
        r = x.radius + (2 * u * float(abs(v)) if prec < x.prec else 0.0)
        return ApproxComplex._make(v, r * _INFLATE, prec)
    if isinstance(x, bool):
        x = int(x)
    if isinstance(x, int):
        v = ctx.mpc(x)
        r = 0.0 if abs(x) < 2**prec else u * abs(float(x))
        return ApproxComplex._make(v, r, prec)
    if isinstance(x, Fraction):
        return _embed_fraction_pair(x, Fraction(0), prec)
    if isinstance(x, GaussianRational):
        return _embed_fraction_pair(x.re, x.im, prec)
    if isinstance(x, CyclotomicNumber):
        powers = _root_powers(x.conductor, prec)
        hi = mp_context(prec + 32)
        acc = hi.mpc(0)
        scale = 0
        for c, z in zip(x.numerators, powers):
            if c:
                acc += c * z
                scale += abs(c)
        v = ctx.mpc(acc / x.denominator)
        mag = scale / x.denominator if x.denominator else 0.0
        r = ((len(powers) + 4) * u * float(mag) + 2 * u * float(abs(v))) * _INFLATE
        return ApproxComplex._make(v, r, prec)
    if isinstance(x, (float, complex)):
        if not (math.isfinite(x.real) and math.isfinite(x.imag) if isinstance(x, complex) else math.isfinite(x)):
            raise DomainError("non-finite float")
        return ApproxComplex._make(ctx.mpc(x), 0.0, prec)
    if hasattr(x, "dtype") and hasattr(x, "item"):
        return embed(x.item(), prec)
    raise TypeError(f"cannot embed {type(x).__name__}")


def _embed_fraction_pair(re, im, prec):
    ctx = mp_context(prec)
    u = unit_roundoff(prec)
    r = 0.0
    parts = []
    for q in (re, im):
        v = ctx.mpf(q.numerator) / q.denominator
        d = q.denominator
        exact = (d & (d - 1)) == 0 and abs(q.numerator) < 2**prec
        if not exact:
            r += u * abs(float(v)) + 1e-300
        parts.append(v)
    return ApproxComplex._make(ctx.mpc(parts[0], parts[1]), r * _INFLATE, prec)


# ---------------------------------------------------------------------------
# helpers shared by the rest of the package
# ---------------------------------------------------------------------------

EXACT_TYPES = (int, Fraction, GaussianRational, CyclotomicNumber)


def is_exact(x):
    return isinstance(x, EXACT_TYPES)


def conj(x):
    if isinstance(x, (int, Fraction)):
        return x
    return x.conjugate()


def abs_squared(x):
    if isinstance(x, (int, Fraction)):
        return x * x
    return x.abs_squared()


def is_zero(x):
    if isinstance(x, ApproxComplex):
        return x.value == 0 and x.radius == 0
    return x == 0


def exact_real_value(x):
    """Return x as a Fraction when it is a rational value, else None."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, GaussianRational):
        return x.re if x.is_real() else None
    if isinstance(x, CyclotomicNumber):
        return x.to_rational() if x.is_rational() else None
    return None


def real_sign(x, max_prec=8192):
    """Exact sign (-1, 0, 1) of a real exact scalar.

    Cyclotomic values are decided numerically with increasing precision,
    which terminates because a nonzero algebraic number is bounded away
    from zero.
    """
    if isinstance(x, (int, Fraction)):
        return (x > 0) - (x < 0)
    if isinstance(x, GaussianRational):
        if not x.is_real():
            raise DomainError(f"sign of non-real value {x}")
        return (x._a > 0) - (x._a < 0)
    if isinstance(x, CyclotomicNumber):
        if x.is_rational():
            return real_sign(x.to_rational())
        if not x.is_real():
            raise DomainError(f"sign of non-real value {x}")
        prec = 64
        while prec <= max_prec:
            a = embed(x, prec)
            if a.certainly_positive():
                return 1
            if a.certainly_negative():
                return -1
            prec *= 2
        raise DomainError("sign undecided within precision cap")
    raise TypeError(f"real_sign needs an exact scalar, got {type(x).__name__}")


def field_tag(x):
    """Name of the smallest built-in field holding the scalar."""
    if isinstance(x, (int, Fraction)):
        return "rational"
    if isinstance(x, GaussianRational):
        return "gaussian"
    if isinstance(x, CyclotomicNumber):
        return f"cycN:{x.conductor}"
    if isinstance(x, ApproxComplex):
        return "float"
    raise TypeError(f"not a scalar: {type(x).__name__}")


def normalize_field_tag(tag):
    tag = tag.strip()
    if tag == "cyc40":
        return "cycN:40"
    if tag in ("rational", "gaussian", "float"):
        return tag
    m = re.fullmatch(r"cycN:(\d+)", tag)
    if m and int(m.group(1)) >= 1:
        return f"cycN:{int(m.group(1))}"
    raise ParseError(f"unknown field tag {tag!r}")


def tag_conductor(tag):
    return int(tag.split(":")[1]) if tag.startswith("cycN:") else None


def join_tags(a, b):
    """Smallest field tag containing both fields."""
    order = {"rational": 0, "gaussian": 1}
    if a == "float" or b == "float":
        return "float"
    ca, cb = tag_conductor(a), tag_conductor(b)
    if ca is None and cb is None:
        return a if order[a] >= order[b] else b
    n = 1
    for t, c in ((a, ca), (b, cb)):
        if c is not None:
            n = _lcm(n, c)
        elif t == "gaussian":
            n = _lcm(n, 4)
    return f"cycN:{n}"


def coerce_to_field(x, tag, prec=DEFAULT_PRECISION):
    """Represent x in the field named by `tag`; raises when no exact image exists."""
    tag = normalize_field_tag(tag)
    if tag == "float":
        return embed(x, prec)
    if isinstance(x, ApproxComplex):
        raise FieldMismatchError("approximate values have no exact image")
    if tag == "rational":
        q = exact_real_value(x)
        if q is None:
            raise FieldMismatchError(f"{x} is not rational")
        return q
    if tag == "gaussian":
        if isinstance(x, CyclotomicNumber):
            return x.to_gaussian()
        return GaussianRational(x)
    N = tag_conductor(tag)
    if isinstance(x, CyclotomicNumber):
        if N % x.conductor == 0:
            return x.lift(N)
        if x.is_rational():
            return CyclotomicNumber.from_rational(N, x.to_rational())
        g = None
        try:
            g = x.to_gaussian()
        except FieldMismatchError:
            pass
        if g is not None and N % 4 == 0:
            return CyclotomicNumber.from_gaussian(N, g)
        raise FieldMismatchError(f"cannot move conductor {x.conductor} value into conductor {N}")
    if isinstance(x, GaussianRational):
        if x.is_real():
            return CyclotomicNumber.from_rational(N, x.re)
        return CyclotomicNumber.from_gaussian(N, x)
    return CyclotomicNumber.from_rational(N, x)


# ---------------------------------------------------------------------------
# text syntax
# ---------------------------------------------------------------------------

_CYC_RE = re.compile(r"cyc\((\d+)\)\[(.*)\]")


def _parse_real(tok):
    tok = tok.strip()
    if tok in ("", "+"):
        return Fraction(1)
    if tok == "-":
        return Fraction(-1)
    if tok.endswith("*"):
        tok = tok[:-1]
    low = tok.lower()
    if "nan" in low or "inf" in low:
        raise ParseError(f"non-finite literal {tok!r}")
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad number {tok!r}") from exc


def parse_scalar(text, field=None, prec=DEFAULT_PRECISION):
    """Parse `p/q`, `p/q+r/s*i`, `cyc(N)[c0,...]` or a decimal literal."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ParseError("empty scalar literal")
    m = _CYC_RE.fullmatch(s)
    if m:
        N = int(m.group(1))
        body = m.group(2)
        coeffs = [_parse_real(c) for c in body.split(",")] if body else []
        if N < 1:
            raise ParseError("cyclotomic conductor must be >= 1")
        value = CyclotomicNumber(N, coeffs)
    elif s.endswith("i") or s.endswith("j"):
        body = s[:-1]
        k = None
        for pos in range(len(body) - 1, 0, -1):
            if body[pos] in "+-" and body[pos - 1] not in "eE":
                k = pos
                break
        if k is None:
            re_part, im_part = Fraction(0), _parse_real(body)
        else:
            re_part, im_part = _parse_real(body[:k]), _parse_real(body[k:])
        value = GaussianRational(re_part, im_part)
    else:
        value = _parse_real(s)
    if field is not None:
        try:
            value = coerce_to_field(value, field, prec)
        except FieldMismatchError as exc:
            raise ParseError(f"{text!r} does not belong to field {field}") from exc
    return value


def _fmt_frac(q):
    return str(q)


def format_scalar(x, digits=None):
    if isinstance(x, bool):
        x = int(x)
    if isinstance(x, (int, Fraction)):
        return _fmt_frac(Fraction(x))
    if isinstance(x, GaussianRational):
        if x.is_real():
            return _fmt_frac(x.re)
        im = x.im
        sign = "-" if im < 0 else "+"
        return f"{_fmt_frac(x.re)}{sign}{_fmt_frac(abs(im))}*i"
    if isinstance(x, CyclotomicNumber):
        return f"cyc({x.conductor})[" + ",".join(_fmt_frac(c) for c in x.coeffs) + "]"
    if isinstance(x, ApproxComplex):
        d = digits or (x.prec * 30103 // 100000 + 2)
        re_s = mpmath.nstr(x.value.real, d)
        im = x.value.imag
        if im == 0:
            return re_s
        sign = "-" if im < 0 else "+"
        return f"{re_s}{sign}{mpmath.nstr(abs(im), d)}*i"
    if isinstance(x, (float, complex)):
        return repr(x)
    raise TypeError(f"not a scalar: {type(x).__name__}")


def scalar_to_json(x):
    """JSON-ready description; exact values are strings, never floats."""
    if isinstance(x, ApproxComplex):
        return {"value": format_scalar(x, 20), "exact": False, "radius": x.radius}
    return {"value": format_scalar(x), "exact": True, "radius": 0.0}


def to_complex(x):
    """Nearest Python complex of any scalar."""
    if isinstance(x, ApproxComplex):
        return complex(x.value)
    if isinstance(x, (int, Fraction)):
        return complex(float(x))
    return complex(x)
