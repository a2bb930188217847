"""Complex scalar and dense univariate polynomial arithmetic.

Two scalar modes coexist behind one type:

* exact   -- Gaussian rationals (``fractions.Fraction`` real and imaginary
             parts); arithmetic is closed, nothing ever rounds.
* float   -- ordinary binary64 complex numbers.

Mixing the two promotes the result to float and marks it ``demoted`` so a
pipeline can tell an intentionally floating result from an accidental one.

Polynomials are dense coefficient tuples, lowest degree first, in the real
variable x (which equals the sinusoidal coordinate for the families built on
top of this module). The zero polynomial has degree -1.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

from .errors import NoConvergence, RemainderNonzero

# Trailing float coefficients below this relative size are noise from
# cancellation and are trimmed; exact mode never trims a nonzero value.
FLOAT_TRIM = 1e-13


def _is_exact_number(v):
    return isinstance(v, (int, Fraction))


class CScalar:
    """A complex number that is either a Gaussian rational or a complex128."""

    __slots__ = ("re", "im", "exact", "demoted")

    def __init__(self, re, im=0, exact=None, demoted=False):
        if exact is None:
            exact = _is_exact_number(re) and _is_exact_number(im)
        if exact:
            self.re = Fraction(re)
            self.im = Fraction(im)
        else:
            self.re = float(re)
            self.im = float(im)
        self.exact = exact
        self.demoted = bool(demoted)

    # -- construction helpers -------------------------------------------------

    @staticmethod
    def of(v) -> "CScalar":
        """Coerce ints/Fractions (exact) or floats/complex (float) to CScalar."""
        if isinstance(v, CScalar):
            return v
        if _is_exact_number(v):
            return CScalar(v, 0, exact=True)
        if isinstance(v, complex):
            return CScalar(v.real, v.imag, exact=False)
        if isinstance(v, float):
            return CScalar(v, 0.0, exact=False)
        raise TypeError(f"cannot make a scalar from {type(v).__name__}")

    def demote(self) -> "CScalar":
        """Float-mode copy; exact inputs come back flagged as demoted."""
        if not self.exact:
            return self
        return CScalar(float(self.re), float(self.im), exact=False, demoted=True)

    # -- predicates ------------------------------------------------------------

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    # -- conversions -----------------------------------------------------------

    def to_complex(self) -> complex:
        return complex(self.re, self.im)

    def real_value(self):
        """Real part as Fraction (exact) or float."""
        return self.re

    def __complex__(self):
        return self.to_complex()

    # -- arithmetic ------------------------------------------------------------

    def _pair(self, other):
        """Align self and other to a common mode; returns (a, b, exact, demoted)."""
        b = CScalar.of(other) if not isinstance(other, CScalar) else other
        a = self
        if a.exact and b.exact:
            return a, b, True, a.demoted or b.demoted
        mixed = a.exact != b.exact
        a = a.demote()
        b = b.demote()
        return a, b, False, a.demoted or b.demoted or mixed

    def __add__(self, other):
        a, b, exact, dem = self._pair(other)
        return CScalar(a.re + b.re, a.im + b.im, exact=exact, demoted=dem)

    __radd__ = __add__

    def __sub__(self, other):
        a, b, exact, dem = self._pair(other)
        return CScalar(a.re - b.re, a.im - b.im, exact=exact, demoted=dem)

    def __rsub__(self, other):
        a, b, exact, dem = self._pair(other)
        return CScalar(b.re - a.re, b.im - a.im, exact=exact, demoted=dem)

    def __mul__(self, other):
        a, b, exact, dem = self._pair(other)
        return CScalar(a.re * b.re - a.im * b.im,
                       a.re * b.im + a.im * b.re,
                       exact=exact, demoted=dem)

    __rmul__ = __mul__

    def __truediv__(self, other):
        a, b, exact, dem = self._pair(other)
        d = b.re * b.re + b.im * b.im
        if d == 0:
            raise ZeroDivisionError("division by zero scalar")
        return CScalar((a.re * b.re + a.im * b.im) / d,
                       (a.im * b.re - a.re * b.im) / d,
                       exact=exact, demoted=dem)

    def __rtruediv__(self, other):
        return CScalar.of(other).__truediv__(self)

    def __neg__(self):
        return CScalar(-self.re, -self.im, exact=self.exact, demoted=self.demoted)

    def conj(self) -> "CScalar":
        return CScalar(self.re, -self.im, exact=self.exact, demoted=self.demoted)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("scalar powers are nonnegative integers")
        out = CScalar(1) if self.exact else CScalar(1.0)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def __abs__(self) -> float:
        return math.hypot(float(self.re), float(self.im))

    def __eq__(self, other):
        try:
            b = CScalar.of(other)
        except TypeError:
            return NotImplemented
        return self.re == b.re and self.im == b.im

    def __hash__(self):
        return hash((Fraction(self.re) if self.exact else self.re, self.im))

    def __repr__(self):
        tag = "" if self.exact else "~"
        return f"{tag}({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"


I_UNIT = CScalar(0, 1)


def ipow(k: int) -> CScalar:
    """Exact i**k for any integer k."""
    return (CScalar(1), I_UNIT, CScalar(-1), CScalar(0, -1))[k % 4]


def poch(c: CScalar, k: int) -> CScalar:
    """Shifted factorial (c)_k = c (c+1) ... (c+k-1)."""
    out = CScalar(1) if c.exact else CScalar(1.0)
    for m in range(k):
        out = out * (c + m)
    return out


def _binomial_row(n):
    row = [1] * (n + 1)
    for k in range(1, n + 1):
        row[k] = row[k - 1] * (n - k + 1) // k
    return row


class CPoly:
    """Dense univariate polynomial over CScalar, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [c if isinstance(c, CScalar) else CScalar.of(c) for c in coeffs]
        if any(not c.exact for c in cs):
            cs = [c.demote() for c in cs]
            mx = max((abs(c) for c in cs), default=0.0)
            cut = FLOAT_TRIM * mx
            while cs and abs(cs[-1]) <= cut:
                cs.pop()
        else:
            while cs and cs[-1].is_zero():
                cs.pop()
        self.coeffs = tuple(cs)

    # -- constructors ----------------------------------------------------------

    @staticmethod
    def constant(v) -> "CPoly":
        return CPoly([v])

    @staticmethod
    def x() -> "CPoly":
        return CPoly([0, 1])

    @staticmethod
    def monomial(k: int, coeff=1) -> "CPoly":
        return CPoly([0] * k + [coeff])

    @staticmethod
    def zero() -> "CPoly":
        return CPoly([])

    # -- structure -------------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def exact(self) -> bool:
        return all(c.exact for c in self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> CScalar:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, k: int) -> CScalar:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return CScalar(0) if self.exact else CScalar(0.0)

    def max_coeff_mag(self) -> float:
        return max((abs(c) for c in self.coeffs), default=0.0)

    def demote(self) -> "CPoly":
        return CPoly([c.demote() for c in self.coeffs])

    # -- ring arithmetic ---------------------------------------------------

    def __add__(self, other):
        other = other if isinstance(other, CPoly) else CPoly.constant(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] = out[k] + c
        return CPoly(out)

    __radd__ = __add__

    def __sub__(self, other):
        other = other if isinstance(other, CPoly) else CPoly.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return CPoly([-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, (CScalar, int, Fraction, float, complex)):
            s = CScalar.of(other)
            return CPoly([c * s for c in self.coeffs])
        if not isinstance(other, CPoly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return CPoly.zero()
        zero = CScalar(0) if (self.exact and other.exact) else CScalar(0.0)
        out = [zero] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca.is_zero():
                continue
            for j, cb in enumerate(b):
                out[i + j] = out[i + j] + ca * cb
        return CPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = CPoly.constant(CScalar(1) if self.exact else CScalar(1.0))
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, CPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "CPoly(0)"
        return "CPoly(" + ", ".join(repr(c) for c in self.coeffs) + ")"

    # -- the operations the constructions live on -------------------------

    def star(self) -> "CPoly":
        """Coefficient-wise complex conjugation; an involution."""
        return CPoly([c.conj() for c in self.coeffs])

    def shift_arg(self, c) -> "CPoly":
        """Return q with q(x) = p(x + c), by exact binomial expansion."""
        c = CScalar.of(c) if not isinstance(c, CScalar) else c
        n = self.degree
        if n <= 0:
            return self
        if self.exact and c.exact:
            zero, one = CScalar(0), CScalar(1)
        else:
            zero, one = CScalar(0.0), CScalar(1.0)
            c = c.demote()
        cpow = [one]
        for _ in range(n):
            cpow.append(cpow[-1] * c)
        out = [zero] * (n + 1)
        for j, pj in enumerate(self.coeffs):
            if pj.is_zero():
                continue
            row = _binomial_row(j)
            for k in range(j + 1):
                out[k] = out[k] + pj * row[k] * cpow[j - k]
        return CPoly(out)

    def eval(self, z):
        """Horner evaluation; CScalar in, CScalar out (mode follows inputs)."""
        z = z if isinstance(z, CScalar) else CScalar.of(z)
        if not self.coeffs:
            return CScalar(0) if (self.exact and z.exact) else CScalar(0.0)
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * z + c
        return acc

    def eval_complex(self, z: complex) -> complex:
        """Fast float-path Horner evaluation."""
        if not self.coeffs:
            return 0j
        acc = complex(self.coeffs[-1].re, self.coeffs[-1].im)
        for c in reversed(self.coeffs[:-1]):
            acc = acc * z + complex(c.re, c.im)
        return acc

    def eval_array(self, zs):
        """Vectorized Horner evaluation on a numpy array."""
        import numpy as np

        acc = np.zeros_like(np.asarray(zs, dtype=complex))
        for c in reversed(self.coeffs):
            acc = acc * zs + complex(c.re, c.im)
        return acc

    def compose(self, q: "CPoly") -> "CPoly":
        """Polynomial composition p(q(x)) by Horner."""
        out = CPoly.zero()
        for c in reversed(self.coeffs):
            out = out * q + CPoly.constant(c)
        return out

    def derivative(self) -> "CPoly":
        return CPoly([c * k for k, c in enumerate(self.coeffs)][1:])

    def exact_div(self, den: "CPoly") -> "CPoly":
        """Quotient q with self = q * den; the remainder must vanish.

        Exact mode demands an identically zero remainder; float mode allows
        a remainder up to 1e-9 of the numerator's largest coefficient.
        Raises RemainderNonzero otherwise, which in this package always
        signals a wrong determinant or normalization upstream.
        """
        if den.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        q, r = self._divmod(den)
        if self.exact and den.exact:
            if not r.is_zero():
                raise RemainderNonzero(
                    f"exact division left remainder of degree {r.degree}")
        else:
            tol = 1e-9 * max(self.max_coeff_mag(), 1e-300)
            if r.max_coeff_mag() > tol:
                raise RemainderNonzero(
                    f"division remainder {r.max_coeff_mag():.3e} exceeds "
                    f"{tol:.3e}")
        return q

    def _divmod(self, den: "CPoly"):
        if self.degree < den.degree:
            return CPoly.zero(), self
        exact = self.exact and den.exact
        rem = [c if exact else c.demote() for c in self.coeffs]
        dcoeffs = den.coeffs if exact else tuple(c.demote() for c in den.coeffs)
        lead = dcoeffs[-1]
        dd = len(dcoeffs) - 1
        qlen = len(rem) - dd
        zero = CScalar(0) if exact else CScalar(0.0)
        quot = [zero] * qlen
        for k in range(qlen - 1, -1, -1):
            f = rem[k + dd] / lead
            quot[k] = f
            if f.is_zero():
                continue
            for j, dc in enumerate(dcoeffs):
                rem[k + j] = rem[k + j] - f * dc
            rem[k + dd] = zero
        return CPoly(quot), CPoly(rem)


# ---------------------------------------------------------------------------
# root finding: Aberth-Ehrlich simultaneous iteration
# ---------------------------------------------------------------------------

def roots(p: CPoly, tol: float = 1e-12, max_iter: int = 200):
    """All complex roots of p with multiplicity, as a list of complex.

    Exact inputs are demoted; degree must be >= 1. Initial guesses sit on a
    circle scaled by the Cauchy bound. Raises NoConvergence when the
    iteration budget runs out or a residual fails its backward-error check.
    """
    if p.degree < 1:
        raise ValueError("root finding needs degree >= 1")
    cs = [complex(c.re, c.im) for c in p.demote().coeffs]

    found = []
    while len(cs) > 1 and cs[0] == 0:  # exact zeros at the origin
        found.append(0j)
        cs.pop(0)
    n = len(cs) - 1
    if n == 0:
        return found
    if n == 1:
        return found + [-cs[0] / cs[1]]

    lead = cs[-1]
    mono = [c / lead for c in cs]
    radius = 1.0 + max(abs(c) for c in mono[:-1])
    zs = [radius * cmath.exp(2j * cmath.pi * (k + 0.37) / n) for k in range(n)]

    def horner_both(z):
        pv = mono[-1]
        dv = 0j
        for c in reversed(mono[:-1]):
            dv = dv * z + pv
            pv = pv * z + c
        return pv, dv

    for _ in range(max_iter):
        done = True
        for i in range(n):
            z = zs[i]
            pv, dv = horner_both(z)
            if dv == 0:
                zs[i] = z + (1e-8 + 1e-8j) * (1 + abs(z))
                done = False
                continue
            w = pv / dv
            s = sum(1.0 / (z - zs[j]) for j in range(n) if j != i)
            denom = 1.0 - w * s
            step = w if denom == 0 else w / denom
            zs[i] = z - step
            if abs(step) > tol * (1.0 + abs(zs[i])):
                done = False
        if done:
            break
    else:
        raise NoConvergence(f"Aberth iteration did not settle in {max_iter} steps")

    for z in zs:
        scale = sum(abs(c) * abs(z) ** k for k, c in enumerate(mono))
        pv, _ = horner_both(z)
        if abs(pv) > 1e-10 * max(scale, 1e-300):
            raise NoConvergence(f"root residual {abs(pv):.3e} too large at {z}")
    return found + zs


# ---------------------------------------------------------------------------
# determinants of polynomial matrices
# ---------------------------------------------------------------------------

def det_poly(matrix) -> CPoly:
    """Determinant of a square matrix of CPoly entries.

    Cofactor expansion with minor memoization up to 6x6 (no divisions, no
    pivoting concerns on polynomial entries); fraction-free Bareiss
    elimination above that, which needs exact division of intermediates.
    """
    n = len(matrix)
    if n == 0:
        return CPoly.constant(1)
    for row in matrix:
        if len(row) != n:
            raise ValueError("determinant of a non-square matrix")
    if n <= 6:
        return _det_cofactor(matrix)
    return _det_bareiss(matrix)


def _det_cofactor(m) -> CPoly:
    n = len(m)
    memo = {}

    def minor(mask):
        if mask == 0:
            return CPoly.constant(1)
        got = memo.get(mask)
        if got is not None:
            return got
        row = n - bin(mask).count("1")
        out = CPoly.zero()
        sign = 1
        rest = mask
        while rest:
            low = rest & (-rest)
            col = low.bit_length() - 1
            e = m[row][col]
            if not e.is_zero():
                term = e * minor(mask ^ low)
                out = out + (term if sign > 0 else -term)
            sign = -sign
            rest ^= low
        memo[mask] = out
        return out

    return minor((1 << n) - 1)


def _det_bareiss(m) -> CPoly:
    n = len(m)
    a = [list(row) for row in m]
    sign = 1
    prev = CPoly.constant(1)
    for k in range(n - 1):
        if a[k][k].is_zero():
            for i in range(k + 1, n):
                if not a[i][k].is_zero():
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return CPoly.zero()
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[k][k] * a[i][j] - a[i][k] * a[k][j]
                a[i][j] = num.exact_div(prev)
        prev = a[k][k]
    d = a[n - 1][n - 1]
    return d if sign > 0 else -d


# ---------------------------------------------------------------------------
# scalar parsing for the CLI (exact rational strings or decimal floats)
# ---------------------------------------------------------------------------

def parse_scalar(text: str) -> CScalar:
    """Parse "3/2", "-2", "1.5", "2+1/3i", "0.5-2i", "i" into a CScalar.

    A part written with a decimal point or exponent makes the whole value
    float mode; pure integers and fractions stay exact.
    """
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty scalar")
    # split into at most two signed parts
    parts = []
    start = 0
    for k in range(1, len(s)):
        if s[k] in "+-" and s[k - 1] not in "eE/+-":
            parts.append(s[start:k])
            start = k
    parts.append(s[start:])
    if len(parts) > 2:
        raise ValueError(f"cannot parse scalar {text!r}")

    re_part, im_part = None, None
    for part in parts:
        if part[-1] in "ij":
            if im_part is not None:
                raise ValueError(f"two imaginary parts in {text!r}")
            im_part = part[:-1]
            if im_part in ("", "+", "-"):
                im_part += "1"
        else:
            if re_part is not None:
                raise ValueError(f"two real parts in {text!r}")
            re_part = part

    def num(u):
        if u is None:
            return Fraction(0)
        if "." in u or "e" in u or "E" in u:
            return float(u)
        return Fraction(u)

    re_v, im_v = num(re_part), num(im_part)
    exact = _is_exact_number(re_v) and _is_exact_number(im_v)
    if not exact:
        return CScalar(float(re_v), float(im_v), exact=False)
    return CScalar(re_v, im_v, exact=True)
