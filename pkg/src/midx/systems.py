"""Classical (undeformed) difference-Schrodinger system data.

Four families are covered. Continuous Hahn and Meixner-Pollaczek live on the
whole real line with imaginary shift unit gamma = 1 and sinusoidal coordinate
eta(x) = x; they are the ones that get deformed downstream. Wilson (eta = x^2,
half line) and the harmonic-oscillator Hermite data appear only as limit
endpoints.

Per family this module provides the potential, the energy levels, the ground
state in log space, the eigenpolynomials generated term by term from their
hypergeometric series (never by recurrence), the closed-form norms, and the
parameter-shift constants of shape invariance.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import InvalidParams, PoleHit, UnsupportedFamily
from .polyalg import CPoly, CScalar, I_UNIT, ipow, poch

CH = "ch"
MP = "mp"
WILSON = "wilson"
HERMITE = "hermite"

FAMILIES = (CH, MP, WILSON, HERMITE)


# ---------------------------------------------------------------------------
# complex log-gamma
# ---------------------------------------------------------------------------

_LANCZOS_G = 7
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def loggamma(z) -> complex:
    """log Gamma(z), analytic on the plane cut along (-inf, 0].

    Lanczos approximation (g=7, 9 coefficients) for Re z >= 1/2. Smaller
    real parts are lifted with the recurrence
    log Gamma(z) = log Gamma(z+m) - sum_k Log(z+k), which preserves the
    standard branch everywhere off the cut; a reflection formula would not
    without winding corrections.
    """
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == int(z.real):
        raise ValueError(f"log-gamma pole at {z}")
    shift = 0j
    if z.real < 0.5:
        m = int(math.ceil(0.5 - z.real))
        for k in range(m):
            shift += cmath.log(z + k)
        z = z + m
    w = z - 1.0
    x = _LANCZOS_C[0]
    for k in range(1, 9):
        x += _LANCZOS_C[k] / (w + k)
    t = w + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (w + 0.5) * cmath.log(t) - t + cmath.log(x) - shift


def loggamma_array(z: np.ndarray) -> np.ndarray:
    """Vectorized loggamma; same branch as the scalar version."""
    z = np.asarray(z, dtype=complex)
    out = np.zeros_like(z)
    lo = float(np.min(z.real)) if z.size else 1.0
    m = max(0, int(math.ceil(0.5 - lo)))
    shift = np.zeros_like(z)
    for k in range(m):
        shift += np.log(z + k)
    w = z + m - 1.0
    x = np.full_like(z, _LANCZOS_C[0])
    for k in range(1, 9):
        x += _LANCZOS_C[k] / (w + k)
    t = w + _LANCZOS_G + 0.5
    out = _HALF_LOG_2PI + (w + 0.5) * np.log(t) - t + np.log(x) - shift
    return out


# ---------------------------------------------------------------------------
# parameter sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Angle:
    """An angle phi in (0, pi) carrying cos/sin, exact when representable.

    Exact mode needs (cos, sin) to be a Gaussian-rational point on the unit
    circle; of the standard angles only phi = pi/2 qualifies, and it is
    auto-detected. Anything else keeps float cos/sin.
    """

    value: float
    cos: CScalar
    sin: CScalar

    @staticmethod
    def of(phi: float) -> "Angle":
        phi = float(phi)
        if abs(phi - math.pi / 2) < 1e-15:
            return Angle(math.pi / 2, CScalar(0), CScalar(1))
        return Angle(phi, CScalar(math.cos(phi)), CScalar(math.sin(phi)))

    @staticmethod
    def exact_point(cos, sin) -> "Angle":
        c, s = CScalar.of(cos), CScalar.of(sin)
        if (c * c + s * s) != CScalar(1):
            raise InvalidParams("cos^2 + sin^2 must equal 1 exactly")
        return Angle(math.atan2(float(s.re), float(c.re)), c, s)

    @property
    def exact(self) -> bool:
        return self.cos.exact and self.sin.exact


@dataclass(frozen=True)
class ParamSet:
    """Family-tagged parameter vector; gamma is fixed at 1 where it applies."""

    family: str
    a: tuple
    phi: Optional[Angle] = None

    @property
    def gamma(self) -> int:
        return 1

    @property
    def exact(self) -> bool:
        ok = all(v.exact for v in self.a)
        if self.family == MP:
            ok = ok and self.phi.exact
        return ok

    def demote(self) -> "ParamSet":
        phi = self.phi
        if phi is not None and phi.exact:
            phi = Angle(phi.value, phi.cos.demote(), phi.sin.demote())
        return ParamSet(self.family, tuple(v.demote() for v in self.a), phi)


def ch_params(a1, a2) -> ParamSet:
    return ParamSet(CH, (CScalar.of(a1), CScalar.of(a2)))


def mp_params(a, phi) -> ParamSet:
    av = CScalar.of(a)
    if av.im != 0:
        raise InvalidParams("Meixner-Pollaczek parameter a must be real")
    ang = phi if isinstance(phi, Angle) else Angle.of(phi)
    return ParamSet(MP, (av,), ang)


def wilson_params(a1, a2, a3, a4) -> ParamSet:
    return ParamSet(WILSON, tuple(CScalar.of(v) for v in (a1, a2, a3, a4)))


def hermite_params() -> ParamSet:
    return ParamSet(HERMITE, ())


def validate_params(lam: ParamSet, deformable: bool = False) -> None:
    """Check the family constraints; deformable adds the Re a > 1/2 bound."""
    bound = Fraction(1, 2) if deformable else 0
    if lam.family == CH:
        for v in lam.a:
            if not v.re > bound:
                raise InvalidParams(f"continuous Hahn needs Re a_i > {bound}")
    elif lam.family == MP:
        a, phi = lam.a[0], lam.phi
        if not a.re > bound:
            raise InvalidParams(f"Meixner-Pollaczek needs a > {bound}")
        if not 0 < phi.value < math.pi:
            raise InvalidParams("need 0 < phi < pi")
    elif lam.family == WILSON:
        for v in lam.a:
            if not v.re > 0:
                raise InvalidParams("Wilson needs Re a_i > 0")
        bag = sorted((complex(v.re, v.im) for v in lam.a), key=lambda z: (z.real, z.imag))
        cbag = sorted((complex(v.re, -v.im) for v in lam.a), key=lambda z: (z.real, z.imag))
        if not all(abs(p - q) <= 1e-12 * (1 + abs(p)) for p, q in zip(bag, cbag)):
            raise InvalidParams("Wilson parameter multiset must be conjugation-closed")
    elif lam.family == HERMITE:
        pass
    else:
        raise UnsupportedFamily(lam.family)


def shift_params(lam: ParamSet, beta=1) -> ParamSet:
    """lam + beta * delta with the family's shape-invariance shift delta."""
    half = CScalar.of(beta) * CScalar(Fraction(1, 2))
    if lam.family == CH:
        return ParamSet(CH, (lam.a[0] + half, lam.a[1] + half))
    if lam.family == MP:
        return ParamSet(MP, (lam.a[0] + half,), lam.phi)
    raise UnsupportedFamily(f"no shift data for family {lam.family!r}")


def b1_sum(lam: ParamSet) -> CScalar:
    """Sum of all parameters and conjugates: 2 Re(a1 + a2) (cH) or Wilson's sum."""
    if lam.family == CH:
        return CScalar(2 * (lam.a[0].re + lam.a[1].re))
    if lam.family == WILSON:
        out = lam.a[0]
        for v in lam.a[1:]:
            out = out + v
        return out
    raise UnsupportedFamily(lam.family)


# ---------------------------------------------------------------------------
# energies, potentials, ground states
# ---------------------------------------------------------------------------

def energy(lam: ParamSet, n: int) -> CScalar:
    """n-th eigenvalue; exactly zero at n = 0 and increasing in n."""
    if n < 0:
        raise InvalidParams("level index must be >= 0")
    if lam.family in (CH, WILSON):
        return (b1_sum(lam) + (n - 1)) * n
    if lam.family == MP:
        return lam.phi.sin * (2 * n)
    if lam.family == HERMITE:
        return CScalar(2 * n)
    raise UnsupportedFamily(lam.family)


def potential_polys(lam: ParamSet):
    """(V, V*) as polynomials in x; only cH and MP have polynomial potentials."""
    if lam.family == CH:
        a1, a2 = lam.a
        v = CPoly([a1, I_UNIT]) * CPoly([a2, I_UNIT])
        return v, v.star()
    if lam.family == MP:
        a, phi = lam.a[0], lam.phi
        front = phi.sin + I_UNIT * phi.cos  # e^{i(pi/2 - phi)}
        v = CPoly([a, I_UNIT]) * front
        return v, v.star()
    raise UnsupportedFamily(f"no polynomial potential for {lam.family!r}")


def wilson_potential_parts(lam: ParamSet):
    """Wilson V = num/den split into polynomials, for denominator-cleared checks."""
    if lam.family != WILSON:
        raise UnsupportedFamily(lam.family)
    num = CPoly([1])
    for v in lam.a:
        num = num * CPoly([v, I_UNIT])
    two_ix = CPoly([0, CScalar(0, 2)])
    den = two_ix * (two_ix + 1)
    return num, den


def potential_eval(lam: ParamSet, z) -> CScalar:
    """V(z; lam); PoleHit at the Wilson prefactor poles z in {0, +-i/2}."""
    z = CScalar.of(z)
    if lam.family in (CH, MP):
        return potential_polys(lam)[0].eval(z)
    if lam.family == WILSON:
        num, den = wilson_potential_parts(lam)
        d = den.eval(z)
        if d.is_zero() or abs(d) < 1e-300:
            raise PoleHit(f"Wilson potential pole at z = {z}")
        return num.eval(z) / d
    raise UnsupportedFamily(lam.family)


def potential_star_eval(lam: ParamSet, z) -> CScalar:
    """V*(z; lam), the star of the defining data evaluated at z."""
    z = CScalar.of(z)
    if lam.family in (CH, MP):
        return potential_polys(lam)[1].eval(z)
    if lam.family == WILSON:
        num, den = wilson_potential_parts(lam)
        ns, ds = num.star(), den.star()
        d = ds.eval(z)
        if d.is_zero() or abs(d) < 1e-300:
            raise PoleHit(f"Wilson potential pole at z = {z}")
        return ns.eval(z) / d
    raise UnsupportedFamily(lam.family)


def groundstate_log(lam: ParamSet, x):
    """log phi_0(x) for real x (scalar or numpy array); real-valued output."""
    arr = np.asarray(x, dtype=float)
    lg = loggamma_array
    if lam.family == CH:
        a1 = complex(lam.a[0].re, lam.a[0].im)
        a2 = complex(lam.a[1].re, lam.a[1].im)
        out = (lg(a1 + 1j * arr) + lg(a2 + 1j * arr)).real
    elif lam.family == MP:
        a = float(lam.a[0].re)
        out = (float(lam.phi.value) - math.pi / 2) * arr + lg(a + 1j * arr).real
    elif lam.family == WILSON:
        zs = 1j * arr
        out = np.zeros_like(arr)
        for v in lam.a:
            av = complex(v.re, v.im)
            out = out + 0.5 * (lg(av + zs) + lg(av - zs)).real
        out = out - 0.5 * (lg(2 * zs) + lg(-2 * zs)).real
    elif lam.family == HERMITE:
        out = -0.5 * arr * arr
    else:
        raise UnsupportedFamily(lam.family)
    return float(out) if np.isscalar(x) or np.ndim(x) == 0 else out


def groundstate_eval(lam: ParamSet, z: complex) -> complex:
    """phi_0 continued off the real axis via exp of half the log-gamma sum.

    Along any vertical line Re z = const != 0 (real parameters) this is the
    analytic continuation of the positive ground state on the real axis,
    which is what the raw Casoratian cross-checks require.
    """
    z = complex(z)
    if lam.family == CH:
        a1 = complex(lam.a[0].re, lam.a[0].im)
        a2 = complex(lam.a[1].re, lam.a[1].im)
        s = (loggamma(a1 + 1j * z) + loggamma(a2 + 1j * z)
             + loggamma(a1.conjugate() - 1j * z) + loggamma(a2.conjugate() - 1j * z))
        return cmath.exp(0.5 * s)
    if lam.family == MP:
        a = float(lam.a[0].re)
        s = loggamma(a + 1j * z) + loggamma(a - 1j * z)
        return cmath.exp((float(lam.phi.value) - math.pi / 2) * z + 0.5 * s)
    if lam.family == WILSON:
        s = 0j
        for v in lam.a:
            av = complex(v.re, v.im)
            s += loggamma(av + 1j * z) + loggamma(av - 1j * z)
        s -= loggamma(2j * z) + loggamma(-2j * z)
        return cmath.exp(0.5 * s)
    raise UnsupportedFamily(lam.family)


# ---------------------------------------------------------------------------
# eigenpolynomials from their hypergeometric series
# ---------------------------------------------------------------------------

def _fact(n: int) -> CScalar:
    return CScalar(math.factorial(n))


def classical_poly(lam: ParamSet, n: int) -> CPoly:
    """Degree-n eigenpolynomial in the sinusoidal coordinate.

    The series are accumulated with the cancellation-safe rewrite
    (c)_n / (c)_k = (c+k)_{n-k}, so twisted parameter sets that zero a
    lower Pochhammer never divide by zero. For Wilson the variable is
    eta = x^2. No positivity constraint is imposed: twisted (virtual)
    parameter sets are legitimate inputs.
    """
    if n < 0:
        raise InvalidParams("degree must be >= 0")
    if lam.family == CH:
        return _ch_series(lam.a[0], lam.a[1], n)
    if lam.family == MP:
        return _mp_series(lam.a[0], lam.phi, n)
    if lam.family == WILSON:
        return _wilson_series(lam.a, n)
    if lam.family == HERMITE:
        return _hermite(n)
    raise UnsupportedFamily(lam.family)


def _ch_series(a1: CScalar, a2: CScalar, n: int) -> CPoly:
    b1 = CScalar(2 * (a1.re + a2.re), 0, exact=a1.exact and a2.exact)
    p = a1 + a1.conj()
    q = a1 + a2.conj()
    pref = ipow(n) / _fact(n)
    acc = CPoly.zero()
    lin = CPoly.constant(CScalar(1) if (a1.exact and a2.exact) else CScalar(1.0))
    for k in range(n + 1):
        c = (poch(CScalar(-n), k) * poch(b1 + (n - 1), k) / _fact(k)
             * poch(p + k, n - k) * poch(q + k, n - k))
        acc = acc + lin * (pref * c)
        lin = lin * CPoly([a1 + k, I_UNIT])
    return acc


def _mp_series(a: CScalar, phi: Angle, n: int) -> CPoly:
    c, s = phi.cos, phi.sin
    z2 = (s * s + I_UNIT * (c * s)) * 2  # 1 - e^{-2 i phi}
    pref = ((c + I_UNIT * s) ** n) / _fact(n)
    twoa = a + a
    acc = CPoly.zero()
    lin = CPoly.constant(CScalar(1) if a.exact and phi.exact else CScalar(1.0))
    zk = CScalar(1) if z2.exact else CScalar(1.0)
    for k in range(n + 1):
        coef = poch(CScalar(-n), k) / _fact(k) * zk * poch(twoa + k, n - k)
        acc = acc + lin * (pref * coef)
        lin = lin * CPoly([a + k, I_UNIT])
        zk = zk * z2
    return acc


def _wilson_series(a, n: int) -> CPoly:
    a1, a2, a3, a4 = a
    b1 = a1 + a2 + a3 + a4
    acc = CPoly.zero()
    quad = CPoly.constant(CScalar(1) if all(v.exact for v in a) else CScalar(1.0))
    for k in range(n + 1):
        coef = (poch(CScalar(-n), k) * poch(b1 + (n - 1), k) / _fact(k)
                * poch(a1 + a2 + k, n - k) * poch(a1 + a3 + k, n - k)
                * poch(a1 + a4 + k, n - k))
        acc = acc + quad * coef
        quad = quad * CPoly([(a1 + k) * (a1 + k), 1])  # ((a1+k)^2 + eta)
    return acc


def _hermite(n: int) -> CPoly:
    coeffs = [0] * (n + 1)
    for m in range(n // 2 + 1):
        coeffs[n - 2 * m] = (
            (-1) ** m * math.factorial(n)
            * 2 ** (n - 2 * m)
            // (math.factorial(m) * math.factorial(n - 2 * m))
        )
    return CPoly(coeffs)


def leading_coeff(lam: ParamSet, n: int) -> CScalar:
    """Closed-form leading coefficient c_n of the degree-n eigenpolynomial."""
    if lam.family == CH:
        return poch(b1_sum(lam) + (n - 1), n) / _fact(n)
    if lam.family == WILSON:
        # Wilson convention carries no 1/n! and alternates sign in eta
        return poch(b1_sum(lam) + (n - 1), n) * ((-1) ** n)
    if lam.family == MP:
        return ((lam.phi.sin + lam.phi.sin) ** n) / _fact(n)
    if lam.family == HERMITE:
        return CScalar(2 ** n)
    raise UnsupportedFamily(lam.family)


# ---------------------------------------------------------------------------
# norms and shape-invariance data
# ---------------------------------------------------------------------------

def norm_h(lam: ParamSet, n: int) -> float:
    """Closed-form squared norm h_n of the n-th eigenfunction."""
    if n < 0:
        raise InvalidParams("level index must be >= 0")
    if lam.family == CH:
        validate_params(lam)
        a = [complex(v.re, v.im) for v in lam.a]
        b1 = float(b1_sum(lam).re)
        s = 0.0
        for aj in a:
            for ak in a:
                s += loggamma(n + aj + ak.conjugate()).real
        s -= math.lgamma(n + 1) + math.log(2 * n + b1 - 1) + loggamma(n + b1 - 1).real
        return 2 * math.pi * math.exp(s)
    if lam.family == MP:
        validate_params(lam)
        a = float(lam.a[0].re)
        sphi = float(lam.phi.sin.re)
        s = math.lgamma(n + 2 * a) - math.lgamma(n + 1) - 2 * a * math.log(2 * sphi)
        return 2 * math.pi * math.exp(s)
    raise UnsupportedFamily(f"no closed-form norm wired for {lam.family!r}")


@dataclass(frozen=True)
class ShiftData:
    """Shape-invariance constants: kappa and the ladder factors f_n, b_{n-1}."""

    family: str
    kappa: int
    lam: ParamSet

    def f(self, n: int) -> CScalar:
        """Lowering factor f_n; f(n) * b(n) equals the n-th energy."""
        if self.family == CH:
            return b1_sum(self.lam) + (n - 1)
        return self.lam.phi.sin + self.lam.phi.sin  # MP: 2 sin phi

    def b(self, n: int) -> CScalar:
        """Raising factor b_{n-1}."""
        return CScalar(n)


def shift_data(lam: ParamSet) -> ShiftData:
    if lam.family not in (CH, MP):
        raise UnsupportedFamily(f"no shift data for family {lam.family!r}")
    return ShiftData(lam.family, 1, lam)
