"""Correctness checks for the classical and deformed systems.

Every identity is verified at the polynomial level after clearing all
denominator factors, so exact parameter sets give literally zero residuals
and float runs are judged coefficientwise against a 1e-9 relative
tolerance. Square roots never appear: shape invariance is checked through
its polynomial consequences (the eigenequation and the two shift-operator
relations), which together pin down the factorized Hamiltonian.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .casoratian import (DeformedSystem, build_system, casoratian_numeric,
                         denominator_poly, multi_indexed_poly)
from .errors import (HermiticityGateError, IdentityViolated,
                     InterlacingViolated)
from .polyalg import CPoly, CScalar, I_UNIT, roots
from .systems import (CH, MP, WILSON, ParamSet, classical_poly, energy,
                      groundstate_eval, leading_coeff, potential_eval,
                      potential_polys, potential_star_eval, shift_data,
                      shift_params, wilson_potential_parts)
from .virtual_states import (TYPE_I, TYPE_II, IndexSet, alpha_prime,
                             tilde_shift, twist, validate_index_set,
                             virtual_energy, virtual_poly)

POLY_RTOL = 1e-9
REAL_ROOT_RTOL = 1e-8
BOUNDARY_MARGIN = 1e-6


@dataclass
class CheckReport:
    """Outcome of one identity check."""

    name: str
    ok: bool = True
    residual: float = 0.0
    detail: str = ""


def _identity(name: str, plus, minus, rtol: float = POLY_RTOL) -> CheckReport:
    """Assert sum(plus) - sum(minus) == 0 as polynomials.

    Exact inputs must cancel identically; float inputs may leave
    coefficients up to rtol times the largest coefficient among the terms.
    """
    total = CPoly.zero()
    scale = 0.0
    exact = True
    for t in plus:
        total = total + t
        scale = max(scale, t.max_coeff_mag())
        exact = exact and t.exact
    for t in minus:
        total = total - t
        scale = max(scale, t.max_coeff_mag())
        exact = exact and t.exact
    if exact:
        if not total.is_zero():
            raise IdentityViolated(
                f"{name}: exact residual of degree {total.degree}",
                residual=total.max_coeff_mag(),
                detail=repr(total))
        return CheckReport(name)
    resid = total.max_coeff_mag()
    if resid > rtol * max(scale, 1e-300):
        k = max(range(len(total.coeffs)), key=lambda i: abs(total.coeffs[i]))
        raise IdentityViolated(
            f"{name}: residual {resid:.3e} over scale {scale:.3e} "
            f"(worst coefficient at degree {k})",
            residual=resid, detail=f"degree {k}")
    return CheckReport(name, residual=resid / max(scale, 1e-300))


def _scalar_identity(name: str, a: CScalar, b: CScalar) -> CheckReport:
    if a.exact and b.exact:
        if a != b:
            raise IdentityViolated(f"{name}: {a} != {b}")
        return CheckReport(name)
    num = abs(a - b)
    den = max(abs(a), abs(b), 1e-300)
    if num > 1e-9 * den:
        raise IdentityViolated(f"{name}: {a} != {b}", residual=num / den)
    return CheckReport(name, residual=num / den)


def _ig(tau) -> CScalar:
    """Imaginary shift i*tau as an exact scalar (gamma = 1 throughout)."""
    return CScalar(0, Fraction(tau) if not isinstance(tau, float) else tau)


# ---------------------------------------------------------------------------
# classical (undeformed) identities
# ---------------------------------------------------------------------------

def classical_eigencheck(lam: ParamSet, n: int) -> CheckReport:
    """The similarity-transformed eigenequation for the classical polynomial:
    V (P(x-ig) - P) + V* (P(x+ig) - P) = E_n P, denominator-cleared for
    Wilson where V is rational."""
    en = energy(lam, n)
    if lam.family == WILSON:
        w = classical_poly(lam, n)
        p = w.compose(CPoly([0, 0, 1]))  # eta = x^2
        num, den = wilson_potential_parts(lam)
        nums, dens = num.star(), den.star()
        t1 = num * dens * (p.shift_arg(_ig(-1)) - p)
        t2 = nums * den * (p.shift_arg(_ig(1)) - p)
        rhs = den * dens * p * en
        return _identity(f"classical eigenequation wilson n={n}", [t1, t2], [rhs])
    p = classical_poly(lam, n)
    v, vs = potential_polys(lam)
    t1 = v * (p.shift_arg(_ig(-1)) - p)
    t2 = vs * (p.shift_arg(_ig(1)) - p)
    return _identity(f"classical eigenequation {lam.family} n={n}",
                     [t1, t2], [p * en])


def classical_shift_check(lam: ParamSet, n: int) -> list:
    """Forward and backward ladder relations between degrees n and n-1."""
    if n < 1:
        raise ValueError("shift relations start at n = 1")
    sd = shift_data(lam)
    lam_up = shift_params(lam)
    pn = classical_poly(lam, n)
    pm = classical_poly(lam_up, n - 1)
    v, vs = potential_polys(lam)
    half = Fraction(1, 2)
    fwd = _identity(
        f"classical forward relation {lam.family} n={n}",
        [(pn.shift_arg(_ig(-half)) - pn.shift_arg(_ig(half))) * I_UNIT],
        [pm * sd.f(n)])
    bwd = _identity(
        f"classical backward relation {lam.family} n={n}",
        [(vs * pm.shift_arg(_ig(half)) - v * pm.shift_arg(_ig(-half))) * I_UNIT],
        [pn * sd.b(n)])
    return [fwd, bwd]


def virtual_state_check(lam: ParamSet, ttype: str, v: int) -> list:
    """The virtual wavefunction solves the original equation at its energy.

    Checked through the twist relations of the potential (two polynomial
    identities), the classical eigenequation at twisted parameters, and the
    virtual-energy closed form; together these give H phi~ = E~ phi~.
    """
    tw = twist(lam, ttype)
    vp, vps = potential_polys(lam)
    tp, tps = potential_polys(tw)
    out = [
        _identity(f"potential twist product ({ttype})",
                  [vp * vps.shift_arg(_ig(-1))], [tp * tps.shift_arg(_ig(-1))]),
        _identity(f"potential twist sum ({ttype})",
                  [vp + vps, CPoly.constant(alpha_prime(lam, ttype))], [tp + tps]),
        classical_eigencheck(tw, v),
        _scalar_identity(f"virtual energy ({ttype}, v={v})",
                         virtual_energy(lam, ttype, v),
                         alpha_prime(lam, ttype) + energy(tw, v)),
    ]
    return out


# ---------------------------------------------------------------------------
# strip scan and the hermiticity gate
# ---------------------------------------------------------------------------

@dataclass
class StripScanReport:
    """Root locations of a denominator polynomial against the shift strip."""

    roots: list
    min_abs_im: float
    strip_halfwidth: float
    verdict: str  # zero_free | strip_zero | boundary_ambiguous

    def as_dict(self):
        return {"verdict": self.verdict,
                "min_abs_im": self.min_abs_im,
                "strip_halfwidth": self.strip_halfwidth,
                "roots": [[z.real, z.imag] for z in self.roots]}


def strip_scan(xi: CPoly, gamma: float = 1.0) -> StripScanReport:
    """Locate every zero and compare against the strip |Im x| <= gamma/2.

    Hermiticity of the deformed Hamiltonian needs the strip zero-free. A
    root within 1e-6 of the boundary cannot be adjudicated in floating
    point and yields the verdict boundary_ambiguous.
    """
    half = 0.5 * abs(gamma)
    if xi.degree < 1:
        if xi.is_zero():
            raise ValueError("strip scan of the zero polynomial")
        return StripScanReport([], math.inf, half, "zero_free")
    rs = roots(xi)
    min_abs = min(abs(z.imag) for z in rs)
    if any(abs(abs(z.imag) - half) <= BOUNDARY_MARGIN for z in rs):
        verdict = "boundary_ambiguous"
    elif min_abs > half:
        verdict = "zero_free"
    else:
        verdict = "strip_zero"
    return StripScanReport(rs, min_abs, half, verdict)


def hermiticity_verdict(sys: DeformedSystem) -> str:
    """Classify and cache the system verdict: ok, strip_zero, odd_degree, unknown."""
    if sys.hermiticity_verdict in ("ok", "strip_zero", "odd_degree"):
        return sys.hermiticity_verdict
    if not sys.d.even_degree:
        sys.hermiticity_verdict = "odd_degree"
        return sys.hermiticity_verdict
    rep = strip_scan(sys.xi.demote(), sys.gamma)
    sys.hermiticity_verdict = {"zero_free": "ok",
                               "strip_zero": "strip_zero",
                               "boundary_ambiguous": "unknown"}[rep.verdict]
    return sys.hermiticity_verdict


def require_hermitian(sys: DeformedSystem, what: str) -> None:
    verdict = hermiticity_verdict(sys)
    if verdict != "ok":
        raise HermiticityGateError(
            f"{what} refuses to run: hermiticity verdict is {verdict!r} "
            f"for {sys.d.label()} at {sys.lam}")


# ---------------------------------------------------------------------------
# deformed-system identities
# ---------------------------------------------------------------------------

def eigencheck(sys: DeformedSystem, n: int) -> CheckReport:
    """The deformed eigenequation, cleared of its denominator polynomials:

    V(Lam) Xi(x+ig/2)^2 [Xi'(x) P(x-ig) - Xi'(x-ig) P(x)]
      + V*(Lam) Xi(x-ig/2)^2 [Xi'(x) P(x+ig) - Xi'(x+ig) P(x)]
      = E_n Xi(x-ig/2) Xi(x+ig/2) Xi'(x) P(x),

    with Xi at lam, Xi' at lam+delta, and Lam the twist-shifted parameters.
    """
    half = Fraction(1, 2)
    p = sys.p(n)
    v, vs = potential_polys(sys.lam_shifted)
    xi_p = sys.xi.shift_arg(_ig(half))
    xi_m = sys.xi.shift_arg(_ig(-half))
    xid = sys.xi_delta
    t1 = v * xi_p * xi_p * (xid * p.shift_arg(_ig(-1)) - xid.shift_arg(_ig(-1)) * p)
    t2 = vs * xi_m * xi_m * (xid * p.shift_arg(_ig(1)) - xid.shift_arg(_ig(1)) * p)
    rhs = xi_m * xi_p * xid * p * energy(sys.lam, n)
    return _identity(f"deformed eigenequation {sys.d.label()} n={n}",
                     [t1, t2], [rhs])


def shift_op_check(sys: DeformedSystem, n: int) -> list:
    """Forward/backward shift-operator actions on the multi-indexed polynomials.

    Forward:  i[Xi'(x+ig/2) P_n(x-ig/2) - Xi'(x-ig/2) P_n(x+ig/2)]
                = f_n Xi(x) P'_{n-1}(x)
    Backward: -i[V(Lam) Xi(x+ig/2) P'_{n-1}(x-ig/2)
                 - V*(Lam) Xi(x-ig/2) P'_{n-1}(x+ig/2)]
                = b_{n-1} Xi'(x) P_n(x)
    where primes mark quantities at lam + delta.
    """
    if n < 1:
        raise ValueError("shift relations start at n = 1")
    half = Fraction(1, 2)
    sd = shift_data(sys.lam)
    pn = sys.p(n)
    pm = multi_indexed_poly(sys.lam_delta, sys.d, n - 1)
    xi, xid = sys.xi, sys.xi_delta
    v, vs = potential_polys(sys.lam_shifted)
    fwd = _identity(
        f"deformed forward relation {sys.d.label()} n={n}",
        [(xid.shift_arg(_ig(half)) * pn.shift_arg(_ig(-half))
          - xid.shift_arg(_ig(-half)) * pn.shift_arg(_ig(half))) * I_UNIT],
        [xi * pm * sd.f(n)])
    bwd = _identity(
        f"deformed backward relation {sys.d.label()} n={n}",
        [(vs * xi.shift_arg(_ig(-half)) * pm.shift_arg(_ig(half))
          - v * xi.shift_arg(_ig(half)) * pm.shift_arg(_ig(-half))) * I_UNIT],
        [xid * pn * sd.b(n)])
    return [fwd, bwd]


# ---------------------------------------------------------------------------
# appendix closed forms
# ---------------------------------------------------------------------------

def _xi_leading_closed_form(lam: ParamSet, d: IndexSet) -> CScalar:
    """Closed-form leading coefficient of the denominator polynomial."""
    out = CScalar(1)
    if lam.family == CH:
        for t, v in d.entries:
            out = out * leading_coeff(twist(lam, t), v)
        for ds in (d.degrees_I, d.degrees_II):
            for j in range(len(ds)):
                for k in range(j + 1, len(ds)):
                    out = out * (ds[k] - ds[j])
        p = lam.a[0] + lam.a[0].conj()
        q = lam.a[1] + lam.a[1].conj()
        for dj in d.degrees_I:
            for dk in d.degrees_II:
                out = out * (p - dj - q + dk)
        return out
    for _, v in d.entries:
        out = out * leading_coeff(twist(lam, TYPE_I), v)
    ds = d.degrees_I
    for j in range(len(ds)):
        for k in range(j + 1, len(ds)):
            out = out * (ds[k] - ds[j])
    return out


def _p_leading_closed_form(lam: ParamSet, d: IndexSet, n: int) -> CScalar:
    out = _xi_leading_closed_form(lam, d) * leading_coeff(lam, n)
    if lam.family == CH:
        p = lam.a[0] + lam.a[0].conj()
        q = lam.a[1] + lam.a[1].conj()
        for dj in d.degrees_I:
            out = out * (CScalar(dj + 1) - p - n)
        for dj in d.degrees_II:
            out = out * (CScalar(dj + 1) - q - n)
        return out
    twoa = lam.a[0] + lam.a[0]
    for dj in d.degrees_I:
        out = out * (CScalar(dj + 1) - twoa - n)
    return out


def _p0_prefactor(lam: ParamSet, d: IndexSet) -> CScalar:
    out = CScalar(1)
    if lam.family == CH:
        p = lam.a[0] + lam.a[0].conj()
        q = lam.a[1] + lam.a[1].conj()
        for dj in d.degrees_I:
            out = out * (CScalar(dj + 1) - p)
        for dj in d.degrees_II:
            out = out * (CScalar(dj + 1) - q)
        return out
    twoa = lam.a[0] + lam.a[0]
    for dj in d.degrees_I:
        out = out * (CScalar(dj + 1) - twoa)
    return out


def appendix_identities(lam: ParamSet, d, n_max: int = 3) -> list:
    """Compare the determinant constructions against every applicable
    closed form: leading coefficients, the n = 0 collapse onto the shifted
    denominator polynomial, and the degree-0 reduction identities."""
    if not isinstance(d, IndexSet):
        d = validate_index_set(d, lam)
    out = []
    xi = denominator_poly(lam, d)
    out.append(_scalar_identity(f"leading coefficient of Xi {d.label()}",
                                xi.leading() if xi.degree >= 0 else CScalar(0),
                                _xi_leading_closed_form(lam, d)))
    for n in range(n_max + 1):
        p = multi_indexed_poly(lam, d, n)
        out.append(_scalar_identity(
            f"leading coefficient of P {d.label()} n={n}",
            p.leading(), _p_leading_closed_form(lam, d, n)))
    xi_up = denominator_poly(shift_params(lam), d)
    out.append(_identity(f"lowest level vs shifted denominator {d.label()}",
                         [multi_indexed_poly(lam, d, 0)],
                         [xi_up * _p0_prefactor(lam, d)]))
    out.extend(_reduction_identities(lam, d, n_max))
    return out


def _reduction_identities(lam: ParamSet, d: IndexSet, n_max: int) -> list:
    """Degree-0 entries drop out onto a smaller index set at shifted parameters."""
    out = []
    if lam.family == CH:
        p = lam.a[0] + lam.a[0].conj()
        q = lam.a[1] + lam.a[1].conj()
        if 0 in d.degrees_I:
            others = [v for v in d.degrees_I if v != 0]
            paper = IndexSet(tuple([(TYPE_I, v) for v in others] + [(TYPE_I, 0)]
                                   + [(TYPE_II, v) for v in d.degrees_II]))
            lam_up = tilde_shift(lam, TYPE_I)
            dprime = IndexSet(tuple([(TYPE_I, v - 1) for v in others]
                                    + [(TYPE_II, v + 1) for v in d.degrees_II]))
            for n in range(n_max + 1):
                a = CScalar((-1) ** d.m1) * (p + (n - 1))
                for dj in others:
                    a = a * (q - p + (dj + 1))
                for dj in d.degrees_II:
                    a = a * (dj + 1)
                out.append(_identity(
                    f"type-I degree-0 reduction {d.label()} n={n}",
                    [multi_indexed_poly(lam, paper, n)],
                    [multi_indexed_poly(lam_up, dprime, n) * a]))
        if 0 in d.degrees_II:
            others = [v for v in d.degrees_II if v != 0]
            paper = IndexSet(tuple([(TYPE_I, v) for v in d.degrees_I]
                                   + [(TYPE_II, v) for v in others] + [(TYPE_II, 0)]))
            lam_up = tilde_shift(lam, TYPE_II)
            dprime = IndexSet(tuple([(TYPE_I, v + 1) for v in d.degrees_I]
                                    + [(TYPE_II, v - 1) for v in others]))
            for n in range(n_max + 1):
                a = CScalar((-1) ** d.m) * (q + (n - 1))
                for dj in others:
                    a = a * (p - q + (dj + 1))
                for dj in d.degrees_I:
                    a = a * (dj + 1)
                out.append(_identity(
                    f"type-II degree-0 reduction {d.label()} n={n}",
                    [multi_indexed_poly(lam, paper, n)],
                    [multi_indexed_poly(lam_up, dprime, n) * a]))
        return out
    if 0 in d.degrees_I:  # MP
        others = [v for v in d.degrees_I if v != 0]
        paper = IndexSet(tuple([(TYPE_I, v) for v in others] + [(TYPE_I, 0)]))
        lam_up = tilde_shift(lam, TYPE_I)
        dprime = IndexSet(tuple((TYPE_I, v - 1) for v in others))
        twoa = lam.a[0] + lam.a[0]
        two_sin = lam.phi.sin + lam.phi.sin
        for n in range(n_max + 1):
            a = CScalar((-1) ** d.m) * (twoa + (n - 1)) * two_sin ** (d.m - 1)
            out.append(_identity(
                f"degree-0 reduction {d.label()} n={n}",
                [multi_indexed_poly(lam, paper, n)],
                [multi_indexed_poly(lam_up, dprime, n) * a]))
    return out


# ---------------------------------------------------------------------------
# interlacing
# ---------------------------------------------------------------------------

def interlace_check(sys: DeformedSystem, n_max: int = 8) -> CheckReport:
    """Root pattern of the multi-indexed polynomials up to n_max.

    Each P has exactly n real roots plus ell non-real ones, and consecutive
    levels strictly interlace on the real line. Runs only on systems whose
    hermiticity has been established.
    """
    require_hermitian(sys, "interlacing check")
    ell = sys.d.ell
    prev = None
    for n in range(n_max + 1):
        p = sys.p(n).demote()
        rs = roots(p) if p.degree >= 1 else []
        real = sorted(z.real for z in rs
                      if abs(z.imag) <= REAL_ROOT_RTOL * (1 + abs(z)))
        n_complex = len(rs) - len(real)
        if len(real) != n or n_complex != ell:
            raise InterlacingViolated(
                f"{sys.d.label()} n={n}: {len(real)} real and {n_complex} "
                f"non-real roots, expected {n} and {ell}")
        if prev is not None and n >= 1:
            for i in range(len(prev)):
                if not (real[i] < prev[i] < real[i + 1]):
                    raise InterlacingViolated(
                        f"{sys.d.label()}: roots of n={n - 1} do not interlace "
                        f"n={n} at position {i}: {prev} vs {real}")
        prev = real
    return CheckReport(f"interlacing {sys.d.label()} n<={n_max}")


# ---------------------------------------------------------------------------
# raw Casoratian cross-checks (factored forms vs determinant quotients)
# ---------------------------------------------------------------------------

def _virtual_wavefunctions(lam: ParamSet, d: IndexSet):
    fns = []
    for t, v in d.entries:
        tw = twist(lam, t)
        xi = virtual_poly(lam, t, v)
        fns.append(lambda z, tw=tw, xi=xi: groundstate_eval(tw, z) * xi.eval_complex(z))
    return fns


def raw_potential_check(sys: DeformedSystem, count: int = 20, seed: int = 7) -> CheckReport:
    """The raw Casoratian form of the deformed potential against the
    denominator-polynomial form, at random real sample points.

    The outer square root of the raw form is branch-ambiguous in floating
    point, so the comparison is sign-insensitive and additionally checks
    the squared values, which carry no ambiguity at all.
    """
    rng = random.Random(seed)
    lam, d, g = sys.lam, sys.d, float(sys.gamma)
    m = d.m
    fns = _virtual_wavefunctions(lam, d)
    phi0 = lambda z: groundstate_eval(lam, z)
    worst = 0.0
    worst_sq = 0.0
    flips = 0
    for _ in range(count):
        x = rng.uniform(0.15, 2.5) * rng.choice([-1.0, 1.0])
        v2 = complex(sys.potential_value(x))
        front = (complex(potential_eval(lam, complex(x, -0.5 * m * g)))
                 * complex(potential_star_eval(lam, complex(x, -0.5 * (m + 2) * g))))
        w_up = casoratian_numeric(fns, x + 0.5j * g, g)
        w_dn = casoratian_numeric(fns, x - 0.5j * g, g)
        w2_shift = casoratian_numeric(fns + [phi0], x - 1j * g, g)
        w2_here = casoratian_numeric(fns + [phi0], x, g)
        raw = cmath.sqrt(front) * (w_up / w_dn) * (w2_shift / w2_here)
        scale = max(abs(v2), 1e-300)
        err = min(abs(raw - v2), abs(raw + v2)) / scale
        if abs(raw + v2) < abs(raw - v2):
            flips += 1
        worst = max(worst, err)
        worst_sq = max(worst_sq, abs(raw * raw - v2 * v2) / scale ** 2)
    ok = worst <= 1e-8 and worst_sq <= 1e-8
    rep = CheckReport(f"raw vs factored potential {d.label()}", ok=ok,
                      residual=max(worst, worst_sq),
                      detail=f"{flips} square-root sign flips in {count} samples")
    if not ok:
        raise IdentityViolated(rep.name + f": residual {rep.residual:.3e}",
                               residual=rep.residual, detail=rep.detail)
    return rep


def raw_eigenfunction_check(sys: DeformedSystem, n: int, count: int = 20,
                            seed: int = 11) -> CheckReport:
    """The raw Casoratian eigenfunction against weight times polynomial.

    Here the square-root argument pairs conjugate factors, so it is a
    positive real number and the comparison is direct.
    """
    rng = random.Random(seed)
    lam, d, g = sys.lam, sys.d, float(sys.gamma)
    m = d.m
    fns = _virtual_wavefunctions(lam, d)
    pn = classical_poly(lam, n)
    phin = lambda z: groundstate_eval(lam, z) * pn.eval_complex(z)
    p_poly = sys.p(n)
    worst = 0.0
    for _ in range(count):
        x = rng.uniform(0.15, 2.5) * rng.choice([-1.0, 1.0])
        w_top = casoratian_numeric(fns + [phin], x, g)
        w_dn = casoratian_numeric(fns, x - 0.5j * g, g)
        w_up = casoratian_numeric(fns, x + 0.5j * g, g)
        prod = 1.0 + 0j
        for j in range(m):
            vv = complex(potential_eval(lam, complex(x, 0.5 * (m - 2 * j) * g)))
            vvs = complex(potential_star_eval(lam, complex(x, -0.5 * (m - 2 * j) * g)))
            prod *= vv * vvs
        inside = prod / (w_dn * w_up)
        if abs(inside.imag) > 1e-8 * abs(inside):
            raise IdentityViolated(
                f"square-root argument not real at x={x}: {inside}")
        raw = w_top * math.sqrt(inside.real)
        fac = math.exp(0.5 * sys.log_weight_squared(x)) * p_poly.eval_complex(x).real
        scale = max(abs(fac), abs(raw), 1e-300)
        worst = max(worst, abs(raw - fac) / scale)
    ok = worst <= 1e-8
    rep = CheckReport(f"raw vs factored eigenfunction {d.label()} n={n}",
                      ok=ok, residual=worst)
    if not ok:
        raise IdentityViolated(rep.name + f": residual {worst:.3e}",
                               residual=worst)
    return rep
