"""Family data: log-gamma, energies, potentials, polynomials, norms."""

import math
from fractions import Fraction

import numpy as np
import pytest
import scipy.special

from midx.errors import InvalidParams, PoleHit, UnsupportedFamily
from midx.polyalg import CPoly, CScalar, I_UNIT
from midx.systems import (
    Angle, CH, MP, WILSON, ch_params, classical_poly, energy, groundstate_eval,
    groundstate_log, hermite_params, leading_coeff, loggamma, loggamma_array,
    mp_params, norm_h, potential_eval, potential_polys, potential_star_eval,
    shift_data, shift_params, validate_params, wilson_params,
)


class TestLogGamma:
    def test_against_scipy_grid(self):
        res = np.linspace(-6.3, 8.2, 30)
        ims = np.linspace(-22.0, 22.0, 31)
        zs = np.array([complex(r, i) for r in res for i in ims if abs(i) > 1e-3])
        mine = loggamma_array(zs)
        ref = scipy.special.loggamma(zs)
        assert np.max(np.abs(mine - ref) / (1 + np.abs(ref))) < 1e-11

    def test_scalar_matches_vector(self):
        for z in (0.3 + 2j, -2.5 + 0.7j, 4.0 - 1j):
            assert loggamma(z) == pytest.approx(complex(loggamma_array(np.array([z]))[0]))

    def test_real_axis(self):
        for x in (0.5, 1.0, 3.7, 12.0):
            assert loggamma(x).real == pytest.approx(math.lgamma(x), rel=1e-13)
            assert abs(loggamma(x).imag) < 1e-13

    def test_pole(self):
        with pytest.raises(ValueError):
            loggamma(0.0)


class TestParams:
    def test_angle_right_angle_exact(self):
        ang = Angle.of(math.pi / 2)
        assert ang.exact and ang.cos == CScalar(0) and ang.sin == CScalar(1)
        assert not Angle.of(math.pi / 3).exact

    def test_angle_exact_point(self):
        ang = Angle.exact_point(Fraction(3, 5), Fraction(4, 5))
        assert ang.exact
        with pytest.raises(InvalidParams):
            Angle.exact_point(Fraction(1, 2), Fraction(1, 2))

    def test_validate(self):
        validate_params(ch_params(2, 2), deformable=True)
        with pytest.raises(InvalidParams):
            validate_params(ch_params(Fraction(1, 2), 2), deformable=True)
        with pytest.raises(InvalidParams):
            validate_params(mp_params(-1, math.pi / 2))
        validate_params(wilson_params(1, 2, CScalar(1, 1), CScalar(1, -1)))
        with pytest.raises(InvalidParams):
            validate_params(wilson_params(1, 2, CScalar(1, 1), CScalar(2, 1)))

    def test_shift(self):
        lam = shift_params(ch_params(2, 3))
        assert lam.a[0] == CScalar(Fraction(5, 2))
        assert lam.a[1] == CScalar(Fraction(7, 2))
        lam = shift_params(mp_params(2, math.pi / 2), -1)
        assert lam.a[0] == CScalar(Fraction(3, 2))


class TestEnergy:
    def test_zero_level(self):
        assert energy(ch_params(Fraction(3, 2), 2), 0).is_zero()

    def test_mp_right_angle(self):
        assert energy(mp_params(1, math.pi / 2), 3) == CScalar(6)

    def test_ch_derived(self):
        # a1 = a2 = 1: b1 = 4, so E_1 = 1 * (1 + 4 - 1) = 4
        assert energy(ch_params(1, 1), 1) == CScalar(4)

    def test_increasing(self):
        lam = mp_params(2, math.pi / 3)
        vals = [float(energy(lam, n).re) for n in range(6)]
        assert all(b > a for a, b in zip(vals, vals[1:]))


class TestPotential:
    def test_ch_origin(self):
        assert potential_eval(ch_params(1, 1), 0) == CScalar(1)

    def test_ch_zero_at_i(self):
        # V(i) = (1 + i*i)(2 + i*i) = 0 * 1
        assert potential_eval(ch_params(1, 2), CScalar(0, 1)).is_zero()

    def test_mp_origin(self):
        assert potential_eval(mp_params(1, math.pi / 2), 0) == CScalar(1)

    def test_star_is_conjugate_on_reals(self):
        lam = ch_params(CScalar(1, Fraction(1, 3)), 2)
        v = potential_eval(lam, Fraction(2, 5))
        vs = potential_star_eval(lam, Fraction(2, 5))
        assert vs == v.conj()

    def test_wilson_pole(self):
        lam = wilson_params(1, 1, 2, 2)
        with pytest.raises(PoleHit):
            potential_eval(lam, 0)
        with pytest.raises(PoleHit):
            potential_eval(lam, CScalar(0, Fraction(1, 2)))
        v = potential_eval(lam, CScalar(Fraction(1, 3)))
        assert v.exact


class TestGroundstate:
    def test_ch_unit_origin(self):
        assert groundstate_log(ch_params(1, 1), 0.0) == pytest.approx(0.0, abs=1e-13)

    def test_mp_origin(self):
        assert groundstate_log(mp_params(1, math.pi / 2), 0.0) == pytest.approx(0.0, abs=1e-13)

    def test_ch_unit_at_one(self):
        # Gamma(1+i)Gamma(1-i) = pi/sinh(pi), squared under the square root
        want = math.log(math.pi / math.sinh(math.pi))
        assert groundstate_log(ch_params(1, 1), 1.0) == pytest.approx(want, rel=1e-12)

    def test_eval_positive_on_axis(self):
        lam = ch_params(2, Fraction(3, 2))
        v = groundstate_eval(lam, 0.8)
        assert v.imag == pytest.approx(0.0, abs=1e-12)
        assert v.real > 0
        assert math.log(v.real) == pytest.approx(groundstate_log(lam, 0.8), rel=1e-12)

    def test_array_matches_scalar(self):
        lam = mp_params(2, math.pi / 3)
        xs = np.array([-1.5, 0.25, 2.0])
        arr = groundstate_log(lam, xs)
        for x, v in zip(xs, arr):
            assert groundstate_log(lam, float(x)) == pytest.approx(v)


def _poch_scalar(c, k):
    out = CScalar(1)
    for m in range(k):
        out = out * (c + m)
    return out


class TestClassicalPoly:
    def test_degree_zero_everywhere(self):
        for lam in (ch_params(2, 3), mp_params(2, math.pi / 2),
                    wilson_params(1, 1, 2, 2), hermite_params()):
            assert classical_poly(lam, 0) == CPoly([1])

    def test_ch_n1_closed_form(self):
        # first-degree series expanded by hand:
        # i * [ (a1+a1*)(a1+a2*) - b1 (a1 + i x) ]
        a1, a2 = CScalar(Fraction(3, 2), 1), CScalar(2, Fraction(-1, 2))
        lam = ch_params(a1, a2)
        b1 = CScalar(2 * (a1.re + a2.re))
        want = (CPoly.constant((a1 + a1.conj()) * (a1 + a2.conj()))
                - CPoly([a1, I_UNIT]) * b1) * I_UNIT
        assert classical_poly(lam, 1) == want

    def test_hermite_n2(self):
        assert classical_poly(hermite_params(), 2) == CPoly([-2, 0, 4])

    def test_star_real(self):
        for lam in (ch_params(CScalar(1, Fraction(1, 2)), Fraction(5, 2)),
                    mp_params(Fraction(7, 4), math.pi / 2)):
            for n in range(5):
                p = classical_poly(lam, n)
                assert p.star() == p

    def test_leading_coefficient(self):
        for lam in (ch_params(2, Fraction(3, 2)), mp_params(2, math.pi / 2),
                    wilson_params(1, 2, 2, 3), hermite_params()):
            for n in range(6):
                p = classical_poly(lam, n)
                assert p.degree == n
                assert p.leading() == leading_coeff(lam, n)

    def test_twisted_params_no_zero_division(self):
        # a1 + a1* at a twisted point can be a nonpositive integer; the
        # series rewrite must stay finite.
        lam = ch_params(0, 1)  # twisted image of a1 = 1
        p = classical_poly(lam, 1)
        assert p.degree == 1

    def test_wilson_variable_is_eta(self):
        lam = wilson_params(1, 1, 2, 2)
        assert classical_poly(lam, 2).degree == 2  # degree in eta = x^2

    def test_mp_exact_point_angle(self):
        ang = Angle.exact_point(Fraction(3, 5), Fraction(4, 5))
        p = classical_poly(mp_params(2, ang), 3)
        assert p.exact and p.star() == p


class TestNorm:
    def test_ch_unit(self):
        assert norm_h(ch_params(1, 1), 0) == pytest.approx(math.pi / 3, rel=1e-12)

    def test_mp_unit(self):
        assert norm_h(mp_params(1, math.pi / 2), 0) == pytest.approx(math.pi / 2, rel=1e-12)

    def test_positive(self):
        lam = ch_params(CScalar(2, Fraction(1, 4)), Fraction(3, 2))
        for n in range(5):
            assert norm_h(lam, n) > 0

    def test_unsupported(self):
        with pytest.raises(UnsupportedFamily):
            norm_h(wilson_params(1, 1, 2, 2), 0)


class TestShiftData:
    @pytest.mark.parametrize("lam", [ch_params(2, Fraction(5, 2)),
                                     mp_params(Fraction(7, 4), math.pi / 3)])
    def test_product_is_energy(self, lam):
        sd = shift_data(lam)
        assert sd.kappa == 1
        for n in range(1, 9):
            prod = sd.f(n) * sd.b(n)
            en = energy(lam, n)
            assert abs(prod - en) < 1e-12 * (1 + abs(en))
