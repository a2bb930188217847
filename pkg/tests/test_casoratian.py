"""Casoratian engine: row factors, determinant builds, weight, potential."""

import math
from fractions import Fraction

import numpy as np
import pytest

from midx.casoratian import (build_system, casoratian_numeric, denominator_poly,
                             denominator_poly_single_type, lambda_shifted,
                             multi_indexed_poly, multi_indexed_poly_single_type,
                             row_factor)
from midx.errors import DegenerateLeadingCoeff, DenominatorZero
from midx.polyalg import CPoly, CScalar, I_UNIT
from midx.systems import (CH, MP, ch_params, classical_poly, groundstate_log,
                          mp_params, potential_eval, shift_params)
from midx.virtual_states import (tilde_shift, validate_index_set, virtual_poly)


def D(spec, lam, **kw):
    return validate_index_set(spec, lam, **kw)


class TestRowFactor:
    def test_size_one_is_unity(self):
        lam = ch_params(2, 2)
        assert row_factor(lam, "I", 1, 1) == CPoly([1])

    def test_size_two_real_params(self):
        lam = ch_params(2, 3)
        a1 = CScalar(2)
        # j=1: i^{-1} (a1* - 1/2 - ix)_1 ; j=2: -i^{-1} (a1 - 1/2 + ix)_1
        minus_i = CScalar(0, -1)
        want1 = CPoly([a1 - Fraction(1, 2), -I_UNIT]) * minus_i
        want2 = CPoly([a1 - Fraction(1, 2), I_UNIT]) * minus_i * CScalar(-1)
        assert row_factor(lam, "I", 1, 2) == want1
        assert row_factor(lam, "I", 2, 2) == want2

    def test_degree(self):
        lam = ch_params(Fraction(5, 2), 2)
        for m in (2, 3, 4):
            for j in range(1, m + 1):
                assert row_factor(lam, "II", j, m).degree == m - 1


class TestCasoratianNumeric:
    def test_single_function(self):
        assert casoratian_numeric([lambda z: z * z + 1], 0.7) == pytest.approx(1.49)

    def test_one_and_x(self):
        # i * det[[1, x+i/2], [1, x-i/2]] = i * (-i) = 1
        val = casoratian_numeric([lambda z: 1.0, lambda z: z], 0.4, 1.0)
        assert val == pytest.approx(1.0)

    def test_repeated_function_vanishes(self):
        f = lambda z: z ** 2 - 1j
        val = casoratian_numeric([f, f], 1.3)
        assert abs(val) < 1e-12

    def test_empty(self):
        assert casoratian_numeric([], 0.0) == 1.0


class TestDenominator:
    def test_single_zero_entry(self):
        lam = ch_params(2, 2)
        assert denominator_poly(lam, D("I:0", lam)) == CPoly([1])

    def test_single_entry_is_virtual_poly(self):
        lam = ch_params(2, Fraction(5, 2))
        for t, v in (("I", 2), ("II", 1)):
            xi = denominator_poly(lam, D(f"{t}:{v}", lam))
            assert xi == virtual_poly(lam, t, v)

    def test_two_type_hand_expansion(self):
        # both degree-0 entries: the 2x2 determinant collapses to 2(a1-a2) x
        lam = ch_params(2, 3)
        xi = denominator_poly(lam, D("I:0,II:0", lam))
        assert xi == CPoly([0, -2])

    def test_degenerate_cross_factor(self):
        # equal parameters kill the leading coefficient of the mixed set
        lam = ch_params(2, 2)
        with pytest.raises(DegenerateLeadingCoeff):
            denominator_poly(lam, D("I:0,II:0", lam))

    def test_star_real_and_degree(self):
        lam = ch_params(CScalar(2, Fraction(1, 4)), Fraction(5, 2))
        for spec in ("I:1,I:2", "I:2,II:1", "I:0,I:1,I:2"):
            d = D(spec, lam)
            xi = denominator_poly(lam, d)
            assert xi.degree == d.ell
            assert xi.star() == xi

    def test_matches_numeric_casoratian(self):
        # type-I only: the symbolic build must equal the plain numeric
        # Casoratian of the virtual polynomials at sample points
        lam = ch_params(Fraction(5, 2), 2)
        d = D("I:1,I:2", lam)
        xi = denominator_poly(lam, d)
        fns = [virtual_poly(lam, "I", v).eval_complex for _, v in d.entries]
        for x in (0.0, 0.7, -1.3):
            want = casoratian_numeric(fns, x, 1.0)
            assert xi.eval_complex(x) == pytest.approx(want, rel=1e-10, abs=1e-10)

    def test_shortcut_agrees_with_general(self):
        lam = ch_params(Fraction(5, 2), 2)
        for spec in ("I:1,I:2", "II:0,II:1"):
            d = D(spec, lam)
            assert denominator_poly_single_type(lam, d) == denominator_poly(lam, d)

    def test_permutation_sign(self):
        lam = ch_params(Fraction(5, 2), 2)
        fwd = denominator_poly(lam, D("I:1,I:2", lam, canonicalize=False))
        rev = denominator_poly(lam, D("I:2,I:1", lam, canonicalize=False))
        assert rev == -fwd

    def test_mp_build(self):
        lam = mp_params(2, math.pi / 2)
        d = D("0,2", lam)
        xi = denominator_poly(lam, d)
        assert xi.degree == d.ell == 1
        assert xi.star() == xi

    def test_exact_vs_float(self):
        lam = ch_params(Fraction(5, 2), 2)
        d = D("I:1,I:2", lam)
        exact = denominator_poly(lam, d)
        approx = denominator_poly(lam.demote(), d)
        assert exact.exact and not approx.exact
        for ce, cf in zip(exact.coeffs, approx.coeffs):
            assert complex(cf.re, cf.im) == pytest.approx(complex(ce.re, ce.im), rel=1e-12)


class TestMultiIndexed:
    def test_empty_set_reduces_to_classical(self):
        lam = ch_params(2, Fraction(5, 2))
        d = D("", lam)
        for n in range(4):
            assert multi_indexed_poly(lam, d, n) == classical_poly(lam, n)

    def test_degrees_and_star(self):
        lam = ch_params(CScalar(2, Fraction(1, 4)), Fraction(5, 2))
        for spec in ("I:2", "I:1,I:2", "I:2,II:1"):
            d = D(spec, lam)
            for n in range(3):
                p = multi_indexed_poly(lam, d, n)
                assert p.degree == d.ell + n
                assert p.star() == p

    def test_lowest_is_shifted_denominator(self):
        # P_{D,0} is proportional to the denominator at lam + delta
        lam = ch_params(2, Fraction(5, 2))
        d = D("I:2", lam)
        p0 = multi_indexed_poly(lam, d, 0)
        xi_up = denominator_poly(shift_params(lam), d)
        ratio = p0.leading() / xi_up.leading()
        assert p0 == xi_up * ratio

    def test_shortcut_agrees_with_general(self):
        lam = ch_params(Fraction(5, 2), 2)
        for spec in ("I:1,I:2", "II:0,II:1"):
            d = D(spec, lam)
            for n in (0, 2):
                assert (multi_indexed_poly_single_type(lam, d, n)
                        == multi_indexed_poly(lam, d, n))

    def test_mp_degrees(self):
        lam = mp_params(Fraction(5, 2), math.pi / 2)
        d = D("2,3", lam)
        for n in range(3):
            p = multi_indexed_poly(lam, d, n)
            assert p.degree == d.ell + n
            assert p.star() == p


class TestDeformedSystem:
    def test_lambda_shifted(self):
        lam = ch_params(2, 3)
        s = lambda_shifted(lam, D("I:1,I:2,II:0", lam))
        assert s.a[0] == CScalar(2 - Fraction(2, 2) + Fraction(1, 2))
        assert s.a[1] == CScalar(3 + Fraction(2, 2) - Fraction(1, 2))
        lam = mp_params(2, math.pi / 2)
        s = lambda_shifted(lam, D("0,1", lam))
        assert s.a[0] == CScalar(1)

    def test_weight_of_zero_step(self):
        # single degree-0 entry: weight reduces to the shifted ground state
        lam = ch_params(2, 2)
        sys = build_system(lam, "I:0")
        lam_up = tilde_shift(lam, "I", 1)
        for x in (0.0, 0.8, -2.2):
            assert sys.log_weight_squared(x) == pytest.approx(
                2 * groundstate_log(lam_up, x), rel=1e-12)

    def test_weight_vectorized(self):
        sys = build_system(ch_params(2, 2), "I:2")
        xs = np.array([-1.0, 0.0, 0.5])
        arr = sys.log_weight_squared(xs)
        for x, v in zip(xs, arr):
            assert sys.log_weight_squared(float(x)) == pytest.approx(v)

    def test_weight_asymptotic_envelope(self):
        # at |x| = 30 the log weight must sit on the gamma-function
        # asymptote: 2[ log 2pi + (Re a1 + Re a2 - 1) log|x| - pi |x| ]
        # minus the log of the squared leading denominator behaviour.
        lam = ch_params(2, 2)
        sys = build_system(lam, "I:2")
        c = abs(sys.xi.leading())
        for x in (30.0, -30.0):
            want = (2 * (math.log(2 * math.pi) + (4 - 1) * math.log(abs(x))
                         - math.pi * abs(x))
                    - 2 * math.log(c) - 2 * sys.d.ell * math.log(abs(x)))
            assert sys.log_weight_squared(x) == pytest.approx(want, abs=0.05)

    def test_potential_trivial_cases(self):
        lam = ch_params(2, Fraction(5, 2))
        sys = build_system(lam, "")
        z = CScalar(Fraction(1, 3), Fraction(1, 7))
        assert sys.potential_value(z) == potential_eval(lam, z)
        sys0 = build_system(lam, "I:0")
        lam_up = tilde_shift(lam, "I", 1)
        assert sys0.potential_value(z) == potential_eval(lam_up, z)

    def test_potential_denominator_zero(self):
        lam = ch_params(2, 2)
        sys = build_system(lam, "I:2")
        zeros = [z for z in np.roots([complex(c.re, c.im) for c in sys.xi_delta.coeffs][::-1])]
        with pytest.raises(DenominatorZero):
            sys.potential_value(CScalar(float(zeros[0].real), float(zeros[0].imag)))

    def test_verdict_initialisation(self):
        lam = ch_params(2, 2)
        assert build_system(lam, "I:1").hermiticity_verdict == "odd_degree"
        assert build_system(lam, "I:2").hermiticity_verdict == "unknown"
