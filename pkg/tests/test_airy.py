"""Airy kernel: values, branches, zeros, asymptotic seams."""

import math

import mpmath as mp
import numpy as np
import pytest
from scipy import special

from quasiuniform.airy import (
    ASYMPTOTIC_SWITCH,
    AiryOverflowError,
    AiryPoleError,
    BranchSelector,
    airy_quad,
    airy_zero,
    log_deriv_combo,
    log_deriv_pair,
    log_deriv_triple,
)

PLUS_I = BranchSelector.plus_i()
MINUS_I = BranchSelector.minus_i()
T0 = BranchSelector.real(0.0)


def maclaurin_airy(a, terms=60, dps=40):
    """Arbitrary-precision Maclaurin oracle for (Ai, Ai', Bi, Bi').

    Ai = c1 f - c2 g, Bi = sqrt(3) (c1 f + c2 g) with the standard f, g
    series; independent of the production evaluation path.
    """
    with mp.workdps(dps):
        a = mp.mpf(a)
        c1 = mp.mpf(3) ** mp.mpf("-2/3") / mp.gamma(mp.mpf(2) / 3)
        c2 = mp.mpf(3) ** mp.mpf("-1/3") / mp.gamma(mp.mpf(1) / 3)
        f = mp.mpf(1)
        fp = mp.mpf(0)
        g = a
        gp = mp.mpf(1)
        tf, tg = mp.mpf(1), a
        for k in range(1, terms):
            tf = tf * a ** 3 * (3 * k - 2) / ((3 * k) * (3 * k - 1) * (3 * k - 2))
            f += tf
            fp += tf * (3 * k) / a if a != 0 else 0
            tg = tg * a ** 3 * (3 * k - 1) / ((3 * k + 1) * (3 * k) * (3 * k - 1))
            g += tg
            gp += tg * (3 * k + 1) / a if a != 0 else 0
        ai = c1 * f - c2 * g
        aip = c1 * fp - c2 * gp
        bi = mp.sqrt(3) * (c1 * f + c2 * g)
        bip = mp.sqrt(3) * (c1 * fp + c2 * gp)
        return [float(v) for v in (ai, aip, bi, bip)]


def test_values_at_zero_closed_form():
    q = airy_quad(0.0)
    ai0 = 3.0 ** (-2.0 / 3.0) / math.gamma(2.0 / 3.0)
    aip0 = -(3.0 ** (-1.0 / 3.0)) / math.gamma(1.0 / 3.0)
    assert q.ai == pytest.approx(ai0, rel=1e-15)
    assert q.ai == pytest.approx(0.3550280538878172, rel=1e-15)
    assert q.aip == pytest.approx(aip0, rel=1e-15)
    assert q.aip == pytest.approx(-0.2588194037928068, rel=1e-15)
    assert q.bi == pytest.approx(math.sqrt(3.0) * ai0, rel=1e-14)


def test_value_at_one_vs_series_oracle():
    q = airy_quad(1.0)
    ai, aip, bi, bip = maclaurin_airy(1.0)
    assert q.ai == pytest.approx(ai, rel=1e-13)
    assert q.ai == pytest.approx(0.1352924163, rel=1e-9)
    assert q.aip == pytest.approx(aip, rel=1e-13)
    assert q.bi == pytest.approx(bi, rel=1e-13)
    assert q.bip == pytest.approx(bip, rel=1e-13)


@pytest.mark.parametrize("a", [-7.7, -3.0, -0.5, 0.9, 2.5, 6.5])
def test_series_oracle_spot_checks(a):
    got = airy_quad(a)
    ai, aip, bi, bip = maclaurin_airy(a)
    assert got.ai == pytest.approx(ai, rel=2e-13, abs=1e-300)
    assert got.bi == pytest.approx(bi, rel=2e-13)


def test_wronskian_random_points():
    rng = np.random.default_rng(7)
    a = rng.uniform(-8.0, 8.0, 10000)
    ai, aip, bi, bip = special.airy(a)
    wr = ai * bip - aip * bi
    assert np.max(np.abs(wr * math.pi - 1.0)) <= 1e-12


def test_wronskian_of_quad():
    assert airy_quad(2.2).wronskian() * math.pi == pytest.approx(1.0, abs=1e-13)


def test_bi_overflow_signals():
    with pytest.raises(AiryOverflowError):
        airy_quad(120.0)
    with pytest.raises(ValueError):
        airy_quad(float("nan"))


def test_log_deriv_t0_at_zero():
    expected = -(3.0 ** (1.0 / 3.0)) * math.gamma(2.0 / 3.0) / math.gamma(1.0 / 3.0)
    got = log_deriv_combo(0.0, T0)
    assert got.imag == 0.0
    assert got.real == pytest.approx(expected, rel=1e-13)
    assert got.real == pytest.approx(-0.7290111, rel=1e-6)


def test_log_deriv_plus_i_at_zero():
    # closed form: (c2/c1) * (1/2 + i sqrt(3)/2) with c1 = Ai(0), c2 = -Ai'(0)
    q = airy_quad(0.0)
    kappa = -q.aip / q.ai
    expected = kappa * complex(0.5, math.sqrt(3.0) / 2.0)
    got = log_deriv_combo(0.0, PLUS_I)
    assert got == pytest.approx(expected, rel=1e-13)
    assert got == pytest.approx(complex(0.3645056, 0.6313422), rel=1e-6)


def test_log_deriv_plus_i_asymptotic_vs_highprec():
    got = log_deriv_combo(-50.0, PLUS_I)
    with mp.workdps(40):
        w = mp.airyai(-50) + 1j * mp.airybi(-50)
        wp = mp.airyai(-50, 1) + 1j * mp.airybi(-50, 1)
        expected = complex(wp / w)
    assert got == pytest.approx(expected, rel=1e-12)
    # leading asymptotic form quoted to lower accuracy
    assert got == pytest.approx(complex(0.005, math.sqrt(50.0)), rel=5e-5)


def test_conjugation_is_exact():
    a = np.linspace(-40.0, 6.0, 101)
    yp, y2p = log_deriv_pair(a, PLUS_I)
    ym, y2m = log_deriv_pair(a, MINUS_I)
    assert np.array_equal(ym, np.conj(yp))
    assert np.array_equal(y2m, np.conj(y2p))


@pytest.mark.parametrize("a", [-8.5, -8.0, -7.5])
def test_regime_overlap_oscillatory(a):
    q = airy_quad(a)
    direct = (q.aip + 1j * q.bip) / (q.ai + 1j * q.bi)
    got = log_deriv_combo(a, PLUS_I)
    assert got == pytest.approx(direct, rel=1e-10)


@pytest.mark.parametrize("a", [7.5, 8.0, 8.5])
def test_regime_overlap_decaying(a):
    q = airy_quad(a)
    got = log_deriv_combo(a, T0)
    assert got.real == pytest.approx(q.aip / q.ai, rel=1e-10)


def test_decaying_branch_no_underflow_far_out():
    # Ai underflows near a ~ 105; the ratio must keep going
    val = log_deriv_combo(5000.0, T0).real
    assert val == pytest.approx(-math.sqrt(5000.0), rel=1e-3)
    assert math.isfinite(val)


@pytest.mark.parametrize("a", [-1e2, -1e4])
def test_oscillatory_asymptote_feed(a):
    y1 = log_deriv_combo(a, PLUS_I)
    tol = 10.0 * abs(a) ** (-2.5)
    assert abs(y1.imag - math.sqrt(-a)) <= tol
    assert abs(y1.real + 1.0 / (4.0 * a)) <= tol


def test_pole_signal_on_real_branch():
    q = airy_quad(1.0)
    t = -q.ai / q.bi  # denominator vanishes at a = 1 for this t
    with pytest.raises(AiryPoleError) as err:
        log_deriv_combo(1.0, BranchSelector.real(t))
    assert err.value.a == pytest.approx(1.0)


def test_t0_pole_at_negative_zero_of_ai():
    z1 = airy_zero(1)
    with pytest.raises(AiryPoleError):
        log_deriv_combo(z1, T0)


class TestAiryZero:
    def bisect_oracle(self, index):
        # independent coarse bracketing + bisection on scipy values
        lo, hi = -(3.0 * (index + 1)) ** (2.0 / 3.0) - 2.0, 0.0
        grid = np.linspace(lo, hi, 4000)
        vals = special.airy(grid)[0]
        sign_flips = np.nonzero(vals[:-1] * vals[1:] < 0.0)[0]
        i0 = sign_flips[-index]
        a, b = grid[i0], grid[i0 + 1]
        for _ in range(100):
            m = 0.5 * (a + b)
            if special.airy(m)[0] * special.airy(a)[0] < 0.0:
                b = m
            else:
                a = m
        return 0.5 * (a + b)

    @pytest.mark.parametrize("index,known", [(1, -2.3381074105), (2, -4.0879494441)])
    def test_first_zeros(self, index, known):
        z = airy_zero(index)
        assert z == pytest.approx(known, abs=1e-9)
        assert z == pytest.approx(self.bisect_oracle(index), abs=1e-11)
        assert abs(airy_quad(z).ai) <= 1e-12

    def test_matches_scipy_table(self):
        zeros = special.ai_zeros(6)[0]
        for i, z_ref in enumerate(zeros, start=1):
            assert airy_zero(i) == pytest.approx(z_ref, abs=1e-11)

    def test_rejects_bad_index(self):
        with pytest.raises(ValueError):
            airy_zero(0)


def test_triple_matches_pair_and_oracle():
    a = np.array([-30.0, -9.5, -5.0, 0.3, 4.0])
    y1, y2, b2c = log_deriv_triple(a, PLUS_I)
    y1p, y2p = log_deriv_pair(a, PLUS_I)
    assert np.array_equal(y1, y1p)
    assert np.array_equal(y2, y2p)
    with mp.workdps(50):
        for i, aa in enumerate(a):
            w = mp.airyai(aa) + 1j * mp.airybi(aa)
            wp = mp.airyai(aa, 1) + 1j * mp.airybi(aa, 1)
            y1m = wp / w
            y2m = (mp.mpf(1) / 30) * (-8 * aa ** 2 * y1m ** 2 - 4 * aa * y1m + 8 * aa ** 3 - 3)
            b2m = (
                y2m ** 2 - y2m + mp.mpf(4) / 3 * aa * y1m * y2m
                - mp.mpf(4) / 9 * aa ** 3 + mp.mpf(4) / 9 * aa ** 2 * y1m ** 2
                + mp.mpf(2) / 9 * aa * y1m
            )
            assert complex(y2[i]) == pytest.approx(complex(y2m), rel=1e-10, abs=1e-13)
            assert complex(b2c[i]) == pytest.approx(complex(b2m), rel=2e-9, abs=1e-11)


def test_switch_constant_is_eight():
    # callers rely on the documented regime split
    assert ASYMPTOTIC_SWITCH == 8.0
