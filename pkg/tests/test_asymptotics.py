import cmath
import json
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from prandtl_modes import asymptotics as asy
from prandtl_modes.errors import ExcludedParameter, SectorViolation, UnsupportedMu
from prandtl_modes.solutions import neg_odd_polynomials

from .conftest import rel_err

floats = lambda lo, hi: st.floats(lo, hi, allow_nan=False, allow_infinity=False)  # noqa: E731
GENERIC = [0.5 + 0.3j, 2.2 - 0.4j, -1.6 + 0.8j]


def _first_omitted(a, c, zeta, terms):
    t = 1 + 0j
    for k in range(terms):
        t *= (1 - a + k) * (c - a + k) / ((k + 1) * zeta)
    return abs(t)


def _recessive(a, c, zeta):
    """Size of the dropped (-zeta)^{-a} term relative to the kept one."""
    g = abs(complex(mpmath.gamma(a) / mpmath.gamma(c - a)))
    return g * math.exp(-zeta.real + math.pi * abs(a.imag)) * abs(zeta) ** (c - 2 * a.real)


# the error is the first omitted term plus the neglected recessive part
@given(floats(-2, 2), floats(-2, 2), floats(0.5, 3), floats(40, 80), floats(-0.6, 0.6))
def test_kummer_asymptotic_matches_mpmath(ar, ai, c, r, th):
    a = complex(ar, ai)
    if abs(a - round(a.real)) < 0.05 or abs(c - a - round((c - a).real)) < 0.05:
        return
    zeta = r * cmath.exp(1j * th)
    ref = complex(mpmath.hyp1f1(a, c, zeta))
    bound = 2 * (_first_omitted(a, c, zeta, 20) + _recessive(a, c, zeta)) + 1e-10
    assert rel_err(asy.kummer_asymptotic(a, c, zeta, terms=20), ref) < bound


def test_kummer_asymptotic_guards():
    with pytest.raises(SectorViolation):
        asy.kummer_asymptotic(0.5, 1.5, 40j)
    with pytest.raises(SectorViolation):
        asy.kummer_asymptotic(0.5, 1.5, 0)
    with pytest.raises(ExcludedParameter):
        asy.kummer_asymptotic(-2, 1.5, 40)
    with pytest.raises(ExcludedParameter):
        asy.kummer_asymptotic(3.5, 1.5, 40)
    with pytest.raises(ValueError):
        asy.kummer_asymptotic(0.5, 1.5, 40, terms=0)


def test_constants():
    k = asy.AsymptoticConstants.from_mu(-1.0 + 0.5j, sign_k=-1)
    assert k.b == pytest.approx(cmath.exp(1j * math.pi / 8))
    assert k.arg_b2 == pytest.approx(math.pi / 4)
    assert k.C1 == pytest.approx(math.sqrt(math.pi) / complex(mpmath.gamma(-(0.5j) / 4)))
    with pytest.raises(ValueError):
        asy.AsymptoticConstants.from_mu(0.5, sign_k=0)


def test_power_is_even_in_z():
    k = asy.AsymptoticConstants.from_mu(0.3)
    assert k.power(-7.0, 0.3 - 0.2j) == k.power(7.0, 0.3 - 0.2j)


@pytest.mark.parametrize("mu", GENERIC)
@pytest.mark.parametrize("branch", [1, 2])
def test_leading_error_scales_like_inverse_square(mu, branch):
    e8 = abs(asy.upsilon_ratio(mu, branch, 1, 8.0) - 1)
    e16 = abs(asy.upsilon_ratio(mu, branch, 1, 16.0) - 1)
    assert 3.0 < e8 / e16 < 5.5


@pytest.mark.parametrize("mu", GENERIC)
@pytest.mark.parametrize("sign_k", [1, -1])
def test_corrections_improve(mu, sign_k):
    for z in (8.0, -8.0):
        for b in (1, 2):
            one = abs(asy.upsilon_ratio(mu, b, sign_k, z, 1) - 1)
            two = abs(asy.upsilon_ratio(mu, b, sign_k, z, 2) - 1)
            three = abs(asy.upsilon_ratio(mu, b, sign_k, z, 3) - 1)
            assert three < two < one
            assert two < 0.02


@pytest.mark.parametrize("mu", [-3, -5, -7])
def test_negative_odd_leading_order(mu):
    for b in (1, 2):
        for z in (8.0, -8.0):
            assert abs(asy.upsilon_ratio(mu, b, 1, z) - 1) < 0.05


@pytest.mark.parametrize("m", [0, 1, 2])
def test_printed_odd_constant_is_off_by_m_plus_three_over_two(m):
    # the printed leading term carries (m + 3) where the construction gives 2
    mu = -(2 * m + 3)
    polys = neg_odd_polynomials(m)
    z = 12.0
    b = cmath.exp(-1j * math.pi / 8)
    printed = (m + 3) * float(polys.p[-1]) * (b * z) ** (m - 1) * cmath.exp(b * b * z * z / 2)
    exact = asy.upsilon_exact(mu, polys.i, 1, z)
    assert abs(exact / printed * (m + 3) / 2 - 1) < 0.02


def test_second_branch_sign_follows_z():
    a = asy.upsilon_asymptotic(-3, 2, 1, 9.0)
    b = asy.upsilon_asymptotic(-3, 2, 1, -9.0)
    assert b == pytest.approx(-a * (-1) ** (0 - 1))
    assert asy.upsilon_exact(-3, 2, 1, -9.0) / b == pytest.approx(
        asy.upsilon_exact(-3, 2, 1, 9.0) / a, rel=1e-12)


@pytest.mark.parametrize("gamma", [0, -1, 0.7 + 0.1j, 1.5])
def test_integral_ratio_tends_to_one(gamma):
    e10 = abs(asy.gaussian_integral_ratio(gamma, 10.0) - 1)
    e20 = abs(asy.gaussian_integral_ratio(gamma, 20.0) - 1)
    assert e10 < 0.05 and e20 < e10
    assert abs(asy.gaussian_integral_ratio(gamma, 10.0, sign_k=-1) - 1) < 0.05


def test_asymptotic_guards():
    for mu in (-1, 1, 3, 5):
        with pytest.raises(UnsupportedMu):
            asy.upsilon_asymptotic(mu, 1, 1, 8.0)
    with pytest.raises(ValueError):
        asy.upsilon_asymptotic(0.5, 3, 1, 8.0)
    with pytest.raises(ValueError):
        asy.upsilon_asymptotic(0.5, 1, 1, 0.0)


def test_asymptotic_arrays():
    z = np.array([-9.0, 8.0, 10.0])
    out = asy.upsilon_asymptotic(0.5 + 0.3j, 1, 1, z, terms=2)
    assert out.shape == (3,)
    assert out[1] == asy.upsilon_asymptotic(0.5 + 0.3j, 1, 1, 8.0, terms=2)


# ---------------------------------------------------------------- growth classes

def test_classify_growth():
    assert asy.classify_growth(3) == asy.BoundState(2)
    assert asy.classify_growth(-1) == asy.BoundState(0)
    assert asy.classify_growth(1) == asy.SpecialMuOne()
    assert asy.classify_growth(-3) == asy.GenericExponential(0)
    assert asy.classify_growth(-7 + 1e-12j) == asy.GenericExponential(2)
    g = asy.classify_growth(0.4 + 0.1j)
    assert isinstance(g, asy.GenericExponential) and g.negative_odd_m is None


# ---------------------------------------------------------------- scan

def test_default_grid():
    grid = asy.default_scan_grid()
    assert len(grid) > 300
    assert min(abs(m + 1) for m in grid) < 1e-15
    taus = [m * cmath.exp(1j * math.pi / 4) for m in grid]
    assert all(t.imag < 0 and abs(t) <= 3 + 1e-12 for t in taus)


def test_scan_finds_criterion_constants():
    rep = asy.criterion_uniqueness_scan([-1, 0.5 - 0.5j, 2.0 - 1j], Z=8.0, threads=1)
    assert [r.verdict for r in rep.records] == ["bounded", "diverges", "diverges"]
    assert rep.unique_at_minus_one
    r = rep.bounded[0]
    assert r.c0 == pytest.approx(cmath.exp(1j * math.pi / 4) / 2, rel=1e-12)
    assert r.c1 == pytest.approx(-cmath.exp(1j * math.pi / 4) * math.sqrt(2 / math.pi), rel=1e-12)
    data = json.loads(rep.to_json())
    assert data["unique_at_minus_one"] is True
    assert data["records"][0]["mu"] == [-1.0, 0.0]
    assert data["records"][1]["c0"] is None


def test_scan_threads_deterministic():
    grid = asy.default_scan_grid(n=7)
    one = asy.criterion_uniqueness_scan(grid, threads=1)
    four = asy.criterion_uniqueness_scan(grid, threads=4)
    assert one.to_json() == four.to_json()
