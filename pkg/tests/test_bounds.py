import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pantslab import bounds
from pantslab.bounds import (BoundReport, ball_prefactor_direct, bers_sphere_bound,
                             bishop_gromov_diameter_lb, bishop_gromov_normalized,
                             check_g_convexity, cusp_curve_length, evaluate,
                             genus_recursion_profile, halving_step_holds_from,
                             limit_transfer_check, log_ball_prefactor, prefactor_exponent_scan,
                             ricci_lower_bound, sphere_recursion_profile, strata_lower_bound,
                             strata_telescoped, surrogate_log_volume, teo_ricci_constant,
                             verify_genus_recursion, verify_sphere_recursion,
                             wolpert_pinch_length)
from pantslab.errors import DomainError


def test_wolpert_values():
    assert wolpert_pinch_length(0) == 0
    assert wolpert_pinch_length(2 * math.pi) == pytest.approx(2 * math.pi, rel=1e-12)
    assert wolpert_pinch_length(1) == pytest.approx(2.5066282746310002, rel=1e-12)
    with pytest.raises(DomainError):
        wolpert_pinch_length(-1e-9)


def test_bers_sphere():
    assert bers_sphere_bound(4) == pytest.approx(30 * math.sqrt(4 * math.pi), rel=1e-12)
    with pytest.raises(DomainError):
        bers_sphere_bound(2)
    vals = [bers_sphere_bound(n) for n in range(4, 200)]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_teo_constant():
    assert teo_ricci_constant(1) == pytest.approx(0.68179, abs=5e-6)
    assert ricci_lower_bound(1) == pytest.approx(-2 * teo_ricci_constant(1) ** 2, rel=1e-12)
    for k in range(3, 7):
        eps = 10.0 ** -k
        assert teo_ricci_constant(eps) * math.sqrt(math.pi) * eps == pytest.approx(1, abs=1e-3)
    grid = np.linspace(1e-3, 1, 2000)
    vals = [teo_ricci_constant(float(e)) for e in grid]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    with pytest.raises(DomainError):
        teo_ricci_constant(0)


def test_teo_matches_unsimplified_formula():
    for eps in (0.05, 0.3, 1.0, 2.5):
        x = 4 * math.exp(eps) / (math.exp(eps) + 1) ** 2
        direct = (4 * math.pi / 3 * (1 - x ** 3)) ** -0.5
        assert teo_ricci_constant(eps) == pytest.approx(direct, rel=1e-10)


def test_g_convexity_grid():
    res = check_g_convexity(np.unique(np.geomspace(16, 10 ** 6, 30).astype(int)))
    assert res == {"min_not_at_half": [], "max_not_at_ends": [], "not_unimodal": []}


def test_sphere_profile_exact_region_is_monotone_and_raised_by_base():
    low1, up1, _ = sphere_recursion_profile(3000, base=1.0)
    low2, up2, _ = sphere_recursion_profile(3000, base=2.0)
    assert np.all(np.diff(low1) >= 0)
    assert np.all(low2 >= low1) and np.all(up2 >= up1)
    # without an interval phase the two profiles coincide
    assert np.array_equal(low1, up1)


def test_sphere_interval_bracket_contains_exact():
    exact, _, _ = sphere_recursion_profile(6000, full_scan=6000)
    low, up, _ = sphere_recursion_profile(6000, full_scan=1500, intervals=16)
    assert np.all(low <= exact + 1e-9)
    assert np.all(exact <= up + 1e-9)


def test_sphere_recursion_report():
    rep = verify_sphere_recursion(50_000)
    assert rep.satisfied
    lo, hi = rep.details["band"]
    assert 0 < lo <= hi <= rep.value < math.inf


def test_genus_recursion_step():
    assert halving_step_holds_from(10 ** 6) == 13
    n = 14
    lhs = math.sqrt(n / 2 + 1) * math.log(n / 2 + 1) + math.sqrt(n)
    assert lhs <= math.sqrt(n) * math.log(n)
    n = 12
    lhs = math.sqrt(n / 2 + 1) * math.log(n / 2 + 1) + math.sqrt(n)
    assert lhs > math.sqrt(n) * math.log(n)


def test_genus_profile_matches_plain_loop():
    F = genus_recursion_profile(5000, 1.5)
    ref = [1.0] * 4
    for n in range(4, 5001):
        ref.append(math.sqrt(2) * ref[(n + 1) // 2 + 1] + 1.5 * math.sqrt(n))
    assert np.allclose(F, ref, rtol=1e-12)


def test_genus_recursion_without_drift():
    F = genus_recursion_profile(10 ** 6, 0.0)
    n = np.array([10 ** 3, 10 ** 4, 10 ** 5, 10 ** 6])
    r = F[n] / (np.sqrt(n) * np.log(n))
    assert np.all(np.diff(r) < 0) and r[-1] < 0.1
    assert np.all(F[n] / np.sqrt(n) < 2)


@given(st.floats(0.1, 10), st.floats(0.1, 10))
def test_recursions_monotone_in_base(b1, b2):
    lo, hi = sorted((b1, b2))
    assert np.all(genus_recursion_profile(2000, 1.0, lo) <= genus_recursion_profile(2000, 1.0, hi))
    assert np.all(sphere_recursion_profile(800, lo)[0] <= sphere_recursion_profile(800, hi)[0])


def test_strata_forms():
    assert strata_telescoped(1, 6) == 1
    assert strata_lower_bound(1, 4) == 0
    n = np.arange(4, 10 ** 6 + 1)
    smooth = 1 / math.sqrt(2) * np.sqrt(n - 4)
    tele = np.sqrt((n - 4) // 2)
    with_base = np.sqrt((n - 4) // 2 + 1)
    even = n % 2 == 0
    assert np.all(tele[even] >= smooth[even] - 1e-12)
    assert np.all(with_base >= smooth)
    assert strata_telescoped(2.0, 11, with_base=True) == pytest.approx(2 * math.sqrt(4))


def test_prefactor_log_vs_direct():
    for N in range(6, 61):
        for alpha in (0.5, 1.0, 100.0):
            direct = ball_prefactor_direct(N, alpha)
            assert log_ball_prefactor(N, alpha) == pytest.approx(math.log(direct), rel=1e-9)


def test_prefactor_is_at_most_e_squared_to_the_n():
    assert prefactor_exponent_scan(6, 6000, 1.0) <= 2.0


def test_bishop_gromov_shape():
    vals = [bishop_gromov_normalized(g) for g in (10, 100, 1000, 10_000)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    lo, hi = bounds.BG_NORMALIZED_BAND
    assert all(lo <= v <= hi for v in vals)


def test_bishop_gromov_v_doubling_identity():
    g, lv, lam, v = 50, surrogate_log_volume(50), 0.5, 0.2
    N = 6 * g - 6
    alpha = v ** -2
    d1 = bishop_gromov_diameter_lb(g, lv, lam, v)
    d2 = bishop_gromov_diameter_lb(g, lv, lam, 2 * v)
    # alpha -> alpha/4: the prefactor gains ((N-1)/2) log 4, the divisor halves
    num1 = d1 * math.sqrt(alpha * (N - 1))
    expect = (num1 - (N - 1) / 2 * math.log(4)) / math.sqrt(alpha / 4 * (N - 1))
    assert d2 == pytest.approx(expect, rel=1e-12)


def test_bishop_gromov_domain():
    with pytest.raises(DomainError):
        bishop_gromov_diameter_lb(1, 1.0, 0.5, 0.1)
    with pytest.raises(DomainError):
        bishop_gromov_diameter_lb(5, 1.0, 1.0, 0.1)


def test_limit_transfer():
    rep = limit_transfer_check(2, 10 ** 8, 100)
    assert rep.value == pytest.approx(2 * math.sqrt(2 * math.pi * 200) * 1e-2, rel=1e-12)
    assert rep.satisfied is False
    assert limit_transfer_check(2, 10 ** 11, 100).satisfied
    assert rep.details["super_multiplicative_gap"] == pytest.approx(0, abs=1e-9)
    assert cusp_curve_length(2) == pytest.approx(15.669, abs=1e-3)
    assert rep.details["cusp_pinch"] == pytest.approx(2 * math.sqrt(2 * math.pi * math.log(16 * math.pi)))


@pytest.mark.parametrize("name,inputs", [
    ("wolpert", {"L": 3.0}),
    ("bers-sphere", {"n": 9}),
    ("teo", {"eps": 0.2}),
    ("strata", {"b": 1.5, "n": 21}),
    ("bishop-gromov", {"g": 40, "log_vol": 300.0, "lam": 0.5, "v_eps": 0.1}),
    ("cusp", {"genus": 3}),
    ("genus-recursion", {"N_max": 5000, "D": 1.0}),
    ("limit-transfer", {"g": 2, "n": 1000, "A_g": 5.0}),
])
def test_reports_recompute_identically(name, inputs):
    rep = evaluate(name, **inputs)
    assert isinstance(rep, BoundReport)
    assert rep.recompute() == rep
    stored = rep.to_dict()["inputs"]
    assert {k: stored[k] for k in inputs} == inputs


def test_unknown_bound():
    with pytest.raises(KeyError):
        evaluate("nope")
