import itertools
import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lzeta.arith import psi
from lzeta.characters import parse_character, primitive_characters
from lzeta.model import (
    ModelConfig,
    bessel_J,
    char_fn_model,
    composite_phase,
    ell_integrals,
    exact_moment,
    mc_char_fn,
    mc_moment,
    model_report,
    moment_main_terms,
    nu_beta,
    phases,
    psi_L,
    sample_P_L,
    secondary_term,
    secondary_term_bound,
)


def cfg(coeffs, names, X2, seed=0):
    return ModelConfig.from_X2(coeffs, [parse_character(n) for n in names], X2, seed)


def torus_moment(config, k, fn=None):
    """Exact integral over the phase torus: (Re P)^k is a trig polynomial of degree k per phase."""
    ps, nu, beta = config.table
    amp = config.amplitudes
    M = k + 1
    grid = np.arange(M) / M
    total = 0.0
    for th in itertools.product(grid, repeat=ps.size):
        th = np.array(th)
        x = np.sum(amp * np.cos(2 * np.pi * (th + beta)))
        total += x**k if fn is None else fn(x, th)
    return total / M**ps.size


def multiset_moment(config, k):
    """2^-k C(k, k/2) sum over multisets of k/2 primes of b(n)^2 |kappa(n)|^2 / n."""
    if k % 2:
        return 0.0
    ps, nu, beta = config.table
    c = nu * np.exp(2j * np.pi * beta)
    r = k // 2
    acc = 0.0
    for ms in itertools.combinations_with_replacement(range(ps.size), r):
        cnt = Counter(ms)
        b = math.factorial(r)
        for v in cnt.values():
            b //= math.factorial(v)
        kappa = np.prod([c[i] for i in ms]) if ms else 1.0
        n = np.prod([float(ps[i]) for i in ms]) if ms else 1.0
        acc += b * b * abs(kappa) ** 2 / n
    return math.comb(k, r) / 2**k * acc


def random_small_configs(n, seed=11):
    rng = np.random.default_rng(seed)
    pool = [c.name for m in (3, 4, 5, 7, 8) for c in primitive_characters(m)]
    out = []
    for i in range(n):
        N = int(rng.integers(1, 3))
        names = list(rng.choice(pool, N, replace=False))
        coeffs = [float(x) for x in rng.choice([-2, -1, -0.5, 0.5, 1, 1.5], N)]
        out.append(cfg(coeffs, names, int(rng.integers(16, 51)), seed=int(rng.integers(2**32))))
    return out


def test_config_validation(chi3):
    with pytest.raises(ValueError):
        ModelConfig((1.0, 1.0), (chi3, chi3), 10)
    with pytest.raises(ValueError):
        ModelConfig((0.0,), (chi3,), 10)
    with pytest.raises(ValueError):
        ModelConfig((1.0,), (parse_character("5.0"),), 10)


def test_nu_beta():
    c = cfg([1], ["3.1"], 100)
    nb = nu_beta(2, c)
    assert nb.nu == 1 and nb.beta == 0.5
    nb = nu_beta(3, c)
    assert nb.nu == 0 and nb.beta == 0
    c2 = cfg([1, 1], ["3.1", "4.1"], 100)
    assert nu_beta(5, c2).nu == 0 and nu_beta(5, c2).beta == 0
    c3 = cfg([1, -0.7], ["5.1", "7.2"], 200)
    ps, nu, beta = c3.table
    target = sum(a * ch.value_array(ps) for a, ch in zip(c3.coeffs, c3.chis))
    assert np.max(np.abs(nu * np.exp(2j * np.pi * beta) - target)) <= 1e-12
    assert np.all((beta >= 0) & (beta < 1))


def test_psi_L():
    assert psi_L(cfg([1], ["3.1"], 10)) == pytest.approx(1 / 2 + 1 / 5 + 1 / 7, abs=1e-15)
    base = cfg([1, 0.5], ["3.1", "4.1"], 500)
    assert psi_L(cfg([2, 1], ["3.1", "4.1"], 500)) == pytest.approx(4 * psi_L(base), rel=1e-14)
    c = cfg([1], ["7.2"], 1000)
    assert psi_L(c) == pytest.approx(psi(1000) - 1 / 7, rel=1e-14)


def test_exact_moment_low_orders():
    c = cfg([1, 0.5], ["3.1", "4.1"], 50)
    assert exact_moment(0, c) == 1
    assert exact_moment(1, c) == 0
    assert exact_moment(2, c) == pytest.approx(psi_L(c) / 2, abs=1e-12)
    with pytest.raises(ValueError):
        exact_moment(9, c)


@pytest.mark.parametrize("k", [2, 3, 4, 6])
def test_exact_moment_against_torus_and_multisets(k):
    c = cfg([1, -0.5], ["5.1", "4.1"], 11)
    exact = exact_moment(k, c)
    assert exact == pytest.approx(torus_moment(c, k), abs=1e-12)
    assert exact == pytest.approx(multiset_moment(c, k), abs=1e-12)


@pytest.mark.parametrize("k", [4, 6, 8])
def test_convolution_route_against_multisets_larger(k):
    c = cfg([1.5], ["7.3"], 60)
    assert exact_moment(k, c) == pytest.approx(multiset_moment(c, k), rel=1e-12)


def test_moment_envelope_fitted_D():
    c = cfg([1], ["3.1"], 2000)
    P = psi(2000)
    D = max(exact_moment(2 * k, c) ** (1 / k) / (2 * k * P) for k in range(1, 5))
    assert 0 < D <= 1


def test_cross_character_variance():
    chi_i, chi_j = parse_character("5.1"), parse_character("7.4")
    X2 = 400
    both = cfg([1, 1], ["5.1", "7.4"], X2)
    lhs = exact_moment(2, both) - 0.5 * (psi_L(cfg([1], ["5.1"], X2)) + psi_L(cfg([1], ["7.4"], X2)))
    ps = both.table[0]
    rhs = np.real(np.sum(chi_i.value_array(ps) * np.conj(chi_j.value_array(ps)) / ps))
    assert lhs == pytest.approx(rhs, abs=1e-12)


def test_phases_deterministic_and_uniform():
    a = phases(7, np.arange(1000)[:, None], np.array([2, 3, 5])[None, :])
    b = phases(7, np.arange(1000)[:, None], np.array([2, 3, 5])[None, :])
    assert np.array_equal(a, b)
    assert np.all((a >= 0) & (a < 1))
    u = phases(3, np.arange(200000), 11)
    assert abs(u.mean() - 0.5) < 3 * math.sqrt(1 / 12 / u.size)
    assert not np.array_equal(phases(1, np.arange(10), 2), phases(2, np.arange(10), 2))


def test_phase_additivity():
    idx = np.arange(50)
    lhs = composite_phase(5, idx, 12)
    rhs = np.mod(2 * phases(5, idx, 2) + phases(5, idx, 3), 1.0)
    assert np.allclose(lhs, rhs, atol=1e-15)
    assert np.allclose(composite_phase(5, idx, 6 * 35), np.mod(composite_phase(5, idx, 6) + composite_phase(5, idx, 35), 1.0))


def test_orthogonality_monte_carlo():
    rng = np.random.default_rng(0)
    n = 20000
    idx = np.arange(n)
    for _ in range(20):
        m, k = (int(x) for x in rng.integers(1, 101, 2))
        v = np.exp(2j * np.pi * (composite_phase(9, idx, m) - composite_phase(9, idx, k)))
        se = math.sqrt(max(1 - abs(v.mean()) ** 2, 1e-300) / n)
        if m == k:
            assert abs(v.mean()) >= 1 - 3 * se
        else:
            assert abs(v.mean()) <= 3 * math.sqrt(1 / n)


def test_samples_all_zero():
    c = cfg([1, 1], ["3.1", "4.1"], 10)
    # p = 2: chi3 = -1, chi4 = 0; p = 5: -1 + 1 = 0; only p = 2, 3, 7 survive
    ps, nu, _ = c.table
    assert nu[ps.tolist().index(5)] == 0
    c0 = cfg([1], ["3.1"], 3)
    ps, nu, _ = c0.table
    c_empty = cfg([1], ["4.1"], 2)
    assert np.all(sample_P_L(c_empty, 10) == 0)


def test_sample_mean_and_variance():
    c = cfg([1], ["3.1"], 1000, seed=3)
    x = sample_P_L(c, 100000).real
    n = x.size
    assert abs(x.mean()) <= 3 * x.std() / math.sqrt(n)
    var_se = math.sqrt((np.mean((x - x.mean()) ** 4) - x.var() ** 2) / n)
    assert abs(x.var() - psi_L(c) / 2) <= 3 * var_se
    assert np.array_equal(sample_P_L(c, 10, start=5), sample_P_L(c, 15)[5:])


def test_exact_vs_monte_carlo_random_configs():
    for c in random_small_configs(5):
        for k in range(1, 5):
            mc, se = mc_moment(k, c, 100000)
            assert abs(exact_moment(k, c) - mc) <= 3 * se, (c.describe(), k)


def test_bessel_values():
    assert bessel_J(0, 0.0) == 1
    series = sum((-1) ** m * 0.5 ** (2 * m + 1) / (math.factorial(m) * math.factorial(m + 1)) for m in range(20))
    assert bessel_J(1, 1.0) == pytest.approx(series, abs=1e-15)
    assert bessel_J(1, 1.0) == pytest.approx(0.4400505857449335, abs=1e-15)
    # mpmath.besselj at 30 digits
    assert bessel_J(0, 20.0) == pytest.approx(0.16702466434058315, abs=1e-12)
    assert bessel_J(5, 30.0) == pytest.approx(-0.14324029551207708, abs=1e-12)
    with pytest.raises(ValueError):
        bessel_J(-1, 1.0)


@pytest.mark.parametrize("ell,z", [(2, 3.0), (0, 7.5), (5, 12.0), (3, 40.0)])
def test_bessel_defining_integral(ell, z):
    M = 4096
    th = np.arange(M) / M
    integral = (-1j) ** ell * np.mean(np.exp(1j * (z * np.cos(2 * np.pi * th) + 2 * np.pi * ell * th)))
    assert abs(integral.imag) < 1e-12
    assert bessel_J(ell, z) == pytest.approx(integral.real, abs=1e-9 if (ell, z) == (2, 3.0) else 1e-12)


def test_char_fn_model_basics():
    c = cfg([1], ["3.1"], 2)
    for w in (0.0, 0.3, 2.0):
        assert char_fn_model(w, c) == pytest.approx(bessel_J(0, w / math.sqrt(2)), abs=1e-15)
    big = cfg([1, -1], ["3.1", "4.1"], 300)
    w = np.linspace(-10, 10, 81)
    v = char_fn_model(w, big)
    assert np.all(np.abs(v) <= 1) and np.allclose(v, v[::-1])
    assert char_fn_model(0.0, big) == 1


def test_char_fn_gaussian_regime_fit():
    c = cfg([1], ["3.1"], 10000)
    P = psi_L(c)
    w = np.linspace(0.05, 1, 20)
    dev = np.abs(char_fn_model(w, c) - np.exp(-(w**2) * P / 4))
    C = float(np.max(dev / w**4))
    assert C < 1.0


@pytest.mark.parametrize("w", [0.5, 1.0, 2.0, 4.0])
def test_mc_char_fn(w):
    c = cfg([1, 0.5], ["3.1", "4.1"], 200, seed=5)
    est, se = mc_char_fn(w, c, 100000)
    assert abs(est - char_fn_model(w, c)) <= 3 * se
    assert mc_char_fn(0.0, c, 1000) == (1.0, 0.0)


def test_mc_se_scaling():
    c = cfg([1], ["4.1"], 100, seed=1)
    _, se1 = mc_char_fn(1.0, c, 40000)
    _, se2 = mc_char_fn(1.0, c, 80000)
    assert se2 / se1 == pytest.approx(1 / math.sqrt(2), rel=0.05)
    with pytest.raises(ValueError):
        mc_char_fn(1.0, c, 10)


def test_ell_integrals_against_torus():
    c = cfg([1, 0.7], ["5.1", "4.1"], 7)
    ps = c.table[0]
    k = 4
    I = ell_integrals(k, c)
    for qi in range(ps.size):
        for ell in range(1, k + 1):
            M = k + ell + 1
            grid = np.arange(M) / M
            amp, beta = c.amplitudes, c.table[2]
            tot = 0.0
            for th in itertools.product(grid, repeat=ps.size):
                th = np.array(th)
                x = np.sum(amp * np.cos(2 * np.pi * (th + beta)))
                tot += x**k * math.cos(2 * math.pi * ell * th[qi])
            assert I[qi, ell - 1] == pytest.approx(tot / M**ps.size, abs=1e-12)


def test_secondary_term_single_prime_quadrature():
    c = cfg([1], ["5.2"], 2)
    q = 2
    _, nu, beta = c.table
    w, T, K = 1.7, 1000.0, 6
    th = np.arange(8192) / 8192
    direct = 0j
    for ell in range(1, K + 1):
        integrand = np.exp(1j * w * nu[0] / math.sqrt(q) * np.cos(2 * np.pi * (th + beta[0]))) * np.cos(2 * np.pi * ell * th)
        direct += math.log(q) / q ** (ell / 2) * integrand.mean()
    direct *= -T / math.pi
    assert abs(secondary_term(w, c, T, K) - direct) < 1e-10


def test_secondary_term_two_prime_quadrature():
    c = cfg([1, 0.5], ["5.2", "7.1"], 3)
    ps, nu, beta = c.table
    amp = c.amplitudes
    w, T, K = 2.3, 50.0, 5
    M = 256
    t1, t2 = np.meshgrid(np.arange(M) / M, np.arange(M) / M, indexing="ij")
    P = amp[0] * np.cos(2 * np.pi * (t1 + beta[0])) + amp[1] * np.cos(2 * np.pi * (t2 + beta[1]))
    e = np.exp(1j * w * P)
    direct = 0j
    for qi, tq in enumerate((t1, t2)):
        for ell in range(1, K + 1):
            direct += math.log(ps[qi]) / ps[qi] ** (ell / 2) * np.mean(e * np.cos(2 * np.pi * ell * tq))
    direct *= -T / math.pi
    assert abs(secondary_term(w, c, T, K) - direct) < 1e-10


def test_secondary_term_zero_and_bound():
    c = cfg([1, -1], ["3.1", "4.1"], 500)
    assert secondary_term(0.0, c, 1e4, 10) == 0
    for w in (0.3, 1.0, 3.0):
        assert abs(secondary_term(w, c, 1e4, 100)) <= secondary_term_bound(w, c, 1e4, 100) + 1e-9


def test_moment_main_terms_k0():
    c = cfg([1], ["3.1"], 100)
    assert moment_main_terms(0, c, 123, 500.0) == (123.0, 0.0)


def test_model_report_deterministic():
    c = cfg([1], ["3.1"], 100, seed=7)
    a = model_report(c, n_samples=5000, T=1000.0)
    b = model_report(c, n_samples=5000, T=1000.0)
    assert a == b
    assert a["moments"][2]["exact"] == pytest.approx(psi_L(c) / 2)


@settings(max_examples=15, deadline=None)
@given(st.floats(0, 6), st.integers(0, 2**63))
def test_char_fn_bounded(w, seed):
    c = ModelConfig.from_X2([1.3, -0.4], [parse_character("8.1"), parse_character("5.1")], 120, seed)
    assert -1 <= char_fn_model(w, c) <= 1
