import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lzeta.zeta_zeros import (
    CoverageError,
    MissedZeroError,
    ZeroFileError,
    ZeroList,
    compute_first_zeros,
    count_N,
    format_zeros,
    gram_points,
    hardy_z,
    hardy_z_em,
    hardy_z_rs,
    load_zeros,
    refine_roots,
    rvm_estimate,
    save_zeros,
    scan_zeros,
    theta,
)

# mpmath.zetazero(n).imag at 30 digits
ZETAZERO = {
    1: 14.134725141734693790,
    2: 21.022039638771554993,
    29: 98.831194218193692233,
    649: 999.79157155741294046,
    1000: 1419.4224809459956865,
}


@pytest.fixture(scope="module")
def scan1000():
    return scan_zeros(0, 1000, 0.02)


def test_load_two_zeros(tmp_path):
    p = tmp_path / "z.txt"
    p.write_text("# comment\n14.134725\n21.022040\n")
    z = load_zeros(p)
    assert len(z) == 2 and z.source == "file"


def test_load_empty_warns(tmp_path):
    p = tmp_path / "z.txt"
    p.write_text("")
    with pytest.warns(UserWarning):
        assert len(load_zeros(p)) == 0


@pytest.mark.parametrize("body,line", [("21.0\n14.1\n", 2), ("14.1\nabc\n", 2), ("-3\n", 1)])
def test_load_rejects_bad_files(tmp_path, body, line):
    p = tmp_path / "z.txt"
    p.write_text(body)
    with pytest.raises(ZeroFileError, match=f":{line}:"):
        load_zeros(p)


def test_canonical_serialization_is_byte_stable(tmp_path, scan1000):
    a = save_zeros(scan1000, tmp_path / "a.txt")
    b = save_zeros(load_zeros(a), tmp_path / "b.txt")
    assert a.read_bytes() == b.read_bytes()
    assert load_zeros(a).source == "scanned"


def test_count_N(scan1000):
    assert count_N(14, scan1000) == 0
    assert count_N(15, scan1000) == 1
    assert count_N(100, scan1000) == 29
    assert count_N(1000, scan1000) == 649
    with pytest.raises(CoverageError):
        count_N(1001, scan1000)


def test_rvm_estimate():
    # direct formula; the main term without the constant 7/8 is 28.127 and 647.74
    assert rvm_estimate(100) == pytest.approx(28.127 + 0.875, abs=1e-3)
    assert rvm_estimate(2 * math.pi * math.e) == pytest.approx(7 / 8, abs=1e-14)
    assert rvm_estimate(1000) == pytest.approx(647.74 + 0.875, abs=1e-2)


def test_scan_examples():
    z = scan_zeros(14, 15, 0.05)
    assert len(z) == 1 and z[0] == pytest.approx(ZETAZERO[1], abs=1e-9)
    assert len(scan_zeros(0, 14, 0.05)) == 0
    assert len(scan_zeros(0, 100, 0.02)) == 29


def test_scan_matches_oracle(scan1000):
    for n, g in ZETAZERO.items():
        if g < 1000:
            assert scan1000[n - 1] == pytest.approx(g, abs=1e-9)


def test_scan_sign_change_invariant(scan1000):
    g = scan1000.ordinates
    tol = 1e-8
    assert np.all(hardy_z(g - tol) * hardy_z(g + tol) < 0)


def test_count_within_rvm_envelope():
    z = compute_first_zeros(12000)
    for T in np.linspace(20, 10000, 300):
        assert abs(count_N(T, z) - rvm_estimate(T)) <= 3


def test_coarse_grid_raises():
    with pytest.raises(MissedZeroError):
        scan_zeros(0, 1000, 3.0)


def test_theta_branches_agree():
    t = np.array([49.999, 50.001])
    from scipy.special import loggamma

    exact = loggamma(0.25 + 0.5j * t).imag - t / 2 * math.log(math.pi)
    assert np.allclose(theta(t), exact, atol=1e-11)


@pytest.mark.parametrize("t,value", [(1000.5, 2.5492611355555555643), (5000.25, 0.052100543914359267735)])
def test_hardy_z_values(t, value):
    # mpmath.siegelz
    assert hardy_z_em(t)[0] == pytest.approx(value, abs=1e-10)
    assert hardy_z_rs(t)[0] == pytest.approx(value, abs=1e-9)


def test_riemann_siegel_vs_euler_maclaurin():
    t = np.linspace(1000, 1050, 41)
    assert np.max(np.abs(hardy_z_rs(t) - hardy_z_em(t))) < 1e-9


def test_gram_points():
    g = gram_points(0, 5)
    assert np.allclose(theta(g), np.pi * np.arange(6), atol=1e-9)
    assert g[0] == pytest.approx(17.8455995405, abs=1e-8)


def test_first_zeros_against_scan(scan1000):
    z = compute_first_zeros(1000)
    assert z[999] == pytest.approx(ZETAZERO[1000], abs=1e-9)
    assert np.max(np.abs(z.ordinates[:649] - scan1000.ordinates)) < 1e-8


def test_refine_roots_vectorised():
    lo = np.array([0.5, 3.5])
    hi = np.array([2.0, 5.0])
    r = refine_roots(np.cos, lo, hi, 1e-12)
    assert r[1] == pytest.approx(3 * np.pi / 2, abs=1e-11)
    assert r[0] == pytest.approx(np.pi / 2, abs=1e-11)
    with pytest.raises(ValueError):
        refine_roots(np.cos, np.array([0.0]), np.array([1.0]))


@settings(max_examples=25, deadline=None)
@given(st.floats(-5, 5), st.floats(0.01, 3))
def test_refine_roots_linear(root, width):
    r = refine_roots(lambda x: 2 * (x - root), np.array([root - width]), np.array([root + width / 3]), 1e-12)
    assert r[0] == pytest.approx(root, abs=1e-11)


def test_zerolist_validation():
    with pytest.raises(ValueError):
        ZeroList(np.array([3.0, 2.0]))
    with pytest.raises(ValueError):
        ZeroList(np.array([0.0, 2.0]))
    z = ZeroList(np.array([1.0, 2.0, 3.0]), coverage=(0.0, 3.5))
    assert len(z.window(1.5, 3.5)) == 2
    with pytest.raises(CoverageError):
        z.window(0, 4)
    assert format_zeros(z).splitlines()[1] == "1.000000000000"
