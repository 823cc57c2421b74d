import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lzeta.arith import (
    lambda_X,
    prime_powers_up_to,
    primes_up_to,
    psi,
    von_mangoldt,
    weight_w,
    weight_w_array,
)


def _is_prime(n):
    return n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))


def test_primes_small():
    assert list(primes_up_to(10)) == [2, 3, 5, 7]
    assert list(primes_up_to(2)) == [2]


def test_primes_100_against_trial_division():
    t = primes_up_to(100)
    assert len(t) == 25 and t.primes[-1] == 97
    assert list(t) == [n for n in range(101) if _is_prime(n)]


def test_primes_rejects_small_limit():
    with pytest.raises(ValueError):
        primes_up_to(1)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 3000))
def test_prime_table_is_complete(limit):
    t = primes_up_to(limit)
    assert np.all(np.diff(t.primes) > 0)
    assert list(t) == [n for n in range(limit + 1) if _is_prime(n)]


def test_von_mangoldt():
    assert von_mangoldt(1) == 0
    assert von_mangoldt(8) == pytest.approx(math.log(2), abs=1e-15)
    assert von_mangoldt(12) == 0
    assert von_mangoldt(49) == pytest.approx(math.log(7))
    with pytest.raises(ValueError):
        von_mangoldt(0)


def test_weight_examples():
    assert weight_w(4, 3) == 1
    assert weight_w(4, 8) == pytest.approx(0.5, abs=1e-15)
    assert weight_w(4, 16) == 0
    with pytest.raises(ValueError):
        weight_w(3, 2)


def test_weight_handles_huge_X():
    X = 1e200
    assert weight_w(X, 10**250) == pytest.approx((400 - 250) / 200)


@settings(max_examples=60, deadline=None)
@given(st.floats(4, 1e6), st.floats(1, 1e12), st.floats(1, 1e12))
def test_weight_monotone_and_bounded(X, a, b):
    lo, hi = sorted((a, b))
    wl, wh = weight_w(X, lo), weight_w(X, hi)
    assert 0 <= wh <= wl <= 1
    assert weight_w(X, math.ceil(X * X)) == 0


def test_weight_array_matches_scalar():
    n = np.arange(1, 400)
    assert np.allclose(weight_w_array(17.0, n), [weight_w(17.0, int(k)) for k in n])


def test_lambda_X():
    assert lambda_X(4, 8) == pytest.approx(0.346574, abs=1e-6)
    assert lambda_X(4, 3) == pytest.approx(math.log(3))
    assert lambda_X(4, 20) == 0
    assert all(lambda_X(5, n) == 0 for n in range(26, 200))


def test_prime_powers():
    ns, ps = prime_powers_up_to(30)
    assert ns.tolist() == [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29]
    assert ps.tolist() == [2, 3, 2, 5, 7, 2, 3, 11, 13, 2, 17, 19, 23, 5, 3, 29]


def test_psi_values():
    assert psi(2) == 0.5
    assert psi(10) == pytest.approx(1.176190476190476, abs=1e-14)
    assert psi(100) == pytest.approx(1.8028172010488709, abs=1e-14)
    with pytest.warns(UserWarning):
        assert psi(1.5) == 0


def test_psi_tracks_loglog():
    ys = np.geomspace(10, 1e6, 25)
    vals = [psi(y) for y in ys]
    assert np.all(np.diff(vals) >= 0)
    assert max(abs(v - math.log(math.log(y))) for v, y in zip(vals, ys)) <= 1
