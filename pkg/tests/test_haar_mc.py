from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from wgcalc.haar_mc import (
    EstimatorResult,
    Z_THRESHOLD,
    compare,
    constraint_error,
    estimate_monomial,
    monomial_samples,
    sample_batch,
    sample_coe,
    sample_cse,
    sample_haar_orthogonal,
    sample_haar_symplectic,
    sample_haar_unitary,
)
from wgcalc.integrate import integrate

SAMPLES = 100_000


def rng(seed=0):
    return np.random.default_rng(seed)


@pytest.mark.parametrize(
    "sampler", [sample_haar_unitary, sample_haar_orthogonal, sample_haar_symplectic, sample_coe, sample_cse]
)
@pytest.mark.parametrize("n", [1, 2, 4])
def test_constraints(sampler, n):
    g = rng(n)
    for _ in range(100):
        assert constraint_error(sampler(n, g)) <= 1e-10


def test_orthogonal_is_real():
    assert not np.iscomplexobj(sample_batch("O", 3, 5, rng()))


def test_u1_is_uniform_phase():
    est = estimate_monomial("U", "conj: plain:1,1", 1, SAMPLES, seed=3)
    assert compare(0, est) <= 4


def test_o1_is_sign():
    vals = sample_batch("O", 1, 1000, rng()).ravel()
    assert set(np.round(vals).astype(int)) == {-1, 1}
    est = estimate_monomial("O", "1,1", 1, SAMPLES, seed=4)
    assert compare(0, est) <= 4


@pytest.mark.parametrize("n", [2, 3, 5])
def test_second_moments(n):
    assert compare(Fraction(1, n), estimate_monomial("U", "conj:1,1 plain:1,1", n, SAMPLES, seed=n)) <= 4
    assert compare(Fraction(1, n), estimate_monomial("O", "1,1;1,1", n, SAMPLES, seed=n)) <= 4
    assert compare(Fraction(2, n + 1), estimate_monomial("COE", "conj:1,1 plain:1,1", n, SAMPLES, seed=n)) <= 4


def test_left_invariance():
    P = np.eye(3)[[2, 0, 1]]
    m = "conj: plain:1,1;2,2"
    a = monomial_samples("U", m, 3, SAMPLES, seed=5).real
    b = monomial_samples("U", m, 3, SAMPLES, seed=6, left=P).real
    se = np.sqrt(a.var() / a.size + b.var() / b.size)
    assert abs(a.mean() - b.mean()) <= 4 * se


@pytest.mark.parametrize(
    "group, monomial, n",
    [
        ("U", "conj:1,1;2,2;3,3 plain:1,2;2,3;3,1", 3),
        ("O", "1,2;1,3;2,2;2,3", 3),
        ("O", "1,1;1,2;2,2", 3),
        ("Sp", "1,1;2,N+2;N+1,2;N+2,N+1", 2),
    ],
)
def test_exact_values(group, monomial, n):
    exact = integrate(group, monomial, n)
    assert compare(exact, estimate_monomial(group, monomial, n, SAMPLES, seed=11)) <= Z_THRESHOLD


def test_reproducible():
    a = estimate_monomial("Sp", "1,1;N+1,N+1", 2, 20_000, seed=9)
    b = estimate_monomial("Sp", "1,1;N+1,N+1", 2, 20_000, seed=9)
    assert a == b


def test_compare_arithmetic():
    e = Fraction(1, 60)
    assert compare(e, EstimatorResult(complex(float(e)), 0.01, 10, 0)) == 0
    assert compare(e, EstimatorResult(complex(float(e) + 0.02), 0.01, 10, 0)) == pytest.approx(2.0)
    assert compare(1, EstimatorResult(1 + 0j, 0.0, 10, 0)) == 0


def test_bad_arguments():
    with pytest.raises(ValueError):
        sample_batch("S", 2, 1, rng())
    with pytest.raises(ValueError):
        estimate_monomial("U", "conj:1,1 plain:1,1", 2, 10)
    with pytest.raises(ValueError):
        estimate_monomial("O", "1,5", 2, 1000)
