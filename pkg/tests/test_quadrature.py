import math

import numpy as np
import pytest

from casimir_lifshitz.quadrature import (
    QuadratureError,
    QuadratureSpec,
    integrate_double,
    integrate_interval,
    integrate_unit_to_inf,
    integrate_zero_to_inf,
    oracle_double_integral,
)

UNIT_CASES = [
    (lambda p: p**-2, 1.0),
    (lambda p: p**-2 - p**-4 + 0.5 * p**-6, 23 / 30),  # 1 - 1/3 + 1/10
    (lambda p: np.exp(1.0 - p), 1.0),
]
ZERO_CASES = [
    (lambda x: x**3 * np.exp(-x), 6.0),
    (lambda x: x**3 * np.exp(-x) / -np.expm1(-x), math.pi**4 / 15),  # x^3/(e^x - 1)
    (lambda x: np.exp(-x), 1.0),
]


@pytest.mark.parametrize("f, exact", UNIT_CASES)
def test_unit_to_inf(f, exact):
    est = integrate_unit_to_inf(f)
    assert est.value == pytest.approx(exact, rel=1e-8)
    assert abs(est.value - exact) <= max(est.abs_error_estimate, 4 * math.ulp(exact))
    assert est.evaluations > 0


@pytest.mark.parametrize("f, exact", ZERO_CASES)
def test_zero_to_inf(f, exact):
    est = integrate_zero_to_inf(f)
    assert est.value == pytest.approx(exact, rel=1e-8)
    assert abs(est.value - exact) <= max(est.abs_error_estimate, 4 * math.ulp(exact))


def test_interval():
    est = integrate_interval(np.sin, 0.0, math.pi)
    assert est.value == pytest.approx(2.0, rel=1e-12)


def test_double_product():
    est = integrate_double(lambda p, x: p**-2 * x**3 * np.exp(-x))
    assert est.value == pytest.approx(6.0, rel=1e-8)
    assert abs(est.value - 6.0) <= est.abs_error_estimate


def test_oracle_examples():
    assert oracle_double_integral(lambda p, x: p**-2 * x**3 * np.exp(-x)) == pytest.approx(6.0, rel=1e-4)
    assert oracle_double_integral(lambda p, x: 0.0 * p * x) == 0.0
    ideal = oracle_double_integral(lambda p, x: p**-2 * 2 * x**3 * np.exp(-x) / -np.expm1(-x))
    assert ideal == pytest.approx(2 * math.pi**4 / 15, rel=1e-4)


def _random_integrands(seed=7, n=5):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        a = rng.uniform(2.0, 4.0)
        k = int(rng.integers(1, 4))
        b = rng.uniform(0.5, 3.0)
        c = rng.uniform(0.0, 2.0)
        out.append(lambda p, x, a=a, k=k, b=b, c=c: p**-a * (1 + c / p) * x**k * np.exp(-b * x * np.sqrt(p)))
    return out


@pytest.mark.parametrize("f", _random_integrands())
def test_adaptive_matches_oracle(f):
    est = integrate_double(f)
    ref = oracle_double_integral(f)
    assert abs(est.value - ref) <= max(1e-4 * abs(ref), est.abs_error_estimate)


def test_bit_deterministic():
    f = _random_integrands()[0]
    assert integrate_double(f) == integrate_double(f)


def test_non_convergence_carries_estimate():
    spiky = lambda x: 1.0 / ((x - 0.3) ** 2 + 1e-14)  # noqa: E731
    with pytest.raises(QuadratureError) as info:
        integrate_interval(spiky, 0.0, 1.0, QuadratureSpec(rel_tol=1e-10, max_subdivisions=10))
    assert info.value.estimate.evaluations > 0
    assert info.value.estimate.abs_error_estimate > 0


@pytest.mark.parametrize("kwargs", [{"rel_tol": 0.0}, {"rel_tol": 0.1}, {"max_subdivisions": 5}, {"abs_tol": -1.0}])
def test_spec_validation(kwargs):
    with pytest.raises(ValueError):
        QuadratureSpec(**kwargs)
