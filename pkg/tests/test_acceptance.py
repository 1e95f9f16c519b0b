"""Exit criteria. Each test records one PASS/FAIL line, printed after the run."""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from casimir_lifshitz import constants as const
from casimir_lifshitz.lifshitz import (
    SignClass,
    StackConfig,
    dimensionless_integrand,
    force_rational,
    force_series,
    pressure_prefactor,
)
from casimir_lifshitz.perturbation import (
    NOT_RESOLVABLE,
    REPULSION_COEFFICIENT,
    PerturbativeInput,
    casimir_ideal,
    force_perturbative,
    ratio_to_casimir,
    residual_scaling_check,
)
from casimir_lifshitz.quadrature import integrate_double, integrate_unit_to_inf, integrate_zero_to_inf, oracle_double_integral
from conftest import ACCEPTANCE_LINES

UM = 1e-6
CM2 = 1e-4


def record(number, title, passed, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] {number:>2}. {title}: {detail}")
    assert passed, detail


def test_01_ideal_conductor_limit():
    t0 = time.perf_counter()
    r = force_rational(StackConfig.constant(1e8, 1e8, 1.0, UM, CM2))
    elapsed = time.perf_counter() - t0
    dev = abs(r.force_cgs / -0.013 - 1)
    record(1, "eps=1e8 plates, 1 um, 1 cm^2", dev <= 5e-3 and elapsed < 10 and r.sign_class is SignClass.ATTRACTIVE,
           f"force {r.force_cgs:.6g} dyn, |dev| {dev:.2e} <= 5e-3, {elapsed:.2f} s < 10 s")


def test_02_analytic_reduction_of_ideal_limit():
    # Per polarisation: p-integral of p^-2 is 1, x-integral of x^3/(e^x-1) is pi^4/15.
    p_part = integrate_unit_to_inf(lambda p: p**-2).value
    x_part = integrate_zero_to_inf(lambda x: x**3 * np.exp(-x) / -np.expm1(-x)).value
    numeric = integrate_double(dimensionless_integrand(StackConfig.constant(1, 1, 1, UM), unit_reflection=True)).value
    # 1/(32 pi^2) * 2 polarisations * pi^4/15 must be pi^2/240.
    reassembled = (1 / (32 * math.pi**2)) * 2 * (math.pi**4 / 15)
    target = math.pi**2 / 240
    ok = (
        abs(reassembled - target) <= 2 * math.ulp(target)
        and abs(p_part - 1) <= 1e-14
        and abs(x_part / (math.pi**4 / 15) - 1) <= 1e-9
        and abs(numeric / (2 * math.pi**4 / 15) - 1) <= 1e-9
        and abs(pressure_prefactor(UM) * 2 * math.pi**4 / 15 / casimir_ideal(UM).pressure - 1) <= 4e-16
    )
    record(2, "unit reflection -> pi^2/240", ok,
           f"reassembled {reassembled:.17g} vs {target:.17g}, double integral rel dev "
           f"{abs(numeric / (2 * math.pi**4 / 15) - 1):.1e}")


def test_03_closed_form_constant():
    x_integral = integrate_zero_to_inf(lambda x: x**3 * np.exp(-x)).value
    p_integral = integrate_unit_to_inf(lambda p: p**-2 - p**-4 + 0.5 * p**-6).value
    factors_ok = abs(x_integral - 6) <= 1e-12 and abs(p_integral - 23 / 30) <= 1e-12
    # prefactor 1/(2 pi^2) from the force, 1/16 from the change of variables,
    # (Delta/2)^2 -> 1/4; the rational part is carried exactly.
    rational = Fraction(1, 2) * Fraction(1, 4) * Fraction(6) * Fraction(23, 30) * Fraction(1, 16)
    rebuilt = float(rational) / math.pi**2
    ulps = abs(rebuilt - REPULSION_COEFFICIENT) / math.ulp(REPULSION_COEFFICIENT)
    record(3, "23/(640 pi^2) from its factors", factors_ok and rational == Fraction(23, 640) and ulps <= 1,
           f"rebuilt {rebuilt:.17g}, stored {REPULSION_COEFFICIENT:.17g}, {ulps:.0f} ulp")


def test_04_ratio_checkpoint():
    r = ratio_to_casimir(1.0, 1.0)
    exact = 69 / (8 * math.pi**4)
    record(4, "ratio coefficient 0.0885", f"{r:.3g}" == "0.0885" and abs(r - exact) <= 1e-16,
           f"{r:.6f} -> {r:.3g} (69/(8 pi^4) = {exact:.6f})")


def test_05_worked_example():
    t0 = time.perf_counter()
    inp = PerturbativeInput(0.09, 2.25, UM, CM2)
    pert = force_perturbative(inp)
    full = force_rational(inp.to_stack())
    elapsed = time.perf_counter() - t0
    lo, hi = 5.9e-6, 6.9e-6
    ok = (
        lo <= pert.pressure_cgs <= hi
        and lo <= full.pressure_cgs <= hi
        and pert.sign_class is SignClass.REPULSIVE
        and full.sign_class is SignClass.REPULSIVE
        and elapsed < 30
    )
    record(5, "toluene gap, D=0.09, 1 um", ok,
           f"leading {pert.pressure_cgs:.4g}, full {full.pressure_cgs:.4g} dyn/cm^2 in [5.9e-6, 6.9e-6], {elapsed:.2f} s")


def test_06_perturbative_agreement():
    t0 = time.perf_counter()
    worst = 0.0
    ok = True
    for eps3 in (1.5, 2.25):
        for delta in (0.01, 0.02, 0.05):
            inp = PerturbativeInput(delta, eps3, UM)
            dev = abs(force_rational(inp.to_stack()).pressure / force_perturbative(inp).pressure - 1)
            worst = max(worst, dev / delta**2)
            ok &= dev <= 5 * delta**2
    elapsed = time.perf_counter() - t0
    record(6, "|exact/leading - 1| <= 5 D^2", ok and elapsed < 120,
           f"worst dev/D^2 = {worst:.3f} <= 5, {elapsed:.2f} s")


def _sign_triples(n=120, seed=2024):
    rng = np.random.default_rng(seed)
    out = []
    for i in range(n):
        e1, e2, e3 = (float(v) for v in np.round(rng.uniform(1.0, 8.0, 3), 2))
        if i % 12 == 0:
            e1 = e2 = e3
        elif i % 12 == 4:
            e1 = e3
        elif i % 12 == 8:
            e2 = e1
        out.append((e1, e2, e3))
    return out


def test_07_sign_grid():
    triples = _sign_triples()
    bad = []
    counts = {c: 0 for c in SignClass}
    for e1, e2, e3 in triples:
        got = force_rational(StackConfig.constant(e1, e2, e3, UM)).sign_class
        if min(e1, e2) < e3 < max(e1, e2):
            want = SignClass.REPULSIVE
        elif (e1 - e3) * (e2 - e3) > 0:
            want = SignClass.ATTRACTIVE
        else:
            want = SignClass.NULL  # a half-space matches the gap: both factors vanish
        counts[got] += 1
        if got is not want:
            bad.append((e1, e2, e3, got.value))
    summary = ", ".join(f"{c.value} {k}" for c, k in counts.items())
    record(7, f"sign rule over {len(triples)} triples", not bad and len(triples) >= 100,
           f"{len(bad)} mismatches ({summary})")


def test_08_scaling_laws():
    worst = 0.0
    for eps in [(3.0, 1.5, 2.0), (1e3, 5.0, 1.0), (2.4525, 2.0475, 2.25)]:
        for d in (1e-7, 1e-6, 3e-6):
            a = force_rational(StackConfig.constant(*eps, d)).pressure
            b = force_rational(StackConfig.constant(*eps, 2 * d)).pressure
            worst = max(worst, abs(b / a * 16 - 1))
    base = force_perturbative(PerturbativeInput(0.01, 2.0, UM)).pressure
    delta_dev = max(
        abs(force_perturbative(PerturbativeInput(0.01 * k, 2.0, UM)).pressure / (k * k * base) - 1) for k in (2, 3, 7, 50)
    )
    record(8, "P(2d)/P(d) = 1/16 and leading P ~ D^2", worst <= 1e-6 and delta_dev <= 4e-16,
           f"worst d-law dev {worst:.1e} <= 1e-6, D^2-law dev {delta_dev:.1e}")


def _seeded_stacks(seed=99):
    rng = np.random.default_rng(seed)
    stacks = []
    while len(stacks) < 5:
        e1, e2, e3 = (float(v) for v in rng.uniform(1.0, 6.0, 3))
        d = float(10 ** rng.uniform(-7.5, -5.5))
        stacks.append(StackConfig.constant(e1, e2, e3, d))
    return stacks


def test_09_path_and_oracle_equivalence():
    worst_path, worst_oracle = 0.0, 0.0
    ok = True
    for stack in _seeded_stacks():
        rat = force_rational(stack)
        ser = force_series(stack, n_max=40)
        gap = abs(rat.pressure - ser.pressure)
        bound = 10 * (rat.abs_error + ser.abs_error)
        worst_path = max(worst_path, gap / bound if bound else 0.0)
        ok &= gap <= bound
        f = dimensionless_integrand(stack)
        adaptive = integrate_double(f).value
        oracle = oracle_double_integral(f)
        worst_oracle = max(worst_oracle, abs(adaptive / oracle - 1))
    ok &= worst_oracle <= 1e-4
    record(9, "series vs rational, adaptive vs Simpson oracle", ok,
           f"worst gap/(10x errors) {worst_path:.2f} <= 1, worst oracle dev {worst_oracle:.1e} <= 1e-4")


def test_10_fourth_order_residual():
    ((_, ratio),) = residual_scaling_check(2.0, UM, [0.2, 0.1])
    ok = ratio is not NOT_RESOLVABLE and 12 <= ratio <= 20
    record(10, "residual(0.2)/residual(0.1)", ok, f"ratio {ratio!r} in [12, 20]")
