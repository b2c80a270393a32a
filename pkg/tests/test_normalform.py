import math

import numpy as np
import pytest

from iwave.dispersion import evaluate_mode_residual
from iwave.errors import OutsideScenario, SolvabilityDegenerate
from iwave.normalform import (
    HopfCoefficients,
    classify_solution_family,
    d2_10_closed_form,
    doubly_periodic_coefficients,
    hopf_coefficients,
    hopf_point,
)
from iwave.regions import detect_scenario, tilde_curves


def test_c2_zero_on_equal_angles(base):
    for t in (-1.0, -0.3, 0.4, 1.2):
        q = hopf_point(base.with_(theta1=t, theta2=t), 0.5)
        c = hopf_coefficients(q, 0.5)
        assert c.c2_1 == 0.0 and math.copysign(1.0, c.c2_1) == 1.0


def test_c2_antisymmetric_in_sin(base):
    # swapping theta1 - theta2 -> theta2 - theta1 with theta1 fixed flips the sin factor only when
    # everything else is unchanged; use the reflection (theta1, theta2) -> (-theta1, -theta2)
    p = hopf_point(base, 0.5)
    q = p.with_(theta1=-p.theta1, theta2=-p.theta2)
    a, b = hopf_coefficients(p, 0.5), hopf_coefficients(q, 0.5)
    # s1, s2 and s12 all flip sign: c2_1 keeps its value, d1_0 and tau1 are unchanged
    assert b.c2_1 == pytest.approx(a.c2_1, rel=1e-9)
    assert b.d1_0 == pytest.approx(a.d1_0, rel=1e-9)


def test_angle_periodicity(base):
    p = hopf_point(base, 0.5)
    a = hopf_coefficients(p, 0.5)
    # inputs are validated to (-pi, pi); an angle given mod 2 pi is normalized by the caller
    t2 = math.remainder(p.theta2 + 2 * math.pi, 2 * math.pi)
    b = hopf_coefficients(p.with_(theta2=t2), 0.5)
    assert b.c2_1 == pytest.approx(a.c2_1, rel=1e-9)
    assert b.d1_0 == pytest.approx(a.d1_0, rel=1e-9)


def test_bright_example(hopf_params):
    c = hopf_coefficients(hopf_params, 0.5, check_scenario=True)
    assert c.c2_1 < 0 and c.d1_0 > 0 and c.classification == "bright"
    assert c.tau1 > 0


def test_outside_scenario(base):
    with pytest.raises(OutsideScenario):
        hopf_coefficients(base.with_(theta1=0.0), 0.5)
    with pytest.raises(OutsideScenario):
        hopf_coefficients(base, -base.nu0 * base.c12)
    with pytest.raises(OutsideScenario):
        hopf_coefficients(base.with_(nu0=40.0), 0.5, check_scenario=True)


def test_classify_solution_family():
    bright = HopfCoefficients(-1.0, 2.0, 1.0)
    dark = HopfCoefficients(-1.0, -2.0, 1.0)
    assert classify_solution_family(bright, 1e-3) == "bright"
    assert classify_solution_family(dark, -1e-3) == "dark"
    assert classify_solution_family(bright, 0.0) == "none"
    assert classify_solution_family(bright, -1e-3) == "none"
    assert classify_solution_family(HopfCoefficients(1.0, 2.0, 1.0), 1e-3) == "none"


def test_doubly_periodic(resonance_params):
    p = resonance_params
    rep = detect_scenario(p)
    k0 = next(w.s for w in rep.witnesses if w.k == 0 and w.s > 0)
    dp = doubly_periodic_coefficients(p, k0)
    assert dp.d1_01 == 2 * math.pi and dp.d2_01 == 0.0
    assert dp.d1_01_quadrature == pytest.approx(2 * math.pi, abs=1e-8)
    assert abs(dp.d2_01_quadrature) < 1e-8
    assert dp.determinant == pytest.approx(-2 * math.pi * dp.d2_10, rel=1e-15)


def test_d2_10_zero_locus(resonance_params):
    p = resonance_params
    bt, _ = tilde_curves(p.rho, p.h, p.theta1, p.theta2, p.nu0)
    assert d2_10_closed_form(p.with_(beta=bt)) == 0.0
    with pytest.raises(SolvabilityDegenerate):
        doubly_periodic_coefficients(p.with_(beta=bt), 1.0)
    for b in np.linspace(0.5 * bt, 1.5 * bt, 7):
        d = d2_10_closed_form(p.with_(beta=float(b)))
        assert np.sign(d) == np.sign(bt - b) or abs(b - bt) < 1e-12


def test_d2_10_sign_matches_transversality(resonance_params):
    p = resonance_params
    e = 1e-6
    fd = (evaluate_mode_residual(p.with_(nu0=p.nu0 + e), 1, 0.0)
          - evaluate_mode_residual(p.with_(nu0=p.nu0 - e), 1, 0.0)) / (2 * e)
    assert np.sign(fd) == np.sign(d2_10_closed_form(p))
