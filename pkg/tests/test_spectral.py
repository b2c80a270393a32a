import math

import numpy as np
import pytest

from conftest import random_params
from iwave.dispersion import alpha_beta_star, mode_eigenvalues
from iwave.errors import DegenerateDirection, DivisionDegenerate, NotDouble
from iwave.params import gamma_tilde
from iwave.regions import detect_scenario
from iwave.spectral import (
    COMPONENTS,
    apply_L,
    c4_value,
    eigen_residual,
    eigenvector,
    field_to_csv,
    generalized_eigenvector,
    normalization_constants,
    pairing_closed_form,
    richardson_dbeta_ds,
    sup_norm,
    symplectic_product,
    tau1_closed_form,
    zero_mode_chain,
)

SIGNS = {"eta": 1, "omega": -1, "phi1": -1, "psi1": 1, "phi2": -1, "psi2": 1}


def _roots(p, kmax=2):
    return [(k, q.s) for k in range(-kmax, kmax + 1) for q in mode_eigenvalues(p, k) if q.s != 0.0 or k != 0]


def test_eigenvector_residuals_random():
    rng = np.random.default_rng(10)
    n = 0
    for _ in range(8):
        p = random_params(rng)
        for k, s in _roots(p):
            r, b = eigen_residual(p, k, s)
            assert r < 1e-8 and b < 1e-9
            n += 1
    assert n > 5


def test_eigenvector_trivial_values(hopf_params):
    p = hopf_params
    k, s = 1, 0.5
    v = eigenvector(p, k, s)
    g = gamma_tilde(p, k, s)
    smp = v.sample(np.array([0.0, 1.0]))
    assert v.phi1(np.array([0.0]), order=1)[0] == pytest.approx(0.0, abs=1e-14)
    ratio = smp["phi1"][1] / smp["phi1"][0]
    assert ratio == pytest.approx(math.cosh(g), rel=1e-12)


def test_division_degenerate(base):
    p = base.with_(theta1=0.0, theta2=0.0)
    with pytest.raises(DivisionDegenerate):
        eigenvector(p, 1, -p.nu0)


def test_reverser_anticommutes(hopf_params):
    p = hopf_params
    for k, s in ((1, 0.5), (0, 1.3), (2, -0.7)):
        v = eigenvector(p, k, s)
        a = apply_L(p, v.reversed())
        b = apply_L(p, v)
        for c in COMPONENTS:
            assert np.max(np.abs(a.values[c] + SIGNS[c] * b.values[c])) < 1e-10


def test_linearity(hopf_params):
    p = hopf_params
    u, w = eigenvector(p, 1, 0.5), generalized_eigenvector(p, 1, 0.5, check=False)
    a, b = 0.3 - 1.2j, 2.0 + 0.5j
    lhs = apply_L(p, u.scale(a) + w.scale(b))
    lu, lw = apply_L(p, u), apply_L(p, w)
    for c in COMPONENTS:
        assert np.max(np.abs(lhs.values[c] - a * lu.values[c] - b * lw.values[c])) < 1e-12 * 10


def test_quadrature_convergence(hopf_params):
    p = hopf_params
    v = eigenvector(p, 1, 0.5)
    u = generalized_eigenvector(p, 1, 0.5)
    for x, y in ((v, u.conj()), (v, v.conj()), (u, u.conj())):
        assert abs(symplectic_product(p, x, y, 64) - symplectic_product(p, x, y, 128)) < 1e-10


def test_generalized_eigenvector(hopf_params):
    p = hopf_params
    u = generalized_eigenvector(p, 1, 0.5)
    v = eigenvector(p, 1, 0.5)
    img = apply_L(p, u)
    res = img.minus(u, 0.5j)
    vs = v.sample(img.y)
    assert max(float(np.max(np.abs(res[c] - vs[c]))) for c in COMPONENTS) < 1e-7
    assert u.eta == 0
    with pytest.raises(NotDouble):
        generalized_eigenvector(p.with_(beta=p.beta * 1.1), 1, 0.5)


def test_zero_mode_chain(base):
    e1, e2, f1, f2 = zero_mode_chain(base)
    for e in (e1, e2):
        assert sup_norm(apply_L(base, e).values) == 0.0
    assert sup_norm(apply_L(base, f1).minus(e1)) < 1e-10
    assert sup_norm(apply_L(base, f2).minus(e2)) < 1e-10


def test_symplectic_antisymmetry_and_orthogonality(hopf_params):
    p = hopf_params
    v = eigenvector(p, 1, 0.5)
    w = eigenvector(p, 0, 1.1)
    assert symplectic_product(p, v, v) == 0
    assert symplectic_product(p, v, v.conj()) == pytest.approx(-symplectic_product(p, v.conj(), v), abs=1e-12)
    assert symplectic_product(p, v, w) == 0


def test_tau1_closed_vs_quadrature(hopf_params):
    p = hopf_params
    v = eigenvector(p, 1, 0.5)
    u = generalized_eigenvector(p, 1, 0.5)
    q = symplectic_product(p, v, u.conj())
    t = tau1_closed_form(p, 0.5)
    assert abs(q.imag) < 1e-10
    assert q.real == pytest.approx(t, rel=1e-6)


def test_tau1_positive_condition():
    rng = np.random.default_rng(11)
    for _ in range(30):
        p = random_params(rng)
        s = float(rng.uniform(0.1, 2.0))
        sigma = s + p.nu0 * p.c12
        if sigma <= 0.05:
            continue
        try:
            d = richardson_dbeta_ds(p, 1, s)
        except DegenerateDirection:
            continue
        if d < 0:
            assert tau1_closed_form(p, s) > 0


def test_pairing_closed_vs_quadrature():
    rng = np.random.default_rng(12)
    for _ in range(10):
        p = random_params(rng)
        for k, s in _roots(p, 1):
            v = eigenvector(p, k, s)
            q = symplectic_product(p, v, v.conj())
            c = pairing_closed_form(p, k, s)
            assert abs(q - c) <= 1e-6 * abs(c) + 1e-12


def test_normalization_constants_resonance(resonance_params):
    p = resonance_params
    rep = detect_scenario(p)
    nc = normalization_constants(p, rep)
    for c, q in zip(nc.c, nc.quadrature):
        assert q == pytest.approx(c, rel=1e-6)
    c1sq = p.c1 ** 2
    assert nc.c[3] == pytest.approx(2 * math.pi * p.h / c1sq * (c1sq * (p.rho + 1 / p.h) - p.alpha), rel=1e-14)
    assert c4_value(p) == nc.c[3]


def test_normalization_constants_hopf(hopf_params):
    rep = detect_scenario(hopf_params)
    nc = normalization_constants(hopf_params, rep)
    assert nc.tau[0] == pytest.approx(nc.quadrature[0], rel=1e-6)
    assert nc.tau[2] == -c4_value(hopf_params)


def test_field_csv(hopf_params):
    text = field_to_csv(eigenvector(hopf_params, 1, 0.5), n=5)
    lines = text.splitlines()
    assert lines[0].startswith("y,eta_re,eta_im") and len(lines) == 6
