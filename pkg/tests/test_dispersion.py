import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import dense_roots, random_params
from iwave import _pykernels
from iwave.dispersion import (
    admissible_interval,
    alpha_beta_star,
    branch_extent,
    branch_to_csv,
    eigenvalues_to_csv,
    evaluate_D,
    evaluate_mode_residual,
    mode_eigenvalues,
    mode_residual_array,
    mode_residual_derivative,
    sample_branch,
    signed_distance_spectrum,
)
from iwave.errors import DegenerateDirection, NoAdmissibleInterval, UnboundedBranch
from iwave.params import ModelParams, WaveVector, wavevector_of

try:
    from iwave import _ckernels
except ImportError:  # pragma: no cover
    _ckernels = None

P0 = ModelParams(rho=0.5, h=1.0, alpha=0.5, beta=0.1, theta1=0.0, theta2=0.0, nu0=1.0)


def _D_ref(rho, h, alpha, beta, l1, l2):
    """Direct transcription with numpy, no series branch (valid away from the origin)."""
    g = math.hypot(l1, l2)
    return l1 * l1 * (rho / math.tanh(g) + 1.0 / math.tanh(h * g)) - (alpha + beta * g * g) * g


def test_D_examples():
    assert evaluate_D(P0, WaveVector(0.0, 0.0)) == 0.0
    p = P0.with_(alpha=1.0, beta=1.0)
    assert evaluate_D(p, WaveVector(0.0, 1.0)) == pytest.approx(-2.0, abs=1e-14)


def test_D_root_on_l1_axis_matches_branch_extent():
    # oracle: bisection of D(., 0) on a log-spaced grid
    grid = np.geomspace(1e-3, 50.0, 4000)
    f = np.array([_D_ref(0.5, 1.0, 0.5, 0.1, x, 0.0) for x in grid])
    i = int(np.nonzero(np.sign(f[:-1]) != np.sign(f[1:]))[0][-1])
    a, b = grid[i], grid[i + 1]
    for _ in range(100):
        m = 0.5 * (a + b)
        if np.sign(_D_ref(0.5, 1.0, 0.5, 0.1, m, 0.0)) == np.sign(f[i]):
            a = m
        else:
            b = m
    assert branch_extent(P0) == pytest.approx(0.5 * (a + b), abs=1e-10)


@settings(max_examples=200, deadline=None)
@given(st.floats(-8, 8), st.floats(-8, 8))
def test_D_even_and_series_consistent(l1, l2):
    d = evaluate_D(P0, WaveVector(l1, l2))
    for w in (WaveVector(-l1, l2), WaveVector(l1, -l2), WaveVector(-l1, -l2)):
        assert evaluate_D(P0, w) == d
    if math.hypot(l1, l2) > 1e-3:
        assert d == pytest.approx(_D_ref(0.5, 1.0, 0.5, 0.1, l1, l2), rel=1e-12, abs=1e-12)


def test_series_crossover_agreement():
    for x in (0.99e-4, 1.01e-4):
        series = 1 / x + x / 3 - x ** 3 / 45
        assert _pykernels.inv_tanh(x) == pytest.approx(1 / math.tanh(x), rel=1e-13)
        assert series == pytest.approx(1 / math.tanh(x), rel=1e-13)


def test_residual_is_D_on_Q_k():
    rng = np.random.default_rng(1)
    for _ in range(50):
        p = random_params(rng)
        k = int(rng.integers(-3, 4))
        s = float(rng.uniform(-5, 5))
        assert evaluate_mode_residual(p, k, s) == evaluate_D(p, wavevector_of(p, k, s))
        assert evaluate_mode_residual(p, k, s) == pytest.approx(evaluate_mode_residual(p, -k, -s), abs=1e-12)
    assert evaluate_mode_residual(P0, 0, 0.0) == 0.0


@pytest.mark.skipif(_ckernels is None, reason="compiled backend not built")
def test_backend_parity():
    rng = np.random.default_rng(2)
    s = np.linspace(-6, 6, 2001)
    for _ in range(20):
        p = random_params(rng)
        args = (p.rho, p.h, p.alpha, p.beta, p.c1, p.s1, p.c2, p.s2, p.nu0, 1)
        a = _pykernels.mode_residual_array(*args, s)
        b = _ckernels.mode_residual_array(*args, s)
        assert np.max(np.abs(a - b)) <= 1e-12 * (1 + np.max(np.abs(a)))
        av = np.linspace(1e-6, 5, 500)
        x = _pykernels.branch_l2sq_array(p.rho, p.h, p.alpha, p.beta, av)
        y = _ckernels.branch_l2sq_array(p.rho, p.h, p.alpha, p.beta, av)
        assert np.max(np.abs(x - y)) <= 1e-12 * (1 + np.max(np.abs(x)))
        for v in (1e-8, 5e-5, 0.3, 4.0):
            assert _pykernels.mode_residual(*args, v) == pytest.approx(_ckernels.mode_residual(*args, v),
                                                                       rel=1e-13, abs=1e-15)


def test_branch_samples():
    tiny = sample_branch(P0, a_max=1e-3, n=5)
    assert tiny[0].l1_sq < 1e-6
    samples = sample_branch(P0, n=50)
    for b in samples:
        assert b.l1_sq >= 0.0
        assert b.l1_sq + b.l2_sq == pytest.approx(b.a ** 2, rel=1e-12)
    astar = branch_extent(P0)
    beyond = sample_branch(P0, a_max=3 * astar, n=50)
    assert not beyond[-1].valid


def test_branch_extent_monotone_and_errors():
    a1 = branch_extent(P0)
    assert branch_extent(P0.with_(beta=0.2)) <= a1
    assert branch_extent(P0.with_(alpha=2.0, beta=50.0)) <= 1e-6
    with pytest.raises(UnboundedBranch):
        branch_extent(P0.with_(beta=0.0))


def test_two_simple_roots_against_dense_scan():
    p = ModelParams(rho=0.5, h=1.0, alpha=0.2, beta=0.05, theta1=math.pi / 4, theta2=0.0, nu0=5.0)
    pts = mode_eigenvalues(p, 1)
    lo, hi = admissible_interval(p, 1)
    oracle = dense_roots(lambda x: mode_residual_array(p, 1, x), lo, hi)
    assert len(pts) == len(oracle) == 2
    assert [q.mult for q in pts] == [1, 1]
    assert np.allclose([q.s for q in pts], oracle, atol=1e-9)


def test_root_counts_match_oracle_random():
    rng = np.random.default_rng(3)
    checked = 0
    for _ in range(40):
        p = random_params(rng)
        for k in (-2, -1, 1, 2):
            seg = admissible_interval(p, k)
            if seg is None:
                assert mode_eigenvalues(p, k) == []
                continue
            lo, hi = seg
            pts = mode_eigenvalues(p, k)
            oracle = dense_roots(lambda x: mode_residual_array(p, k, x), lo, hi, n=20001)
            simple = [q for q in pts if q.mult == 1]
            assert len(simple) == len(oracle)
            assert np.allclose([q.s for q in simple], oracle, atol=1e-8)
            checked += 1
    assert checked > 20


def test_large_nu0_gives_empty():
    p = P0.with_(theta1=0.4, theta2=1.2, nu0=50.0)
    assert mode_eigenvalues(p, 1) == []
    with pytest.raises(NoAdmissibleInterval):
        mode_eigenvalues(p, 1, strict=True)


def test_mode_reflection_and_zero():
    p = ModelParams(rho=0.5, h=1.0, alpha=0.2, beta=0.05, theta1=0.5, theta2=-0.4, nu0=0.7)
    for k in (1, 2):
        a = sorted(q.s for q in mode_eigenvalues(p, k))
        b = sorted(-q.s for q in mode_eigenvalues(p, -k))
        assert np.allclose(a, b, atol=1e-9)
        assert np.allclose(signed_distance_spectrum(p, k), [q.s for q in mode_eigenvalues(p, k)], atol=1e-12)
    z = [q for q in mode_eigenvalues(p, 0) if q.s == 0.0]
    assert len(z) == 1 and z[0].mult in (4, 6, 8)


def test_tangency_detected_and_consistent():
    rng = np.random.default_rng(4)
    found = 0
    for _ in range(30):
        p = random_params(rng)
        s = float(rng.uniform(0.2, 2.0))
        a, b = alpha_beta_star(p, 1, s)
        if a <= 0 or b <= 0:
            continue
        q = p.with_(alpha=a, beta=b)
        d = [x for x in mode_eigenvalues(q, 1) if x.mult == 2]
        assert any(abs(x.s - s) < 1e-6 for x in d)
        for x in d:
            a2, b2 = alpha_beta_star(q, 1, x.s)
            assert abs(a2 - a) < 1e-6 and abs(b2 - b) < 1e-6
        found += 1
    assert found >= 5


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 1), st.floats(0.1, 3.0), st.floats(-1.2, 1.2), st.floats(-1.2, 1.2),
       st.floats(0.3, 3.0), st.floats(0.1, 0.9), st.floats(0.3, 3.0))
def test_alpha_beta_star_is_tangency(k, s, t1, t2, nu, rho, h):
    p = ModelParams(rho=rho, h=h, alpha=1.0, beta=0.3, theta1=t1, theta2=t2, nu0=nu)
    if abs(s + k * nu * p.c12) < 1e-3:
        return
    a, b = alpha_beta_star(p, k, s)
    q = ModelParams(rho=rho, h=h, alpha=max(a, 1e-12), beta=max(b, 0.0), theta1=t1, theta2=t2, nu0=nu)
    if a <= 0 or b < 0:
        return
    scale = 1.0 + abs(a) * s + abs(b) * s ** 3
    assert abs(evaluate_mode_residual(q, k, s)) < 1e-8 * scale
    assert abs(mode_residual_derivative(q, k, s)) < 1e-6 * scale


def test_alpha_beta_star_degenerate():
    p = P0.with_(theta1=0.3, theta2=0.3, nu0=1.0)
    with pytest.raises(DegenerateDirection):
        alpha_beta_star(p, 1, -1.0)


def test_two_dimensional_limit():
    # k = 0, theta1 = 0: beta* and alpha* satisfy the planar tangency of c^2 s B(s) = alpha + beta s^2
    p = P0.with_(theta1=0.0)
    for s in (0.3, 1.0, 2.5):
        a, b = alpha_beta_star(p, 0, s)
        B = 0.5 / math.tanh(s) + 1 / math.tanh(s)
        assert a + b * s * s == pytest.approx(s * B, rel=1e-12)


def test_csv_headers():
    assert branch_to_csv(sample_branch(P0, n=3)).splitlines()[0] == "a,l1sq,l2sq"
    assert eigenvalues_to_csv(mode_eigenvalues(P0, 0)).splitlines()[0] == "k,s,mult"
