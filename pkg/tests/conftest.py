import math

import numpy as np
import pytest

from iwave.normalform import hopf_point
from iwave.params import ModelParams
from iwave.regions import solve_nu0_zero_mode1


def random_params(rng: np.random.Generator) -> ModelParams:
    """An admissible parameter set drawn from a moderate box."""
    return ModelParams(
        rho=float(rng.uniform(0.1, 0.9)),
        h=float(rng.uniform(0.3, 3.0)),
        alpha=float(rng.uniform(0.1, 3.0)),
        beta=float(rng.uniform(0.05, 1.0)),
        theta1=float(rng.uniform(-1.3, 1.3)),
        theta2=float(rng.uniform(-1.3, 1.3)),
        nu0=float(rng.uniform(0.3, 3.0)),
    )


@pytest.fixture
def base():
    return ModelParams(rho=0.5, h=1.0, alpha=1.0, beta=0.3, theta1=-0.6, theta2=0.3, nu0=1.0)


@pytest.fixture
def hopf_params(base):
    """Mode-1 tangency at s = 0.5 (bright coefficients)."""
    return hopf_point(base, 0.5)


@pytest.fixture
def resonance_params():
    """00(is)(i kappa0) resonance point: (beta, alpha) in region I, nu0 from the mode-1 zero condition."""
    rho, h, t1, t2, beta, alpha = 0.5, 1.0, 0.6, -0.3, 0.1, 0.3
    nu0 = solve_nu0_zero_mode1(beta, alpha, rho, h, t2)[0]
    return ModelParams(rho=rho, h=h, alpha=alpha, beta=beta, theta1=t1, theta2=t2, nu0=nu0)


def dense_roots(fun, lo, hi, n=200001):
    """Independent oracle: sign changes of ``fun`` on a uniform grid, bisected with numpy only."""
    x = np.linspace(lo, hi, n)
    f = fun(x)
    idx = np.nonzero(np.sign(f[:-1]) * np.sign(f[1:]) < 0)[0]
    out = []
    for i in idx:
        a, b = x[i], x[i + 1]
        fa = f[i]
        for _ in range(80):
            m = 0.5 * (a + b)
            fm = fun(np.array([m]))[0]
            if np.sign(fm) == np.sign(fa):
                a, fa = m, fm
            else:
                b = m
        out.append(0.5 * (a + b))
    return out


HALF_PI = math.pi / 2


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
