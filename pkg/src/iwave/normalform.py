"""Coefficients of the reduced normal forms.

Two settings are covered: the Hamiltonian-Hopf bifurcation at a double mode-1
eigenvalue ``i s`` (coefficients ``c2_1`` and ``d1_0`` of the truncated
envelope equation) and the doubly periodic 00(is)(i kappa0) resonance
(solvability coefficients ``d1_01``, ``d2_01``, ``d2_10``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from iwave import _kernels as K
from iwave.dispersion import alpha_beta_star
from iwave.errors import OutsideScenario, SolvabilityDegenerate
from iwave.params import ModelParams, gamma_tilde
from iwave.regions import tilde_curves
from iwave.spectral import (
    eigenvector,
    pairing_closed_form,
    symplectic_product,
    tau1_closed_form,
)


def _coth(x):
    return K.inv_tanh(x)


def _csch2(x):
    ax = abs(x)
    if ax > 20.0:
        e = math.exp(-2.0 * ax)
        return 4.0 * e / (1.0 - e) ** 2
    if ax < 1e-4:
        return 1.0 / (x * x) - 1.0 / 3.0 + x * x / 15.0
    return 1.0 / math.sinh(x) ** 2


@dataclass(frozen=True)
class HopfCoefficients:
    """Coefficients of the truncated Hamiltonian-Hopf envelope equations.

    ``c3_1``, ``d2_0`` and ``d3_0`` have no closed form; they default to 0
    and only rotate the phase or add higher-order corrections.
    """

    c2_1: float
    d1_0: float
    tau1: float
    s: float = 0.0
    c3_1: float = 0.0
    d2_0: float = 0.0
    d3_0: float = 0.0

    @property
    def classification(self) -> str:
        if self.c2_1 < 0.0 and self.d1_0 > 0.0:
            return "bright"
        if self.c2_1 < 0.0 and self.d1_0 < 0.0:
            return "dark"
        return "none"

    def with_overrides(self, **kw) -> "HopfCoefficients":
        return replace(self, **kw)

    def to_dict(self) -> dict:
        return {"c2_1": self.c2_1, "d1_0": self.d1_0, "tau1": self.tau1,
                "classification": self.classification}


@dataclass(frozen=True)
class DoublyPeriodicCoefficients:
    d1_01: float
    d2_01: float
    d2_10: float
    d1_01_quadrature: float = float("nan")
    d2_01_quadrature: float = float("nan")
    d1_10: float = 0.0
    orientation: tuple[int, int] = (1, 1)

    @property
    def determinant(self) -> float:
        """det [[d1_10, d1_01], [d2_10, d2_01]]."""
        return self.d1_10 * self.d2_01 - self.d1_01 * self.d2_10

    def to_dict(self) -> dict:
        return {"d1_01": self.d1_01, "d2_01": self.d2_01, "d2_10": self.d2_10}


def c2_1_closed_form(params: ModelParams, s: float, tau1: float) -> float:
    nu, c1, c2 = params.nu0, params.c1, params.c2
    g = gamma_tilde(params, 1, s)
    l1 = s * c1 + nu * c2
    sigma = s + nu * params.c12
    B = K.coth_sum(params.rho, params.h, g)
    return 2.0 * g * (s * params.s1 + nu * params.s2) * params.s12 / (l1 * sigma * tau1) * B + 0.0


def d1_0_closed_form(params: ModelParams, s: float, tau1: float) -> float:
    """Coefficient of abs(A)^4 in the reduced Hamiltonian at mu = 0."""
    rho, h, al, be, c1 = params.rho, params.h, params.alpha, params.beta, params.c1
    nu = params.nu0
    g = gamma_tilde(params, 1, s)
    hg = h * g
    l = s * c1 + nu * params.c2
    sigma = s + nu * params.c12
    th1, th2 = math.tanh(g), math.tanh(hg)
    c2g, c2hg = _coth(2 * g), _coth(2 * hg)
    t1 = l * l * (rho * (-4 * g * c2g / th1 ** 2 + 6 * g / th1) - 4 * g * c2hg / th2 ** 2 + 6 * g / th2)
    t2 = 4 * l * l * sigma * sigma / (g * g) * (rho / th1 ** 2 + 1.0 / (h * th2 ** 2))
    t3 = 1.5 * g ** 4 * be
    q = 4 * c2hg / th2 + _csch2(hg) - 2 - rho * (4 * c2g / th1 + _csch2(g) - 2)
    den2 = al + 4 * be * g * g - 2 * l * l / g * (rho * c2g + c2hg)
    den0 = al - c1 * c1 * (rho + 1.0 / h)
    if den2 == 0.0 or den0 == 0.0:
        raise OutsideScenario("outside-scenario: d1_0 has a vanishing denominator")
    t4 = 0.5 * l ** 4 * q * q / den2
    r = rho * (l * _csch2(g) + 2 * c1 * sigma / (g * th1)) - (l * _csch2(hg) + 2 * c1 * sigma / (hg * th2))
    t5 = l * l * r * r / den0
    return -g ** 4 / (l ** 4 * tau1 ** 2) * (t1 - t2 - t3 - t4 - t5)


def hopf_coefficients(params: ModelParams, s: float, check_scenario: bool = False) -> HopfCoefficients:
    """c2_1 and d1_0 at a double mode-1 eigenvalue ``i s``.

    Raises
    ------
    OutsideScenario
        If theta1 is 0 or +-pi/2, if s + nu0 cos(t1 - t2) = 0, or (with
        ``check_scenario``) if the spectrum is not of Hamiltonian-Hopf type.
    """
    if abs(params.theta1) < 1e-14 or abs(params.c1) < 1e-14:
        raise OutsideScenario("outside-scenario: theta1 must not be 0 or +-pi/2")
    if abs(s + params.nu0 * params.c12) < 1e-14:
        raise OutsideScenario("outside-scenario: s + nu0 cos(theta1 - theta2) = 0")
    if check_scenario:
        from iwave.regions import detect_scenario

        rep = detect_scenario(params)
        if rep.scenario != "HamiltonianHopf-mode1":
            raise OutsideScenario(f"outside-scenario: detected {rep.scenario}")
    tau1 = tau1_closed_form(params, s)
    if tau1 == 0.0:
        raise OutsideScenario("outside-scenario: tau1 = 0")
    return HopfCoefficients(c2_1_closed_form(params, s, tau1), d1_0_closed_form(params, s, tau1), tau1, s)


def hopf_point(params: ModelParams, s: float) -> ModelParams:
    """Replace (alpha, beta) by (alpha_1*(s), beta_1*(s)), making ``i s`` a double mode-1 eigenvalue."""
    a, b = alpha_beta_star(params, 1, s)
    return params.with_(alpha=a, beta=b)


def d2_10_closed_form(params: ModelParams) -> float:
    """(4 pi nu0 / (c2 cos^2 t2)) (beta~(nu0) - beta), with c2 = abs of the mode-1 zero normalization."""
    nu, c2t = params.nu0, params.c2
    c2n = abs((pairing_closed_form(params, 1, 0.0) / 1j).real)
    bt, _ = tilde_curves(params.rho, params.h, params.theta1, params.theta2, nu)
    return 4.0 * math.pi * nu / (c2n * c2t * c2t) * (bt - params.beta)


def doubly_periodic_coefficients(params: ModelParams, kappa0: float, nu0: float | None = None,
                                 d1_10: float = 0.0, check: bool = True) -> DoublyPeriodicCoefficients:
    """Solvability coefficients of the doubly periodic reduction.

    ``d1_01`` and ``d2_01`` are fixed at 2 pi and 0 and cross-checked by
    quadrature, ``d2_10`` comes from its closed form.  The quadrature uses the
    basis orientation with Omega(V, conj V) = +i; ``orientation`` records
    where that required conjugating the eigenvector.

    Raises
    ------
    SolvabilityDegenerate
        If ``check`` and |d2_10| < 1e-10.
    """
    if nu0 is not None:
        params = params.with_(nu0=nu0)
    d1q, o1 = _d01_quadrature(params, 0, kappa0, harmonic=1)
    d2q, o2 = _d01_quadrature(params, 1, 0.0, harmonic=0)
    d2_10 = d2_10_closed_form(params)
    if check and abs(d2_10) < 1e-10:
        raise SolvabilityDegenerate("solvability-degenerate: |d2_10| < 1e-10")
    return DoublyPeriodicCoefficients(2.0 * math.pi, 0.0, d2_10, d1q, d2q, d1_10, (o1, o2))


def _d01_quadrature(params, k, s, harmonic):
    """harmonic * i * int_0^{2pi} -Psi(e^{i m x} V, e^{-i m x} conj V) dx.

    V is scaled by 1/sqrt|c| and oriented so that Omega(V, conj V) = +i:
    when c < 0 the conjugate eigenvector takes its place.  Returns the value
    and the orientation (+1 or -1).
    """
    v = eigenvector(params, k, s)
    c = (pairing_closed_form(params, k, s) / 1j).real
    orient = 1 if c > 0 else -1
    if orient < 0:
        v = v.conj()
    om = symplectic_product(params, v, v.conj()) / abs(c)
    return harmonic * (1j * 2.0 * math.pi * (-om)).real + 0.0, orient


def classify_solution_family(c: HopfCoefficients, mu: float) -> str:
    """'bright' (with multipulse companions), 'dark' or 'none'."""
    if c.c2_1 >= 0.0 or mu == 0.0:
        return "none"
    if c.d1_0 > 0.0 and mu > 0.0:
        return "bright"
    if c.d1_0 < 0.0 and mu < 0.0:
        return "dark"
    return "none"
