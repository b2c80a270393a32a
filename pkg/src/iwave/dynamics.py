"""Truncated reduced equations of the Hamiltonian-Hopf normal form.

State ``(A, B)`` is stored as the real vector ``[Re A, Im A, Re B, Im B]``.
The vector field is Hamilton's equation ``A' = dH/dB*``, ``B' = -dH/dA*`` for

    H = i s (A B* - A* B) + |B|^2 + c2 mu |A|^2 + c3 mu i (A B* - A* B)
        + d1 |A|^4 + d2 i (A B* - A* B) |A|^2 - d3 (A B* - A* B)^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_bvp, solve_ivp
from scipy.optimize import root

from iwave.errors import DeterminantZero, NoConvergence, StepFailure, ValidationError
from iwave.normalform import DoublyPeriodicCoefficients, HopfCoefficients


@dataclass(frozen=True)
class ReducedState:
    A: complex
    B: complex

    def reversed(self) -> "ReducedState":
        return ReducedState(np.conj(self.A), -np.conj(self.B))


@dataclass
class ReducedOrbit:
    """Sampled solution of the truncated system.

    ``x`` has shape (n,), ``A`` and ``B`` are complex arrays of the same shape.
    """

    x: np.ndarray
    A: np.ndarray
    B: np.ndarray
    mu: float
    kind: str
    coeffs: HopfCoefficients
    h_drift: float = 0.0
    meta: dict = field(default_factory=dict)

    @property
    def samples(self):
        return [(float(x), ReducedState(complex(a), complex(b))) for x, a, b in zip(self.x, self.A, self.B)]

    @property
    def absA(self) -> np.ndarray:
        return np.abs(self.A)


def _to_complex(y):
    y = np.asarray(y)
    return y[0] + 1j * y[1], y[2] + 1j * y[3]


def _rhs_complex(c: HopfCoefficients, mu: float, A, B):
    s = c.s
    n = A * np.conj(A)
    w = A * np.conj(B) - np.conj(A) * B
    dA = 1j * s * A + B + 1j * c.c3_1 * mu * A + 1j * c.d2_0 * A * n - 2 * c.d3_0 * A * w
    dB = (1j * s * B + 1j * c.c3_1 * mu * B - c.c2_1 * mu * A - 2 * c.d1_0 * A * n
          - 1j * c.d2_0 * A * A * np.conj(B) + 2j * c.d2_0 * B * n - 2 * c.d3_0 * B * w)
    return dA, dB


def vector_field(c: HopfCoefficients, mu: float, state: ReducedState) -> ReducedState:
    dA, dB = _rhs_complex(c, mu, complex(state.A), complex(state.B))
    return ReducedState(complex(dA), complex(dB))


def _rhs_real(c, mu, rotating: bool = False):
    # every nonlinear term is equivariant under A, B -> e^{i t} A, e^{i t} B, so in
    # the frame rotating at s + c3 mu only the rotation terms drop out
    w = (c.s + c.c3_1 * mu) if rotating else 0.0

    def f(x, y):
        A, B = _to_complex(y)
        dA, dB = _rhs_complex(c, mu, A, B)
        dA -= 1j * w * A
        dB -= 1j * w * B
        return [dA.real, dA.imag, dB.real, dB.imag]
    return f


def hamiltonian(c: HopfCoefficients, mu: float, A, B):
    """Truncated Hamiltonian; real for every (A, B)."""
    w = A * np.conj(B) - np.conj(A) * B
    n = np.abs(A) ** 2
    val = (1j * c.s * w + np.abs(B) ** 2 + c.c2_1 * mu * n + c.c3_1 * mu * 1j * w
           + c.d1_0 * n * n + c.d2_0 * 1j * w * n - c.d3_0 * w * w)
    return np.real(val)


def linearization(c: HopfCoefficients, mu: float) -> np.ndarray:
    """4x4 real matrix of the linear part at the origin."""
    w = c.s + c.c3_1 * mu
    m = -c.c2_1 * mu
    # A' = i w A + B, B' = i w B + m A in real coordinates
    return np.array([
        [0.0, -w, 1.0, 0.0],
        [w, 0.0, 0.0, 1.0],
        [m, 0.0, 0.0, -w],
        [0.0, m, w, 0.0],
    ])


def integrate(c: HopfCoefficients, mu: float, initial: ReducedState, x_span, tol: float = 1e-10,
              t_eval=None, dense_output: bool = False) -> ReducedOrbit:
    """Integrate with an 8th-order embedded Runge-Kutta method (DOP853).

    Raises
    ------
    StepFailure
        If the integrator aborts, e.g. on step-size underflow.
    """
    if tol <= 0:
        raise ValidationError("tol must be positive")
    y0 = [initial.A.real, initial.A.imag, initial.B.real, initial.B.imag]
    scale = max(float(np.max(np.abs(y0))), 1e-300)
    sol = solve_ivp(_rhs_real(c, mu), x_span, y0, method="DOP853", rtol=tol, atol=tol * scale,
                    t_eval=t_eval, dense_output=dense_output)
    if sol.status < 0:
        raise StepFailure(f"step-failure: {sol.message}")
    A, B = _to_complex(sol.y)
    H = hamiltonian(c, mu, A, B)
    orb = ReducedOrbit(sol.t, A, B, mu, "trajectory", c, float(np.max(np.abs(H - H[0]))) if H.size else 0.0)
    if dense_output:
        orb.meta["sol"] = sol.sol
    return orb


# -------------------------------------------------------------- bright orbit


def bright_envelope(c: HopfCoefficients, mu: float, x):
    """r sech(lam x) with lam = sqrt(-c2 mu) and r = sqrt(-c2 mu / d1)."""
    lam = math.sqrt(-c.c2_1 * mu)
    r = math.sqrt(-c.c2_1 * mu / c.d1_0)
    return r / np.cosh(lam * np.asarray(x))


def find_bright_homoclinic(c: HopfCoefficients, mu: float, n: int = 2001, tol: float = 1e-12,
                           sign: int = 1, decay: float = 20.0) -> ReducedOrbit:
    """Symmetric homoclinic orbit by shooting onto the reverser's fixed set.

    The orbit leaves the origin along the linear unstable manifold at
    ``x0 = -decay/lam`` with amplitude ``2 r exp(-decay)``, and the unknowns
    (phase at x0, arrival point x*) are fixed by ``Im A(x*) = Re B(x*) = 0``.
    The second half is the reverser image.  ``sign = -1`` selects the
    companion orbit ``-A``.

    Raises
    ------
    NoConvergence
        If the shooting residual stays above 1e-10 (relative to the amplitude).
    """
    if not (c.c2_1 < 0 and c.d1_0 > 0 and mu > 0):
        raise ValidationError("bright orbits need c2_1 < 0, d1_0 > 0 and mu > 0")
    lam = math.sqrt(-c.c2_1 * mu)
    r = math.sqrt(-c.c2_1 * mu / c.d1_0)
    X = decay / lam
    x0 = -X
    eps = 2.0 * r * math.exp(-decay)
    f = _rhs_real(c, mu, rotating=True)
    omega = c.s + c.c3_1 * mu

    def start(phi):
        # fixed-frame phase phi at x0, expressed in the rotating frame
        A = eps * np.exp(1j * (phi - omega * x0))
        B = lam * A
        return [A.real, A.imag, B.real, B.imag]

    def shoot(phi, xs):
        sol = solve_ivp(f, (x0, xs), start(phi), method="DOP853", rtol=tol, atol=tol * r * 1e-3)
        if sol.status < 0:
            raise StepFailure(f"step-failure: {sol.message}")
        return sol.y[:, -1]

    def resid(z):
        y = shoot(z[0], z[1])
        # back to the fixed frame before testing for the reverser's fixed set
        rot = np.exp(1j * omega * z[1])
        A, B = rot * (y[0] + 1j * y[1]), rot * (y[2] + 1j * y[3])
        return [A.imag / r, B.real / (lam * r)]

    phi0 = omega * x0 + (0.0 if sign > 0 else math.pi)
    res = root(resid, [phi0, 0.0], method="hybr", tol=1e-14)
    if max(abs(v) for v in res.fun) > 1e-10:
        raise NoConvergence(f"no-convergence: shooting residual {np.max(np.abs(res.fun)):.2e}")
    phi, xs = res.x
    half = np.linspace(x0, xs, (n + 1) // 2)
    sol = solve_ivp(f, (x0, xs), start(phi), method="DOP853", rtol=tol, atol=tol * r * 1e-3, t_eval=half)
    A, B = _to_complex(sol.y)
    rot = np.exp(1j * omega * half)
    A, B = A * rot, B * rot
    # mirror through the reverser: A(x*+t) = conj A(x*-t), B(x*+t) = -conj B(x*-t)
    x = np.concatenate([half - xs, (xs - half[-2::-1])])
    A_full = np.concatenate([A, np.conj(A[-2::-1])])
    B_full = np.concatenate([B, -np.conj(B[-2::-1])])
    H = hamiltonian(c, mu, A_full, B_full)
    return ReducedOrbit(x, A_full, B_full, mu, "bright", c, float(np.max(np.abs(H - H[0]))),
                        {"x_star": float(xs), "phase": float(phi), "residual": float(np.max(np.abs(res.fun))),
                         "window": X})


# ---------------------------------------------------------------- dark orbit


def dark_asymptote(c: HopfCoefficients, mu: float) -> float:
    """Amplitude of the co-rotating periodic orbit, sqrt(-c2 mu / (2 d1))."""
    return math.sqrt(-c.c2_1 * mu / (2.0 * c.d1_0))


def find_dark_envelope(c: HopfCoefficients, mu: float, n: int = 2001, tol: float = 1e-10,
                       decay: float = 20.0) -> ReducedOrbit:
    """Dark (front-connected) envelope by collocation.

    Writing ``A = exp(i (s + c3 mu) x) a(x)`` with real ``a`` reduces the
    system to ``a'' = -c2 mu a - 2 d1 a^3``.  The odd kink is computed on
    [0, X] with ``a(0) = 0`` and ``a'(X) = 0`` and extended by oddness.

    Raises
    ------
    ValidationError
        If d2_0 or d3_0 is nonzero (no real envelope reduction).
    NoConvergence
        If the collocation solver fails.
    """
    if not (c.c2_1 < 0 and c.d1_0 < 0 and mu < 0):
        raise ValidationError("dark orbits need c2_1 < 0, d1_0 < 0 and mu < 0")
    if c.d2_0 != 0.0 or c.d3_0 != 0.0:
        raise ValidationError("dark envelopes require d2_0 = d3_0 = 0")
    kap2 = c.c2_1 * mu
    rinf = dark_asymptote(c, mu)
    k = math.sqrt(kap2 / 2.0)
    X = decay / k
    d1 = c.d1_0

    def fun(x, y):
        return np.vstack([y[1], -kap2 * y[0] - 2.0 * d1 * y[0] ** 3])

    def bc(ya, yb):
        return np.array([ya[0], yb[1]])

    xm = np.linspace(0.0, X, 400)
    guess = np.vstack([rinf * np.tanh(k * xm), rinf * k / np.cosh(k * xm) ** 2])
    sol = solve_bvp(fun, bc, xm, guess, tol=tol, max_nodes=200000)
    if not sol.success:
        raise NoConvergence(f"no-convergence: {sol.message}")
    xh = np.linspace(0.0, X, (n + 1) // 2)
    a, ap = sol.sol(xh)
    x = np.concatenate([-xh[:0:-1], xh])
    a_full = np.concatenate([-a[:0:-1], a])
    ap_full = np.concatenate([ap[:0:-1], ap])
    rot = np.exp(1j * (c.s + c.c3_1 * mu) * x)
    A = rot * a_full
    B = rot * ap_full
    H = hamiltonian(c, mu, A, B)
    return ReducedOrbit(x, A, B, mu, "dark", c, float(np.max(np.abs(H - H[0]))),
                        {"r_inf": rinf, "window": X, "rms_residual": float(np.max(sol.rms_residuals))})


# ------------------------------------------------------ doubly periodic branch


@dataclass(frozen=True)
class DoublyPeriodicBranch:
    mu1: float
    mu2: float
    ampA: complex
    ampB: complex
    kappa0: float
    nu0: float

    @property
    def kappa(self) -> float:
        return self.kappa0 + self.mu2

    @property
    def nu(self) -> float:
        return self.nu0 + self.mu1

    @property
    def period_x(self) -> float:
        return 2.0 * math.pi / self.kappa

    @property
    def period_z(self) -> float:
        return 2.0 * math.pi / self.nu


def doubly_periodic_branch(params, dp: DoublyPeriodicCoefficients, kappa0: float, ampA: complex,
                           ampB: complex, quadratic=(0.0, 0.0, 0.0, 0.0), eps1: float = 1e-2,
                           eps2: float = 1e-2) -> DoublyPeriodicBranch:
    """Leading-order offsets (mu1, mu2) on the doubly periodic branch.

    Solves ``[[d1_10, d1_01], [d2_10, d2_01]] (mu1, mu2) = -(q11 |A|^2 + q12 |B|^2,
    q21 |A|^2 + q22 |B|^2)`` with the amplitude coefficients ``quadratic``.

    Raises
    ------
    DeterminantZero
        If the Jacobian determinant -2 pi d2_10 vanishes.
    """
    if abs(ampA) ** 2 >= eps1 or abs(ampB) ** 2 >= eps2:
        raise ValidationError("amplitudes exceed the small-amplitude bounds")
    J = np.array([[dp.d1_10, dp.d1_01], [dp.d2_10, dp.d2_01]])
    det = float(np.linalg.det(J))
    if abs(det) < 1e-10 or abs(dp.d2_10) < 1e-10:
        raise DeterminantZero("determinant-zero: d2_10 vanishes")
    q11, q12, q21, q22 = quadratic
    a2, b2 = abs(ampA) ** 2, abs(ampB) ** 2
    rhs = -np.array([q11 * a2 + q12 * b2, q21 * a2 + q22 * b2])
    mu1, mu2 = np.linalg.solve(J, rhs)
    return DoublyPeriodicBranch(float(mu1) + 0.0, float(mu2) + 0.0, complex(ampA), complex(ampB),
                                float(kappa0), float(params.nu0))
