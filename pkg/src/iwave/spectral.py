"""Eigenvectors of the linearized operator on one Fourier mode, and symplectic products.

A field is ``exp(i k z) (eta, omega, phi1, psi1, phi2, psi2)`` where ``eta`` and
``omega`` are complex constants and each ``phi``/``psi`` is a combination of

    C(y) = cosh(g y) / sinh(g),    Y(y) = g y sinh(g y) / sinh(g),

plus a constant, with ``g = gamma`` in the upper layer and ``g = h gamma`` in
the lower one.  Both building blocks are evaluated in exp-scaled form so that
large ``g`` does not overflow.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from iwave import _kernels as K
from iwave.dispersion import TOL_DERIV, alpha_beta_star, mode_residual_derivative
from iwave.errors import DivisionDegenerate, NotDouble, SignConventionViolated, ValidationError
from iwave.params import ModelParams, gamma_tilde, wavevector_of

N_QUAD = 64
COMPONENTS = ("eta", "omega", "phi1", "psi1", "phi2", "psi2")


@lru_cache(maxsize=8)
def gauss_legendre(n: int = N_QUAD):
    """Nodes and weights of the n-point Gauss-Legendre rule on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


def _ratios(g: float, y):
    """cosh(g y)/sinh(g) and sinh(g y)/sinh(g), exp-scaled."""
    y = np.asarray(y, dtype=float)
    if g < 1e-3:
        # leading terms; only used for nearly vanishing wavenumbers
        sh = math.sinh(g)
        return np.cosh(g * y) / sh, np.sinh(g * y) / sh
    den = -math.expm1(-2.0 * g)
    a = np.exp(g * (y - 1.0))
    b = np.exp(-g * (y + 1.0))
    return (a + b) / den, (a - b) / den


@dataclass(frozen=True)
class LayerFunction:
    """sum_j (a_j C_j(y) + b_j Y_j(y)) + d for a list of terms (a, b, g)."""

    terms: tuple = ()
    const: complex = 0.0

    def __call__(self, y, order: int = 0):
        y = np.asarray(y, dtype=float)
        out = np.zeros(y.shape, dtype=complex)
        if order == 0:
            out += self.const
        for a, b, g in self.terms:
            C, S = _ratios(g, y)
            if order == 0:
                out += a * C + b * g * y * S
            elif order == 1:
                out += a * g * S + b * (g * S + g * g * y * C)
            elif order == 2:
                out += a * g * g * C + b * (2.0 * g * g * C + g ** 3 * y * S)
            else:
                raise ValueError("order must be 0, 1 or 2")
        return out

    def __add__(self, other: "LayerFunction") -> "LayerFunction":
        return LayerFunction(self.terms + other.terms, self.const + other.const)

    def scale(self, c: complex) -> "LayerFunction":
        return LayerFunction(tuple((c * a, c * b, g) for a, b, g in self.terms), c * self.const)

    def conj(self) -> "LayerFunction":
        return LayerFunction(tuple((np.conj(a), np.conj(b), g) for a, b, g in self.terms),
                             np.conj(self.const))


def _lf(a=0.0, b=0.0, g=None, const=0.0) -> LayerFunction:
    if g is None:
        return LayerFunction((), complex(const))
    return LayerFunction(((complex(a), complex(b), float(g)),), complex(const))


@dataclass(frozen=True)
class EigenvectorField:
    """Mode-``k`` field ``exp(i k z) (eta, omega, phi1, psi1, phi2, psi2)``."""

    k: int
    eta: complex
    omega: complex
    phi1: LayerFunction
    psi1: LayerFunction
    phi2: LayerFunction
    psi2: LayerFunction

    def __add__(self, other: "EigenvectorField") -> "EigenvectorField":
        if other.k != self.k:
            raise ValidationError("cannot add fields of different modes")
        return EigenvectorField(self.k, self.eta + other.eta, self.omega + other.omega,
                                self.phi1 + other.phi1, self.psi1 + other.psi1,
                                self.phi2 + other.phi2, self.psi2 + other.psi2)

    def scale(self, c: complex) -> "EigenvectorField":
        return EigenvectorField(self.k, c * self.eta, c * self.omega, self.phi1.scale(c),
                                self.psi1.scale(c), self.phi2.scale(c), self.psi2.scale(c))

    def conj(self) -> "EigenvectorField":
        """Complex conjugate of the full field; the mode becomes ``-k``."""
        return EigenvectorField(-self.k, np.conj(self.eta), np.conj(self.omega), self.phi1.conj(),
                                self.psi1.conj(), self.phi2.conj(), self.psi2.conj())

    def reversed(self) -> "EigenvectorField":
        """Image under the reverser: (eta, -omega, -phi1, psi1, -phi2, psi2) with z -> -z."""
        return EigenvectorField(-self.k, self.eta, -self.omega, self.phi1.scale(-1), self.psi1,
                                self.phi2.scale(-1), self.psi2)

    def sample(self, y) -> dict:
        y = np.asarray(y, dtype=float)
        one = np.ones(y.shape, dtype=complex)
        return {
            "eta": self.eta * one, "omega": self.omega * one,
            "phi1": self.phi1(y), "psi1": self.psi1(y),
            "phi2": self.phi2(y), "psi2": self.psi2(y),
        }


# ------------------------------------------------------------ constructors


def _geometry(params: ModelParams, k: int, s: float):
    w = wavevector_of(params, k, s)
    g = gamma_tilde(params, k, s)
    sigma = s + k * params.nu0 * params.c12
    return w.l1, g, sigma


def eigenvector(params: ModelParams, k: int, s: float) -> EigenvectorField:
    """Eigenvector of the mode-k eigenvalue ``i s``.

    Raises
    ------
    DivisionDegenerate
        If ``k nu0 cos(t2) + s cos(t1) == 0``.
    """
    l1, g, sigma = _geometry(params, k, s)
    if l1 == 0.0 or g == 0.0:
        raise DivisionDegenerate("division-degenerate: k nu0 cos(theta2) + s cos(theta1) = 0")
    rho, h, beta, c1 = params.rho, params.h, params.beta, params.c1
    hg = h * g
    omega = (-1j * rho * c1 * (K.inv_tanh(g) - 1.0 / g)
             - 1j * c1 * (K.inv_tanh(hg) - 1.0 / hg)
             + 1j * g * beta * sigma / l1)
    return EigenvectorField(
        k, g / l1, omega,
        _lf(a=1j, g=g),
        _lf(a=-rho * sigma, g=g, const=rho * g * c1 / l1),
        _lf(a=-1j, g=hg),
        _lf(a=h * sigma, g=hg, const=-g * c1 / l1),
    )


def _csch2(x):
    ax = abs(x)
    if ax > 20.0:
        e = math.exp(-2.0 * ax)
        return 4.0 * e / (1.0 - e) ** 2
    if ax < 1e-4:
        return 1.0 / (x * x) - 1.0 / 3.0 + x * x / 15.0
    return 1.0 / math.sinh(x) ** 2


def generalized_eigenvector(params: ModelParams, k: int, s: float, check: bool = True) -> EigenvectorField:
    """Generalized eigenvector u with (L - i s) u = v at a double eigenvalue.

    Raises
    ------
    NotDouble
        If ``check`` and the residual derivative at s does not vanish.
    """
    if check:
        d = abs(mode_residual_derivative(params, k, s))
        if d >= 10 * TOL_DERIV * (1.0 + abs(s)):
            raise NotDouble(f"not-double: |f_k'(s)| = {d:.3e}")
    l1, g, sigma = _geometry(params, k, s)
    if l1 == 0.0 or g == 0.0:
        raise DivisionDegenerate("division-degenerate: k nu0 cos(theta2) + s cos(theta1) = 0")
    rho, h, beta, c1 = params.rho, params.h, params.beta, params.c1
    hg = h * g
    ct1, ct2 = K.inv_tanh(g), K.inv_tanh(hg)
    omega = (rho * c1 * sigma / g ** 2 * (ct1 + g * _csch2(g) - 2.0 / g)
             + rho * c1 * c1 / l1 * (1.0 / g - ct1)
             + c1 * sigma / g ** 2 * (ct2 + hg * _csch2(hg) - 2.0 / hg)
             + c1 * c1 / l1 * (1.0 / hg - ct2)
             + g * beta / l1)
    q = sigma / g ** 2
    # phi1 = q (Y1 - (1 + g coth g) C1) + (c1/l1) C1 ; psi1 = i rho sigma phi1 + i rho C1
    a1 = -q * (1.0 + g * ct1) + c1 / l1
    phi1 = _lf(a=a1, b=q, g=g)
    psi1 = phi1.scale(1j * rho * sigma) + _lf(a=1j * rho, g=g)
    # lower layer, with h g y inside the hyperbolic functions
    a2 = -q * (1.0 + hg * ct2) + c1 / l1
    inner2 = _lf(a=a2, b=q, g=hg)
    phi2 = inner2.scale(-1.0)
    psi2 = inner2.scale(-1j * h * sigma) + _lf(a=-1j * h, g=hg)
    return EigenvectorField(k, 0.0, omega, phi1, psi1, phi2, psi2)


def zero_mode_chain(params: ModelParams):
    """(e1, e2, f1, f2) spanning the generalized kernel of mode 0."""
    rho, h, al, c1 = params.rho, params.h, params.alpha, params.c1
    z = _lf()
    e1 = EigenvectorField(0, 0.0, 0.0, _lf(const=1.0), z, z, z)
    e2 = EigenvectorField(0, 0.0, 0.0, z, z, _lf(const=1.0), z)
    r = rho * c1 * c1 / al
    f1 = EigenvectorField(0, -rho * c1 / al, 0.0, z, _lf(const=rho * (1.0 - r)), z, _lf(const=r))
    f2 = EigenvectorField(0, c1 / al, 0.0, z, _lf(const=r), z, _lf(const=h - c1 * c1 / al))
    return e1, e2, f1, f2


# ----------------------------------------------------------------- operator


@dataclass(frozen=True)
class OperatorImage:
    """L applied to a field, sampled at ``y``, with the four boundary residuals."""

    k: int
    y: np.ndarray
    values: dict
    boundary: np.ndarray

    def minus(self, field_: EigenvectorField, c: complex = 1.0) -> dict:
        """Sampled ``L f - c * field_``."""
        smp = field_.sample(self.y)
        return {n: self.values[n] - c * smp[n] for n in COMPONENTS}


def sup_norm(values: dict) -> float:
    return max(float(np.max(np.abs(v))) for v in values.values())


def apply_L(params: ModelParams, field_: EigenvectorField, y=None, n_quad: int = N_QUAD) -> OperatorImage:
    """Apply the linearized operator with d/dz -> i k.

    The integrals of y phi_y and of psi over [0, 1] use Gauss-Legendre
    quadrature with ``n_quad`` nodes.  Output is sampled at ``y``; by default
    the quadrature nodes together with both endpoints.
    """
    xq, wq = gauss_legendre(n_quad)
    if y is None:
        y = np.concatenate([[0.0], xq, [1.0]])
    y = np.asarray(y, dtype=float)
    k = field_.k
    rho, h, al, be = params.rho, params.h, params.alpha, params.beta
    nu, c, c1, c2, s12 = params.nu0, params.c12, params.c1, params.c2, params.s12
    ik = 1j * k
    f = field_
    eta, om = f.eta, f.omega

    I1 = np.sum(wq * xq * f.phi1(xq, 1))
    I2 = np.sum(wq * xq * f.phi2(xq, 1))
    J1 = np.sum(wq * f.psi1(xq))
    J2 = np.sum(wq * f.psi2(xq))
    W = om + rho * c1 * I1 - c1 * I2
    if be == 0.0:
        raise ValidationError("beta = 0 is not supported by the operator")
    Wb = W / be
    cc = c * c1 - c2
    tz = nu * nu * s12 * s12 * k * k
    phi1_1 = complex(f.phi1(np.array([1.0]))[0])
    phi2_1 = complex(f.phi2(np.array([1.0]))[0])

    L1 = Wb - nu * c * ik * eta
    L2 = (c1 * (J1 - rho * c1 * eta) - rho * nu * cc * ik * phi1_1
          - (c1 / h) * (J2 + c1 * eta) + nu * cc * ik * phi2_1
          + be * tz * eta - nu * c * ik * om + al * eta)
    p1, q1, p2, q2 = f.phi1(y), f.psi1(y), f.phi2(y), f.psi2(y)
    L3 = q1 / rho - c1 * eta - nu * c * ik * p1
    L4 = -rho * f.phi1(y, 2) - nu * c * ik * q1 + rho * c1 * Wb + rho * tz * p1
    L5 = q2 / h + c1 * eta / h - nu * c * ik * p2
    L6 = -f.phi2(y, 2) / h - nu * c * ik * q2 - c1 * Wb + h * tz * p2

    y01 = np.array([0.0, 1.0])
    d1 = f.phi1(y01, 1)
    d2 = f.phi2(y01, 1)
    bc = np.array([
        d1[0],
        -rho * d1[1] - rho * nu * cc * ik * eta + rho * c1 * Wb,
        d2[0],
        -d2[1] / h + nu * cc * ik * eta - c1 * Wb,
    ])
    one = np.ones(y.shape, dtype=complex)
    vals = {"eta": L1 * one, "omega": L2 * one, "phi1": L3, "psi1": L4, "phi2": L5, "psi2": L6}
    return OperatorImage(k, y, vals, bc)


def eigen_residual(params: ModelParams, k: int, s: float, n_quad: int = N_QUAD) -> tuple[float, float]:
    """(sup-norm of (L - i s) v, max boundary residual) for the eigenvector of (k, s)."""
    v = eigenvector(params, k, s)
    img = apply_L(params, v, n_quad=n_quad)
    return sup_norm(img.minus(v, 1j * s)), float(np.max(np.abs(img.boundary)))


# --------------------------------------------------------------- symplectic


@dataclass(frozen=True)
class SymplecticPairing:
    value: complex
    method: str


def symplectic_product(params: ModelParams, u: EigenvectorField, v: EigenvectorField,
                       n_quad: int = N_QUAD) -> complex:
    """Omega(u, v); the z-integral is 2 pi when the modes cancel and 0 otherwise."""
    if u.k + v.k != 0:
        return 0.0 + 0.0j
    xq, wq = gauss_legendre(n_quad)
    val = v.omega * u.eta - v.eta * u.omega
    val += np.sum(wq * (v.psi1(xq) * u.phi1(xq) - v.phi1(xq) * u.psi1(xq)))
    val += np.sum(wq * (v.psi2(xq) * u.phi2(xq) - v.phi2(xq) * u.psi2(xq)))
    return complex(2.0 * math.pi * val)


def richardson_dbeta_ds(params: ModelParams, k: int, s: float, step: float = 1e-4) -> float:
    """d beta_k*/ds by one Richardson step on central differences (steps h, h/2)."""
    def D(hh):
        return (alpha_beta_star(params, k, s + hh)[1] - alpha_beta_star(params, k, s - hh)[1]) / (2 * hh)
    return (4.0 * D(step / 2) - D(step)) / 3.0


def pairing_closed_form(params: ModelParams, k: int, s: float) -> complex:
    """Omega(exp(ikz) v, exp(-ikz) conj(v)) = i 4 pi gamma^2 sigma / l1^2 (beta_k*(s) - beta).

    When ``sigma = 0`` the limit i 4 pi gamma cos(t1) B(gamma) / l1 is used.
    """
    l1, g, sigma = _geometry(params, k, s)
    if l1 == 0.0:
        raise DivisionDegenerate("division-degenerate: l1 = 0")
    if sigma == 0.0:
        return 1j * 4.0 * math.pi * g * params.c1 * K.coth_sum(params.rho, params.h, g) / l1
    _, bstar = alpha_beta_star(params, k, s)
    return 1j * 4.0 * math.pi * g * g * sigma / (l1 * l1) * (bstar - params.beta)


def tau1_closed_form(params: ModelParams, s: float, k: int = 1) -> float:
    l1, g, sigma = _geometry(params, k, s)
    return -2.0 * math.pi * sigma * g * g / (l1 * l1) * richardson_dbeta_ds(params, k, s)


@dataclass(frozen=True)
class NormalizationConstants:
    """Closed-form and quadrature normalization constants.

    For the resonant case ``c`` holds (c1, c2, c3, c4); for the Hopf case
    ``tau`` holds (tau1, tau2, tau3).  ``quadrature`` mirrors whichever is set.
    """

    kind: str
    c: tuple = ()
    tau: tuple = ()
    quadrature: tuple = ()
    violations: tuple = ()
    flagged: tuple = ()


def c4_value(params: ModelParams) -> float:
    c1sq = params.c1 ** 2
    return 2.0 * math.pi * params.h / c1sq * (c1sq * (params.rho + 1.0 / params.h) - params.alpha)


def normalization_constants(params: ModelParams, scenario, strict: bool = False) -> NormalizationConstants:
    """Normalization constants for a ``ScenarioReport`` of the resonant or Hopf kind."""
    tag = scenario.scenario
    w = scenario.witnesses
    if tag == "HamiltonianHopf-mode1":
        p = next(q for q in w if q.k == 1)
        s = p.s
        v = eigenvector(params, 1, s)
        u = generalized_eigenvector(params, 1, s, check=False)
        t1 = tau1_closed_form(params, s)
        t1q = symplectic_product(params, v, u.conj()).real
        t2 = (symplectic_product(params, u, u.conj()) / 1j).real
        t3 = -c4_value(params)
        viol = ("tau1 <= 0",) if t1 <= 0 else ()
        if viol and strict:
            raise SignConventionViolated("sign-convention-violated: " + ", ".join(viol))
        return NormalizationConstants("hopf", tau=(t1, t2, t3), quadrature=(t1q, t2, t3), violations=viol)
    if tag == "Resonance-00-is-ikappa0":
        kappa0 = next(q.s for q in w if q.k == 0 and q.s > 0)
        sbar = next(q.s for q in w if q.k == 1 and abs(q.s) > 1e-9)
        vals, quad, flagged = [], [], []
        for k, s in ((0, kappa0), (1, 0.0), (1, sbar)):
            v = eigenvector(params, k, s)
            vals.append((pairing_closed_form(params, k, s) / 1j).real)
            quad.append((symplectic_product(params, v, v.conj()) / 1j).real)
        if abs(params.c12) < 1e-14:
            flagged.append("c2")
        c4 = c4_value(params)
        e1, e2, f1, f2 = zero_mode_chain(params)
        quad.append(symplectic_product(params, _etilde1(params, e1, e2), f1))
        vals.append(c4)
        viol = tuple(f"sgn(c{i + 1}) < 0" for i in range(3) if vals[i] < 0)
        if viol and strict:
            raise SignConventionViolated("sign-convention-violated: " + ", ".join(viol))
        quad[3] = quad[3].real
        return NormalizationConstants("resonance", c=tuple(vals), quadrature=tuple(quad),
                                      violations=viol, flagged=tuple(flagged))
    raise ValidationError(f"no normalization constants for scenario {tag!r}")


def _etilde1(params, e1, e2):
    """Unnormalized e~1 (times sqrt(c4)); Omega(e~1, f1) equals c4."""
    c1sq = params.c1 ** 2
    coef = -(params.h * params.alpha - c1sq) / (params.rho * c1sq)
    return e1.scale(coef) + e2


# ---------------------------------------------------------------- export


def field_to_csv(field_: EigenvectorField, n: int = 65, fh=None) -> str:
    y = np.linspace(0.0, 1.0, n)
    smp = field_.sample(y)
    buf = fh if fh is not None else io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["y"] + [f"{c}_{part}" for c in COMPONENTS for part in ("re", "im")])
    for i, yi in enumerate(y):
        row = [repr(float(yi))]
        for c in COMPONENTS:
            row += [repr(float(smp[c][i].real)), repr(float(smp[c][i].imag))]
        w.writerow(row)
    return buf.getvalue() if fh is None else ""
