"""Linear-order interface elevation on an (x, z) grid."""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np

from iwave.dynamics import DoublyPeriodicBranch, ReducedOrbit
from iwave.errors import ValidationError
from iwave.params import ModelParams
from iwave.spectral import eigenvector, pairing_closed_form


@dataclass
class FieldGrid:
    """Interface elevation ``eta[i, j]`` at ``(x[i], z[j])``."""

    x: np.ndarray
    z: np.ndarray
    eta: np.ndarray
    meta: dict = field(default_factory=dict)

    def to_csv(self, long: bool = False) -> str:
        buf = io.StringIO()
        for k in sorted(self.meta):
            buf.write(f"# {k} = {self.meta[k]!r}\n")
        if long:
            buf.write("x,z,eta\n")
            for i, xi in enumerate(self.x):
                for j, zj in enumerate(self.z):
                    buf.write(f"{xi!r},{zj!r},{float(self.eta[i, j])!r}\n")
        else:
            buf.write("x\\z," + ",".join(repr(float(v)) for v in self.z) + "\n")
            for i, xi in enumerate(self.x):
                buf.write(repr(float(xi)) + "," + ",".join(repr(float(v)) for v in self.eta[i]) + "\n")
        return buf.getvalue()


def normalized_eta(params: ModelParams, k: int, s: float) -> complex:
    """eta-component of v / sqrt(|c|), with c from Omega(v, conj v) = i c."""
    v = eigenvector(params, k, s)
    c = abs((pairing_closed_form(params, k, s) / 1j).real)
    return complex(v.eta) / math.sqrt(c)


def synthesize_doubly_periodic(params: ModelParams, branch: DoublyPeriodicBranch, nx: int = 65,
                               nz: int = 65, periods: int = 1) -> FieldGrid:
    """eta = 2 Re[A e^{i kappa x} eta(V_kappa0^0)] + 2 Re[B e^{i nu z} eta(V_0^1)].

    The grids cover ``periods`` periods in each direction, endpoints included.
    """
    ea = normalized_eta(params, 0, branch.kappa0)
    eb = normalized_eta(params, 1, 0.0)
    x = np.linspace(0.0, periods * branch.period_x, nx)
    z = np.linspace(0.0, periods * branch.period_z, nz)
    fx = 2.0 * np.real(branch.ampA * np.exp(1j * branch.kappa * x) * ea)
    fz = 2.0 * np.real(branch.ampB * np.exp(1j * branch.nu * z) * eb)
    eta = fx[:, None] + fz[None, :]
    meta = dict(params.to_dict(), kappa0=branch.kappa0, mu1=branch.mu1, mu2=branch.mu2,
                ampA=str(branch.ampA), ampB=str(branch.ampB), kind="doubly-periodic")
    return FieldGrid(x, z, eta, meta)


def synthesize_envelope_wave(params: ModelParams, orbit: ReducedOrbit, s: float | None = None,
                             nz: int = 65, stride: int = 1) -> FieldGrid:
    """eta = 2 Re[A(x) e^{i nu z} eta(V_s^1)] with nu = nu0 + mu.

    ``V_s^1`` is normalized by sqrt(tau1) from the orbit's coefficients.
    """
    if orbit.kind not in ("bright", "dark"):
        raise ValidationError("envelope synthesis needs a bright or dark orbit")
    s = orbit.coeffs.s if s is None else s
    tau1 = orbit.coeffs.tau1
    if tau1 <= 0.0:
        raise ValidationError("tau1 must be positive")
    v = eigenvector(params, 1, s)
    e1 = complex(v.eta) / math.sqrt(tau1)
    nu = params.nu0 + orbit.mu
    x = orbit.x[::stride]
    A = orbit.A[::stride]
    z = np.linspace(0.0, 2.0 * math.pi / nu, nz)
    eta = 2.0 * np.real(A[:, None] * np.exp(1j * nu * z)[None, :] * e1)
    meta = dict(params.to_dict(), mu=orbit.mu, s=s, kind=orbit.kind)
    return FieldGrid(np.asarray(x), z, eta, meta)
