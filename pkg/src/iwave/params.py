"""Model parameters for the two-layer gravity-capillary problem.

All quantities are nondimensional: lengths are scaled by the upper layer
depth and the wave speed enters only through ``alpha`` and ``beta``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any, Mapping

from iwave.errors import ValidationError

PARAM_FIELDS = ("rho", "h", "alpha", "beta", "theta1", "theta2", "nu0")
OFFSET_FIELDS = ("mu1", "mu2")


@dataclass(frozen=True)
class ModelParams:
    """Physical/geometric parameter tuple.

    Attributes
    ----------
    rho : float
        Density ratio rho_1/rho_2 of upper to lower fluid, in (0, 1).
    h : float
        Depth ratio h_2/h_1.
    alpha : float
        Gravity parameter g h_1 (1 - rho) / c^2.
    beta : float
        Interfacial tension parameter sigma / (h_1 rho_2 c^2).
    theta1, theta2 : float
        Angles (radians) of the evolution direction x and of the periodic
        direction z, measured from the X axis. Must lie in (-pi, pi).
    nu0 : float
        Transverse wavenumber 2 pi / P_z.
    """

    rho: float
    h: float
    alpha: float
    beta: float
    theta1: float
    theta2: float
    nu0: float

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ValidationError(f"{f.name} must be a finite number, got {v!r}")
            object.__setattr__(self, f.name, float(v))
        if not 0.0 < self.rho < 1.0:
            raise ValidationError(f"rho must lie in (0, 1), got {self.rho}")
        if self.h <= 0.0:
            raise ValidationError(f"h must be positive, got {self.h}")
        if self.alpha <= 0.0:
            raise ValidationError(f"alpha must be positive, got {self.alpha}")
        if self.beta < 0.0:
            raise ValidationError(f"beta must be nonnegative, got {self.beta}")
        if self.nu0 <= 0.0:
            raise ValidationError(f"nu0 must be positive, got {self.nu0}")
        for name in ("theta1", "theta2"):
            if abs(getattr(self, name)) >= math.pi:
                raise ValidationError(f"{name} must lie in (-pi, pi)")

    # frequently used trigonometric combinations
    @property
    def c1(self) -> float:
        return math.cos(self.theta1)

    @property
    def s1(self) -> float:
        return math.sin(self.theta1)

    @property
    def c2(self) -> float:
        return math.cos(self.theta2)

    @property
    def s2(self) -> float:
        return math.sin(self.theta2)

    @property
    def c12(self) -> float:
        """cos(theta1 - theta2)."""
        return math.cos(self.theta1 - self.theta2)

    @property
    def s12(self) -> float:
        """sin(theta1 - theta2)."""
        return math.sin(self.theta1 - self.theta2)

    def with_(self, **changes) -> "ModelParams":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class BifurcationOffsets:
    """Small offsets nu = nu0 + mu1 and kappa = kappa0 + mu2."""

    mu1: float = 0.0
    mu2: float = 0.0

    def check(self, nu0: float, bound: float = 0.1) -> None:
        limit = bound * nu0
        if abs(self.mu1) > limit or abs(self.mu2) > limit:
            raise ValidationError(
                f"offsets ({self.mu1}, {self.mu2}) exceed {bound}*nu0 = {limit}"
            )


@dataclass(frozen=True)
class WaveVector:
    l1: float
    l2: float

    @property
    def norm(self) -> float:
        return math.hypot(self.l1, self.l2)


def wavevector_of(params: ModelParams, k: int, s: float) -> WaveVector:
    """Point on the line Q_k with coordinate ``s``: s*(cos t1, sin t1) + k nu0 (cos t2, sin t2)."""
    kn = k * params.nu0
    return WaveVector(kn * params.c2 + s * params.c1, kn * params.s2 + s * params.s1)


def gamma_tilde(params: ModelParams, k: int, s: float) -> float:
    # hypot avoids cancellation in s^2 + 2 k nu0 s cos + k^2 nu0^2 near its minimum
    w = wavevector_of(params, k, s)
    return math.hypot(w.l1, w.l2)


def gamma_tilde_sq_quadratic(params: ModelParams, k: int, s: float) -> float:
    """The quadratic form s^2 + 2 k nu0 s cos(t1 - t2) + k^2 nu0^2, unguarded."""
    kn = k * params.nu0
    return s * s + 2.0 * kn * s * params.c12 + kn * kn


def params_from_mapping(data: Mapping[str, Any]) -> tuple[ModelParams, BifurcationOffsets]:
    missing = [k for k in PARAM_FIELDS if k not in data]
    if missing:
        raise ValidationError(f"missing parameter fields: {', '.join(missing)}")
    unknown = set(data) - set(PARAM_FIELDS) - set(OFFSET_FIELDS)
    if unknown:
        raise ValidationError(f"unknown parameter fields: {', '.join(sorted(unknown))}")
    p = ModelParams(**{k: data[k] for k in PARAM_FIELDS})
    off = BifurcationOffsets(float(data.get("mu1", 0.0)), float(data.get("mu2", 0.0)))
    return p, off


def load_params(path: str | Path) -> tuple[ModelParams, BifurcationOffsets]:
    """Read a JSON document with fields rho, h, alpha, beta, theta1, theta2, nu0, mu1, mu2."""
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise ValidationError(f"{path}: expected a JSON object")
    return params_from_mapping(data)


def dump_params(params: ModelParams, offsets: BifurcationOffsets | None = None) -> str:
    d = params.to_dict()
    off = offsets or BifurcationOffsets()
    d.update(mu1=off.mu1, mu2=off.mu2)
    return json.dumps(d, indent=2)
