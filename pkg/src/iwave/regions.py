"""Mode-0 bifurcation curves in the (beta, alpha) plane and scenario labels.

The horizontal line ``alpha = cos^2(t1) (rho + 1/h)`` is split at
``beta = cos^2(t1) (rho + h)/3`` into C4 (left) and C3 (right).  C2 is the
curve of double nonzero mode-0 imaginary eigenvalues, parametrized by
``s > 0``; C1 is its continuation to imaginary ``s = i lam``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from iwave import _kernels as K
from iwave.dispersion import (
    SpectralPoint,
    branch_extent,
    mode_eigenvalues,
)
from iwave.errors import ExcludedAngle, Inconclusive, ValidationError
from iwave.params import ModelParams

CURVE_TOL = 1e-9
REGION_COUNTS = {
    "I": 1, "II": 2, "III": 0, "IV": 0,
    "on-C1": 0, "on-C2": 1, "on-C3": 0, "on-C4": 1, "star": 0,
}
SCENARIOS = ("HamiltonianHopf-mode1", "Resonance-00-is-ikappa0", "real-1:1", "0²-resonance", "none")


@dataclass(frozen=True)
class RegionLabel:
    """Position of (beta, alpha) relative to C1-C4.

    ``mode0_imag_count`` is the number of nontrivial imaginary mode-0
    eigenvalue pairs (a double pair counts once).
    """

    region: str
    mode0_imag_count: int


@dataclass(frozen=True)
class ScenarioReport:
    scenario: str
    witnesses: tuple[SpectralPoint, ...] = ()
    nu0_critical: float | None = None
    notes: str = ""


def _star(rho, h, c1sq):
    return c1sq * (rho + h) / 3.0, c1sq * (rho + 1.0 / h)


def star_point(rho: float, h: float, theta1: float) -> tuple[float, float]:
    """(beta, alpha) where C1, C2, C3 and C4 meet."""
    return _star(rho, h, math.cos(theta1) ** 2)


# ---------------------------------------------------------- curve formulas


def _csch2_array(x):
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = np.abs(x) < 1e-4
    big = np.abs(x) > 20.0
    mid = ~(small | big)
    xs = x[small]
    out[small] = 1.0 / (xs * xs) - 1.0 / 3.0 + xs * xs / 15.0
    e = np.exp(-2.0 * np.abs(x[big]))
    out[big] = 4.0 * e / (1.0 - e) ** 2
    out[mid] = 1.0 / np.sinh(x[mid]) ** 2
    return out


def _coth_sum_array(rho, h, s):
    s = np.asarray(s, dtype=float)
    return np.array([K.coth_sum(rho, h, float(v)) for v in s.ravel()]).reshape(s.shape)


def c2_curve(s, rho: float, h: float, c1sq: float):
    """(beta0*(s), alpha0*(s)) for real s > 0, vectorized."""
    s = np.asarray(s, dtype=float)
    B = _coth_sum_array(rho, h, s)
    beta = 0.5 * c1sq * (B / s - rho * _csch2_array(s) - h * _csch2_array(h * s))
    alpha = c1sq * s * B - beta * s * s
    return beta, alpha


def c1_curve(lam, rho: float, h: float, c1sq: float):
    """(beta*(i lam), alpha*(i lam)) for lam in (0, min(pi, pi/h))."""
    lam = np.asarray(lam, dtype=float)
    cots = rho / np.tan(lam) + 1.0 / np.tan(h * lam)
    csc2 = rho / np.sin(lam) ** 2 + h / np.sin(h * lam) ** 2
    beta = c1sq * (0.5 * csc2 - cots / (2.0 * lam))
    alpha = beta * lam * lam + lam * c1sq * cots
    return beta, alpha


def c1_range(h: float) -> float:
    return min(math.pi, math.pi / h)


def curve_points(curve: str, params: ModelParams, n: int = 400,
                 s_max: float | None = None, include_c1: bool = True) -> list[tuple[float, float]]:
    """Samples (beta, alpha) of one of the curves C1-C4.

    C3 and C4 are returned as two-point segments of the horizontal line; C4
    spans beta in [0, beta_star] and C3 spans [beta_star, 2 beta_star + 1].
    """
    rho, h, c1sq = params.rho, params.h, params.c1 ** 2
    bs, al = _star(rho, h, c1sq)
    if curve == "C4":
        return [(0.0, al), (bs, al)]
    if curve == "C3":
        return [(bs, al), (2.0 * bs + 1.0, al)]
    if curve == "C2":
        s = np.geomspace(1e-3, s_max or 50.0, n)
        b, a = c2_curve(s, rho, h, c1sq)
        return [(bs, al)] + list(zip(b.tolist(), a.tolist()))
    if curve == "C1":
        if not include_c1:
            raise ValidationError("C1 sampling is disabled")
        top = c1_range(h)
        lam = np.linspace(top * 1e-3, top * (1 - 1e-3), n)
        b, a = c1_curve(lam, rho, h, c1sq)
        return [(bs, al)] + list(zip(b.tolist(), a.tolist()))
    raise ValidationError(f"unknown curve {curve!r}; expected C1, C2, C3 or C4")


@lru_cache(maxsize=64)
def _c2_table(rho, h, c1sq):
    s = np.geomspace(1e-4, 1e7, 6000)
    b, a = c2_curve(s, rho, h, c1sq)
    return s, b, a


@lru_cache(maxsize=64)
def _c1_table(rho, h, c1sq):
    top = c1_range(h)
    lam = np.linspace(top * 1e-5, top * (1 - 1e-9), 6000)
    b, a = c1_curve(lam, rho, h, c1sq)
    return lam, b, a


def _alpha_on_curve(beta, table, fn, rho, h, c1sq):
    """All alpha values where a tabulated curve passes through the given beta."""
    t, b, a = table
    d = b - beta
    idx = np.nonzero(np.sign(d[:-1]) * np.sign(d[1:]) <= 0)[0]
    out = []
    for i in idx:
        if d[i] == 0.0:
            out.append(float(a[i]))
            continue
        if d[i + 1] == 0.0:
            continue
        t0 = brentq(lambda x: float(fn(x, rho, h, c1sq)[0]) - beta, t[i], t[i + 1], xtol=1e-15)
        out.append(float(fn(t0, rho, h, c1sq)[1]))
    return sorted(out)


def c2_alpha_at(beta: float, rho: float, h: float, theta1: float) -> list[float]:
    c1sq = math.cos(theta1) ** 2
    return _alpha_on_curve(beta, _c2_table(rho, h, c1sq), c2_curve, rho, h, c1sq)


def c1_alpha_at(beta: float, rho: float, h: float, theta1: float) -> list[float]:
    c1sq = math.cos(theta1) ** 2
    return _alpha_on_curve(beta, _c1_table(rho, h, c1sq), c1_curve, rho, h, c1sq)


def classify(beta: float, alpha: float, rho: float, h: float, theta1: float,
             tol: float = CURVE_TOL, include_c1: bool = False) -> RegionLabel:
    """Region of (beta, alpha) with respect to C1-C4 for the angle ``theta1``.

    Without ``include_c1`` the regions III and IV are not separated and
    everything above C2 and C3 is reported as III.
    """
    c1sq = math.cos(theta1) ** 2
    bs, al = _star(rho, h, c1sq)

    def label(r):
        return RegionLabel(r, REGION_COUNTS[r])

    if abs(beta - bs) <= tol and abs(alpha - al) <= tol:
        return label("star")
    if abs(alpha - al) <= tol:
        return label("on-C4" if beta < bs else "on-C3")
    if alpha < al:
        return label("I")
    # above the line: below the lowest C2 crossing means two pairs
    above = [a for a in c2_alpha_at(beta, rho, h, theta1) if a > al]
    if above:
        a2 = above[0]
        if abs(alpha - a2) <= tol:
            return label("on-C2")
        if alpha < a2:
            return label("II")
    if include_c1 and beta > bs:
        above1 = [a for a in c1_alpha_at(beta, rho, h, theta1) if a > al]
        if above1:
            a1 = above1[0]
            if abs(alpha - a1) <= tol:
                return label("on-C1")
            if alpha < a1:
                return label("IV")
    return label("III")


def taylor_coefficients(params: ModelParams) -> tuple[float, float]:
    """(coefficient of s, coefficient of s^3) in the small-s expansion of -f_0(s)."""
    c1sq = params.c1 ** 2
    return (params.alpha - c1sq * (params.rho + 1.0 / params.h),
            params.beta - c1sq * (params.rho + params.h) / 3.0)


def taylor_mult_at_zero(params: ModelParams, tol: float = 1e-12) -> int:
    """Algebraic multiplicity (4, 6 or 8) of the trivial mode-0 eigenvalue."""
    a1, a3 = taylor_coefficients(params)
    if abs(a1) > tol:
        return 4
    if abs(a3) > tol:
        return 6
    return 8


# ----------------------------------------------------- mode +-1 zero roots


def _mode0_like_roots(beta, alpha, rho, h, csq, n=4096):
    """Positive roots of csq*x*B(x) - alpha - beta*x^2."""
    def F(x):
        return csq * x * K.coth_sum(rho, h, x) - alpha - beta * x * x

    if beta > 0.0:
        # safe bound from x B(x) <= (rho+1) x + rho + 1/h
        q = (rho + 1.0) * csq
        d = q * q - 4.0 * beta * (alpha - csq * (rho + 1.0 / h))
        if d < 0.0:
            return []
        x_up = (q + math.sqrt(d)) / (2.0 * beta)
    else:
        x_up = 1e4
    x_up = max(x_up, 1e-6)
    x = np.unique(np.concatenate([np.geomspace(x_up * 1e-9, x_up, n // 2),
                                  np.linspace(x_up / n, x_up, n // 2)]))
    f = np.array([F(v) for v in x])
    roots = []
    for i in range(x.size - 1):
        if f[i] == 0.0:
            roots.append(float(x[i]))
        elif f[i] * f[i + 1] < 0.0:
            roots.append(float(brentq(F, x[i], x[i + 1], xtol=1e-15, rtol=1e-15)))
    for i in range(1, x.size - 1):
        if np.sign(f[i - 1]) == np.sign(f[i]) == np.sign(f[i + 1]) and \
                (f[i] - f[i - 1]) * (f[i + 1] - f[i]) < 0 and abs(f[i]) < min(abs(f[i - 1]), abs(f[i + 1])):
            sg = np.sign(f[i])
            r = minimize_scalar(lambda t: sg * F(t), bounds=(x[i - 1], x[i + 1]), method="bounded",
                                options={"xatol": 1e-13})
            ft = F(r.x)
            if np.sign(ft) != sg:
                roots.append(float(brentq(F, x[i - 1], r.x, xtol=1e-15)))
                roots.append(float(brentq(F, r.x, x[i + 1], xtol=1e-15)))
            elif abs(ft) < 1e-12:
                roots.append(float(r.x))
    return sorted(roots)


def solve_nu0_zero_mode1(beta: float, alpha: float, rho: float, h: float, theta2: float) -> list[float]:
    """Positive nu0 making 0 a mode +-1 eigenvalue."""
    c2sq = math.cos(theta2) ** 2
    if abs(math.cos(theta2)) < 1e-15:
        raise ExcludedAngle("excluded-angle: theta2 = +-pi/2 has no nontrivial solutions")
    return _mode0_like_roots(beta, alpha, rho, h, c2sq)


def tilde_curves(rho: float, h: float, theta1: float, theta2: float, nu0: float) -> tuple[float, float]:
    """(beta~(nu0), alpha~(nu0)): the C2 parametrization with cos(theta2) in place of cos(theta1).

    ``theta1`` does not enter; it is accepted for symmetry with the scaling
    identity against ``c2_curve`` at ``theta1``.
    """
    del theta1
    b, a = c2_curve(np.array([nu0]), rho, h, math.cos(theta2) ** 2)
    return float(b[0]), float(a[0])


# --------------------------------------------------------------- scenarios


def hopf_critical_nu0(params: ModelParams, n: int = 4000) -> tuple[float, float]:
    """Largest nu0 at which Q_1 touches C_dr, and the tangency coordinate s.

    Requires ``sin(theta1 - theta2) != 0``.
    """
    s12 = params.s12
    if abs(s12) < 1e-14:
        raise ValidationError("sin(theta1 - theta2) = 0: Q_k are parallel to Q_0")
    a_star = branch_extent(params)
    if a_star <= 0.0:
        raise ValidationError("C_dr is empty")
    rho, h, al, be = params.rho, params.h, params.alpha, params.beta
    as1, ac1 = abs(params.s1), abs(params.c1)

    def dist(a):
        a = np.atleast_1d(a)
        l2sq = K.branch_l2sq_array(rho, h, al, be, a)
        l1sq = a * a - l2sq
        return np.sqrt(np.maximum(l1sq, 0.0)) * as1 + np.sqrt(np.maximum(l2sq, 0.0)) * ac1

    a = np.linspace(a_star / n, a_star, n)
    d = dist(a)
    valid = K.branch_l2sq_array(rho, h, al, be, a) >= 0.0
    d = np.where(valid, d, -np.inf)
    i = int(np.argmax(d))
    lo, hi = a[max(i - 1, 0)], a[min(i + 1, n - 1)]
    r = minimize_scalar(lambda t: -float(dist(t)[0]), bounds=(lo, hi), method="bounded",
                        options={"xatol": 1e-14})
    a_opt = float(r.x)
    nu = float(dist(a_opt)[0]) / abs(s12)
    # tangency coordinate: project the touching point on (cos t1, sin t1)
    l2sq = float(K.branch_l2sq_array(rho, h, al, be, np.array([a_opt]))[0])
    l1 = math.sqrt(max(a_opt * a_opt - l2sq, 0.0))
    l2 = math.sqrt(max(l2sq, 0.0))
    # pick the sign pattern that puts the touching point on Q_1
    target = nu * math.sin(params.theta2 - params.theta1)
    n1, n2 = -params.s1, params.c1
    cand = [(e1 * l1, e2 * l2) for e1 in (1, -1) for e2 in (1, -1)]
    p1, p2 = min(cand, key=lambda q: abs(q[0] * n1 + q[1] * n2 - target))
    s_bar = p1 * params.c1 + p2 * params.s1 - nu * params.c12
    return nu, s_bar


def _nonzero(points, tol=1e-9):
    return [p for p in points if abs(p.s) > tol]


def detect_scenario(params: ModelParams, k_max: int | None = None, tol: float = 1e-8,
                    n_scan: int = 2048) -> ScenarioReport:
    """Label the spectrum of ``params`` with one of the known bifurcation scenarios."""
    s12 = params.s12
    a_star = branch_extent(params)
    if abs(s12) < 1e-14:
        if k_max is None:
            raise ValidationError("k_max is required when sin(theta1 - theta2) = 0")
        kk = int(k_max)
    else:
        auto = int(math.floor(a_star / (params.nu0 * abs(s12)))) if a_star > 0 else 0
        kk = auto if k_max is None else min(int(k_max), auto)
    if k_max is not None and k_max < 1:
        raise ValidationError("k_max must be at least 1")

    spec = {k: mode_eigenvalues(params, k, n_scan=n_scan, a_star=a_star) for k in range(0, max(kk, 1) + 1)}
    if any(p.mult == 3 for pts in spec.values() for p in pts):
        raise Inconclusive("inconclusive: triple eigenvalue on the imaginary axis")

    if taylor_mult_at_zero(params) >= 6:
        return ScenarioReport("0²-resonance", tuple(spec[0]))

    mode0 = _nonzero(spec[0])
    mode1 = spec.get(1, [])
    higher = [p for k, pts in spec.items() if k >= 2 for p in pts]
    pos0 = [p for p in mode0 if p.s > 0]

    if any(p.mult >= 2 for p in pos0):
        return ScenarioReport("real-1:1", tuple(pos0), notes="double nonzero mode-0 eigenvalue")

    doubles = [p for p in mode1 if p.mult >= 2]
    if len(mode1) == 1 and doubles and not mode0 and not higher:
        return ScenarioReport("HamiltonianHopf-mode1", (doubles[0], _mirror(doubles[0])), params.nu0)

    zero1 = [p for p in mode1 if abs(p.s) <= tol * (1 + abs(p.s))]
    other1 = [p for p in mode1 if p not in zero1]
    if zero1 and len(other1) == 1 and other1[0].mult == 1 and len(pos0) == 1 \
            and pos0[0].mult == 1 and not higher:
        kappa0 = pos0[0].s
        sbar = other1[0].s
        m_top = math.ceil(abs(sbar) / kappa0) + 1
        for m in range(1, m_top + 1):
            if abs(abs(sbar) - m * kappa0) <= tol * (1.0 + abs(sbar)):
                raise Inconclusive(f"inconclusive: s = {sbar} resonant with {m} kappa0")
        wit = (zero1[0], _mirror(zero1[0]), pos0[0], _mirror_k0(pos0[0]), other1[0], _mirror(other1[0]))
        return ScenarioReport("Resonance-00-is-ikappa0", wit, params.nu0)

    return ScenarioReport("none", tuple(p for pts in spec.values() for p in pts))


def _mirror(p: SpectralPoint) -> SpectralPoint:
    return SpectralPoint(-p.k, -p.s, p.mult)


def _mirror_k0(p: SpectralPoint) -> SpectralPoint:
    return SpectralPoint(0, -p.s, p.mult)
