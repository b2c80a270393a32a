"""Dispersion function, the real branch C_dr and mode-k imaginary eigenvalues.

An imaginary number ``i s`` is a mode-``k`` eigenvalue exactly when the line
Q_k, parametrized by ``s``, meets the zero set of ``D(l1, l2)``.  All residual
evaluations go through the kernels in :mod:`iwave._kernels`.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from iwave import _kernels as K
from iwave.errors import DegenerateDirection, NoAdmissibleInterval, UnboundedBranch
from iwave.params import ModelParams, WaveVector, gamma_tilde, wavevector_of

# central-difference step and tangency tolerance factor
FD_STEP = 1e-6
TOL_DERIV = 1e-6
ROOT_XTOL = 1e-14
DEFAULT_SCAN = 2048


@dataclass(frozen=True)
class SpectralPoint:
    """Imaginary eigenvalue ``i s`` of Fourier mode ``k``.

    ``mult`` is 1, 2 or 3 for nonzero roots.  The trivial mode-0 root
    ``s = 0`` carries the Taylor multiplicity (4, 6 or 8).
    """

    k: int
    s: float
    mult: int = 1


@dataclass(frozen=True)
class BranchSample:
    a: float
    l1_sq: float
    l2_sq: float

    @property
    def valid(self) -> bool:
        return self.l2_sq >= 0.0


def _args(p: ModelParams):
    return p.rho, p.h, p.alpha, p.beta, p.c1, p.s1, p.c2, p.s2, p.nu0


def evaluate_D(params: ModelParams, w: WaveVector) -> float:
    """D(l1, l2) = l1^2 (rho coth g + coth hg) - (alpha + beta g^2) g with g = |w|."""
    return K.dispersion_D(params.rho, params.h, params.alpha, params.beta, w.l1, w.l2)


def evaluate_mode_residual(params: ModelParams, k: int, s: float) -> float:
    """f_k(s) = D(wavevector_of(params, k, s)); the sign map to D is the identity."""
    return K.mode_residual(*_args(params), int(k), float(s))


def mode_residual_array(params: ModelParams, k: int, s) -> np.ndarray:
    return K.mode_residual_array(*_args(params), int(k), np.asarray(s, dtype=float))


def mode_residual_derivative(params: ModelParams, k: int, s: float, step: float = FD_STEP) -> float:
    f = K.mode_residual
    a = _args(params)
    return (f(*a, k, s + step) - f(*a, k, s - step)) / (2.0 * step)


def _residual_scale(params: ModelParams, k: int, s: float) -> float:
    # magnitude of the two competing terms; used to make tolerances relative
    w = wavevector_of(params, k, s)
    g = w.norm
    if g == 0.0:
        return 1.0
    return w.l1 ** 2 * K.coth_sum(params.rho, params.h, g) + (params.alpha + params.beta * g * g) * g


# ---------------------------------------------------------------- branch C_dr


def _l2sq(params: ModelParams, a):
    return K.branch_l2sq_array(params.rho, params.h, params.alpha, params.beta, np.atleast_1d(a))


def sample_branch(params: ModelParams, a_max: float | None = None, n: int = 200) -> list[BranchSample]:
    """Sample C_dr at ``n`` equally spaced a in (0, a_max].

    Samples with ``l2_sq < 0`` are kept but report ``valid == False``.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if a_max is None:
        a_max = branch_extent(params)
        if a_max <= 0.0:
            return []
    if a_max <= 0.0:
        raise ValueError("a_max must be positive")
    a = np.linspace(a_max / n, a_max, n)
    l2 = _l2sq(params, a)
    l1 = a * a - l2
    return [BranchSample(float(x), float(y), float(z)) for x, y, z in zip(a, l1, l2)]


def branch_upper_bound(params: ModelParams) -> float:
    """A radius beyond which l2^2 < 0, from a*coth-sum(a) <= (rho+1) a + rho + 1/h."""
    rho, h, al, be = params.rho, params.h, params.alpha, params.beta
    if be <= 0.0:
        raise UnboundedBranch("unbounded-branch: beta = 0 is not supported")
    b = rho + 1.0
    disc = b * b - 4.0 * be * (al - rho - 1.0 / h)
    if disc < 0.0:
        return 0.0
    return (b + math.sqrt(disc)) / (2.0 * be)


def branch_extent(params: ModelParams, n_scan: int = 4096) -> float:
    """Radius a* = sup{a : l2^2(a) >= 0} of the disk containing C_dr.

    Returns 0.0 when the branch is empty apart from the origin.
    """
    a_up = branch_upper_bound(params)
    if a_up <= 0.0:
        return 0.0
    # geometric spacing resolves the small-a behaviour, linear the bulk
    a = np.unique(np.concatenate([
        np.geomspace(a_up * 1e-8, a_up, n_scan // 2),
        np.linspace(a_up / n_scan, a_up, n_scan // 2),
    ]))
    v = _l2sq(params, a)
    nonneg = np.nonzero(v >= 0.0)[0]
    if nonneg.size == 0:
        return 0.0
    i = nonneg[-1]
    if i == a.size - 1:
        return float(a[-1])
    f = lambda x: float(_l2sq(params, x)[0])
    return float(brentq(f, a[i], a[i + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200))


# ------------------------------------------------------------ mode eigenvalues


def admissible_interval(params: ModelParams, k: int, a_star: float | None = None):
    """Segment of Q_k inside the disk of radius a*, as (s_lo, s_hi), or None."""
    if a_star is None:
        a_star = branch_extent(params)
    kn = k * params.nu0
    disc = a_star * a_star - (kn * params.s12) ** 2
    if disc < 0.0:
        return None
    r = math.sqrt(disc)
    c = -kn * params.c12
    return c - r, c + r


def _polish(fun, lo, hi):
    return brentq(fun, lo, hi, xtol=ROOT_XTOL, rtol=4 * np.finfo(float).eps, maxiter=200)


def _classify_mult(params, k, s) -> int:
    d = abs(mode_residual_derivative(params, k, s))
    if d >= TOL_DERIV * (1.0 + abs(s)):
        return 1
    return 3 if is_triple(params, k, s) else 2


def _scan_roots(fun, vfun, lo, hi, n, deriv_tol, second):
    """Roots of a scalar function on [lo, hi] by sign scan, bisection and extremum refinement.

    Returns a list of (s, tangent) pairs; ``tangent`` marks a double root found
    at a refined extremum whose value is below the tangency threshold.
    """
    x = np.linspace(lo, hi, n)
    f = vfun(x)
    found: list[tuple[float, bool]] = []
    sign = np.sign(f)
    for i in range(n - 1):
        if sign[i] == 0.0:
            found.append((float(x[i]), False))
        elif sign[i] * sign[i + 1] < 0.0:
            found.append((_polish(fun, x[i], x[i + 1]), False))
    if sign[-1] == 0.0:
        found.append((float(x[-1]), False))
    # interior extrema with no sign change around them: possible tangency or a
    # pair of roots closer than the grid spacing
    for i in range(1, n - 1):
        if sign[i - 1] != sign[i] or sign[i] != sign[i + 1] or sign[i] == 0.0:
            continue
        if (f[i] - f[i - 1]) * (f[i + 1] - f[i]) >= 0.0:
            continue
        if abs(f[i]) > min(abs(f[i - 1]), abs(f[i + 1])):
            continue  # extremum pointing away from zero
        sg = sign[i]
        res = minimize_scalar(lambda t: sg * fun(t), bounds=(x[i - 1], x[i + 1]),
                              method="bounded", options={"xatol": 1e-13})
        t = float(res.x)
        ft = fun(t)
        curv = abs(second(t))
        thresh = (deriv_tol * (1.0 + abs(t))) ** 2 / (2.0 * max(curv, 1e-300))
        if abs(ft) <= thresh or ft == 0.0:
            found.append((t, True))
        elif np.sign(ft) != sg:
            found.append((_polish(fun, x[i - 1], t), False))
            found.append((_polish(fun, t, x[i + 1]), False))
    found.sort()
    return found


def mode_eigenvalues(params: ModelParams, k: int, n_scan: int = DEFAULT_SCAN,
                     strict: bool = False, a_star: float | None = None) -> list[SpectralPoint]:
    """All imaginary mode-k eigenvalues ``i s`` with their multiplicities.

    Parameters
    ----------
    n_scan : int
        Grid size of the sign scan over the admissible interval.
    strict : bool
        Raise :class:`NoAdmissibleInterval` instead of returning ``[]`` when
        Q_k misses the disk containing C_dr.
    """
    k = int(k)
    if a_star is None:
        a_star = branch_extent(params)
    args = _args(params)

    if k == 0:
        from iwave.regions import taylor_mult_at_zero

        out = [SpectralPoint(0, 0.0, taylor_mult_at_zero(params))]
        if a_star <= 0.0 or params.c1 == 0.0:
            return out
        # divide out the trivial root: F(s) = f_0(s)/s, even in s
        fun = lambda t: K.mode_residual(*args, 0, t) / t
        vfun = lambda t: K.mode_residual_array(*args, 0, t) / t
        h2 = 1e-4
        second = lambda t: (fun(t + h2) - 2.0 * fun(t) + fun(t - h2)) / (h2 * h2)
        lo = a_star * 1e-9
        # |f_0'| = |s F'| at a root, so scale the tolerance accordingly
        pos = _scan_roots(fun, vfun, lo, a_star * (1 + 1e-9), n_scan, TOL_DERIV, second)
        pts = []
        for s, tangent in pos:
            mult = 2 if tangent else _classify_mult(params, 0, s)
            if tangent and is_triple(params, 0, s):
                mult = 3
            pts.append((s, mult))
        neg = [SpectralPoint(0, -s, m) for s, m in reversed(pts)]
        return neg + out + [SpectralPoint(0, s, m) for s, m in pts]

    iv = admissible_interval(params, k, a_star)
    if iv is None:
        if strict:
            raise NoAdmissibleInterval(f"no-admissible-interval: Q_{k} misses the disk of radius {a_star}")
        return []
    lo, hi = iv
    pad = 1e-9 * max(1.0, abs(lo), abs(hi))
    fun = lambda t: K.mode_residual(*args, k, t)
    vfun = lambda t: K.mode_residual_array(*args, k, t)
    h2 = 1e-4
    second = lambda t: (fun(t + h2) - 2.0 * fun(t) + fun(t - h2)) / (h2 * h2)
    roots = _scan_roots(fun, vfun, lo - pad, hi + pad, n_scan, TOL_DERIV, second)
    out = []
    for s, tangent in roots:
        mult = _classify_mult(params, k, s) if not tangent else (3 if is_triple(params, k, s) else 2)
        out.append(SpectralPoint(k, s, mult))
    return _merge_close(out)


def _merge_close(points: list[SpectralPoint], gap: float = 1e-7) -> list[SpectralPoint]:
    # two roots of a barely split tangency collapse to a single double root
    merged: list[SpectralPoint] = []
    for p in points:
        if merged and abs(p.s - merged[-1].s) < gap and (p.mult >= 2 or merged[-1].mult >= 2):
            q = merged.pop()
            merged.append(SpectralPoint(p.k, 0.5 * (p.s + q.s), max(2, p.mult, q.mult)))
        else:
            merged.append(p)
    return merged


def signed_distance_spectrum(params: ModelParams, k: int, **kw) -> list[float]:
    """Coordinates s of the intersections of Q_k with C_dr, in increasing order."""
    return [p.s for p in mode_eigenvalues(params, k, **kw)]


# ------------------------------------------------- tangency parametrization


def _csch2(x: float) -> float:
    """1/sinh(x)^2, stable for small and large x."""
    ax = abs(x)
    if ax < 1e-4:
        x2 = x * x
        return 1.0 / x2 - 1.0 / 3.0 + x2 / 15.0
    if ax > 20.0:
        e = math.exp(-2.0 * ax)
        return 4.0 * e / (1.0 - e) ** 2
    return 1.0 / math.sinh(x) ** 2


def alpha_beta_star(params: ModelParams, k: int, s: float) -> tuple[float, float]:
    """The (alpha, beta) for which ``i s`` is a double mode-k eigenvalue.

    ``params.alpha`` and ``params.beta`` are ignored.

    Raises
    ------
    DegenerateDirection
        If ``s + k nu0 cos(t1 - t2) == 0`` or ``cos(t1) == 0``.
    """
    sigma = s + k * params.nu0 * params.c12
    c1 = params.c1
    if sigma == 0.0 or abs(c1) < 1e-15:
        raise DegenerateDirection(
            "degenerate-direction: s + k nu0 cos(theta1 - theta2) = 0 or cos(theta1) = 0"
        )
    w = wavevector_of(params, k, s)
    g = gamma_tilde(params, k, s)
    rho, h = params.rho, params.h
    B = K.coth_sum(rho, h, g)
    l1 = w.l1
    beta = l1 * c1 * B / (g * sigma) - l1 * l1 / (2.0 * g ** 3) * (
        B + g * (rho * _csch2(g) + h * _csch2(h * g))
    )
    alpha = l1 * l1 * B / g - beta * g * g
    return alpha, beta


def dbeta_star_ds(params: ModelParams, k: int, s: float, step: float = FD_STEP) -> float:
    """Central difference of beta_k*(s); vanishing marks a triple eigenvalue."""
    bp = alpha_beta_star(params, k, s + step)[1]
    bm = alpha_beta_star(params, k, s - step)[1]
    return (bp - bm) / (2.0 * step)


def is_triple(params: ModelParams, k: int, s: float) -> bool:
    try:
        return abs(dbeta_star_ds(params, k, s)) < TOL_DERIV * (1.0 + abs(s))
    except DegenerateDirection:
        return False


# --------------------------------------------------------------- CSV export


def branch_to_csv(samples: Iterable[BranchSample], fh=None) -> str:
    buf = fh if fh is not None else io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["a", "l1sq", "l2sq"])
    for b in samples:
        w.writerow([repr(b.a), repr(b.l1_sq), repr(b.l2_sq)])
    return buf.getvalue() if fh is None else ""


def eigenvalues_to_csv(points: Sequence[SpectralPoint], fh=None) -> str:
    buf = fh if fh is not None else io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "s", "mult"])
    for p in points:
        w.writerow([p.k, repr(p.s), p.mult])
    return buf.getvalue() if fh is None else ""
