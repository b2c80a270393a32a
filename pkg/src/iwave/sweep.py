"""Grid sweeps over model parameters with deterministic output order."""

from __future__ import annotations

import io
import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from iwave.errors import NumericalError, ValidationError
from iwave.params import PARAM_FIELDS, ModelParams

TASKS = ("classify", "coeffs", "scenario")
EXTRA_AXES = ("s",)
COLUMNS = {
    "classify": ("label", "mode0_imag_count"),
    "coeffs": ("c2_1", "d1_0", "tau1", "classification", "sign"),
    "scenario": ("scenario",),
}


@dataclass(frozen=True)
class Axis:
    name: str
    lo: float
    hi: float
    count: int

    def values(self) -> np.ndarray:
        if self.count == 1:
            return np.array([self.lo])
        return np.linspace(self.lo, self.hi, self.count)


@dataclass(frozen=True)
class SweepSpec:
    """Up to three axes over ModelParams fields (plus ``s`` for coeffs) and a task.

    For ``coeffs`` each cell is moved to its mode-1 tangency point
    (alpha_1*(s), beta_1*(s)) before the coefficients are evaluated; ``s``
    defaults to ``s_default`` unless it is itself an axis.
    """

    axes: tuple[Axis, ...]
    task: str = "classify"
    s_default: float = 0.5
    tol: float = 1e-9

    def __post_init__(self):
        if self.task not in TASKS:
            raise ValidationError(f"unknown sweep task {self.task!r}")
        if not 1 <= len(self.axes) <= 3:
            raise ValidationError("a sweep needs between 1 and 3 axes")
        names = [a.name for a in self.axes]
        if len(set(names)) != len(names):
            raise ValidationError("duplicate sweep axes")
        for a in self.axes:
            if a.name not in PARAM_FIELDS and not (a.name in EXTRA_AXES and self.task == "coeffs"):
                raise ValidationError(f"unknown sweep axis {a.name!r}")
            if a.count < 1:
                raise ValidationError("axis counts must be at least 1")

    @classmethod
    def from_mapping(cls, data: dict) -> "SweepSpec":
        try:
            axes = tuple(Axis(str(a["name"]), float(a["min"]), float(a["max"]), int(a["count"]))
                         for a in data["axes"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed sweep spec: {exc}") from exc
        return cls(axes, data.get("task", "classify"), float(data.get("s", 0.5)), float(data.get("tol", 1e-9)))

    def cells(self):
        return list(itertools.product(*(a.values() for a in self.axes)))


def default_threads() -> int:
    env = os.environ.get("IWAVE_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError as exc:
            raise ValidationError(f"IWAVE_THREADS must be an integer, got {env!r}") from exc
        if n < 1:
            raise ValidationError("IWAVE_THREADS must be positive")
        return n
    return 1


def evaluate_cell(spec: SweepSpec, base: ModelParams, values) -> tuple:
    """Run the task at one cell; returns the task columns or raises."""
    changes = {a.name: float(v) for a, v in zip(spec.axes, values) if a.name in PARAM_FIELDS}
    s = next((float(v) for a, v in zip(spec.axes, values) if a.name == "s"), spec.s_default)
    if spec.task == "classify":
        from iwave.regions import classify

        p = base.with_(**changes)
        lab = classify(p.beta, p.alpha, p.rho, p.h, p.theta1, tol=spec.tol)
        return (lab.region, lab.mode0_imag_count)
    if spec.task == "scenario":
        from iwave.regions import detect_scenario

        return (detect_scenario(base.with_(**changes)).scenario,)
    from iwave.dispersion import alpha_beta_star
    from iwave.normalform import hopf_coefficients

    p = base.with_(**changes)
    a, b = alpha_beta_star(p, 1, s)
    c = hopf_coefficients(p.with_(alpha=a, beta=b), s)
    sign = int(np.sign(c.c2_1) * np.sign(c.d1_0))
    return (c.c2_1, c.d1_0, c.tau1, c.classification, sign)


def _safe(spec, base, values):
    try:
        return evaluate_cell(spec, base, values), ""
    except ValidationError as exc:
        return None, f"validation: {exc}"
    except NumericalError as exc:
        return None, f"numerical: {exc}"


def run_sweep(spec: SweepSpec, base: ModelParams, threads: int | None = None) -> list[tuple]:
    """Evaluate every cell; rows are (axis values..., task columns..., error) in row-major order."""
    cells = spec.cells()
    n = threads or default_threads()
    results: list = [None] * len(cells)
    with ThreadPoolExecutor(max_workers=max(1, n)) as pool:
        futs = {pool.submit(_safe, spec, base, v): i for i, v in enumerate(cells)}
        for f, i in futs.items():
            results[i] = f.result()
    width = len(COLUMNS[spec.task])
    rows = []
    for v, (out, err) in zip(cells, results):
        vals = tuple(float(x) for x in v)
        rows.append(vals + (out if out is not None else ("",) * width) + (err,))
    return rows


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    s = str(v)
    return '"' + s.replace('"', '""') + '"' if ("," in s or '"' in s) else s


def sweep_to_csv(spec: SweepSpec, rows) -> str:
    buf = io.StringIO()
    head = [a.name for a in spec.axes] + list(COLUMNS[spec.task]) + ["error"]
    buf.write(",".join(head) + "\n")
    for r in rows:
        buf.write(",".join(_fmt(v) for v in r) + "\n")
    return buf.getvalue()
