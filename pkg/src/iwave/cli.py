"""Command-line front end.

Exit codes: 0 on success, 2 on validation errors, 3 on numerical failures.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys

import numpy as np

from iwave.errors import NumericalError, ValidationError
from iwave.params import load_params

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 2, 3


def _grid(text: str) -> tuple[int, int]:
    try:
        a, b = text.lower().split("x")
        na, nb = int(a), int(b)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"grid must look like 50x50, got {text!r}") from exc
    if na < 1 or nb < 1:
        raise argparse.ArgumentTypeError("grid counts must be positive")
    return na, nb


def _range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(v) for v in text.split(":"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"range must look like lo:hi, got {text!r}") from exc
    return lo, hi


def _axis(text: str):
    from iwave.sweep import Axis

    try:
        name, lo, hi, n = text.split(":")
        return Axis(name, float(lo), float(hi), int(n))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"axis must look like name:min:max:count, got {text!r}") from exc


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _load_coeffs(path: str):
    from iwave.normalform import HopfCoefficients

    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"{path}: cannot read coefficients ({exc})") from exc
    keys = ("c2_1", "d1_0", "tau1", "s", "c3_1", "d2_0", "d3_0")
    missing = [k for k in ("c2_1", "d1_0") if k not in data]
    if missing:
        raise ValidationError(f"{path}: missing coefficient fields {', '.join(missing)}")
    kw = {k: float(data[k]) for k in keys if k in data}
    kw.setdefault("tau1", 1.0)
    return HopfCoefficients(**kw)


def _hopf_s(params, s):
    """The given s, or the unique double mode-1 root of ``params``."""
    if s is not None:
        return s
    from iwave.dispersion import mode_eigenvalues

    doubles = [p.s for p in mode_eigenvalues(params, 1) if p.mult >= 2]
    if len(doubles) != 1:
        raise ValidationError(f"outside-scenario: expected one double mode-1 root, found {len(doubles)}; pass --s")
    return doubles[0]


def _kappa0(params, kappa0):
    if kappa0 is not None:
        return kappa0
    from iwave.dispersion import mode_eigenvalues

    pos = [p.s for p in mode_eigenvalues(params, 0) if p.s > 1e-9 and p.mult == 1]
    if len(pos) != 1:
        raise ValidationError(f"outside-scenario: expected one simple positive mode-0 root, found {len(pos)}; "
                              "pass --kappa0")
    return pos[0]


def _coeffs_for(args, params):
    from iwave.normalform import hopf_coefficients

    if args.coeffs:
        c = _load_coeffs(args.coeffs)
    else:
        c = hopf_coefficients(params, _hopf_s(params, args.s))
    over = {k: getattr(args, k) for k in ("c3_1", "d2_0", "d3_0") if getattr(args, k, None) is not None}
    return c.with_overrides(**over) if over else c


# ---------------------------------------------------------------- commands


def cmd_disprel(args) -> int:
    from iwave.dispersion import branch_extent, branch_to_csv, eigenvalues_to_csv, mode_eigenvalues, sample_branch

    params, _ = load_params(args.params)
    pts = []
    for k in range(-args.kmax, args.kmax + 1):
        pts.extend(mode_eigenvalues(params, k, strict=False))
    _emit(eigenvalues_to_csv(pts), args.out)
    if args.branch:
        _emit(branch_to_csv(sample_branch(params, branch_extent(params), n=args.n)), args.branch)
    return EXIT_OK


def cmd_regions(args) -> int:
    from iwave.regions import classify, star_point

    params, _ = load_params(args.params)
    nb, na = args.grid
    bs, as_ = star_point(params.rho, params.h, params.theta1)
    blo, bhi = args.beta_range or (0.0, 3.0 * bs)
    alo, ahi = args.alpha_range or (0.05 * as_, 3.0 * as_)
    buf = io.StringIO()
    buf.write("beta,alpha,label,mode0_imag_count\n")
    for b in np.linspace(blo, bhi, nb):
        for a in np.linspace(alo, ahi, na):
            lab = classify(float(b), float(a), params.rho, params.h, params.theta1, tol=args.tol,
                           include_c1=args.include_c1)
            buf.write(f"{float(b)!r},{float(a)!r},{lab.region},{lab.mode0_imag_count}\n")
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_curves(args) -> int:
    from iwave.regions import curve_points

    params, _ = load_params(args.params)
    buf = io.StringIO()
    buf.write("curve,beta,alpha\n")
    for name in ("C1", "C2", "C3", "C4"):
        for b, a in curve_points(name, params, n=args.n):
            buf.write(f"{name},{float(b)!r},{float(a)!r}\n")
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_scenario(args) -> int:
    from iwave.regions import detect_scenario

    params, _ = load_params(args.params)
    rep = detect_scenario(params, k_max=args.kmax, tol=args.tol if args.tol is not None else 1e-8)
    out = {
        "scenario": rep.scenario,
        "witnesses": [{"k": p.k, "s": p.s, "mult": p.mult} for p in rep.witnesses],
        "nu0_critical": rep.nu0_critical,
        "notes": rep.notes,
    }
    _emit(_json(out), args.out)
    return EXIT_OK


def cmd_coeffs(args) -> int:
    from iwave.normalform import doubly_periodic_coefficients, hopf_coefficients

    params, _ = load_params(args.params)
    if args.scenario == "hopf":
        c = hopf_coefficients(params, _hopf_s(params, args.s))
        out = c.to_dict()
    else:
        dp = doubly_periodic_coefficients(params, _kappa0(params, args.kappa0))
        out = dp.to_dict()
    _emit(_json(out), args.out)
    return EXIT_OK


def _orbit(args, params):
    from iwave.dynamics import ReducedState, find_bright_homoclinic, find_dark_envelope, integrate

    c = _coeffs_for(args, params)
    if args.kind == "bright":
        return find_bright_homoclinic(c, args.mu, n=args.n)
    if args.kind == "dark":
        return find_dark_envelope(c, args.mu, n=args.n)
    span = args.x_span or 2.0 * math.pi * 10.0 / max(abs(c.s), 1.0)
    tol = args.tol if args.tol is not None else 1e-10
    orb = integrate(c, args.mu, ReducedState(complex(args.amp), 0j), (0.0, span), tol=tol,
                    t_eval=np.linspace(0.0, span, args.n))
    orb.kind = "periodic"
    return orb


def cmd_orbit(args) -> int:
    params = load_params(args.params)[0] if args.params else None
    if params is None and not args.coeffs:
        raise ValidationError("orbit needs --coeffs or --params")
    orb = _orbit(args, params)
    buf = io.StringIO()
    buf.write("x,ReA,ImA,ReB,ImB,absA\n")
    for x, a, b in zip(orb.x, orb.A, orb.B):
        buf.write(f"{float(x)!r},{float(a.real)!r},{float(a.imag)!r},{float(b.real)!r},{float(b.imag)!r},"
                  f"{float(abs(a))!r}\n")
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_wavefield(args) -> int:
    from iwave.dynamics import doubly_periodic_branch
    from iwave.normalform import doubly_periodic_coefficients
    from iwave.wavefield import synthesize_doubly_periodic, synthesize_envelope_wave

    params, _ = load_params(args.params)
    nx, nz = args.grid
    if args.kind == "doubly-periodic":
        k0 = _kappa0(params, args.kappa0)
        dp = doubly_periodic_coefficients(params, k0)
        br = doubly_periodic_branch(params, dp, k0, complex(args.ampA), complex(args.ampB))
        grid = synthesize_doubly_periodic(params, br, nx=nx, nz=nz)
    else:
        args.amp = 0.0
        orb = _orbit(args, params)
        stride = max(1, (len(orb.x) - 1) // max(nx - 1, 1))
        grid = synthesize_envelope_wave(params, orb, nz=nz, stride=stride)
    _emit(grid.to_csv(long=args.long), args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    from iwave.sweep import SweepSpec, run_sweep, sweep_to_csv

    params, _ = load_params(args.params)
    if args.spec:
        try:
            with open(args.spec) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"{args.spec}: cannot read sweep spec ({exc})") from exc
        spec = SweepSpec.from_mapping(data)
    else:
        if not args.axis:
            raise ValidationError("sweep needs --spec or at least one --axis")
        spec = SweepSpec(tuple(args.axis), args.task, args.s if args.s is not None else 0.5,
                         args.tol if args.tol is not None else 1e-9)
    rows = run_sweep(spec, params, threads=args.threads)
    _emit(sweep_to_csv(spec, rows), args.out)
    return EXIT_OK


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="iwave", description="Spectra, bifurcation regions and reduced "
                                 "dynamics of three-dimensional internal gravity-capillary waves.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, params_required=True):
        p.add_argument("--params", required=params_required, help="JSON parameter file")
        p.add_argument("--out", default=None, help="output file (default stdout)")
        p.add_argument("--tol", type=float, default=None, help="tolerance override")
        return p

    p = common(sub.add_parser("disprel", help="mode eigenvalues and the real dispersion branch"))
    p.add_argument("--kmax", type=int, default=3)
    p.add_argument("--branch", default=None, help="also write branch samples (a,l1sq,l2sq) here")
    p.add_argument("--n", type=int, default=200)
    p.set_defaults(func=cmd_disprel)

    p = common(sub.add_parser("regions", help="(beta, alpha) region map"))
    p.add_argument("action", nargs="?", choices=["map"], default="map")
    p.add_argument("--grid", type=_grid, default=(50, 50), help="beta x alpha counts, e.g. 50x50")
    p.add_argument("--beta-range", type=_range, default=None)
    p.add_argument("--alpha-range", type=_range, default=None)
    p.add_argument("--include-c1", action="store_true", help="separate regions III and IV")
    p.set_defaults(func=cmd_regions, tol=1e-9)

    p = common(sub.add_parser("curves", help="samples of the curves C1-C4"))
    p.add_argument("--n", type=int, default=400)
    p.set_defaults(func=cmd_curves)

    p = common(sub.add_parser("scenario", help="bifurcation scenario detector"))
    p.add_argument("--kmax", type=int, default=None)
    p.set_defaults(func=cmd_scenario)

    p = common(sub.add_parser("coeffs", help="normal-form coefficients"))
    p.add_argument("--scenario", choices=["hopf", "doubly-periodic"], default="hopf")
    p.add_argument("--s", type=float, default=None, help="double mode-1 root (default: detected)")
    p.add_argument("--kappa0", type=float, default=None, help="mode-0 root (default: detected)")
    p.set_defaults(func=cmd_coeffs)

    def orbit_flags(p):
        p.add_argument("--mu", type=float, required=True)
        p.add_argument("--coeffs", default=None, help="JSON with c2_1, d1_0 [, tau1, s, c3_1, d2_0, d3_0]")
        p.add_argument("--s", type=float, default=None)
        for k in ("c3_1", "d2_0", "d3_0"):
            p.add_argument(f"--{k.replace('_', '-')}", dest=k, type=float, default=None)

    p = common(sub.add_parser("orbit", help="solutions of the reduced system"), params_required=False)
    orbit_flags(p)
    p.add_argument("--kind", choices=["bright", "dark", "periodic"], default="bright")
    p.add_argument("--amp", type=float, default=1e-3, help="initial |A| for --kind periodic")
    p.add_argument("--x-span", type=float, default=None)
    p.add_argument("--n", type=int, default=2001)
    p.set_defaults(func=cmd_orbit)

    p = common(sub.add_parser("wavefield", help="linear-order interface elevation"))
    p.add_argument("--kind", choices=["doubly-periodic", "bright", "dark"], default="doubly-periodic")
    p.add_argument("--grid", type=_grid, default=(65, 65), help="x x z counts")
    p.add_argument("--ampA", type=float, default=0.01)
    p.add_argument("--ampB", type=float, default=0.01)
    p.add_argument("--kappa0", type=float, default=None)
    p.add_argument("--long", action="store_true", help="long format (x,z,eta)")
    p.add_argument("--mu", type=float, default=1e-3)
    p.add_argument("--coeffs", default=None)
    p.add_argument("--s", type=float, default=None)
    p.set_defaults(func=cmd_wavefield, c3_1=None, d2_0=None, d3_0=None, n=2001, x_span=None)

    p = common(sub.add_parser("sweep", help="parallel parameter sweep"))
    p.add_argument("--spec", default=None, help="JSON sweep spec {axes: [{name,min,max,count}], task, s}")
    p.add_argument("--axis", type=_axis, action="append", help="name:min:max:count (repeatable)")
    p.add_argument("--task", choices=["classify", "coeffs", "scenario"], default="classify")
    p.add_argument("--s", type=float, default=None)
    p.add_argument("--threads", type=int, default=None, help="workers (default $IWAVE_THREADS or 1)")
    p.set_defaults(func=cmd_sweep)
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"iwave: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as exc:
        print(f"iwave: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"iwave: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
