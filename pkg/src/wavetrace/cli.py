"""Command-line interface.

Subcommands: resonances | trace | compare | birman-krein | potential-info.
Exit codes: 0 ok, 2 config error, 3 numerical failure.  CSV artifacts use a
header row, comma separators, LF endings, and 17-significant-digit floats;
JSON artifacts use UTF-8 with stable key order.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from .birman_krein import lhs_trace, make_bump, rhs_bk
from .poisson import PoissonConfig, compare_curves, poisson_rhs
from .potentials import Potential, make_poschl_teller
from .resonances import SearchRegion, find_zeros
from .sds import make_regge_wheeler, make_sds_geometry
from .trace import Grid, PropagationWindowError, TraceCurve, \
    flat_trace_difference, pt_closed_form

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


class ConfigError(ValueError):
    pass


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _load_config_file(path: str) -> dict:
    """Flat key=value file; '#' starts a comment."""
    cfg = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"bad config line: {line!r}")
            key, val = line.split("=", 1)
            cfg[key.strip()] = val.strip()
    return cfg


def _build_potential(args) -> Potential:
    kind = args.potential
    if kind == "poschl_teller":
        if args.ell is None:
            raise ConfigError("poschl_teller requires --ell")
        return make_poschl_teller(args.ell)
    if kind == "regge_wheeler":
        if args.ell is None or args.mass is None or args.lambda_cosmo is None:
            raise ConfigError("regge_wheeler requires --ell, --mass, --lambda-cosmo")
        geom = make_sds_geometry(args.mass, args.lambda_cosmo)
        return make_regge_wheeler(geom, int(args.ell))
    raise ConfigError(f"unknown potential kind {kind!r}")


def _parse_region(spec: str) -> SearchRegion:
    try:
        parts = [float(p) for p in spec.split(",")]
        if len(parts) != 4:
            raise ValueError
        return SearchRegion(*parts)
    except ValueError as exc:
        raise ConfigError(f"bad region {spec!r}; expected re_min,re_max,im_min,im_max") from exc


def _parse_times(spec: str) -> np.ndarray:
    try:
        if ":" in spec:
            lo, step, hi = (float(p) for p in spec.split(":"))
            n = int(round((hi - lo) / step))
            times = lo + step * np.arange(n + 1)
            times = times[times <= hi + 1e-12]
        else:
            times = np.array([float(p) for p in spec.split(",")])
    except ValueError as exc:
        raise ConfigError(f"bad times {spec!r}") from exc
    if np.any(times <= 0):
        raise ConfigError("times must be positive (the trace formula holds for t > 0)")
    return times


def _zero_records(zeros) -> list[dict]:
    recs = [
        {
            "re": z.lam.real,
            "im": z.lam.imag,
            "multiplicity": z.multiplicity,
            "classification": z.classification,
            "residual": z.newton_residual,
        }
        for z in zeros
    ]
    recs.sort(key=lambda r: (-r["im"], r["re"]))
    return recs


def cmd_resonances(args) -> int:
    pot = _build_potential(args)
    region = _parse_region(args.region)
    zeros = find_zeros(pot, region, tol=args.tol)
    _emit(json.dumps(_zero_records(zeros), indent=2, sort_keys=True) + "\n",
          args.out)
    return EXIT_OK


def _curve_csv(columns: dict[str, np.ndarray]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    names = list(columns)
    writer.writerow(names)
    n = len(next(iter(columns.values())))
    for i in range(n):
        writer.writerow([_fmt(columns[name][i]) for name in names])
    return buf.getvalue()


def cmd_trace(args) -> int:
    pot = _build_potential(args)
    times = _parse_times(args.times)
    grid = Grid(half_width=args.grid_L, points=args.grid_N)
    numeric = flat_trace_difference(pot, grid, times, mode=args.mode)
    if pot.name == "poschl_teller":
        analytic = pt_closed_form(pot.params["ell"], times)
        abs_err = np.abs(numeric.values - analytic.values)
        rel_err = abs_err / np.maximum(np.abs(analytic.values), 0.05)
        csv_text = _curve_csv({"t": times, "numeric": numeric.values,
                               "analytic": analytic.values,
                               "abs_err": abs_err, "rel_err": rel_err})
    else:
        region = _parse_region(args.region) if args.region else \
            SearchRegion(-args.radius, args.radius, -args.radius, -0.01)
        zeros = find_zeros(pot, region, tol=args.tol)
        rhs = poisson_rhs(PoissonConfig(
            truncation_radius=args.radius,
            resonances=[z for z in zeros if z.classification == "resonance"],
            A_plus=pot.tail_plus.decay_rate,
            A_minus=pot.tail_minus.decay_rate,
            times=times))
        csv_text = _curve_csv({"t": times, "numeric": numeric.values,
                               "poisson_rhs": rhs.values})
    _emit(csv_text, args.out)
    return EXIT_OK


def cmd_compare(args) -> int:
    def read_curve(path):
        with open(path, encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
        t = np.array([float(r["t"]) for r in rows])
        col = [c for c in rows[0] if c != "t"][0]
        return TraceCurve(times=t, values=np.array([float(r[col]) for r in rows]))

    a = read_curve(args.file_a)
    b = read_curve(args.file_b)
    report = compare_curves(a, b)
    _emit(json.dumps(report, sort_keys=True) + "\n", args.out)
    return EXIT_OK


def cmd_birman_krein(args) -> int:
    pot = _build_potential(args)
    bump = make_bump(args.bump_center, args.bump_width)
    grid = Grid(half_width=args.grid_L, points=args.grid_N)
    lhs = lhs_trace(bump, pot, grid)
    rhs = rhs_bk(bump, pot, m_R0=args.m_r0)
    rel = abs(lhs - rhs) / max(abs(lhs), 1e-6)
    report = {
        "lhs": lhs,
        "rhs": rhs,
        "rel_error": rel,
        "settings": {
            "potential": args.potential,
            "ell": args.ell,
            "bump_center": args.bump_center,
            "bump_width": args.bump_width,
            "grid_L": args.grid_L,
            "grid_N": args.grid_N,
        },
    }
    _emit(json.dumps(report, sort_keys=True) + "\n", args.out)
    return EXIT_OK


def cmd_potential_info(args) -> int:
    pot = _build_potential(args)
    info = {"name": pot.name, "params": pot.params}
    for label, tail in (("plus", pot.tail_plus), ("minus", pot.tail_minus)):
        info[f"tail_{label}"] = {
            "decay_rate": tail.decay_rate,
            "match_point": tail.match_point,
            "coefficients": list(tail.coefficients),
            "fit_radius": tail.fit_radius,
            "residual": tail.residual,
        }
    if pot.name == "regge_wheeler":
        geom = make_sds_geometry(args.mass, args.lambda_cosmo)
        info["geometry"] = {
            "r_minus": geom.r_minus,
            "r_plus": geom.r_plus,
            "A_minus": geom.A_minus,
            "A_plus": geom.A_plus,
            "r0": geom.r0,
        }
    _emit(json.dumps(info, indent=2, sort_keys=True) + "\n", args.out)
    return EXIT_OK


def _add_potential_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--potential", required=True,
                   choices=["poschl_teller", "regge_wheeler"])
    p.add_argument("--ell", type=float, default=None)
    p.add_argument("--mass", type=float, default=None)
    p.add_argument("--lambda-cosmo", type=float, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["csv", "json"], default=None)
    p.add_argument("--config", default=None, help="flat key=value config file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavetrace",
        description="Scattering resonances and wave-propagator traces for 1D "
                    "Schrodinger operators with exponentially decaying potentials.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("resonances", help="locate zeros of the Wronskian")
    _add_potential_args(p)
    p.add_argument("--region", required=True,
                   help="re_min,re_max,im_min,im_max")
    p.add_argument("--tol", type=float, default=1e-8)

    p = sub.add_parser("trace", help="numeric flat trace vs analytic curve")
    _add_potential_args(p)
    p.add_argument("--times", default="0.5:0.1:3")
    p.add_argument("--grid-L", type=float, default=12.0)
    p.add_argument("--grid-N", type=int, default=1500)
    p.add_argument("--mode", choices=["spectral", "kernel_diagonal"],
                   default="spectral")
    p.add_argument("--region", default=None)
    p.add_argument("--radius", type=float, default=4.0)
    p.add_argument("--tol", type=float, default=1e-6)

    p = sub.add_parser("compare", help="compare two trace-curve CSV files")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--out", default=None)

    p = sub.add_parser("birman-krein", help="verify the Birman-Krein identity")
    _add_potential_args(p)
    p.add_argument("--bump-center", type=float, default=1.5)
    p.add_argument("--bump-width", type=float, default=0.5)
    p.add_argument("--grid-L", type=float, default=12.0)
    p.add_argument("--grid-N", type=int, default=1200)
    p.add_argument("--m-r0", type=int, default=0)

    p = sub.add_parser("potential-info", help="tails, match points, horizons")
    _add_potential_args(p)

    return parser


_COMMANDS = {
    "resonances": cmd_resonances,
    "trace": cmd_trace,
    "compare": cmd_compare,
    "birman-krein": cmd_birman_krein,
    "potential-info": cmd_potential_info,
}


def _apply_config_file(args) -> None:
    path = getattr(args, "config", None)
    if not path:
        return
    cfg = _load_config_file(path)
    for key, val in cfg.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise ConfigError(f"unknown config key {key!r}")
        current = getattr(args, attr)
        if isinstance(current, float):
            val = float(val)
        elif isinstance(current, int) and not isinstance(current, bool):
            val = int(val)
        setattr(args, attr, val)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config_file(args)
        return _COMMANDS[args.command](args)
    except PropagationWindowError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ConfigError, ValueError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ArithmeticError, RuntimeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
