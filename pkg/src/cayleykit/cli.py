"""Command line front end.

Subcommands
    verify    run verification suites, print one line per check
    spectrum  tabulate the bottom of the Dirichlet spectrum over (R, N)
    pinch     gradient search for extreme sectional values
    report    everything above plus artifacts in one output directory

Exit status: 0 all checks passed, 1 at least one check failed,
2 usage error (bad flags, unreadable config or table file).

Reports are deterministic for a fixed seed: rerunning with the same
flags reproduces ``report.json`` byte for byte except for the isolated
``timing`` entry.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, curvature, geodesy, suites


def load_config(path: str) -> dict[str, str]:
    """Flat ``key = value`` pairs; blank lines and # comments ignored."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, val = line.partition("=")
        values[key.strip().replace("-", "_")] = val.strip()
    return values


def _int_tuple(text) -> tuple[int, ...]:
    return tuple(int(x) for x in str(text).replace(",", " ").split())


def _float_tuple(text) -> tuple[float, ...]:
    return tuple(float(x) for x in str(text).replace(",", " ").split())


_FIELD_CASTS = {
    "seed": int,
    "trials": int,
    "radii": _float_tuple,
    "grids": _int_tuple,
    "out": str,
    "parallel": lambda v: str(v).lower() in ("1", "true", "yes", "on"),
    "fmt": str,
    "table_path": str,
    "starts": int,
    "steps": int,
}

# command line spelling -> RunConfig field
_FLAG_FIELDS = {
    "seed": "seed",
    "trials": "trials",
    "radius": "radii",
    "grid": "grids",
    "out": "out",
    "parallel": "parallel",
    "format": "fmt",
    "mul_table": "table_path",
    "starts": "starts",
    "steps": "steps",
}


def build_config(args: argparse.Namespace) -> suites.RunConfig:
    """Defaults, overridden by --config file entries, overridden by flags."""
    cfg = suites.RunConfig()
    if getattr(args, "config", None):
        for key, raw in load_config(args.config).items():
            field = _FLAG_FIELDS.get(key, key)
            if field not in _FIELD_CASTS:
                raise ValueError(f"unknown config key {key!r}")
            setattr(cfg, field, _FIELD_CASTS[field](raw))
    for flag, field in _FLAG_FIELDS.items():
        value = getattr(args, flag, None)
        if value is not None and value is not False:
            setattr(cfg, field, _FIELD_CASTS[field](value) if isinstance(value, str) else value)
    cfg.validate()
    return cfg


def config_echo(cfg: suites.RunConfig) -> dict:
    return {
        "seed": cfg.seed,
        "trials": cfg.trials,
        "radii": list(cfg.radii),
        "grids": list(cfg.grids),
        "parallel": cfg.parallel,
        "table": cfg.table_path or "builtin",
        "starts": cfg.starts,
        "steps": cfg.steps,
    }


def build_report(results, cfg: suites.RunConfig, timings: dict) -> dict:
    failed = [c.check for r in results for c in r.checks if not c.passed]
    return {
        "schema": 1,
        "generator": {"package": "cayleykit", "version": __version__},
        "config": config_echo(cfg),
        "suites": [r.as_dict() for r in results],
        "summary": {
            "suites": len(results),
            "checks": sum(len(r.checks) for r in results),
            "failed": failed,
        },
        "passed": not failed,
        # the only nondeterministic entry; everything else is reproducible
        "timing": {
            "generated_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
            "wall_time_s": {k: round(v, 3) for k, v in timings.items()},
        },
    }


def print_results(results) -> None:
    for res in results:
        for c in res.checks:
            mark = "ok  " if c.passed else "FAIL"
            line = f"{mark} {c.check:42s} residual {c.residual:.3e}  tol {c.tolerance:.0e}"
            if c.note:
                line += f"  ({c.note})"
            print(line)
    total = sum(len(r.checks) for r in results)
    bad = [c.check for r in results for c in r.checks if not c.passed]
    if bad:
        print(f"{total - len(bad)}/{total} checks passed; failed: {', '.join(bad)}")
    else:
        print(f"{total}/{total} checks passed")


def write_report(report: dict, out: Path, fmt: str) -> Path:
    out.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        path = out / "report.csv"
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["suite", "check", "residual", "tolerance", "passed"])
            for suite in report["suites"]:
                for c in suite["checks"]:
                    writer.writerow([suite["suite"], c["check"], repr(c["residual"]),
                                     repr(c["tolerance"]), c["passed"]])
        return path
    path = out / "report.json"
    path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    return path


# ---------------------------------------------------------------------------
# artifacts


_PALETTE = ("#1f6fb2", "#c0392b", "#1e8449", "#8e44ad", "#b7950b", "#34495e")


def svg_line_chart(path: Path, series, title: str, x_label: str, y_label: str,
                   hline: float | None = None) -> None:
    """Hand-rolled 800 x 600 line chart; ``series`` is (label, xs, ys) triples."""
    width, height = 800, 600
    left, right, top, bottom = 80, 24, 48, 56
    xs_all = [x for _, xs, _ in series for x in xs]
    ys_all = [y for _, _, ys in series for y in ys]
    if hline is not None:
        ys_all = ys_all + [hline]
    x0, x1 = min(xs_all), max(xs_all)
    y0, y1 = min(ys_all), max(ys_all)
    if x1 == x0:
        x1 = x0 + 1.0
    pad = 0.06 * (y1 - y0) or 1.0
    y0, y1 = y0 - pad, y1 + pad

    def px(x):
        return left + (x - x0) / (x1 - x0) * (width - left - right)

    def py(y):
        return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.0f}" y="28" text-anchor="middle" '
        f'font-family="sans-serif" font-size="17">{title}</text>',
    ]
    axis = f'stroke="#333" stroke-width="1"'
    parts.append(f'<line x1="{left}" y1="{height - bottom}" x2="{width - right}" '
                 f'y2="{height - bottom}" {axis}/>')
    parts.append(f'<line x1="{left}" y1="{top}" x2="{left}" y2="{height - bottom}" {axis}/>')
    for i in range(6):
        xv = x0 + i * (x1 - x0) / 5
        yv = y0 + i * (y1 - y0) / 5
        parts.append(f'<line x1="{px(xv):.2f}" y1="{height - bottom}" x2="{px(xv):.2f}" '
                     f'y2="{height - bottom + 5}" {axis}/>')
        parts.append(f'<text x="{px(xv):.2f}" y="{height - bottom + 20}" text-anchor="middle" '
                     f'font-family="sans-serif" font-size="12">{xv:.4g}</text>')
        parts.append(f'<line x1="{left - 5}" y1="{py(yv):.2f}" x2="{left}" '
                     f'y2="{py(yv):.2f}" {axis}/>')
        parts.append(f'<text x="{left - 9}" y="{py(yv) + 4:.2f}" text-anchor="end" '
                     f'font-family="sans-serif" font-size="12">{yv:.5g}</text>')
    parts.append(f'<text x="{(left + width - right) / 2:.0f}" y="{height - 14}" '
                 f'text-anchor="middle" font-family="sans-serif" font-size="14">{x_label}</text>')
    parts.append(f'<text x="22" y="{(top + height - bottom) / 2:.0f}" text-anchor="middle" '
                 f'font-family="sans-serif" font-size="14" '
                 f'transform="rotate(-90 22 {(top + height - bottom) / 2:.0f})">{y_label}</text>')
    if hline is not None:
        parts.append(f'<line x1="{left}" y1="{py(hline):.2f}" x2="{width - right}" '
                     f'y2="{py(hline):.2f}" stroke="#888" stroke-width="1" '
                     f'stroke-dasharray="6 4"/>')
    for k, (label, xs, ys) in enumerate(series):
        color = _PALETTE[k % len(_PALETTE)]
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{width - right - 8}" y="{top + 18 + 18 * k}" text-anchor="end" '
                     f'font-family="sans-serif" font-size="13" fill="{color}">{label}</text>')
    parts.append("</svg>")
    path.write_text("\n".join(parts) + "\n")


def write_spectrum_artifacts(cfg: suites.RunConfig, out: Path) -> list:
    out.mkdir(parents=True, exist_ok=True)
    estimates = geodesy.spectrum_sweep(cfg.radii, cfg.grids)
    with open(out / "spectrum.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["radius", "cells", "value", "coarse_value", "richardson",
                         "error_estimate", "gap", "converged"])
        for est in estimates:
            writer.writerow([repr(est.radius), est.cells, repr(est.value),
                             repr(est.coarse_value), repr(est.richardson),
                             repr(est.error_estimate), repr(est.gap), est.converged])
    by_grid: dict[int, list] = {}
    for est in estimates:
        by_grid.setdefault(est.cells, []).append(est)
    series = [(f"N={cells}", [e.radius for e in row], [e.value for e in row])
              for cells, row in sorted(by_grid.items())]
    svg_line_chart(out / "spectrum.svg", series,
                   "Bottom of the Dirichlet spectrum vs domain radius",
                   "radius R", "lowest eigenvalue", hline=121.0)

    rs = np.linspace(0.2, max(cfg.radii), 240)
    svg_line_chart(out / "laplacian.svg",
                   [("14 coth 2r + 8 coth r", list(rs),
                     [geodesy.distance_laplacian(r) for r in rs])],
                   "Radial Laplacian of the distance function",
                   "r", "Laplacian", hline=22.0)
    with open(out / "laplacian.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["r", "laplacian"])
        for r in rs:
            writer.writerow([repr(float(r)), repr(geodesy.distance_laplacian(float(r)))])
    return estimates


def write_pinch_artifacts(cfg: suites.RunConfig, out: Path) -> curvature.PinchResult:
    out.mkdir(parents=True, exist_ok=True)
    op = curvature.assemble_operator()
    result = curvature.pinch_extremes(op, starts=cfg.starts, max_steps=cfg.steps, seed=cfg.seed)
    with open(out / "pinch.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["start", "direction", "sectional"])
        half = len(result.final_values) // 2
        for i, val in enumerate(result.final_values):
            writer.writerow([i % half, "min" if i < half else "max", repr(float(val))])
    return result


# ---------------------------------------------------------------------------


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--seed", type=int, help="master RNG seed (default 0)")
    sub.add_argument("--trials", type=int, help="sampling budget (default 100000)")
    sub.add_argument("--radius", help="comma separated domain radii")
    sub.add_argument("--grid", help="comma separated cell counts")
    sub.add_argument("--starts", type=int, help="search starts for the pinch run")
    sub.add_argument("--steps", type=int, help="iteration cap for the pinch run")
    sub.add_argument("--out", help="output directory for artifacts")
    sub.add_argument("--parallel", action="store_true", default=None,
                     help="run suites on a thread pool")
    sub.add_argument("--format", choices=("json", "csv"), help="report format (default json)")
    sub.add_argument("--config", help="key=value config file; flags take precedence")
    sub.add_argument("--mul-table", dest="mul_table",
                     help="CSV multiplication table to verify instead of the builtin")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cayleykit",
        description="Numerical verification toolkit for rank-one octonionic geometry.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    verify = subs.add_parser("verify", help="run verification suites")
    verify.add_argument("suites", nargs="*", default=["all"],
                        metavar="suite", help="all or any of: %s" % ", ".join(suites.SUITE_ORDER))
    _add_common(verify)

    spectrum = subs.add_parser("spectrum", help="Dirichlet spectrum sweep with artifacts")
    _add_common(spectrum)

    pinch = subs.add_parser("pinch", help="search for extreme sectional curvatures")
    _add_common(pinch)

    report = subs.add_parser("report", help="full verification with artifacts")
    report.add_argument("--export-operator", action="store_true",
                        help="also write the assembled 120 x 120 operator matrix")
    _add_common(report)
    return parser


def cmd_verify(args, cfg: suites.RunConfig) -> int:
    wanted = set(args.suites)
    if "all" in wanted or not wanted:
        names = list(suites.SUITE_ORDER)
    else:
        unknown = wanted - set(suites.SUITE_ORDER)
        if unknown:
            print(f"error: unknown suite: {', '.join(sorted(unknown))}", file=sys.stderr)
            return 2
        names = [n for n in suites.SUITE_ORDER if n in wanted]
    results, timings = suites.run_suites(names, cfg)
    print_results(results)
    if args.out is not None:
        path = write_report(build_report(results, cfg, timings), Path(cfg.out), cfg.fmt)
        print(f"report written to {path}")
    return 0 if all(r.passed for r in results) else 1


def cmd_spectrum(args, cfg: suites.RunConfig) -> int:
    out = Path(cfg.out)
    estimates = write_spectrum_artifacts(cfg, out)
    print(f"{'radius':>8} {'cells':>7} {'value':>14} {'extrapolated':>14} {'gap':>10}")
    for est in estimates:
        print(f"{est.radius:8.2f} {est.cells:7d} {est.value:14.8f} "
              f"{est.richardson:14.8f} {est.gap:+10.6f}")
    best = min(estimates, key=lambda e: abs(e.gap))
    print(f"closest approach to 121: {best.richardson:.8f} at R={best.radius:g}, N={best.cells}")
    print(f"artifacts in {out}: spectrum.csv spectrum.svg laplacian.csv laplacian.svg")
    return 0


def cmd_pinch(args, cfg: suites.RunConfig) -> int:
    out = Path(cfg.out)
    result = write_pinch_artifacts(cfg, out)
    print(f"sectional range found: [{result.minimum:.12f}, {result.maximum:.12f}]")
    print(f"model bounds are [-4, -1]; per-start values in {out / 'pinch.csv'}")
    return 0


def cmd_report(args, cfg: suites.RunConfig) -> int:
    out = Path(cfg.out)
    results, timings = suites.run_suites(list(suites.SUITE_ORDER), cfg)
    print_results(results)
    write_spectrum_artifacts(cfg, out)
    write_pinch_artifacts(cfg, out)
    if getattr(args, "export_operator", False):
        curvature.assemble_operator().export_csv(out / "operator.csv")
    path = write_report(build_report(results, cfg, timings), out, cfg.fmt)
    print(f"report written to {path}")
    return 0 if all(r.passed for r in results) else 1


_COMMANDS = {
    "verify": cmd_verify,
    "spectrum": cmd_spectrum,
    "pinch": cmd_pinch,
    "report": cmd_report,
}


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return _COMMANDS[args.command](args, cfg)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
