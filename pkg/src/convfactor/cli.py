"""Batch command-line surface: scenario runs, CSV/SVG reports, manifests.

Exit codes: 0 success, 1 gate failure, 2 configuration error, 3 numerical
failure (the failing stage is named on stderr).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .approx import approximation_nodes, dn_sequence, rho_from_dn, walsh_interpolant
from .errors import ConfigError, ConvfactorError
from .experiments import (
    gate_theorem,
    prop15_scenario,
    prop16_limit,
    scenario_by_name,
    scenario_library,
)
from .fekete import capacity_from_diameters, decay_check, leja_points
from .geometry import lower_bound, offset_curve_family
from .potential import (
    capacity,
    fit_greens,
    level_curve_family,
    rho_critical,
    theta_descent,
    theta_for_family,
)
from .serialize import (
    content_hash,
    greens_to_record,
    load_scenario_file,
    scenario_to_record,
)
from .svgplot import curve_overlay, line_plot

NUM_FMT = "%.12g"


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(
                ",".join(
                    cell if isinstance(cell, str)
                    else ("" if cell is None else NUM_FMT % cell)
                    for cell in row
                )
                + "\n"
            )


def write_manifest(outdir: Path, command: str, params: dict, scenario=None):
    manifest = {
        "tool": "convfactor",
        "version": __version__,
        "command": command,
        "parameters": params,
    }
    if scenario is not None:
        rec = scenario_to_record(scenario)
        manifest["scenario"] = rec["name"]
        manifest["input_hash"] = content_hash(rec)
    with open(outdir / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _resolve_scenario(args):
    if getattr(args, "scenario_file", None):
        s = load_scenario_file(args.scenario_file)
    elif getattr(args, "scenario", None):
        try:
            s = scenario_by_name(args.scenario)
        except KeyError as err:
            raise ConfigError(str(err)) from err
    else:
        raise ConfigError("provide --scenario or --scenario-file")
    overrides = {}
    if args.degree_max is not None:
        overrides["degree_max"] = args.degree_max
    if args.margin is not None:
        overrides["curve_margin"] = args.margin
    if args.density is not None:
        overrides["density"] = args.density
    if args.window is not None:
        overrides["window"] = tuple(args.window)
    if args.seed is not None:
        overrides["seed"] = args.seed
    if overrides:
        from dataclasses import replace

        s = replace(s, **overrides)
    return s


def _outdir(args) -> Path:
    root = args.out or os.environ.get("CONVFACTOR_OUT", "convfactor_out")
    out = Path(root)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_bound(args):
    s = _resolve_scenario(args)
    out = _outdir(args)
    res = lower_bound(s.set)
    write_csv(out / "bound.csv",
              ["scenario", "lower_bound", "component", "argmax_re", "argmax_im"],
              [(s.name, res.value, res.component,
                res.argmax.real, res.argmax.imag)])
    write_manifest(out, "bound", vars_of(args), s)
    return 0


def cmd_green(args):
    s = _resolve_scenario(args)
    out = _outdir(args)
    cache = out / f"greens_{content_hash(scenario_to_record(s))[:16]}.json"
    if cache.exists():
        with open(cache) as fh:
            record = json.load(fh)
    else:
        model = fit_greens(s.set, s.greens_params)
        record = greens_to_record(model)
        with open(cache, "w") as fh:
            json.dump(record, fh, sort_keys=True)
    from .serialize import record_to_greens

    model = record_to_greens(record)
    write_csv(out / "green.csv",
              ["scenario", "capacity", "robin_constant", "collocation_residual"],
              [(s.name, capacity(model), model.robin_constant,
                model.collocation_residual)])
    # level-curve atlas at a few sub-critical levels
    try:
        crit = rho_critical(model, s.set)
        levels = [crit.g_c * f for f in (0.25, 0.5, 0.75, 0.9)]
        groups = {}
        for lev in levels:
            fam = level_curve_family(model, s.set, lev)
            groups[f"g={lev:.3f}"] = [c.nodes for c in fam.curves]
        curve_overlay(out / "level_curves.svg", groups,
                      f"{s.name}: Green's level curves")
    except ConvfactorError:
        pass
    write_manifest(out, "green", vars_of(args), s)
    return 0


def cmd_rho(args):
    s = _resolve_scenario(args)
    out = _outdir(args)
    nodes = approximation_nodes(s.set, s.density)
    dns = dn_sequence(s.F, s.set, s.degree_max, nodes=nodes)
    est = rho_from_dn(dns, s.window)
    write_csv(out / "dn.csv", ["n", "d_n", "d_n_root"],
              [(str(n), d, d ** (1 / n) if n else None)
               for n, d in enumerate(dns)])
    write_csv(out / "rho.csv",
              ["scenario", "rho_minimax", "window_lo", "window_hi", "tail_max_root"],
              [(s.name, est.value, est.window[0], est.window[1],
                est.tail_max_root)])
    ns = list(range(1, len(dns)))
    fit_line = [dns[s.window[0]] * est.value ** (n - s.window[0]) for n in ns]
    line_plot(out / "dn.svg",
              {"d_n": (ns, dns[1:]), "fitted slope": (ns, fit_line)},
              f"{s.name}: minimax errors", "degree n", "d_n", logy=True)
    write_manifest(out, "rho", vars_of(args), s)
    return 0


def cmd_fekete(args):
    s = _resolve_scenario(args)
    out = _outdir(args)
    n_max = min(s.degree_max + 24, 64)
    seq = capacity_from_diameters(s.set, n_max)
    write_csv(out / "diameters.csv", ["n", "delta_n"],
              list(zip(map(str, seq.ns), seq.diameters)))
    write_csv(out / "capacity_estimate.csv",
              ["scenario", "extrapolated", "uncertainty"],
              [(s.name, seq.extrapolated, seq.uncertainty)])
    cfg = leja_points(s.set, n_max)
    write_csv(out / "leja_points.csv", ["index", "re", "im"],
              [(str(i), z.real, z.imag) for i, z in enumerate(cfg.points)])
    write_manifest(out, "fekete", vars_of(args), s)
    return 0


def cmd_approx(args):
    s = _resolve_scenario(args)
    out = _outdir(args)
    fam = offset_curve_family(s.set, s.curve_margin)
    rows = []
    for m in range(2, s.degree_max + 1):
        res = walsh_interpolant(s.F, s.set, fam, m, check_contour=False)
        rows.append((str(m), res.measured_error, res.bound_rhs))
    write_csv(out / "walsh.csv", ["m", "measured_error", "bound"], rows)
    model = fit_greens(s.set, s.greens_params)
    thetas = theta_descent(model, s.set, steps=6)
    write_csv(out / "theta_descent.csv", ["step", "theta"],
              [(str(k + 1), t) for k, t in enumerate(thetas)])
    line_plot(out / "theta_descent.svg",
              {"theta": (list(range(1, len(thetas) + 1)), thetas)},
              f"{s.name}: theta descent", "step", "theta")
    write_manifest(out, "approx", vars_of(args), s)
    return 0


def cmd_prop15(args):
    out = _outdir(args)
    report = prop15_scenario(args.h0, args.delta0)
    rows = [(name, "pass" if ok else "FAIL", lhs, rhs)
            for name, ok, lhs, rhs in report.checks]
    write_csv(out / "prop15_checks.csv", ["check", "status", "lhs", "rhs"], rows)
    p = report.params
    write_csv(out / "prop15.csv",
              ["h0", "delta0", "ell0", "r0", "N0", "eps0", "n0",
               "final_value", "target", "status"],
              [(p.h0, p.delta0, p.ell0, p.r0, p.N0, p.eps0, p.n0,
                report.final_value, report.target,
                "pass" if report.passed else "FAIL")])
    write_manifest(out, "prop15", vars_of(args))
    return 0 if report.passed else 1


def cmd_prop16(args):
    out = _outdir(args)
    rows = prop16_limit(args.h0, args.steps)
    write_csv(out / "prop16.csv", ["k", "theta", "limit"],
              [(str(k), t, 1 / args.h0) for k, t in rows])
    line_plot(out / "prop16.svg",
              {"theta_k": ([k for k, _ in rows], [t for _, t in rows]),
               "1/h0": ([rows[0][0], rows[-1][0]], [1 / args.h0, 1 / args.h0])},
              f"disk+point limit, h0={args.h0:g}", "k", "theta")
    write_manifest(out, "prop16", vars_of(args))
    return 0


def _gate_one(name):
    return gate_theorem(scenario_by_name(name))


def cmd_gate(args):
    out = _outdir(args)
    if args.scenario in (None, "all") and not args.scenario_file:
        names = [s.name for s in scenario_library()]
        if args.jobs and args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                reports = list(pool.map(_gate_one, names))
        else:
            reports = [_gate_one(n) for n in names]
    else:
        reports = [gate_theorem(_resolve_scenario(args))]
    rows = [
        (r.name, r.lower_bound, r.rho_critical, r.rho_minimax, r.slack,
         "pass" if r.passed else "FAIL")
        for r in reports
    ]
    write_csv(out / "gate.csv",
              ["scenario", "lower_bound", "rho_critical", "rho_minimax",
               "slack", "status"], rows)
    write_manifest(out, "gate", vars_of(args))
    return 0 if all(r.passed for r in reports) else 1


def cmd_report(args):
    root = Path(args.directory)
    rows = []
    warnings = []
    for sub in sorted([root] + [d for d in root.iterdir() if d.is_dir()]
                      if root.exists() else []):
        manifest = sub / "manifest.json"
        gate = sub / "gate.csv"
        if not manifest.exists():
            if sub != root:
                warnings.append(f"warning: {sub} has no manifest")
            continue
        if gate.exists():
            with open(gate) as fh:
                lines = fh.read().strip().splitlines()[1:]
            for line in lines:
                rows.append(tuple(line.split(",")))
    out = root / "summary.csv"
    root.mkdir(parents=True, exist_ok=True)
    write_csv(out, ["scenario", "lower_bound", "rho_critical", "rho_minimax",
                    "slack", "status"], rows)
    for w in warnings:
        print(w, file=sys.stderr)
    if not rows:
        print("warning: no gate results found", file=sys.stderr)
    return 0


def vars_of(args) -> dict:
    skip = {"func", "out"}
    return {k: (list(v) if isinstance(v, tuple) else v)
            for k, v in vars(args).items()
            if k not in skip and not callable(v)}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="convfactor",
        description="Convergence-factor bounds and estimates for plane "
                    "compact sets",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def scenario_flags(p):
        p.add_argument("--scenario", help="built-in scenario name (or 'all' for gate)")
        p.add_argument("--scenario-file", help="path to a scenario JSON file")
        p.add_argument("--out", help="output directory (default $CONVFACTOR_OUT)")
        p.add_argument("--degree-max", type=int)
        p.add_argument("--margin", type=float)
        p.add_argument("--density", type=float)
        p.add_argument("--window", type=int, nargs=2, metavar=("LO", "HI"))
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--seed", type=int)

    for name, fn in [("bound", cmd_bound), ("green", cmd_green),
                     ("rho", cmd_rho), ("fekete", cmd_fekete),
                     ("approx", cmd_approx), ("gate", cmd_gate)]:
        p = sub.add_parser(name)
        scenario_flags(p)
        p.set_defaults(func=fn)

    p15 = sub.add_parser("prop15")
    p15.add_argument("--h0", type=float, required=True)
    p15.add_argument("--delta0", type=float, required=True)
    p15.add_argument("--out")
    p15.set_defaults(func=cmd_prop15)

    p16 = sub.add_parser("prop16")
    p16.add_argument("--h0", type=float, required=True)
    p16.add_argument("--steps", type=int, default=8)
    p16.add_argument("--out")
    p16.set_defaults(func=cmd_prop16)

    rep = sub.add_parser("report")
    rep.add_argument("directory")
    rep.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return 2
    except ConvfactorError as err:
        print(f"numerical failure in {args.command}: "
              f"{type(err).__name__}: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
