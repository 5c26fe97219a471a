"""Command-line interface.

Subcommands: coeffs, dispersion, run-fvm, run-homog, compare.  A scenario
is selected with --scenario (preset) and/or --config (flat key=value file,
see README); solver knobs come from flags, falling back to the config and
then to the documented defaults.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import dispersion as disp
from . import fvm, spectral
from .harness import (
    Scenario,
    build_scenario,
    compare,
    emit_csv,
    emit_report_csv,
    load_config,
)
from .homogenize import (
    ALPHA_NAMES,
    BETA_NAMES,
    C_NAMES,
    bracket_coefficients,
    homog_coefficients,
)

DEFAULT_CELLS_PER_PERIOD = 32
DEFAULT_N_MODES = 4096
DEFAULT_CFL_FVM = 0.45
DEFAULT_CFL_SPEC = 0.5
DEFAULT_BC = "outflow"


def _add_scenario_args(p):
    p.add_argument("--scenario", help="named preset (scenario_a, scenario_b, uniform)")
    p.add_argument("--config", help="flat key=value config file")


def _add_run_args(p):
    p.add_argument("--t-end", type=float, help="final time (default: scenario)")
    p.add_argument("--snapshots", help="comma-separated snapshot times")
    p.add_argument("--cells-per-period", type=int, help="FVM resolution")
    p.add_argument("--n-modes", type=int, help="pseudospectral collocation points")
    p.add_argument("--cfl", type=float, help="CFL number (per solver default otherwise)")
    p.add_argument("--bc", choices=("outflow", "periodic"), help="FVM boundary condition")
    p.add_argument("--out-dir", default=".", help="output directory")


def _resolve(args):
    cfg = load_config(args.config) if args.config else {}
    overrides = dict(cfg)
    if getattr(args, "t_end", None) is not None:
        overrides["t_end"] = args.t_end
    if getattr(args, "snapshots", None):
        overrides["snapshot_times"] = tuple(float(v) for v in args.snapshots.split(","))
    scenario = build_scenario(args.scenario, overrides)
    params = {
        "cells_per_period": getattr(args, "cells_per_period", None)
                            or cfg.get("cells_per_period", DEFAULT_CELLS_PER_PERIOD),
        "n_modes": getattr(args, "n_modes", None) or cfg.get("n_modes", DEFAULT_N_MODES),
        "cfl_fvm": getattr(args, "cfl", None) or cfg.get("cfl", DEFAULT_CFL_FVM),
        "cfl_spec": getattr(args, "cfl", None) or cfg.get("cfl_spec", DEFAULT_CFL_SPEC),
        "bc": getattr(args, "bc", None) or cfg.get("bc", DEFAULT_BC),
    }
    return scenario, params


def _coeff_rows(scenario: Scenario):
    C = bracket_coefficients(scenario.profile, scenario.rho_background)
    H = homog_coefficients(C, scenario.gas, scenario.rho_background,
                           delta=scenario.profile.period)
    rows = [("mean_a", C.mean_a), ("mean_ainv", C.mean_ainv),
            ("mean_ainv2", C.mean_ainv2), ("mean_ainv3", C.mean_ainv3)]
    rows += [(n, getattr(C, n)) for n in C_NAMES]
    rows += [(n, getattr(H, n)) for n in ALPHA_NAMES + BETA_NAMES]
    rows += [("sound_speed", H.sound_speed()),
             ("sound_speed_leading", H.leading_sound_speed())]
    return rows, H


def cmd_coeffs(args) -> int:
    scenario, _ = _resolve(args)
    rows, _ = _coeff_rows(scenario)
    width = max(len(n) for n, _ in rows)
    print(f"# scenario={scenario.name} rho0={scenario.rho_background:g} "
          f"delta={scenario.profile.period:g}")
    for name, value in rows:
        print(f"{name:<{width}}  {value: .12e}")
    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)
        path = os.path.join(args.out_dir, f"{scenario.name}_coeffs.csv")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("name,value\n")
            for name, value in rows:
                fh.write(f"{name},{format(value, '.17g')}\n")
        print(f"wrote {path}")
    return 0


def cmd_dispersion(args) -> int:
    scenario, _ = _resolve(args)
    _, H = _coeff_rows(scenario)
    rho0 = scenario.rho_background
    k = np.linspace(0.0, args.k_max, args.n_samples)
    w_xxx = disp.omega_xxx(k, H, rho0)
    w_xxt = disp.omega_xxt(k, H, rho0)
    os.makedirs(args.out_dir, exist_ok=True)
    path = os.path.join(args.out_dir, f"{scenario.name}_dispersion.csv")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("k,re_omega_plus,im_omega_plus,form\n")
        for form, w in (("xxx", w_xxx), ("xxt", w_xxt)):
            for ki, wi in zip(k, w):
                fh.write(f"{ki:.17g},{wi.real:.17g},{wi.imag:.17g},{form}\n")
    report = disp.stability_scan(H, rho0, args.k_max, args.n_samples)
    kstar = "none" if report.k_star_xxx is None else f"{report.k_star_xxx:.6g}"
    print(f"k->0 phase speed: {H.sound_speed():.12g} "
          f"(leading-order {H.leading_sound_speed():.12g}); "
          f"xxx instability threshold k* = {kstar}; "
          f"max|Im omega|: xxx {report.max_im_xxx:.3e}, xxt {report.max_im_xxt:.3e}")
    print(f"wrote {path}")
    return 0


def cmd_run_fvm(args) -> int:
    scenario, params = _resolve(args)
    series = fvm.run(scenario, cells_per_period=params["cells_per_period"],
                     cfl=params["cfl_fvm"], bc=params["bc"])
    written = emit_csv(series, args.out_dir)
    print(f"fvm backend: {fvm.backend_name()}")
    for path in written:
        print(f"wrote {path}")
    return 0


def cmd_run_homog(args) -> int:
    scenario, params = _resolve(args)
    series = spectral.run(scenario, n_modes=params["n_modes"], cfl=params["cfl_spec"])
    written = emit_csv(series, args.out_dir)
    for path in written:
        print(f"wrote {path}")
    return 0


def cmd_compare(args) -> int:
    scenario, params = _resolve(args)
    series_f = fvm.run(scenario, cells_per_period=params["cells_per_period"],
                       cfl=params["cfl_fvm"], bc=params["bc"])
    series_h = spectral.run(scenario, n_modes=params["n_modes"], cfl=params["cfl_spec"])
    report = compare(series_f, series_h, scenario, bc=params["bc"])
    os.makedirs(args.out_dir, exist_ok=True)
    emit_csv(series_f, args.out_dir)
    emit_csv(series_h, args.out_dir)
    path = emit_report_csv(report, os.path.join(args.out_dir,
                                                f"{scenario.name}_comparison.csv"))
    for t, e, pf, ph in zip(report.times, report.rel_l2_rho,
                            report.peaks_fvm, report.peaks_homog):
        print(f"t={t:<8g} rel_L2_rho={e:.4e} peaks fvm/homog: {pf}/{ph}")
    print(f"wrote {path}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="pipewave",
        description="Gas pulses in a periodically varying pipe: reference "
                    "finite-volume solver vs the effective dispersive model.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", help="print the coefficient tables")
    _add_scenario_args(p)
    p.add_argument("--out-dir", default="", help="also write name,value CSV here")
    p.set_defaults(fn=cmd_coeffs)

    p = sub.add_parser("dispersion", help="tabulate both dispersion relations")
    _add_scenario_args(p)
    p.add_argument("--k-max", type=float, default=50.0)
    p.add_argument("--n-samples", type=int, default=2048)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(fn=cmd_dispersion)

    p = sub.add_parser("run-fvm", help="run the finite-volume solver")
    _add_scenario_args(p)
    _add_run_args(p)
    p.set_defaults(fn=cmd_run_fvm)

    p = sub.add_parser("run-homog", help="run the effective-model solver")
    _add_scenario_args(p)
    _add_run_args(p)
    p.set_defaults(fn=cmd_run_homog)

    p = sub.add_parser("compare", help="run both solvers and compare")
    _add_scenario_args(p)
    _add_run_args(p)
    p.set_defaults(fn=cmd_compare)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
