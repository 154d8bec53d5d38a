"""Command-line surface.

Units at this boundary follow lab conventions: rates are given in GHz
(numerically equal to 1/ns internally) and the transition/signal frequency
is the ordinary frequency in GHz, multiplied by 2*pi internally. All
subcommands are deterministic.

Exit codes: 0 success, 2 argument errors, 3 integration failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import analytic, meanfield, pulses, rate, sweep
from .core import DetectorParams, DriveSpec, omega_from_ghz


def _add_rate_args(p: argparse.ArgumentParser, with_res: bool = True) -> None:
    p.add_argument("--gamma-tl", type=float, default=1.0, help="coupling rate [GHz]")
    p.add_argument("--gamma-0", type=float, default=0.0, help="dark count rate [GHz]")
    p.add_argument("--gamma-1", type=float, default=1.0, help="measurement rate [GHz]")
    p.add_argument("--gamma-rel", type=float, default=0.0, help="relaxation rate [GHz]")
    if with_res:
        p.add_argument("--gamma-res", type=float, default=0.0, help="reset rate [GHz]")
    p.add_argument("--freq", type=float, default=5.0, help="omega_0 / 2 pi [GHz]")


def _params(args, gamma_res=None) -> DetectorParams:
    return DetectorParams(
        gamma_tl=args.gamma_tl,
        gamma_0=args.gamma_0,
        gamma_1=args.gamma_1,
        gamma_rel=args.gamma_rel,
        gamma_res=getattr(args, "gamma_res", 0.0) if gamma_res is None else gamma_res,
        omega_0=omega_from_ghz(args.freq),
    )


def _drive(args, omega_s: float) -> DriveSpec:
    kind = args.drive
    if kind == "continuous":
        return DriveSpec.continuous(args.alpha_sq, omega_s)
    if kind == "exp":
        if args.kappa is None:
            raise SystemExit("--kappa required for exponential drive")
        return DriveSpec.exponential(args.alpha_sq, omega_s, args.kappa)
    if kind == "gauss":
        if args.sigma is None:
            raise SystemExit("--sigma required for gaussian drive")
        return DriveSpec.gaussian(
            args.alpha_sq, omega_s, args.sigma, args.t0,
            paper_literal=args.paper_literal,
        )
    if kind == "tab":
        if args.pulse_file is None:
            raise SystemExit("--pulse-file required for tabulated drive")
        env = pulses.load_tabulated_csv(args.pulse_file)
        grid = np.linspace(env.t_start, env.t_end, 1024)
        return DriveSpec.tabulated(args.alpha_sq, omega_s, grid, env(grid))
    raise SystemExit(f"unknown drive kind {kind!r}")


def _emit(text: str, output) -> None:
    if output:
        with open(output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_simulate(args) -> int:
    params = _params(args, gamma_res=0.0)
    drive = _drive(args, params.omega_0)
    cfg = meanfield.IntegratorConfig(t_end=args.t_end, n_samples=args.samples)
    try:
        traj = meanfield.integrate(params, drive, cfg)
    except meanfield.IntegrationError as exc:
        print(f"integration failed: {exc}", file=sys.stderr)
        return 3
    if args.output:
        traj.to_csv(args.output)
    print(f"pm(t_end) = {traj.pm[-1]:.6f} at t_end = {traj.times[-1]:.6g} ns")
    return 0


def cmd_compare(args) -> int:
    params = _params(args, gamma_res=0.0)
    drive = DriveSpec.continuous(args.alpha_sq, params.omega_0)
    cfg = meanfield.IntegratorConfig(t_end=args.t_end, n_samples=args.samples)
    try:
        traj = meanfield.integrate(params, drive, cfg)
    except meanfield.IntegrationError as exc:
        print(f"integration failed: {exc}", file=sys.stderr)
        return 3
    _, pm_rate = rate.closed_form_p1_pm(params, args.alpha_sq, traj.times)
    gap = traj.pm - pm_rate
    lines = ["t,pm_meanfield,pm_rate"]
    for t, a, b in zip(traj.times, traj.pm, pm_rate):
        lines.append(f"{t:.9g},{a:.12g},{b:.12g}")
    if args.output:
        with open(args.output, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    else:
        print("\n".join(lines))
    print(
        f"max abs gap = {np.max(np.abs(gap)):.6g}, "
        f"mean abs gap = {np.mean(np.abs(gap)):.6g}",
        file=sys.stderr,
    )
    return 0


def cmd_efficiency(args) -> int:
    if args.ideal:
        p = _params(args, gamma_res=0.0)
        eta = 4.0 * p.gamma_tl * p.gamma_1 / (p.gamma_tl + p.gamma_1) ** 2
        _emit(f"{eta:.9f}", args.output)
        return 0
    params = _params(args)
    report = rate.build_report(params, n_in=args.n_in)
    _emit(report.to_json(), args.output)
    return 0


def cmd_nep(args) -> int:
    params = _params(args)
    if args.matched:
        from dataclasses import replace

        params = replace(params, gamma_tl=rate.matching_gamma_tl(params))
    value = rate.nep(params)
    _emit(json.dumps({"nep": value, "units": "W/sqrt(Hz)"}), args.output)
    return 0


def cmd_match(args) -> int:
    params = _params(args, gamma_res=0.0)
    _emit(f"{rate.matching_gamma_tl(params):.9g}", args.output)
    return 0


def cmd_analytic(args) -> int:
    params = _params(args, gamma_res=0.0)
    if args.mode == "poles":
        ps = analytic.continuous_pm_poles(params, args.alpha_sq)
        data = {
            "poles": [[s.real, s.imag] for s in ps.poles],
            "residues": [[r.real, r.imag] for r in ps.residues],
        }
        _emit(json.dumps(data, indent=2), args.output)
        return 0
    if args.kappa is None:
        raise SystemExit("--kappa required for exp-steady")
    value = analytic.exp_pulse_steady_state(params, args.alpha_sq, args.kappa, args.order)
    _emit(f"{value:.9g}", args.output)
    return 0


def cmd_optimize(args) -> int:
    params = _params(args, gamma_res=0.0)
    drive = DriveSpec.continuous(args.alpha_sq, params.omega_0)
    try:
        res = sweep.optimize_gamma_tl(drive, params, args.t_m)
    except meanfield.IntegrationError as exc:
        print(f"integration failed: {exc}", file=sys.stderr)
        return 3
    data = {
        "gamma_tl_max": res.gamma_tl,
        "ratio_to_gamma_1": res.gamma_tl / params.gamma_1,
        "pm": res.pm,
        "at_boundary": res.at_boundary,
    }
    _emit(json.dumps(data, indent=2), args.output)
    return 0


def cmd_sweep(args) -> int:
    with open(args.spec) as fh:
        raw = json.load(fh)
    known = {"axis1", "axis2", "objective", "params", "drive", "t_m", "n_in"}
    unknown = set(raw) - known
    if unknown:
        raise SystemExit(f"unknown sweep spec keys: {sorted(unknown)}")
    params = DetectorParams(
        gamma_tl=raw["params"].get("gamma_tl", 1.0),
        gamma_0=raw["params"].get("gamma_0", 0.0),
        gamma_1=raw["params"].get("gamma_1", 1.0),
        gamma_rel=raw["params"].get("gamma_rel", 0.0),
        gamma_res=raw["params"].get("gamma_res", 0.0),
        omega_0=omega_from_ghz(raw["params"].get("freq", 5.0)),
    )
    draw = raw.get("drive", {"kind": "continuous", "alpha_sq": 0.0})
    kind = draw.get("kind", "continuous")
    if kind == "continuous":
        drive = DriveSpec.continuous(draw.get("alpha_sq", 0.0), params.omega_0)
    elif kind == "exp":
        drive = DriveSpec.exponential(draw["alpha_sq"], params.omega_0, draw["kappa"])
    elif kind == "gauss":
        drive = DriveSpec.gaussian(
            draw["alpha_sq"], params.omega_0, draw["sigma"], draw.get("t0")
        )
    else:
        raise SystemExit(f"unknown drive kind {kind!r} in sweep spec")

    def axis(d):
        return sweep.SweepAxis(
            name=d["name"],
            min=d["min"],
            max=d["max"],
            points=d["points"],
            scale=d.get("scale", "log"),
        )

    spec = sweep.SweepSpec(
        axis1=axis(raw["axis1"]),
        axis2=axis(raw["axis2"]) if "axis2" in raw else None,
        params=params,
        drive=drive,
        objective=raw.get("objective", "pm_at_tm"),
        t_m=raw.get("t_m"),
        n_in=raw.get("n_in"),
    )
    result = sweep.run_sweep(spec, n_workers=args.workers)
    if args.format == "json":
        _emit(result.to_json(), args.output)
    else:
        if not args.output:
            raise SystemExit("csv sweep output requires --output")
        result.to_csv(args.output)
        print(f"wrote {args.output}")
    if result.errors:
        print(f"{len(result.errors)} cells failed", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jpmsim",
        description="Two-level microwave photon counter: simulation and design optimization",
    )
    parser.add_argument(
        "--config",
        default=None,
        help="JSON file of option defaults (dest names); flags override",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="integrate the mean-field dynamics")
    _add_rate_args(p, with_res=False)
    p.add_argument("--drive", choices=["continuous", "exp", "gauss", "tab"], required=True)
    p.add_argument("--alpha-sq", type=float, default=0.0)
    p.add_argument("--kappa", type=float, default=None, help="exp pulse rate [GHz]")
    p.add_argument("--sigma", type=float, default=None, help="gaussian width [GHz]")
    p.add_argument("--t0", type=float, default=None, help="gaussian center [ns]")
    p.add_argument(
        "--paper-literal",
        action="store_true",
        help="keep the unnormalized gaussian prefactor (comparison runs)",
    )
    p.add_argument("--pulse-file", default=None, help="two-column CSV (t, f)")
    p.add_argument("--t-end", type=float, default=None, help="[ns]")
    p.add_argument("--samples", type=int, default=400)
    p.add_argument("--output", default=None, help="trajectory CSV path")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="mean-field vs rate-equation closed form")
    _add_rate_args(p, with_res=False)
    p.add_argument("--alpha-sq", type=float, required=True)
    p.add_argument("--t-end", type=float, default=None)
    p.add_argument("--samples", type=int, default=400)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("efficiency", help="stationary detection efficiency report")
    _add_rate_args(p)
    p.add_argument("--ideal", action="store_true", help="gamma_0 = gamma_rel = 0 closed form")
    p.add_argument("--n-in", type=float, default=0.0, help="flux for count rates [1/ns]")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_efficiency)

    p = sub.add_parser("nep", help="noise-equivalent power")
    _add_rate_args(p)
    p.add_argument("--matched", action="store_true", help="set gamma_tl to the matching value")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_nep)

    p = sub.add_parser("match", help="general matching condition for gamma_tl")
    _add_rate_args(p, with_res=False)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("analytic", help="Laplace-domain oracles")
    _add_rate_args(p, with_res=False)
    p.add_argument("--mode", choices=["poles", "exp-steady"], required=True)
    p.add_argument("--alpha-sq", type=float, required=True)
    p.add_argument("--kappa", type=float, default=None)
    p.add_argument("--order", type=int, default=5)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_analytic)

    p = sub.add_parser("optimize", help="coupling rate maximizing pm(t_m)")
    _add_rate_args(p, with_res=False)
    p.add_argument("--alpha-sq", type=float, required=True)
    p.add_argument("--t-m", type=float, required=True, help="[ns]")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("sweep", help="run a declarative parameter sweep")
    p.add_argument("--spec", required=True, help="sweep spec JSON file")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_sweep)

    return parser


def _apply_config(parser: argparse.ArgumentParser, argv) -> None:
    if "--config" not in argv:
        return
    path = argv[argv.index("--config") + 1]
    with open(path) as fh:
        cfg = json.load(fh)
    valid = set()
    for action in parser._actions:
        valid.add(action.dest)
        if isinstance(action, argparse._SubParsersAction):
            for sp in action.choices.values():
                valid.update(a.dest for a in sp._actions)
    unknown = set(cfg) - valid
    if unknown:
        raise SystemExit(f"unknown config keys: {sorted(unknown)}")
    parser.set_defaults(**cfg)
    if isinstance(parser._subparsers, argparse._ArgumentGroup):
        for action in parser._actions:
            if isinstance(action, argparse._SubParsersAction):
                for sp in action.choices.values():
                    sp.set_defaults(
                        **{k: v for k, v in cfg.items() if k in {a.dest for a in sp._actions}}
                    )


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    try:
        _apply_config(parser, list(argv))
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except meanfield.IntegrationError as exc:
        print(f"integration failed: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
