"""Command-line front end.

    fwm <subcommand> [--preset NAME | --scenario PATH] [--out PATH]
        [--regime R] [--filter LO_NM,HI_NM] [--bin-width RADHZ]

Exit codes: 0 success, 2 validation error, 3 numerical failure.
Data files carry no timestamps; when ``--out`` is given a ``.log`` sidecar
records when and how they were produced.
"""
import argparse
import csv
import datetime
import io
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import oracle as fock
from .dispersion import BirefringentDispersion, find_zdw
from .exceptions import FWMError, NumericalError, ValidationError
from .pairgen import conversion_efficiency, spectrum
from .phasematch import birefringent_roots, numeric_root, required_pump_power, total_mismatch
from .pairgen import mismatch_context
from .scenario import (
    KEYS,
    PRESETS,
    ZDW_BRACKETS_NM,
    ScenarioError,
    describe_keys,
    load_preset,
    load_scenario,
    preset_text,
)
from .units import NM, omega_to_wavelength, wavelength_to_omega

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 2, 3

SWEEP_ALIASES = {
    "p1_avg": "pump.p1_avg_w",
    "length": "fiber.length_m",
    "gamma": "fiber.gamma",
    "alpha": "fiber.alpha_per_m",
    "delta_n": "fiber.delta_n",
    "pulse_duration": "pump.pulse_duration_ps",
    "f_rep": "pump.f_rep_hz",
    "beta2": "dispersion.beta2_ps2_per_m",
    "beta4": "dispersion.beta4_ps4_per_m",
}

EFFICIENCY_COLUMNS = [
    "label", "regime", "p1_peak_w", "bandwidth_rad_per_s", "eta", "eta_corrected",
    "error_bound", "pairs_per_pulse", "pairs_per_second", "warnings",
]


def _num(x):
    return repr(float(x))


def _csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _emit(args, text, summary):
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
        stamp = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
        with open(args.out + ".log", "w") as fh:
            fh.write(f"{stamp} fwm {' '.join(args.argv)}\n{summary}\n")
    else:
        sys.stdout.write(text)
    print(summary, file=sys.stderr if not args.out else sys.stdout)


def _scenario(args):
    if args.preset and args.scenario:
        raise ScenarioError("give either --preset or --scenario, not both")
    if args.preset:
        sc = load_preset(args.preset)
    elif args.scenario:
        sc = load_scenario(args.scenario)
    else:
        raise ScenarioError("a --preset or --scenario is required")
    if args.regime:
        sc = sc.with_value("pump.regime", args.regime)
    if args.filter:
        try:
            lo, hi = (float(v) for v in args.filter.split(","))
        except ValueError:
            raise ScenarioError(f"--filter expects LO_NM,HI_NM, got {args.filter!r}") from None
        sc = sc.with_value("grid.filter_lo_nm", lo).with_value("grid.filter_hi_nm", hi)
    if args.bin_width is not None:
        sc = sc.with_value("grid.bin_width_rad_per_s", args.bin_width)
    return sc


def _efficiency_row(sc):
    r = conversion_efficiency(sc.fiber, sc.pump, sc.grid)
    row = [
        sc.label, r.regime, _num(r.p1_peak), _num(r.bandwidth), _num(r.eta),
        _num(r.eta_corrected), _num(r.error_bound), _num(r.pairs_per_pulse),
        _num(r.pairs_per_second), "; ".join(r.warnings),
    ]
    return r, row


def cmd_efficiency(args):
    sc = _scenario(args)
    r, row = _efficiency_row(sc)
    summary = (
        f"{sc.label}: eta={r.eta:.3g} (corrected {r.eta_corrected:.3g}), "
        f"pairs/s={r.pairs_per_second:.3g}, dw_s={r.bandwidth:.3g} rad/s"
    )
    if r.warnings:
        summary += f" [{len(r.warnings)} warning(s)]"
    _emit(args, _csv_text(EFFICIENCY_COLUMNS, [row]), summary)


def cmd_spectrum(args):
    sc = _scenario(args)
    spec = spectrum(sc.fiber, sc.pump, sc.grid)
    peak = int(np.argmax(spec.density))
    summary = (
        f"{sc.label}: {spec.omega.size} bins, peak {spec.density[peak]:.3g} "
        f"photons/(rad/s) at {spec.wavelength[peak] / NM:.2f} nm"
    )
    _emit(args, spec.to_csv(), summary)


def cmd_phasematch(args):
    sc = _scenario(args)
    fiber, pump = sc.fiber, sc.pump
    ctx = mismatch_context(fiber, pump)
    rows = [
        ["center_nm", _num(omega_to_wavelength(ctx.omega_0) / NM), "nm"],
        ["pump_offset", _num(ctx.delta_omega), "rad/s"],
        ["K_at_center", _num(total_mismatch(ctx, 0.0)), "1/m"],
    ]
    try:
        rows.append(["required_pump_power", _num(required_pump_power(ctx)), "W"])
    except NumericalError:
        rows.append(["required_pump_power", "nan", "W"])
    lw = fiber.walkoff_length(pump.omega_p1, pump.omega_p2, pump.pulse_duration)
    rows.append(["walkoff_length", _num(lw), "m"])

    def add_roots(method, offsets):
        for o in offsets:
            if o > 0:
                rows.append([f"{method}_signal_nm", _num(omega_to_wavelength(ctx.omega_0 + o) / NM), "nm"])
                rows.append([f"{method}_idler_nm", _num(omega_to_wavelength(ctx.omega_0 - o) / NM), "nm"])

    if isinstance(fiber.dispersion, BirefringentDispersion):
        add_roots("birefringent", birefringent_roots(ctx))
    try:
        add_roots("numeric", [numeric_root(ctx)])
    except NumericalError:
        pass
    if args.preset in ZDW_BRACKETS_NM:
        lo, hi = ZDW_BRACKETS_NM[args.preset]
        w = find_zdw(fiber.dispersion, (wavelength_to_omega(hi * NM), wavelength_to_omega(lo * NM)))
        rows.append(["zdw_nm", _num(omega_to_wavelength(w) / NM), "nm"])
    text = _csv_text(["quantity", "value", "unit"], rows)
    roots = [r for r in rows if r[0].endswith(("_signal_nm", "_idler_nm"))]
    found = ", ".join(f"{float(r[1]):.1f}" for r in roots) or "none"
    summary = f"{sc.label}: phasematched wavelengths (nm) {found}; walk-off {lw:.3g} m"
    _emit(args, text, summary)


def cmd_sweep(args):
    sc = _scenario(args)
    key = SWEEP_ALIASES.get(args.param, args.param)
    if key not in KEYS or KEYS[key][0] is not float:
        raise ScenarioError(f"cannot sweep {args.param!r}; use one of {sorted(SWEEP_ALIASES)} or a numeric key")
    if args.steps < 1:
        raise ScenarioError("--steps must be >= 1")
    values = np.linspace(args.start, args.stop, args.steps)

    def point(v):
        _, row = _efficiency_row(sc.with_value(key, float(v)))
        return [_num(v)] + row

    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        rows = list(pool.map(point, values))  # map keeps parameter order
    text = _csv_text([args.param] + EFFICIENCY_COLUMNS, rows)
    summary = f"{sc.label}: swept {key} over {args.steps} points"
    _emit(args, text, summary)


def cmd_oracle(args):
    cfg = fock.spanning_config(args.modes, args.eta, args.lobes, args.length)
    state = fock.evolve(cfg)
    probs, total = fock.pair_probability_spectrum(state)
    first = cfg.first_order()
    dev = float(np.max(np.abs(probs / first - 1.0)))
    drift = abs(state.norm - 1.0)
    summary = (
        f"oracle: M={cfg.mode_count} eta={cfg.eta:.3g} exact={total:.6g} "
        f"max relative deviation {dev:.3g}, unitarity drift {drift:.2g}"
    )
    _emit(args, fock.to_csv(cfg, state), summary)


def cmd_preset(args):
    if args.name is None:
        text = "".join(f"{name}\n" for name in PRESETS)
        summary = f"{len(PRESETS)} presets"
    else:
        text = preset_text(args.name) + "\n# keys and units\n" + "".join(
            f"# {line}\n" for line in describe_keys().splitlines()
        )
        summary = f"preset {args.name}"
    _emit(args, text, summary)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--preset", choices=sorted(PRESETS))
    common.add_argument("--scenario", metavar="PATH")
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--regime")
    common.add_argument("--filter", metavar="LO_NM,HI_NM")
    common.add_argument("--bin-width", type=float, metavar="RADHZ")

    parser = argparse.ArgumentParser(prog="fwm", description="Single-photon FWM pair-source calculator")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("spectrum", parents=[common], help="per-bin pair spectral density CSV").set_defaults(func=cmd_spectrum)
    sub.add_parser("phasematch", parents=[common], help="phasematched wavelengths and powers").set_defaults(func=cmd_phasematch)
    sub.add_parser("efficiency", parents=[common], help="conversion efficiency and pair rates").set_defaults(func=cmd_efficiency)

    p = sub.add_parser("sweep", parents=[common], help="efficiency versus one scenario parameter")
    p.add_argument("--param", required=True)
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("oracle", parents=[common], help="exact single-photon evolution vs first order")
    p.add_argument("--modes", type=int, default=32)
    p.add_argument("--eta", type=float, default=1e-4)
    p.add_argument("--lobes", type=float, default=4.0)
    p.add_argument("--length", type=float, default=1.0)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("preset", parents=[common], help="list presets or show one")
    p.add_argument("action", choices=["list", "show"])
    p.add_argument("name", nargs="?")
    p.set_defaults(func=cmd_preset)
    return parser


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(argv)
    args.argv = argv
    if args.command == "preset":
        if args.action == "list":
            args.name = None
        elif args.name is None:
            args.name = args.preset
    try:
        args.func(args)
    except ValidationError as exc:
        print(f"fwm: validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as exc:
        print(f"fwm: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except FWMError as exc:
        print(f"fwm: error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
