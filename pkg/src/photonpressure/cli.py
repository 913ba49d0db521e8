"""Command-line front end.

Commands
--------
params      derive circuit parameters from geometry
respond     cavity or low-frequency reflection trace
backaction  sideband-pump frequency shift and damping curves
nms         hybrid-mode branches versus coupling rate
psd         blue-pump output spectrum
fit         fit a trace file (resonance, lorentzian, flux arch, backaction)
synth       synthetic traces with background and seeded noise
sweep       2-D |S11| map in dB (outer parameter x probe frequency)

Parameters come from --preset, then --params FILE (flat JSON), then repeated
--set KEY=VALUE overrides, in increasing precedence.  Grids are given as
START:STOP:POINTS in Hz.  Exit codes: 0 success, 2 configuration error,
3 parse error, 4 domain error, 5 fit did not converge.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import circuit, dynamics, noise, squid
from .constants import PHI_0, hbar
from .errors import (ConfigError, ConvergenceError, DomainError,
                     PhotonPressureError, TraceFormatError)
from .fitting import fit_backaction, fit_flux_arch, fit_lorentzian, fit_resonance
from .lsq import FitResult
from .presets import preset as load_preset
from .synth import NoiseSpec, synth_psd, synth_s11
from .traces import (SpectrumTrace, read_complex_trace, read_params,
                     read_points, read_spectrum_trace, write_columns,
                     write_complex_trace, write_params, write_spectrum_trace)

TWO_PI = 2.0 * math.pi

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PARSE = 3
EXIT_DOMAIN = 4
EXIT_NOCONV = 5


# --- configuration plumbing -------------------------------------------------

def _parse_set(entry: str):
    key, sep, value = entry.partition("=")
    if not sep or not key:
        raise ConfigError(f"--set expects KEY=VALUE, got {entry!r}")
    try:
        return key.strip(), float(value)
    except ValueError:
        return key.strip(), value.strip()


def build_config(args) -> dict:
    cfg: dict = {}
    if getattr(args, "preset", None):
        try:
            cfg.update(load_preset(args.preset))
        except KeyError as exc:
            raise ConfigError(str(exc)) from None
    if getattr(args, "params", None):
        cfg.update(read_params(args.params))
    for entry in getattr(args, "set", None) or []:
        key, value = _parse_set(entry)
        cfg[key] = value
    return cfg


def need(cfg: dict, key: str, default=None) -> float:
    if key in cfg:
        return float(cfg[key])
    if default is not None:
        return float(default)
    raise ConfigError(f"missing parameter {key!r}")


def parse_grid(spec: str, default=None):
    if spec is None:
        if default is None:
            raise ConfigError("a --grid START:STOP:POINTS is required")
        return default
    parts = spec.split(":")
    if len(parts) != 3:
        raise ConfigError(f"--grid expects START:STOP:POINTS, got {spec!r}")
    try:
        start, stop, points = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"bad --grid value: {exc}") from None
    if points < 2:
        raise ConfigError("--grid needs at least 2 points")
    if not start < stop:
        raise ConfigError("--grid needs start < stop")
    return np.linspace(start, stop, points)


def resolve_detuning(cfg: dict) -> float:
    """Pump detuning from the cavity, possibly via a sideband offset."""
    if "drive.detuning" in cfg:
        return float(cfg["drive.detuning"])
    lf = need(cfg, "lf.omega0")
    offset = float(cfg.get("drive.sideband_offset", 0.0))
    sideband = str(cfg.get("drive.sideband", "red"))
    if sideband not in ("red", "blue"):
        raise ConfigError(f"drive.sideband must be red or blue, not {sideband!r}")
    sign = -1.0 if sideband == "red" else 1.0
    return sign * lf + offset


def detection_from(cfg: dict) -> noise.DetectionChain:
    return noise.DetectionChain(
        hemt_noise_temperature=need(cfg, "detection.hemt_noise_temperature", 5.5),
        hemt_added_photons=need(cfg, "detection.hemt_added_photons", 20.0),
        output_efficiency=need(cfg, "detection.output_efficiency", 0.7),
        total_gain=need(cfg, "detection.total_gain", 1e7),
        measurement_bandwidth=need(cfg, "detection.measurement_bandwidth", 200.0),
        input_attenuation_db=need(cfg, "detection.input_attenuation_db", 0.0),
    )


def noise_from(cfg: dict, seed: int) -> NoiseSpec | None:
    kind = str(cfg.get("noise.kind", "none"))
    sigma = float(cfg.get("noise.sigma", 0.0))
    if kind == "none" or sigma == 0.0:
        return None
    return NoiseSpec(kind, sigma, seed=seed)


def emit_report(report: dict, out_path):
    if out_path:
        write_params(out_path, report)
    else:
        json.dump(report, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")


# --- commands ---------------------------------------------------------------

def cmd_params(args) -> int:
    cfg = build_config(args)
    report: dict = {}

    if "geometry.plate_area" in cfg:
        spec = circuit.LumpedResonatorSpec(
            plate_area=need(cfg, "geometry.plate_area"),
            dielectric_thickness=need(cfg, "geometry.dielectric_thickness"),
            relative_permittivity=need(cfg, "geometry.relative_permittivity"),
            coupling_capacitance=need(cfg, "geometry.coupling_capacitance"),
            feedline_impedance=need(cfg, "geometry.feedline_impedance", 50.0),
        )
        lf = circuit.derive_resonator(spec, need(cfg, "geometry.lf_frequency"))
        report["lf.capacitance"] = lf.total_capacitance
        report["lf.inductance"] = lf.total_inductance
        report["lf.external_rate"] = lf.external_rate
        report["lf.zero_point_current"] = circuit.zero_point_current(
            lf.total_inductance, lf.resonance_frequency)

    if "idc.finger_count" in cfg:
        idc = circuit.IdcSpec(
            finger_count=int(need(cfg, "idc.finger_count")),
            finger_length=need(cfg, "idc.finger_length"),
            finger_width=need(cfg, "idc.finger_width"),
            gap_width=need(cfg, "idc.gap_width"),
            effective_permittivity=need(cfg, "idc.effective_permittivity"),
        )
        c_single = circuit.idc_capacitance(idc)
        c_total = c_single * int(need(cfg, "idc.parallel_count", 1))
        c_coupling = need(cfg, "idc.coupling_capacitance", 0.0)
        omega_hf = need(cfg, "idc.hf_frequency")
        l_hf = circuit.infer_inductance(omega_hf, c_total + c_coupling)
        report["hf.idc_capacitance"] = c_single
        report["hf.capacitance"] = c_total
        report["hf.inductance"] = l_hf
        report["hf.external_rate"] = circuit.external_linewidth(
            need(cfg, "geometry.feedline_impedance", 50.0), c_coupling, l_hf, c_total)

    if "loop.side" in cfg and "lf.zero_point_current" in report:
        i_zpf = report["lf.zero_point_current"]
        geom = circuit.coupling_geometry(
            need(cfg, "loop.side"), need(cfg, "loop.near_distance"),
            need(cfg, "loop.far_distance"), i_zpf)
        report["coupling.mutual_inductance"] = geom.mutual_inductance
        report["coupling.zero_point_flux"] = geom.zero_point_flux
        report["coupling.zero_point_flux_phi0"] = geom.zero_point_flux_phi0

    if "squid.dilution" in cfg:
        spec = squid.squid_spec_from_fit(
            sweet_spot_frequency=need(cfg, "squid.omega0"),
            dilution=need(cfg, "squid.dilution"),
            arch_widening=need(cfg, "squid.gamma_l"),
            total_inductance=need(cfg, "squid.total_inductance"),
            loop_inductance=need(cfg, "loop.inductance", 0.0),
        )
        report["squid.junction_inductance"] = spec.junction_inductance
        report["squid.critical_current"] = spec.critical_current
        if "loop.inductance" in cfg and "junction.critical_current" in cfg:
            report["squid.screening"] = (2.0 * need(cfg, "loop.inductance")
                                         * need(cfg, "junction.critical_current") / PHI_0)
        phi_zpf = cfg.get("coupling.zero_point_flux_phi0",
                          report.get("coupling.zero_point_flux_phi0"))
        if phi_zpf is not None:
            for phi_b in (0.0, 0.14, 0.5):
                g0 = squid.single_photon_coupling(phi_b, spec, float(phi_zpf))
                report[f"coupling.g0_at_{phi_b:g}"] = g0

    if not report:
        raise ConfigError("no geometry inputs found (geometry.*, idc.*, squid.*)")
    emit_report(report, args.out)
    return EXIT_OK


def cmd_respond(args) -> int:
    cfg = build_config(args)
    model = args.model
    if model == "lf_pumped" or (model == "bare" and "hf.omega0" not in cfg):
        center = need(cfg, "lf.omega0") / TWO_PI
        default = np.linspace(center - 2e5, center + 2e5, args.points)
    else:
        center = need(cfg, "hf.omega0") / TWO_PI
        default = np.linspace(center - 2e6, center + 2e6, args.points)
    grid = parse_grid(args.grid, default)
    if model != "bare":
        cfg.setdefault("drive.detuning", resolve_detuning(cfg))
    trace = synth_s11(model, cfg, grid, noise=noise_from(cfg, args.seed))
    if args.out:
        write_complex_trace(args.out, trace)
    else:
        for f, v in zip(trace.frequency_hz, trace.values):
            sys.stdout.write(f"{f:.17g} {v.real:.17g} {v.imag:.17g}\n")
    return EXIT_OK


def cmd_backaction(args) -> int:
    cfg = build_config(args)
    g = need(cfg, "drive.g")
    kappa_eff = need(cfg, "drive.kappa_eff")
    grid = parse_grid(args.grid, np.linspace(-3e5, 3e5, args.points))
    ba = dynamics.backaction_sideband(TWO_PI * grid, g, kappa_eff, args.sideband)
    columns = [grid, ba.frequency_shift / TWO_PI, ba.damping_shift / TWO_PI]
    labels = ["offset_hz", "frequency_shift_hz", "damping_shift_hz"]
    if args.out:
        write_columns(args.out, columns, labels, header={"sideband": args.sideband})
    else:
        for row in zip(*columns):
            sys.stdout.write(" ".join(format(v, ".17g") for v in row) + "\n")
    return EXIT_OK


def cmd_nms(args) -> int:
    cfg = build_config(args)
    kappa = need(cfg, "hf.kappa_i", 0.0) + need(cfg, "hf.kappa_e", 0.0)
    if kappa <= 0:
        kappa = need(cfg, "drive.kappa_eff")
    gamma0 = need(cfg, "lf.gamma0")
    lf = need(cfg, "lf.omega0")
    grid = parse_grid(args.grid, np.linspace(0.0, 6e5, args.points))
    rows = [dynamics.normal_modes(TWO_PI * g, kappa, gamma0, lf) for g in grid]
    columns = [grid,
               np.array([m.upper.real for m in rows]) / TWO_PI,
               np.array([m.lower.real for m in rows]) / TWO_PI,
               np.array([m.linewidth_upper for m in rows]) / TWO_PI,
               np.array([m.linewidth_lower for m in rows]) / TWO_PI]
    labels = ["g_hz", "upper_hz", "lower_hz", "linewidth_upper_hz", "linewidth_lower_hz"]
    if args.out:
        write_columns(args.out, columns, labels)
    else:
        for row in zip(*columns):
            sys.stdout.write(" ".join(format(v, ".17g") for v in row) + "\n")
    return EXIT_OK


def cmd_psd(args) -> int:
    cfg = build_config(args)
    cfg.setdefault("drive.detuning", resolve_detuning(cfg))
    if "thermal.n_lf" not in cfg:
        coop = need(cfg, "drive.cooperativity")
        if coop >= 1:
            raise DomainError("cooperativity >= 1 on the amplifying sideband")
        n_th = need(cfg, "thermal.n_th")
        cfg["thermal.n_lf"] = (n_th + 1.0) / (1.0 - coop) - 1.0
    detection = detection_from(cfg)
    peak = (need(cfg, "hf.omega0") + float(cfg["drive.detuning"])
            - need(cfg, "lf.omega0")) / TWO_PI
    grid = parse_grid(args.grid, peak + np.linspace(-1.5e5, 1.5e5, args.points))
    trace = synth_psd(cfg, grid, detection, noise=noise_from(cfg, args.seed))
    omega0 = need(cfg, "hf.omega0")
    if args.units == "photon":
        values = trace.values / (detection.total_gain * hbar * omega0)
        trace = SpectrumTrace(trace.frequency_hz, values, units="photon")
    elif args.units == "dbm":
        values = 10.0 * np.log10(trace.values / 1e-3)
        trace = SpectrumTrace(trace.frequency_hz, values, units="dBm/Hz")
    if args.out:
        write_spectrum_trace(args.out, trace)
    else:
        for f, v in zip(trace.frequency_hz, trace.values):
            sys.stdout.write(f"{f:.17g} {v:.17g}\n")
    return EXIT_OK


def _fit_report(fit: FitResult) -> dict:
    report = fit.as_dict()
    if fit.background is not None:
        bg = fit.background
        report.update({
            "background.amplitude_offset": bg.amplitude_offset,
            "background.amplitude_slope": bg.amplitude_slope,
            "background.phase_offset": bg.phase_offset,
            "background.phase_slope": bg.phase_slope,
            "background.circle_rotation": bg.circle_rotation,
            "background.reference_frequency": bg.reference_frequency,
        })
    return report


def cmd_fit(args) -> int:
    cfg = build_config(args)
    if args.model in ("bare", "pumped"):
        trace = read_complex_trace(args.infile)
        pumped = None
        if args.model == "pumped":
            pumped = {"kappa_e": need(cfg, "hf.kappa_e"),
                      "gamma0": need(cfg, "lf.gamma0"),
                      "detuning": resolve_detuning(cfg)}
            if "drive.g" in cfg:
                pumped["g"] = float(cfg["drive.g"])
            if "lf.omega0" in cfg:
                pumped["lf_frequency"] = float(cfg["lf.omega0"])
        fit = fit_resonance(trace, model=args.model, pumped=pumped)
        if args.out:
            write_complex_trace(str(args.out) + ".trace",
                                fit.extras["corrected_trace"])
    elif args.model == "lorentzian":
        fit = fit_lorentzian(read_spectrum_trace(args.infile))
    elif args.model == "flux_arch":
        # columns: flux bias in PHI_0 units, resonance frequency in Hz
        _, data = read_points(args.infile, n_columns=2)
        total_l = cfg.get("squid.total_inductance")
        fit = fit_flux_arch(data[:, 0], TWO_PI * data[:, 1],
                            total_inductance=float(total_l) if total_l else None)
    elif args.model == "backaction":
        _, data = read_points(args.infile, n_columns=3)
        fit = fit_backaction(TWO_PI * data[:, 0], TWO_PI * data[:, 1],
                             TWO_PI * data[:, 2])
    else:  # pragma: no cover - argparse restricts choices
        raise ConfigError(f"unknown fit model {args.model!r}")

    if not fit.converged:
        raise ConvergenceError(
            f"fit did not converge after {fit.iterations} iterations: {fit.message}")
    emit_report(_fit_report(fit), args.out)
    return EXIT_OK


def cmd_synth(args) -> int:
    cfg = build_config(args)
    if args.model == "psd":
        return cmd_psd(args)
    if args.model != "bare":
        cfg.setdefault("drive.detuning", resolve_detuning(cfg))
    background = None
    if any(k.startswith("background.") for k in cfg):
        from .fitting import BackgroundModel
        center = need(cfg, "hf.omega0", cfg.get("lf.omega0"))
        background = BackgroundModel(
            amplitude_offset=need(cfg, "background.amplitude_offset", 1.0),
            amplitude_slope=need(cfg, "background.amplitude_slope", 0.0),
            phase_offset=need(cfg, "background.phase_offset", 0.0),
            phase_slope=need(cfg, "background.phase_slope", 0.0),
            reference_frequency=need(cfg, "background.reference_frequency", center),
        )
    if args.model == "lf_pumped":
        center = need(cfg, "lf.omega0") / TWO_PI
        default = np.linspace(center - 2e5, center + 2e5, args.points)
    else:
        center = need(cfg, "hf.omega0") / TWO_PI
        default = np.linspace(center - 2e6, center + 2e6, args.points)
    grid = parse_grid(args.grid, default)
    trace = synth_s11(args.model, cfg, grid, background=background,
                      noise=noise_from(cfg, args.seed))
    if not args.out:
        raise ConfigError("synth requires --out")
    write_complex_trace(args.out, trace)
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = build_config(args)
    outer_specs = args.outer or []
    if len(outer_specs) != 1:
        raise ConfigError("sweep needs exactly one --outer KEY:START:STOP:POINTS")
    key, _, grid_part = outer_specs[0].partition(":")
    if not grid_part:
        raise ConfigError("--outer expects KEY:START:STOP:POINTS")
    if any(entry.startswith(key + "=") for entry in (args.set or [])):
        raise ConfigError(f"axis collision: {key!r} is both swept and set")
    outer = parse_grid(grid_part)
    center = need(cfg, "hf.omega0") / TWO_PI
    probe = parse_grid(args.grid, np.linspace(center - 2e6, center + 2e6, args.points))

    rows = []
    for value in outer:
        point = dict(cfg)
        point[key] = float(value)
        if key in ("drive.sideband_offset", "drive.sideband"):
            point.pop("drive.detuning", None)
        point.setdefault("drive.detuning", resolve_detuning(point))
        trace = synth_s11("pumped", point, probe)
        rows.append(20.0 * np.log10(np.abs(trace.values)))

    out = args.out
    if not out:
        raise ConfigError("sweep requires --out")
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(f"# outer: {key}\n")
        fh.write("# columns: outer_value then |S11| in dB per probe point\n")
        fh.write("# probe_hz: " + " ".join(format(f, ".17g") for f in probe) + "\n")
        for value, row in zip(outer, rows):
            fh.write(format(value, ".17g") + " "
                     + " ".join(format(v, ".9g") for v in row) + "\n")
    return EXIT_OK


# --- parser and entry point --------------------------------------------------

def _add_common(sub, grid_default=True):
    sub.add_argument("--preset", help="named parameter set")
    sub.add_argument("--params", help="flat JSON parameter file")
    sub.add_argument("--set", action="append", metavar="KEY=VALUE",
                     help="override one parameter (repeatable)")
    sub.add_argument("--out", help="output path (default: stdout)")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--units", choices=("si", "photon", "dbm"), default="photon")
    if grid_default:
        sub.add_argument("--grid", help="START:STOP:POINTS in Hz")
        sub.add_argument("--points", type=int, default=2001,
                         help="points of the default grid")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="photonpressure",
        description="flux-coupled circuit modeling, simulation and fitting")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("params", help="derive circuit parameters")
    _add_common(p, grid_default=False)
    p.set_defaults(func=cmd_params)

    p = commands.add_parser("respond", help="reflection response trace")
    _add_common(p)
    p.add_argument("--model", choices=("bare", "pumped", "lf_pumped"),
                   default="pumped")
    p.set_defaults(func=cmd_respond)

    p = commands.add_parser("backaction", help="sideband backaction curves")
    _add_common(p)
    p.add_argument("--sideband", choices=("red", "blue"), default="red")
    p.set_defaults(func=cmd_backaction)

    p = commands.add_parser("nms", help="hybrid-mode branches vs coupling")
    _add_common(p)
    p.set_defaults(func=cmd_nms)

    p = commands.add_parser("psd", help="blue-pump output spectrum")
    _add_common(p)
    p.set_defaults(func=cmd_psd)

    p = commands.add_parser("fit", help="fit a trace file")
    _add_common(p, grid_default=False)
    p.add_argument("infile", help="input trace file")
    p.add_argument("--model",
                   choices=("bare", "pumped", "lorentzian", "flux_arch", "backaction"),
                   default="bare")
    p.set_defaults(func=cmd_fit)

    p = commands.add_parser("synth", help="synthetic measurement data")
    _add_common(p)
    p.add_argument("--model", choices=("bare", "pumped", "lf_pumped", "psd"),
                   default="bare")
    p.set_defaults(func=cmd_synth)

    p = commands.add_parser("sweep", help="2-D |S11| map in dB")
    _add_common(p)
    p.add_argument("--outer", action="append", metavar="KEY:START:STOP:POINTS",
                   help="outer sweep axis")
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_CONFIG
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TraceFormatError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ConvergenceError as exc:
        print(f"fit error: {exc}", file=sys.stderr)
        return EXIT_NOCONV
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except PhotonPressureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except FileNotFoundError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
