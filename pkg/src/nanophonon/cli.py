"""Command-line front end.

Every command writes CSV data (the tested interface), an SVG plot and a JSON
manifest into ``--out``. Exit codes: 0 success, 2 validation error,
3 infeasible request, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import bands1d, dos, lamb_modes, spin_dynamics
from .errors import InfeasibleError, NanophononError, ValidationError
from .io import read_dos_csv, write_atomic, write_csv, write_json, write_manifest
from .materials import Particle, builtin_presets, dump_material, get_preset, load_material
from .svgplot import Plot

EXIT_OK, EXIT_VALIDATION, EXIT_INFEASIBLE, EXIT_IO = 0, 2, 3, 4

# default bilayer: a Y2SiO5-like host layer and a partner of half its impedance
DEFAULT_LAYER_A = (4440.0, 3678.0)
DEFAULT_LAYER_B = (2220.0, 3678.0)


def _material(args):
    if args.material_file:
        m = load_material(Path(args.material_file).read_text(encoding="utf-8"))
    else:
        m = get_preset(args.material)
    if m.user_supplied:
        print(f"warning: preset {m.name} holds placeholder values for "
              f"{', '.join(m.user_supplied)}; supply them with --material-file",
              file=sys.stderr)
    return m


def _field_grid(args):
    if args.points < 1:
        raise ValidationError("--points must be >= 1", field="points")
    if args.points == 1:
        return [args.b_min]
    return [float(b) for b in np.linspace(args.b_min, args.b_max, args.points)]


def _material_params(m):
    return {"name": m.name, "g": m.g, "R0_kHz": m.R0, "alpha_ff_kHz": m.alpha_ff,
            "alpha_D_kHz_per_T5": m.alpha_D, "gamma_max_Hz": m.gamma_max,
            "gamma_0_Hz": m.gamma_0, "c_t_m_per_s": m.c_t, "c_l_m_per_s": m.c_l}


def _params(args, m=None, **extra):
    p = {k: v for k, v in vars(args).items() if k != "func"}
    if m is not None:
        p["material_params"] = _material_params(m)
    p.update(extra)
    return p


# ---------------------------------------------------------------------------


def cmd_rates(args):
    m = _material(args)
    rows = spin_dynamics.sweep_field(m, _field_grid(args), args.temperature, args.delay)
    out = Path(args.out)
    write_csv(out / "rates.csv", spin_dynamics.SWEEP_HEADER, [r.as_tuple() for r in rows])

    B = [r.field for r in rows]
    plot = Plot(f"Spin-flip rate, {m.name}, T = {args.temperature:g} K", "B (T)", "rate (Hz)",
                logy=True)
    plot.add(B, [r.rates.total for r in rows], "total R")
    plot.add(B, [r.rates.r0 for r in rows], "R0")
    plot.add(B, [r.rates.flip_flop for r in rows], "flip-flop")
    plot.add(B, [r.rates.direct for r in rows], "direct phonon")
    write_atomic(out / "rates.svg", plot.render())

    crossover = spin_dynamics.crossover_field(m, args.temperature)
    write_manifest(out / "rates.manifest.json", "rates",
                   _params(args, m, crossover_field_T=crossover))
    if crossover is not None:
        print(f"direct process overtakes flip-flops at B = {crossover:.4f} T")
    return EXIT_OK


def _dos_scales(args, m, B):
    meta_path = Path(args.dos_file).with_suffix(".meta.json")
    linewidth, lowest = 0.0, None
    if meta_path.exists():
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
        linewidth = float(meta["delta_omega_rad_per_s"])
        lowest = float(meta["lowest_mode_Hz"])
    if not args.bulk_dos_file:
        raise ValidationError("--suppression dos needs --bulk-dos-file as well", field="bulk_dos_file")
    nano = read_dos_csv(args.dos_file, dos.PARTICLE, linewidth or dos.DEFAULT_LINEWIDTH, lowest)
    bulk = read_dos_csv(args.bulk_dos_file, dos.DEBYE)
    scales = []
    for b in B:
        if b == 0:
            scales.append(0.0)  # the direct term vanishes at B = 0 for any scale
            continue
        f = spin_dynamics.zeeman_splitting(m.g, b)
        scales.append(min(1.0, max(0.0, dos.suppression_factor(nano, bulk, f))))
    return scales


def cmd_linewidth(args):
    m = _material(args)
    B = _field_grid(args)
    if args.suppression == "on":
        scales = 0.0
    elif args.suppression == "off":
        scales = 1.0
    else:
        if not args.dos_file:
            raise ValidationError("--suppression dos needs --dos-file", field="dos_file")
        scales = _dos_scales(args, m, B)
    bulk = spin_dynamics.sweep_field(m, B, args.temperature, args.delay, 1.0)
    supp = spin_dynamics.sweep_field(m, B, args.temperature, args.delay, scales)
    out = Path(args.out)
    write_csv(out / "linewidth_bulk.csv", spin_dynamics.SWEEP_HEADER, [r.as_tuple() for r in bulk])
    write_csv(out / "linewidth_suppressed.csv", spin_dynamics.SWEEP_HEADER,
              [r.as_tuple() for r in supp])

    plot = Plot(f"Effective linewidth after t = {args.delay:g} s, {m.name}", "B (T)",
                "Gamma_eff (Hz)", logy=True)
    plot.add(B, [r.linewidth.gamma_eff for r in supp], f"direct process suppressed ({args.suppression})")
    plot.add(B, [r.linewidth.gamma_eff for r in bulk], "with direct process", dash="6,4")
    write_atomic(out / "linewidth.svg", plot.render())
    write_manifest(out / "linewidth.manifest.json", "linewidth", _params(args, m))
    return EXIT_OK


def cmd_dos(args):
    m = _material(args)
    particle = Particle(m, args.diameter)
    delta_omega = 2 * math.pi * args.linewidth
    spacing = args.linewidth / 5
    if args.points:
        grid = dos.FrequencyGrid(0.0, args.f_max, args.points)
    else:
        grid = dos.FrequencyGrid.with_spacing(0.0, args.f_max, spacing)
    # modes just above f_max still leak into the top of the grid
    modes = lamb_modes.enumerate_modes(particle, args.f_max + 50 * args.linewidth,
                                       scan_step=args.scan_step, max_modes=args.max_modes)
    if not modes:
        raise ValidationError(f"no eigenmodes below {args.f_max:.4g} Hz; raise --f-max",
                              field="f_max")
    nano = dos.particle_dos(modes, delta_omega, grid)
    bulk = dos.debye_dos(particle, grid)

    out = Path(args.out)
    f = grid.freqs
    write_csv(out / "dos.csv", dos.DOS_HEADER, zip(f, nano.values))
    write_csv(out / "dos_debye.csv", dos.DOS_HEADER, zip(f, bulk.values))
    write_csv(out / "modes.csv", lamb_modes.MODE_HEADER,
              [(e.label, e.index.l, e.index.j, e.degeneracy, e.freq_hz)
               for e in modes if e.freq_hz <= args.f_max])

    eta, sigma, l = lamb_modes.lowest_root(m.velocity_ratio, scan_step=args.scan_step)
    lowest = modes[0].freq_hz
    predicted = dos.cutoff_frequency(m.c_t, args.diameter, eta)
    paper_anchor = dos.cutoff_frequency(m.c_t, args.diameter)
    summary = {
        "lowest_mode_Hz": lowest,
        "lowest_mode": {"sigma": modes[0].label, "l": modes[0].index.l, "j": modes[0].index.j},
        "eta_min_solver": eta,
        "eta_min_solver_mode": {"sigma": sigma, "l": l},
        "cutoff_prediction_Hz": predicted,
        "ratio_lowest_to_prediction": lowest / predicted,
        "cutoff_eta_2.05_Hz": paper_anchor,
        "ratio_lowest_to_eta_2.05": lowest / paper_anchor,
        "velocity_ratio": m.velocity_ratio,
    }
    write_json(out / "dos_summary.json", summary)
    write_json(out / "dos.meta.json", {
        "diameter_m": args.diameter,
        "delta_omega_rad_per_s": delta_omega,
        "linewidth_Hz": args.linewidth,
        "lowest_mode_Hz": lowest,
        "material": _material_params(m),
        "solver": {"scan_step": args.scan_step, "max_modes": args.max_modes,
                   "mode_f_max_Hz": args.f_max + 50 * args.linewidth},
        "grid": {"start_Hz": grid.start, "stop_Hz": grid.stop, "points": grid.points},
    })

    plot = Plot(f"Phonon DOS, {m.name}, d = {args.diameter * 1e9:g} nm", "frequency (GHz)",
                "DOS (states per rad/s)")
    plot.add(f / 1e9, nano.values, f"particle, width {args.linewidth / 1e9:g} GHz")
    plot.add(f / 1e9, bulk.values / dos.DEBYE_BOOKKEEPING, "Debye / 2pi")
    write_atomic(out / "dos.svg", plot.render())
    write_manifest(out / "dos.manifest.json", "dos", _params(args, m))
    print(f"lowest mode {lowest / 1e9:.2f} GHz ({modes[0].label}, l={modes[0].index.l}); "
          f"cutoff prediction {predicted / 1e9:.2f} GHz; ratio {lowest / predicted:.4f}")
    return EXIT_OK


def cmd_bands(args):
    materials = [(args.rho_a, args.c_a), (args.rho_b, args.c_b)]
    tuned = None
    if args.tune:
        tuned = bands1d.tune_cell(args.center, args.width, materials)
        cell = tuned.cell
    else:
        if args.d_a is None or args.d_b is None:
            raise ValidationError("give --d-a and --d-b, or use --tune", field="d_a")
        cell = bands1d.UnitCell1D(bands1d.Layer(args.d_a, args.rho_a, args.c_a),
                                  bands1d.Layer(args.d_b, args.rho_b, args.c_b))
    if args.f_max:
        f_max = args.f_max
    elif args.tune:
        # stop between Bragg points so no gap is cut at the range end
        f_max = (2.0 + 0.5 / tuned.order) * args.center
    else:
        f_max = 4.0 * 0.5 / bands1d.transit_time(cell)
    f = np.linspace(0.0, f_max, args.points)
    rhs = bands1d.dispersion_rhs(cell, f)
    resolution = f_max / (args.points - 1)
    gaps = bands1d.find_gaps(cell, 0.0, f_max, resolution)

    out = Path(args.out)
    write_csv(out / "bands.csv", bands1d.BAND_HEADER,
              [(fi, ri, abs(ri) > 1.0) for fi, ri in zip(f, rhs)])
    write_csv(out / "gaps.csv", bands1d.GAP_HEADER,
              [(g.f_low, g.f_high, g.center, g.width) for g in gaps])
    write_json(out / "cell.json", {
        "a": {"thickness_m": cell.a.thickness, "density_kg_per_m3": cell.a.density,
              "velocity_m_per_s": cell.a.velocity},
        "b": {"thickness_m": cell.b.thickness, "density_kg_per_m3": cell.b.density,
              "velocity_m_per_s": cell.b.velocity},
        "period_m": cell.period,
    })

    plot = Plot("1D bilayer dispersion", "frequency (GHz)", "cos(qL)")
    plot.add(f / 1e9, np.clip(rhs, -3, 3), "cos(qL), clipped to [-3, 3]")
    plot.add([0, f_max / 1e9], [1, 1], "|cos qL| = 1", color="#777777", dash="2,3")
    plot.add([0, f_max / 1e9], [-1, -1], "", color="#777777", dash="2,3")
    for g in gaps:
        plot.shade(g.f_low / 1e9, g.f_high / 1e9)
    write_atomic(out / "bands.svg", plot.render())
    write_manifest(out / "bands.manifest.json", "bands", _params(args))
    for g in gaps:
        print(f"gap {g.f_low / 1e9:.4f} - {g.f_high / 1e9:.4f} GHz "
              f"(center {g.center / 1e9:.4f}, width {g.width / 1e9:.4f})")
    if tuned is not None:
        print(f"tuned thicknesses: a = {cell.a.thickness * 1e9:.4f} nm, "
              f"b = {cell.b.thickness * 1e9:.4f} nm (Bragg order {tuned.order})")
    return EXIT_OK


def cmd_presets(args):
    if args.dump:
        sys.stdout.write(dump_material(get_preset(args.dump)))
        return EXIT_OK
    for m in builtin_presets():
        note = f"  [placeholders: {', '.join(m.user_supplied)}]" if m.user_supplied else ""
        print(f"{m.name:14s} g={m.g:<5g} R0={m.R0:g} kHz  alpha_ff={m.alpha_ff:g} kHz  "
              f"alpha_D={m.alpha_D:g} kHz/T^5  Gamma_max={m.gamma_max:g} Hz  "
              f"Gamma_0={m.gamma_0:g} Hz  c_t={m.c_t:.1f} m/s  c_l={m.c_l:.1f} m/s{note}")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="nanophonon",
        description="Phonon suppression in nanostructured rare-earth-doped crystals.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, points):
        g = p.add_mutually_exclusive_group()
        g.add_argument("--material", default="ErYSO-fig1", help="preset name (default %(default)s)")
        g.add_argument("--material-file", help="key=value material config file")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--points", type=int, default=points, help="number of grid points")

    p = sub.add_parser("rates", help="spin-flip rate terms vs magnetic field")
    common(p, 301)
    p.add_argument("--b-min", type=float, default=0.0)
    p.add_argument("--b-max", type=float, default=3.0)
    p.add_argument("--temperature", type=float, default=3.0, help="K")
    p.add_argument("--delay", type=float, default=10e-6, help="s, used for the linewidth columns")
    p.set_defaults(func=cmd_rates)

    p = sub.add_parser("linewidth", help="effective linewidth with/without the direct process")
    common(p, 501)
    p.set_defaults(material="ErYSO-fig2")
    p.add_argument("--b-min", type=float, default=0.0)
    p.add_argument("--b-max", type=float, default=5.0)
    p.add_argument("--temperature", type=float, default=3.0, help="K")
    p.add_argument("--delay", type=float, default=10e-6, help="s")
    p.add_argument("--suppression", choices=("on", "off", "dos"), default="on")
    p.add_argument("--dos-file", help="particle DOS CSV from the dos command")
    p.add_argument("--bulk-dos-file", help="Debye DOS CSV from the dos command")
    p.set_defaults(func=cmd_linewidth)

    p = sub.add_parser("dos", help="nanoparticle phonon density of states")
    common(p, 0)
    p.add_argument("--diameter", type=float, default=12e-9, help="m")
    p.add_argument("--linewidth", type=float, default=1e9, help="Lorentzian full width, Hz")
    p.add_argument("--f-max", type=float, default=1e12, help="Hz")
    p.add_argument("--scan-step", type=float, default=lamb_modes.DEFAULT_SCAN_STEP)
    p.add_argument("--max-modes", type=int, default=lamb_modes.DEFAULT_MAX_MODES)
    p.set_defaults(func=cmd_dos)

    p = sub.add_parser("bands", help="1D bilayer band structure and gap tuning")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--points", type=int, default=4001)
    p.add_argument("--tune", action="store_true", help="tune thicknesses to --center/--width")
    p.add_argument("--center", type=float, default=178e9, help="target gap center, Hz")
    p.add_argument("--width", type=float, default=3.5e9, help="target gap width, Hz")
    p.add_argument("--d-a", type=float, help="layer a thickness, m")
    p.add_argument("--d-b", type=float, help="layer b thickness, m")
    p.add_argument("--rho-a", type=float, default=DEFAULT_LAYER_A[0])
    p.add_argument("--c-a", type=float, default=DEFAULT_LAYER_A[1])
    p.add_argument("--rho-b", type=float, default=DEFAULT_LAYER_B[0])
    p.add_argument("--c-b", type=float, default=DEFAULT_LAYER_B[1])
    p.add_argument("--f-max", type=float, help="upper scan frequency, Hz (default about 2x --center when tuning, else 4x the first Bragg frequency)")
    p.set_defaults(func=cmd_bands)

    p = sub.add_parser("presets", help="list built-in materials")
    p.add_argument("--dump", metavar="NAME", help="print a preset as a config file")
    p.set_defaults(func=cmd_presets)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except NanophononError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
