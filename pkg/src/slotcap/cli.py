"""
Command-line front end.

    python -m slotcap impedance --config run.ini --out z.csv
    python -m slotcap capacity  --config run.ini --seed 7 --out se.csv
    python -m slotcap sweep     --config run.ini --param power --values 1,2,4

Every CSV starts with a '#' header holding the fully resolved configuration;
passing that CSV back as ``--config`` reproduces it byte for byte.
"""

import argparse
import io
import sys

import numpy as np

from . import __version__, scenario
from .errors import ConfigError, SlotCapError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def fmt(x):
    """17 significant digits, lower-case exponent."""
    return f"{float(x):.16e}"


def _header(command, cfg):
    lines = [
        f"slotcap {__version__}",
        f"command: {command}",
        f"seed: {cfg['monte_carlo']['base_seed']}",
        scenario.CONFIG_BEGIN,
        *scenario.dump(cfg).splitlines(),
        scenario.CONFIG_END,
    ]
    return "".join(f"# {line}\n" for line in lines)


def _single_kind(cfg):
    kinds = cfg["medium"]["kinds"]
    if len(kinds) != 1:
        raise ConfigError(
            f"impedance needs exactly one medium kind, got {', '.join(kinds)}; "
            "set e.g. medium.kinds=free_space"
        )
    return kinds[0]


def impedance_table(cfg, workers=1):
    """CSV body: every entry of the slot impedance matrix at every frequency."""
    freqs = scenario.grid(cfg).points
    z = scenario.array_impedances(cfg, cfg["impedance"]["curve"], _single_kind(cfg), freqs, workers)
    out = io.StringIO()
    out.write("frequency_hz,element_i,element_j,re_z_ohm,im_z_ohm\n")
    n = z.shape[1]
    for f, zf in zip(freqs, z):
        ff = fmt(f)
        for i in range(n):
            for j in range(n):
                out.write(f"{ff},{i},{j},{fmt(zf[i, j].real)},{fmt(zf[i, j].imag)}\n")
    return out.getvalue()


def _capacity_rows(cfg, workers):
    rows = []
    for label, curve, kind in scenario.curve_labels(cfg):
        _, rep = scenario.capacity_report(cfg, curve, kind, workers)
        rows.append((label, rep))
    return rows


def capacity_table(cfg, workers=1):
    """
    CSV body: mean spectral efficiency per curve and frequency.

    Each curve ends with a summary row whose ``frequency_hz`` is ``band``;
    its ``mean_se_bits_s_hz`` and ``stderr`` columns then hold the band
    capacity in bits/s and its standard error.
    """
    out = io.StringIO()
    out.write("curve,frequency_hz,mean_se_bits_s_hz,stderr,water_level_B,active_subchannels\n")
    for label, rep in _capacity_rows(cfg, workers):
        for f, se, err, act in zip(
            rep.grid.points, rep.mean_spectral_efficiency, rep.stderr_spectral_efficiency, rep.mean_active_subchannels
        ):
            out.write(f"{label},{fmt(f)},{fmt(se)},{fmt(err)},{fmt(rep.mean_water_level)},{fmt(act)}\n")
        out.write(
            f"{label},band,{fmt(rep.mean_capacity)},{fmt(rep.stderr_capacity)},"
            f"{fmt(rep.mean_water_level)},{fmt(rep.mean_active_subchannels.sum())}\n"
        )
    return out.getvalue()


def sweep_table(cfg, workers=1):
    """
    CSV body: one band-capacity summary per (swept value, curve).

    Also reports the central element's self-impedance at the middle grid
    point, which tracks how the array approaches its infinite limit.
    """
    parameter = cfg["sweep"]["parameter"]
    values = cfg["sweep"]["values"]
    if parameter is None or not values:
        raise ConfigError(
            "sweep needs a parameter and at least one value "
            f"(valid parameters: {', '.join(scenario.SWEEP_PARAMETERS)})"
        )
    out = io.StringIO()
    out.write(
        "parameter,value,curve,band_capacity_bits_s,stderr_bits_s,water_level_B,"
        "re_z_centre_mid_ohm,im_z_centre_mid_ohm\n"
    )
    for value in values:
        run = scenario.with_value(cfg, parameter, value)
        for label, curve, kind in scenario.curve_labels(run):
            z_t, rep = scenario.capacity_report(run, curve, kind, workers)
            mid, centre = z_t.shape[0] // 2, z_t.shape[1] // 2
            z_mid = z_t[mid, centre, centre]
            out.write(
                f"{parameter},{fmt(value)},{label},{fmt(rep.mean_capacity)},{fmt(rep.stderr_capacity)},"
                f"{fmt(rep.mean_water_level)},{fmt(z_mid.real)},{fmt(z_mid.imag)}\n"
            )
    return out.getvalue()


COMMANDS = {
    "impedance": (impedance_table, "finite-array impedance matrix over the band"),
    "capacity": (capacity_table, "Monte Carlo waterfilling capacity per curve"),
    "sweep": (sweep_table, "band capacity versus one scenario parameter"),
}


def build_parser():
    parser = argparse.ArgumentParser(prog="slotcap", description="Slot-array impedance and capacity tables.")
    parser.add_argument("--version", action="version", version=f"slotcap {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, summary) in COMMANDS.items():
        p = sub.add_parser(name, help=summary, description=summary)
        p.add_argument("--config", help="INI scenario, or a CSV written by this tool")
        p.add_argument(
            "--set",
            dest="overrides",
            action="append",
            default=[],
            metavar="SECTION.KEY=VALUE",
            help="override one config value (repeatable)",
        )
        p.add_argument("--seed", type=int, help="Monte Carlo base seed (unsigned 64-bit)")
        p.add_argument("--out", help="output CSV path (default: stdout)")
        p.add_argument("--workers", type=int, default=1, help="threads over frequencies and realizations")
        if name == "sweep":
            p.add_argument("--param", choices=sorted(scenario.SWEEP_PARAMETERS), help="parameter to sweep")
            p.add_argument("--values", help="comma-separated values")
    return parser


def _load(args):
    text = ""
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
    overrides = list(args.overrides)
    if args.seed is not None:
        overrides.append(f"monte_carlo.base_seed={args.seed}")
    if getattr(args, "param", None):
        overrides.append(f"sweep.parameter={args.param}")
    if getattr(args, "values", None):
        overrides.append(f"sweep.values={args.values}")
    return scenario.resolve(text, overrides)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.workers < 1:
        parser.error("--workers must be at least 1")
    try:
        cfg = _load(args)
        body = COMMANDS[args.command][0](cfg, args.workers)
    except ConfigError as exc:
        print(f"slotcap: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SlotCapError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"slotcap: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    text = _header(args.command, cfg) + body
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
