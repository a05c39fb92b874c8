"""
Scenario configuration and the end-to-end pipelines behind the CLI.

A scenario is a flat INI document, one section per model component.  Every
key has a typed default; :func:`resolve` materializes all of them so that the
resolved text, embedded in an output header, reproduces the run exactly.
"""

import configparser
import copy
import io
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .capacity import FrequencyGrid, monte_carlo_capacity
from .channel import LinkConfig, conjugate_match_load
from .errors import ConfigError, SlotCapError
from .network import chu_array_impedance, truncate_by_admittance, truncate_by_termination
from .spectral import ArrayGeometry, MediumSpec, SpectralContext, infinite_array_impedance

CURVES = ("slot", "infinite_slot", "chu")
MEDIA = ("free_space", "half_space")
TRUNCATIONS = ("admittance", "termination")


def _bool(text):
    value = text.strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _names(choices):
    def parse(text):
        items = tuple(t.strip() for t in text.split(",") if t.strip())
        if not items:
            raise ValueError("expected at least one name")
        bad = [t for t in items if t not in choices]
        if bad:
            raise ValueError(f"unknown name(s) {', '.join(bad)}; valid: {', '.join(choices)}")
        return items

    return parse


def _choice(choices):
    def parse(text):
        text = text.strip()
        if text not in choices:
            raise ValueError(f"expected one of {', '.join(choices)}, got {text!r}")
        return text

    return parse


def _optional_float(text):
    text = text.strip()
    return None if text in ("", "auto") else float(text)


def _optional_name(text):
    text = text.strip()
    if text in ("", "none"):
        return None
    if text not in SWEEP_PARAMETERS:
        raise ValueError(f"unknown sweep parameter {text!r}; valid: {', '.join(SWEEP_PARAMETERS)}")
    return text


def _value_list(text):
    return tuple(float(t) for t in text.split(",") if t.strip())


def _seed(text):
    value = int(text)
    if not 0 <= value < 2**64:
        raise ValueError("seed must fit in an unsigned 64-bit integer")
    return value


# section -> key -> (parser, default)
SCHEMA = {
    "geometry": {
        "slot_width": (float, 1e-3),
        "feed_pitch": (float, 0.03),
        "element_count": (int, 64),
        "feed_gap": (_optional_float, None),
    },
    "medium": {
        "kinds": (_names(MEDIA), ("free_space",)),
        "eps_r": (float, 11.7),
    },
    "band": {
        "f_min": (float, 5e8),
        "f_max": (float, 5e9),
        "points": (int, 201),
    },
    "spectral": {
        "detour": (float, 0.05),
        "k_max_factor": (float, 60.0),
        "n_quad": (int, 2048),
    },
    "truncation": {
        "method": (_choice(TRUNCATIONS), "admittance"),
        "r_open": (float, 1e5),
    },
    "link": {
        "distance": (float, 18.0),
        "pathloss_exponent": (float, 3.5),
        "frequency_flat_pathloss": (_bool, True),
        "f_ref": (float, 5e8),
        "temperature": (float, 290.0),
        "noise_figure": (float, 2.0),
        "lna_input_resistance": (float, 50.0),
    },
    "transmit": {
        "power": (float, 2.0),
        "source_impedance": (float, 50.0),
    },
    "baselines": {
        "curves": (_names(CURVES), ("slot", "infinite_slot", "chu")),
        "chu_radius": (_optional_float, None),
    },
    "monte_carlo": {
        "n_realizations": (int, 50),
        "base_seed": (_seed, 1),
        "common_scattering": (_bool, False),
    },
    "impedance": {
        "curve": (_choice(("slot", "infinite_slot")), "slot"),
    },
    "sweep": {
        "parameter": (_optional_name, None),
        "values": (_value_list, ()),
    },
    "output": {
        "format": (_choice(("csv",)), "csv"),
    },
}

SWEEP_PARAMETERS = {
    "slot_width": ("geometry", "slot_width"),
    "element_count": ("geometry", "element_count"),
    "pitch": ("geometry", "feed_pitch"),
    "eps_r": ("medium", "eps_r"),
    "power": ("transmit", "power"),
    "distance": ("link", "distance"),
    "alpha": ("link", "pathloss_exponent"),
}

CONFIG_BEGIN = "--- resolved config ---"
CONFIG_END = "--- end config ---"


def _format(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "auto"
    if isinstance(value, tuple):
        return ", ".join(v if isinstance(v, str) else repr(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def extract_embedded(text):
    """Config text embedded in a CSV header, or ``text`` itself if none."""
    lines = text.splitlines()
    if not any(line.startswith("#") for line in lines[:1]):
        return text
    body, inside = [], False
    for line in lines:
        if not line.startswith("#"):
            break
        content = line[1:].strip()
        if content == CONFIG_BEGIN:
            inside = True
        elif content == CONFIG_END:
            inside = False
        elif inside:
            body.append(content)
    if not body:
        raise ConfigError("file has a '#' header but no embedded configuration")
    return "\n".join(body) + "\n"


def resolve(text="", overrides=()):
    """
    Parse and validate a scenario.

    Parameters
    ----------
    text : str
        INI text, or a CSV produced by this package (its header is used).
    overrides : iterable of str
        ``section.key=value`` assignments applied after the file.

    Returns
    -------
    dict
        ``{section: {key: typed value}}`` with every default filled in.
    """
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=(";",))
    try:
        parser.read_string(extract_embedded(text), source="<config>")
    except configparser.Error as exc:
        raise ConfigError(f"config parse error: {exc}") from exc
    for item in overrides:
        name, sep, value = item.partition("=")
        section, dot, key = name.strip().partition(".")
        if not sep or not dot:
            raise ConfigError(f"override {item!r} must look like section.key=value")
        if not parser.has_section(section):
            parser.add_section(section)
        parser.set(section, key, value.strip())

    for section in parser.sections():
        if section not in SCHEMA:
            raise ConfigError(f"unknown section [{section}]; valid: {', '.join(SCHEMA)}")
        for key in parser[section]:
            if key not in SCHEMA[section]:
                raise ConfigError(
                    f"unknown key {section}.{key}; valid: {', '.join(SCHEMA[section])}"
                )

    cfg = {}
    for section, fields in SCHEMA.items():
        cfg[section] = {}
        for key, (parse, default) in fields.items():
            if parser.has_option(section, key):
                raw = parser.get(section, key)
                try:
                    cfg[section][key] = parse(raw)
                except ValueError as exc:
                    raise ConfigError(f"{section}.{key} = {raw!r}: {exc}") from exc
            else:
                cfg[section][key] = default
    validate(cfg)
    return cfg


def validate(cfg):
    """Build every typed object once so invalid values fail early."""
    band = cfg["band"]
    if not 0 < band["f_min"] < band["f_max"]:
        raise ConfigError(f"band: need 0 < f_min < f_max, got {band['f_min']}, {band['f_max']}")
    if band["points"] < 2:
        raise ConfigError("band.points must be at least 2")
    if cfg["transmit"]["power"] <= 0:
        raise ConfigError("transmit.power must be positive")
    if cfg["transmit"]["source_impedance"] <= 0:
        raise ConfigError("transmit.source_impedance must be positive")
    if cfg["truncation"]["r_open"] <= 0:
        raise ConfigError("truncation.r_open must be positive")
    if cfg["monte_carlo"]["n_realizations"] < 1:
        raise ConfigError("monte_carlo.n_realizations must be at least 1")
    radius = cfg["baselines"]["chu_radius"]
    if radius is not None and radius <= 0:
        raise ConfigError("baselines.chu_radius must be positive")
    try:
        # the narrow-slot model must hold at the shortest wavelength
        geometry(cfg).check_wavelength(band["f_max"])
        for kind in cfg["medium"]["kinds"]:
            medium(cfg, kind)
        link(cfg)
        context(cfg, band["f_min"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def dump(cfg):
    """Resolved configuration as INI text (deterministic ordering)."""
    out = io.StringIO()
    for section, fields in SCHEMA.items():
        out.write(f"[{section}]\n")
        for key, (parse, _) in fields.items():
            value = cfg[section][key]
            text = "none" if value is None and parse is _optional_name else _format(value)
            out.write(f"{key} = {text}\n")
    return out.getvalue()


def geometry(cfg):
    g = cfg["geometry"]
    return ArrayGeometry(g["slot_width"], g["feed_pitch"], g["element_count"], g["feed_gap"])


def medium(cfg, kind):
    if kind == "free_space":
        return MediumSpec.free_space()
    return MediumSpec.half_space(cfg["medium"]["eps_r"])


def link(cfg):
    return LinkConfig(**cfg["link"])


def grid(cfg):
    b = cfg["band"]
    return FrequencyGrid.log_spaced(b["f_min"], b["f_max"], b["points"])


def context(cfg, frequency):
    s = cfg["spectral"]
    k0 = 2 * math.pi * frequency / 299792458.0
    return SpectralContext(frequency, detour=s["detour"], k_max=s["k_max_factor"] * k0, n_quad=s["n_quad"])


def _map(func, items, workers):
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(func, items))
    return [func(item) for item in items]


def _at_frequency(func):
    """Prefix numerical errors with the frequency they occurred at."""

    def wrapped(f):
        try:
            return func(f)
        except SlotCapError as exc:
            if exc.args and isinstance(exc.args[0], str):
                exc.args = (f"at {f:.9g} Hz: {exc.args[0]}",) + exc.args[1:]
            raise

    return wrapped


def finite_impedance(cfg, z_edges):
    t = cfg["truncation"]
    if t["method"] == "admittance":
        return truncate_by_admittance(z_edges)
    return truncate_by_termination(z_edges, r_open=t["r_open"])


def array_impedances(cfg, curve, kind, frequencies, workers=1):
    """
    Transmit impedance matrix of one curve at each frequency, shape (M, N, N).

    ``workers`` threads share the frequency points; the result is identical
    for any worker count.
    """
    geom = geometry(cfg)
    if curve == "chu":
        radius = cfg["baselines"]["chu_radius"] or 0.5 * geom.feed_pitch
        return np.array([chu_array_impedance(f, radius, geom.element_count) for f in frequencies])
    med = medium(cfg, kind)
    if curve == "infinite_slot":
        func = lambda f: infinite_array_impedance(context(cfg, f), geom, med)  # noqa: E731
    else:
        func = lambda f: finite_impedance(cfg, infinite_array_impedance(context(cfg, f), geom, med, True))  # noqa: E731
    return np.array(_map(_at_frequency(func), frequencies, workers))


def curve_labels(cfg):
    """(label, curve, medium kind) for every configured capacity curve."""
    out = []
    for curve in cfg["baselines"]["curves"]:
        if curve == "chu":
            out.append(("chu", curve, None))
        else:
            out.extend((f"{curve}:{kind}", curve, kind) for kind in cfg["medium"]["kinds"])
    return out


def capacity_report(cfg, curve, kind, workers=1):
    """
    Monte Carlo capacity of one curve (MISO, single matched receiver).

    The receiver is the central element of the same curve's array, taken
    as an isolated single port and conjugate matched.

    Returns
    -------
    (ndarray, CapacityReport)
        The transmit impedances on the grid and the report.
    """
    g = grid(cfg)
    z_t = array_impedances(cfg, curve, kind, g.points, workers)
    centre = z_t.shape[1] // 2
    z_r = z_t[:, centre:centre + 1, centre:centre + 1]
    z_l = np.array([conjugate_match_load(z) for z in z_r])
    z_s = np.broadcast_to(cfg["transmit"]["source_impedance"] * np.eye(z_t.shape[1]), z_t.shape)
    mc = cfg["monte_carlo"]
    return z_t, monte_carlo_capacity(
        g,
        z_t,
        z_r,
        link(cfg),
        cfg["transmit"]["power"],
        mc["n_realizations"],
        mc["base_seed"],
        z_s=z_s,
        z_l=z_l,
        common_scattering=mc["common_scattering"],
        workers=workers,
    )


def with_value(cfg, parameter, value):
    """Copy of ``cfg`` with one sweep parameter replaced, revalidated."""
    if parameter not in SWEEP_PARAMETERS:
        raise ConfigError(f"unknown sweep parameter {parameter!r}; valid: {', '.join(SWEEP_PARAMETERS)}")
    section, key = SWEEP_PARAMETERS[parameter]
    parse = SCHEMA[section][key][0]
    out = copy.deepcopy(cfg)
    try:
        out[section][key] = parse(repr(value) if parse is float else str(int(value)) if parse is int else str(value))
    except ValueError as exc:
        raise ConfigError(f"sweep value {value!r} for {parameter}: {exc}") from exc
    if parse is int and out[section][key] != value:
        raise ConfigError(f"{parameter} needs integer values, got {value!r}")
    validate(out)
    return out
