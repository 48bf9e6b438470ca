"""Flat key = value configuration files.

Grammar: one ``key = value`` per line, ``#`` starts a comment, blank lines
ignored.  Frequency-like values are plain numbers in Hz (multiplied by 2*pi
internally) or ``<float> wb`` for multiples of omega_b.  Powers are in W
unless suffixed ``mW``.  Temperature is in K.  Unknown or duplicate keys are
hard errors: silently default-filling a misspelled key would corrupt physics
sweeps.
"""

from __future__ import annotations

import math

from .params import PARAM_FIELDS, PhysicalParams, baseline_params
from .sweep import AXIS_NAMES, SweepAxis, SweepSpec

TWO_PI = 2.0 * math.pi

# rad/s quantities accept Hz numbers and "wb" multiples
FREQUENCY_KEYS = frozenset(
    (
        "omega_b",
        "omega_a",
        "omega_l",
        "delta_a",
        "delta_m_eff",
        "delta_B",
        "kappa_a",
        "kappa_m",
        "kappa_b",
        "J",
        "g",
        "abs_delta_B",
    )
)
POWER_KEYS = frozenset(("P",))

SWEEP_KEYS = (
    "axis1",
    "axis1_min",
    "axis1_max",
    "axis1_points",
    "axis1_scale",
    "axis2",
    "axis2_min",
    "axis2_max",
    "axis2_points",
    "axis2_scale",
    "pair_barnett",
    "format",
)

KNOWN_KEYS = frozenset(PARAM_FIELDS) | frozenset(SWEEP_KEYS)


class ConfigError(ValueError):
    """Malformed configuration; message carries line/key diagnostics."""


def _parse_float(token: str, key: str, line_no: int) -> float:
    try:
        return float(token)
    except ValueError:
        raise ConfigError(
            f"line {line_no}: key {key!r}: cannot parse number from {token!r}"
        ) from None


def parse_value(raw: str, key: str, omega_b: float | None, line_no: int = 0) -> float:
    """Resolve one value string to internal units for the given target key."""
    raw = raw.strip()
    if raw.lower().endswith("wb"):
        if key not in FREQUENCY_KEYS:
            raise ConfigError(
                f"line {line_no}: key {key!r} does not accept 'wb' values"
            )
        if key == "omega_b":
            raise ConfigError(
                f"line {line_no}: omega_b cannot be given in units of itself"
            )
        if omega_b is None:
            raise ConfigError(
                f"line {line_no}: 'wb' value for {key!r} before omega_b is known"
            )
        return _parse_float(raw[:-2].strip(), key, line_no) * omega_b
    if raw.lower().endswith("mw"):
        if key not in POWER_KEYS:
            raise ConfigError(
                f"line {line_no}: key {key!r} does not accept 'mW' values"
            )
        return _parse_float(raw[:-2].strip(), key, line_no) * 1e-3
    value = _parse_float(raw, key, line_no)
    if key in FREQUENCY_KEYS:
        return TWO_PI * value
    return value


def _read_pairs(text: str) -> list[tuple[int, str, str]]:
    pairs = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"line {line_no}: expected 'key = value', got {line!r}")
        key, _, raw = body.partition("=")
        key = key.strip()
        raw = raw.strip()
        if not key or not raw:
            raise ConfigError(f"line {line_no}: empty key or value in {line!r}")
        pairs.append((line_no, key, raw))
    return pairs


def parse_config(text: str) -> tuple[PhysicalParams, SweepSpec | None, dict]:
    """Parse a configuration document.

    Returns (params, sweep or None, provenance) where provenance maps each
    parameter name to 'set' or 'default'.  Missing parameter keys take the
    baseline defaults.
    """
    pairs = _read_pairs(text)
    seen = set()
    for line_no, key, _ in pairs:
        if key not in KNOWN_KEYS:
            raise ConfigError(f"line {line_no}: unknown key {key!r}")
        if key in seen:
            raise ConfigError(f"line {line_no}: duplicate key {key!r}")
        seen.add(key)

    by_key = {key: (line_no, raw) for line_no, key, raw in pairs}
    defaults = baseline_params()

    # omega_b resolves first so 'wb' values can refer to it
    if "omega_b" in by_key:
        line_no, raw = by_key["omega_b"]
        omega_b = parse_value(raw, "omega_b", None, line_no)
        if omega_b <= 0:
            raise ConfigError(f"line {line_no}: omega_b must be positive")
    else:
        omega_b = defaults.omega_b

    values = {}
    provenance = {}
    for name in PARAM_FIELDS:
        if name in by_key:
            line_no, raw = by_key[name]
            values[name] = parse_value(raw, name, omega_b, line_no)
            provenance[name] = "set"
        else:
            values[name] = getattr(defaults, name)
            provenance[name] = "default"
    values["omega_b"] = omega_b
    try:
        params = PhysicalParams(**values)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    sweep = _parse_sweep(by_key, params, omega_b)
    return params, sweep, provenance


def _axis(by_key, prefix: str, omega_b: float) -> SweepAxis | None:
    if prefix not in by_key:
        for suffix in ("_min", "_max", "_points", "_scale"):
            if prefix + suffix in by_key:
                line_no, _ = by_key[prefix + suffix]
                raise ConfigError(
                    f"line {line_no}: {prefix}{suffix} given without {prefix}"
                )
        return None
    line_no, name = by_key[prefix]
    if name not in AXIS_NAMES:
        raise ConfigError(f"line {line_no}: unknown axis parameter {name!r}")
    for suffix in ("_min", "_max", "_points"):
        if prefix + suffix not in by_key:
            raise ConfigError(f"{prefix}{suffix} is required when {prefix} is set")
    lo_line, lo_raw = by_key[prefix + "_min"]
    hi_line, hi_raw = by_key[prefix + "_max"]
    lo = parse_value(lo_raw, name, omega_b, lo_line)
    hi = parse_value(hi_raw, name, omega_b, hi_line)
    pts_line, pts_raw = by_key[prefix + "_points"]
    try:
        points = int(pts_raw)
    except ValueError:
        raise ConfigError(
            f"line {pts_line}: {prefix}_points must be an integer, got {pts_raw!r}"
        ) from None
    scale = "linear"
    if prefix + "_scale" in by_key:
        sc_line, scale = by_key[prefix + "_scale"]
        if scale not in ("linear", "log"):
            raise ConfigError(
                f"line {sc_line}: {prefix}_scale must be 'linear' or 'log'"
            )
    try:
        return SweepAxis(name=name, lo=lo, hi=hi, points=points, scale=scale)
    except ValueError as exc:
        raise ConfigError(f"{prefix}: {exc}") from exc


def _parse_sweep(by_key, params: PhysicalParams, omega_b: float) -> SweepSpec | None:
    axis1 = _axis(by_key, "axis1", omega_b)
    axis2 = _axis(by_key, "axis2", omega_b)
    pair = False
    if "pair_barnett" in by_key:
        line_no, raw = by_key["pair_barnett"]
        if raw.lower() in ("true", "1", "yes"):
            pair = True
        elif raw.lower() in ("false", "0", "no"):
            pair = False
        else:
            raise ConfigError(f"line {line_no}: pair_barnett must be boolean")
    fmt = "csv"
    if "format" in by_key:
        line_no, fmt = by_key["format"]
        if fmt not in ("csv", "jsonl"):
            raise ConfigError(f"line {line_no}: format must be 'csv' or 'jsonl'")
    if axis1 is None:
        if axis2 is not None:
            raise ConfigError("axis2 given without axis1")
        if pair or "format" in by_key:
            raise ConfigError("sweep options given without axis1")
        return None
    try:
        return SweepSpec(base=params, axis1=axis1, axis2=axis2, pair_barnett=pair, fmt=fmt)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def format_config(params: PhysicalParams) -> str:
    """Emit a config document that parses back to the same parameters.

    Frequencies are written in Hz (value/2pi), powers in W, so
    parse_config(format_config(p)) round-trips to 1e-15 relative.
    """
    lines = []
    for name in PARAM_FIELDS:
        value = getattr(params, name)
        if name in FREQUENCY_KEYS:
            value = value / TWO_PI
        lines.append(f"{name} = {value!r}")
    return "\n".join(lines) + "\n"
