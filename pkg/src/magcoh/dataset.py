"""Dataset serialization: fixed-schema CSV / JSON-lines plus metadata sidecars.

Column order is fixed and versioned (schema_version first).  Floats are
written as shortest round-trip decimals (Python repr), absent values as empty
CSV fields / JSON nulls, so identical records always serialize to identical
bytes.
"""

from __future__ import annotations

import json
from pathlib import Path

from . import __version__, kernels
from .params import PARAM_FIELDS
from .sweep import PairRecord, PointRecord, SweepSpec

SCHEMA_VERSION = 1

_VALUE_COLUMNS = (
    "stable",
    "a_s_re",
    "a_s_im",
    "m_s_re",
    "m_s_im",
    "b_s_re",
    "b_s_im",
    "C_a",
    "C_m",
    "C_b",
    "C_tot",
    "abscissa",
)

POINT_COLUMNS = ("schema_version", "grid_i", "grid_j") + PARAM_FIELDS + _VALUE_COLUMNS
PAIR_COLUMNS = (
    ("schema_version", "grid_i", "grid_j")
    + PARAM_FIELDS
    + tuple(c + "_plus" for c in _VALUE_COLUMNS)
    + tuple(c + "_minus" for c in _VALUE_COLUMNS)
    + ("I_a", "I_m", "I_b", "I_tot")
)
STABILITY_COLUMNS = (
    ("schema_version", "grid_i", "grid_j") + PARAM_FIELDS + ("stable", "abscissa")
)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def _point_values(rec: PointRecord) -> dict:
    return {
        "stable": rec.stable,
        "a_s_re": rec.a_s.real,
        "a_s_im": rec.a_s.imag,
        "m_s_re": rec.m_s.real,
        "m_s_im": rec.m_s.imag,
        "b_s_re": rec.b_s.real,
        "b_s_im": rec.b_s.imag,
        "C_a": rec.C_a,
        "C_m": rec.C_m,
        "C_b": rec.C_b,
        "C_tot": rec.C_tot,
        "abscissa": rec.spectral_abscissa,
    }


def record_to_dict(rec) -> dict:
    """Flatten a PointRecord or PairRecord to the versioned column schema."""
    if isinstance(rec, PointRecord):
        out = {
            "schema_version": SCHEMA_VERSION,
            "grid_i": rec.grid_i,
            "grid_j": rec.grid_j,
        }
        out.update({name: getattr(rec.params, name) for name in PARAM_FIELDS})
        out.update(_point_values(rec))
        return out
    if isinstance(rec, PairRecord):
        out = {
            "schema_version": SCHEMA_VERSION,
            "grid_i": rec.grid_i,
            "grid_j": rec.grid_j,
        }
        # shared parameters; delta_B holds the pairing magnitude (plus side)
        out.update({name: getattr(rec.plus.params, name) for name in PARAM_FIELDS})
        out.update({k + "_plus": v for k, v in _point_values(rec.plus).items()})
        out.update({k + "_minus": v for k, v in _point_values(rec.minus).items()})
        out.update({"I_a": rec.I_a, "I_m": rec.I_m, "I_b": rec.I_b, "I_tot": rec.I_tot})
        return out
    raise TypeError(f"cannot serialize record of type {type(rec).__name__}")


def stability_row(rec: PointRecord) -> dict:
    """Reduced schema used by stability maps."""
    out = {
        "schema_version": SCHEMA_VERSION,
        "grid_i": rec.grid_i,
        "grid_j": rec.grid_j,
    }
    out.update({name: getattr(rec.params, name) for name in PARAM_FIELDS})
    out["stable"] = rec.stable
    out["abscissa"] = rec.spectral_abscissa
    return out


def columns_for(records) -> tuple:
    kinds = {type(r) for r in records}
    if kinds and kinds != {PointRecord} and kinds != {PairRecord}:
        raise TypeError("record list must be homogeneous")
    if kinds == {PairRecord}:
        return PAIR_COLUMNS
    return POINT_COLUMNS


def emit_dataset(records, fmt: str, destination, columns=None) -> Path:
    """Write records to destination as 'csv' or 'jsonl'; returns the path.

    An empty record list yields a header-only CSV (or an empty JSONL file).
    """
    path = Path(destination)
    if columns is None:
        columns = columns_for(records)
    rows = [
        r if isinstance(r, dict) else record_to_dict(r) for r in records
    ]
    try:
        if fmt == "csv":
            lines = [",".join(columns)]
            for row in rows:
                lines.append(",".join(_fmt(row[c]) for c in columns))
            path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        elif fmt == "jsonl":
            out = []
            for row in rows:
                ordered = {c: row[c] for c in columns}
                out.append(json.dumps(ordered, allow_nan=False))
            path.write_text("\n".join(out) + ("\n" if out else ""), encoding="utf-8")
        else:
            raise ValueError(f"unknown format {fmt!r}")
    except OSError as exc:
        raise OSError(f"cannot write dataset to {path}: {exc}") from exc
    return path


def sweep_metadata(spec: SweepSpec, provenance: dict | None = None, extra: dict | None = None) -> dict:
    """Deterministic sidecar content: resolved parameters, axes, provenance."""
    meta = {
        "schema_version": SCHEMA_VERSION,
        "package_version": __version__,
        "backend": kernels.BACKEND,
        "base_params": {n: getattr(spec.base, n) for n in PARAM_FIELDS},
        "delta_a_choice": "delta_a defaults to omega_b (independent input, "
        "not pinned by the benchmark parameter set)",
        "axis1": _axis_meta(spec.axis1),
        "axis2": _axis_meta(spec.axis2) if spec.axis2 is not None else None,
        "pair_barnett": spec.pair_barnett,
        "format": spec.fmt,
        "notes": dict(spec.notes),
    }
    if provenance is not None:
        meta["provenance"] = dict(provenance)
    if extra:
        meta.update(extra)
    return meta


def write_metadata(meta: dict, destination) -> Path:
    path = Path(destination)
    try:
        path.write_text(
            json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
    except OSError as exc:
        raise OSError(f"cannot write metadata to {path}: {exc}") from exc
    return path


def _axis_meta(axis) -> dict:
    return {
        "name": axis.name,
        "min": axis.lo,
        "max": axis.hi,
        "points": axis.points,
        "scale": axis.scale,
    }
