"""Lossless, deterministic serialization of analysis results.

Reports are JSON trees: complex numbers become [re, im] pairs, real numbers
keep shortest round-trip decimal form (up to 17 significant digits), and no
timestamps or environment data enter the body, so identical inputs produce
byte-identical reports.
"""

from __future__ import annotations

import json

import numpy as np

__all__ = ["jsonify", "dumps", "write_report"]


def jsonify(value):
    """Recursively convert a result tree into JSON-ready builtins."""
    if value is None or isinstance(value, (bool, int, str)):
        return value
    if isinstance(value, float):
        return value
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.complexfloating):
        return [float(value.real), float(value.imag)]
    if isinstance(value, np.ndarray):
        return jsonify(value.tolist())
    if isinstance(value, dict):
        return {str(k): jsonify(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonify(v) for v in value]
    raise TypeError(f"cannot serialize {type(value).__name__}")


def dumps(report: dict) -> str:
    return json.dumps(jsonify(report), indent=2, allow_nan=True) + "\n"


def write_report(report: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(report))
