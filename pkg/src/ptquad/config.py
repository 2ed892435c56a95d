"""Configuration files for the command line tools.

A config is a TOML or JSON tree (chosen by file extension) with the shape

    n = 2
    A = [[4.0, [0.0, 1.0]], [[0.0, 1.0], 1.0]]   # entries: number or [re, im]
    C = [[1.0, 0.0], [0.0, 1.0]]                 # B defaults to zero
    kappa = [[-1.0, 0.0], [0.0, 1.0]]            # optional, real involution

    [options]                                    # all optional
    lattice_cutoff = 12.0
    oracle_cutoff = 24
    k_compare = 6
    tolerances = { rel = 1e-10 }

    [sweep]                                      # only for the sweep command
    parameter = "g"
    start = 0.0
    stop = 2.0
    step = 0.01                                  # or: count = 201
    A_coupling = [[0.0, [0.0, 1.0]], [[0.0, 1.0], 0.0]]

Near-symmetric A and C are repaired by symmetrization; asymmetry beyond
tolerance is an error naming the offending entry.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:         # Python 3.10
    import tomli as tomllib

from .quadform import QuadraticSymbol
from .tolerances import Tolerances, default_tol

__all__ = [
    "ConfigError",
    "SweepSpec",
    "RunConfig",
    "parse_config",
    "parse_config_data",
    "symbol_echo",
]

_OPTION_KEYS = {"lattice_cutoff", "oracle_cutoff", "k_compare", "tolerances"}
_SWEEP_KEYS = {"parameter", "start", "stop", "step", "count",
               "A_coupling", "B_coupling", "C_coupling"}
_TOL_FIELDS = {f.name for f in dataclasses.fields(Tolerances)}


class ConfigError(Exception):
    """Malformed or inconsistent configuration input."""


def _number(value, where) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _complex_entry(value, where) -> complex:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if (isinstance(value, (list, tuple)) and len(value) == 2
            and all(isinstance(v, (int, float)) and not isinstance(v, bool)
                    for v in value)):
        return complex(value[0], value[1])
    raise ConfigError(f"{where}: expected a number or [re, im] pair, got {value!r}")


def _matrix(data, n: int, where: str) -> np.ndarray:
    if not isinstance(data, list) or len(data) != n:
        raise ConfigError(f"{where}: expected {n} rows of {n} entries")
    out = np.zeros((n, n), dtype=complex)
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != n:
            raise ConfigError(f"{where}: row {i} must have {n} entries")
        for j, entry in enumerate(row):
            out[i, j] = _complex_entry(entry, f"{where}[{i}][{j}]")
    return out


def _repair_symmetric(m: np.ndarray, name: str, tol: Tolerances) -> np.ndarray:
    scale = max(1.0, float(np.abs(m).max()))
    defect = np.abs(m - m.T)
    if defect.max() > tol.rel * scale:
        i, j = np.unravel_index(int(np.argmax(defect)), defect.shape)
        raise ConfigError(f"{name} asymmetric at ({min(i, j)},{max(i, j)}): "
                          f"|{name}[{i}][{j}] - {name}[{j}][{i}]| = {defect[i, j]:.3e}")
    return 0.5 * (m + m.T)


@dataclass(frozen=True)
class SweepSpec:
    """A one-parameter family q(g) = base + g * couplings over a uniform grid."""

    parameter: str
    start: float
    stop: float
    count: int
    a_coupling: np.ndarray | None = None
    b_coupling: np.ndarray | None = None
    c_coupling: np.ndarray | None = None

    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)

    def symbol_at(self, base: QuadraticSymbol, value: float) -> QuadraticSymbol:
        a, b, c = base.a, base.b, base.c
        if self.a_coupling is not None:
            a = a + value * self.a_coupling
        if self.b_coupling is not None:
            b = b + value * self.b_coupling
        if self.c_coupling is not None:
            c = c + value * self.c_coupling
        return QuadraticSymbol(a, b, c, kappa=base.kappa)


@dataclass(frozen=True)
class RunConfig:
    symbol: QuadraticSymbol
    lattice_cutoff: float | None
    oracle_cutoff: int
    k_compare: int
    tol: Tolerances
    sweep: SweepSpec | None
    echo: dict


def _parse_options(data, tol_base: Tolerances):
    if not isinstance(data, dict):
        raise ConfigError("options: expected a table")
    unknown = set(data) - _OPTION_KEYS
    if unknown:
        raise ConfigError(f"options: unknown keys {sorted(unknown)}")
    cutoff = data.get("lattice_cutoff")
    if cutoff is not None:
        cutoff = _number(cutoff, "options.lattice_cutoff")
    oracle_cutoff = data.get("oracle_cutoff", 24)
    if isinstance(oracle_cutoff, bool) or not isinstance(oracle_cutoff, int):
        raise ConfigError("options.oracle_cutoff: expected an integer")
    k_compare = data.get("k_compare", 6)
    if isinstance(k_compare, bool) or not isinstance(k_compare, int) or k_compare < 1:
        raise ConfigError("options.k_compare: expected a positive integer")
    tol = tol_base
    overrides = data.get("tolerances", {})
    if not isinstance(overrides, dict):
        raise ConfigError("options.tolerances: expected a table")
    bad = set(overrides) - _TOL_FIELDS
    if bad:
        raise ConfigError(f"options.tolerances: unknown keys {sorted(bad)}")
    if overrides:
        vals = {k: _number(v, f"options.tolerances.{k}") for k, v in overrides.items()}
        for k, v in vals.items():
            if v <= 0:
                raise ConfigError(f"options.tolerances.{k}: must be positive")
        tol = dataclasses.replace(tol, **vals)
    return cutoff, oracle_cutoff, k_compare, tol


def _parse_sweep(data, n: int) -> SweepSpec:
    if not isinstance(data, dict):
        raise ConfigError("sweep: expected a table")
    unknown = set(data) - _SWEEP_KEYS
    if unknown:
        raise ConfigError(f"sweep: unknown keys {sorted(unknown)}")
    parameter = data.get("parameter", "g")
    if not isinstance(parameter, str):
        raise ConfigError("sweep.parameter: expected a string")
    if "start" not in data or "stop" not in data:
        raise ConfigError("sweep: start and stop are required")
    start = _number(data["start"], "sweep.start")
    stop = _number(data["stop"], "sweep.stop")
    if ("step" in data) == ("count" in data):
        raise ConfigError("sweep: give exactly one of step or count")
    if "count" in data:
        count = data["count"]
        if isinstance(count, bool) or not isinstance(count, int) or count < 1:
            raise ConfigError("sweep.count: expected a positive integer")
    else:
        step = _number(data["step"], "sweep.step")
        if step <= 0 or stop < start:
            raise ConfigError("sweep.step: must be positive with stop >= start")
        ratio = (stop - start) / step
        count = int(round(ratio)) + 1
        if abs(ratio - round(ratio)) > 1e-9 * max(1.0, abs(ratio)):
            raise ConfigError("sweep.step: does not divide the interval evenly")
    couplings = {}
    for key, attr in (("A_coupling", "a_coupling"), ("B_coupling", "b_coupling"),
                      ("C_coupling", "c_coupling")):
        couplings[attr] = _matrix(data[key], n, f"sweep.{key}") if key in data else None
    if all(v is None for v in couplings.values()):
        raise ConfigError("sweep: at least one of A_coupling, B_coupling, "
                          "C_coupling is required")
    return SweepSpec(parameter, start, stop, count, **couplings)


def parse_config_data(data: dict) -> RunConfig:
    """Validate a config tree; see the module docstring for the schema."""
    if not isinstance(data, dict):
        raise ConfigError("config root must be a table")
    unknown = set(data) - {"n", "A", "B", "C", "kappa", "options", "sweep"}
    if unknown:
        raise ConfigError(f"unknown top-level keys {sorted(unknown)}")
    if "n" not in data:
        raise ConfigError("n is required")
    n = data["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ConfigError("n: expected a positive integer")

    try:
        tol_base = default_tol()
    except ValueError as exc:
        # malformed QSYMM_TOL_OVERRIDE is a configuration problem
        raise ConfigError(str(exc)) from exc
    cutoff, oracle_cutoff, k_compare, tol = _parse_options(
        data.get("options", {}), tol_base)

    if "A" not in data or "C" not in data:
        raise ConfigError("A and C are required")
    a = _repair_symmetric(_matrix(data["A"], n, "A"), "A", tol)
    c = _repair_symmetric(_matrix(data["C"], n, "C"), "C", tol)
    b = _matrix(data["B"], n, "B") if "B" in data else np.zeros((n, n), dtype=complex)

    kappa = None
    if "kappa" in data:
        km = _matrix(data["kappa"], n, "kappa")
        if np.abs(km.imag).max() != 0.0:
            raise ConfigError("kappa: must be a real matrix")
        kappa = km.real
        defect = np.abs(kappa @ kappa - np.eye(n)).max()
        if defect > tol.rel * max(1.0, float(np.abs(kappa).max()) ** 2):
            raise ConfigError(f"kappa is not an involution: |kappa^2 - I| = {defect:.3e}")

    try:
        symbol = QuadraticSymbol(a, b, c, kappa=kappa)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    sweep = _parse_sweep(data["sweep"], n) if "sweep" in data else None
    echo = {
        "n": n,
        "A": symbol.a,
        "B": symbol.b,
        "C": symbol.c,
        **({"kappa": symbol.kappa} if symbol.kappa is not None else {}),
        "options": {
            "lattice_cutoff": cutoff,
            "oracle_cutoff": oracle_cutoff,
            "k_compare": k_compare,
            "tolerances": {f.name: getattr(tol, f.name)
                           for f in dataclasses.fields(Tolerances)},
        },
    }
    return RunConfig(symbol, cutoff, oracle_cutoff, k_compare, tol, sweep, echo)


def parse_config(path) -> RunConfig:
    """Load and validate a .toml or .json config file."""
    p = Path(path)
    suffix = p.suffix.lower()
    if suffix == ".toml":
        with open(p, "rb") as fh:
            try:
                data = tomllib.load(fh)
            except tomllib.TOMLDecodeError as exc:
                raise ConfigError(f"TOML parse error in {p}: {exc}") from exc
    elif suffix == ".json":
        with open(p, "r", encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"JSON parse error in {p}: {exc}") from exc
    else:
        raise ConfigError(f"unsupported config extension {p.suffix!r} "
                          "(use .toml or .json)")
    return parse_config_data(data)


def symbol_echo(symbol: QuadraticSymbol) -> dict:
    """Config-shaped tree for a symbol alone (round-trips via JSON)."""
    out = {"n": symbol.n, "A": symbol.a, "B": symbol.b, "C": symbol.c}
    if symbol.kappa is not None:
        out["kappa"] = symbol.kappa
    return out
