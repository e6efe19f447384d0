"""Run configuration: YAML ingestion, strict validation, stable hashing.

Configs are nested key-value files; unknown keys are rejected with the full
field path so sweep definitions cannot silently drift.  The canonical hash
covers the effective configuration (file plus command-line overrides), so
any change to any field changes the hash recorded in the output metadata.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from typing import Any, Optional

import yaml

from .dephasing import DephasingMethod
from .spectral import CutoffKind, SpectralDensity
from .thermo import ProbeConfig


class ConfigError(ValueError):
    """Invalid configuration; carries the offending field path."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


_CUTOFFS = {k.value: k for k in CutoffKind}
_METHODS = {m.value: m for m in DephasingMethod}


def _require_mapping(node: Any, path: str) -> dict:
    if not isinstance(node, dict):
        raise ConfigError(path, f"expected a mapping, got {type(node).__name__}")
    return node


def _check_keys(node: dict, allowed: set[str], path: str):
    unknown = set(node) - allowed
    if unknown:
        raise ConfigError(
            f"{path}.{sorted(unknown)[0]}" if path else sorted(unknown)[0],
            "unknown key",
        )


def _as_float(node: Any, path: str) -> float:
    if isinstance(node, bool) or not isinstance(node, (int, float)):
        raise ConfigError(path, f"expected a number, got {node!r}")
    value = float(node)
    if not math.isfinite(value):
        raise ConfigError(path, "must be finite")
    return value


def _as_int(node: Any, path: str) -> int:
    if isinstance(node, bool) or not isinstance(node, int):
        raise ConfigError(path, f"expected an integer, got {node!r}")
    return node


def _as_float_list(node: Any, path: str) -> list[float]:
    if not isinstance(node, list) or not node:
        raise ConfigError(path, "expected a non-empty list of numbers")
    return [_as_float(v, f"{path}[{i}]") for i, v in enumerate(node)]


def _parse_spectral(node: Any, path: str = "spectral") -> SpectralDensity:
    node = _require_mapping(node, path)
    _check_keys(node, {"s", "omega_c", "cutoff"}, path)
    if "s" not in node:
        raise ConfigError(f"{path}.s", "required")
    cutoff_name = node.get("cutoff", "exponential")
    if cutoff_name not in _CUTOFFS:
        raise ConfigError(f"{path}.cutoff", f"must be one of {sorted(_CUTOFFS)}")
    try:
        return SpectralDensity(
            s=_as_float(node["s"], f"{path}.s"),
            omega_c=_as_float(node.get("omega_c", 1.0), f"{path}.omega_c"),
            cutoff=_CUTOFFS[cutoff_name],
        )
    except ValueError as exc:
        raise ConfigError(path, str(exc)) from exc


def _parse_probe(node: Any, path: str = "probe") -> ProbeConfig:
    node = _require_mapping(node, path)
    _check_keys(node, {"coupling", "theta", "spin"}, path)
    if "coupling" not in node:
        raise ConfigError(f"{path}.coupling", "required")
    try:
        return ProbeConfig(
            coupling=_as_float(node["coupling"], f"{path}.coupling"),
            theta=_as_float(node.get("theta", math.pi / 2.0), f"{path}.theta"),
            spin=_as_float(node.get("spin", 0.5), f"{path}.spin"),
        )
    except ValueError as exc:
        raise ConfigError(path, str(exc)) from exc


def _parse_time_grid(node: Any, path: str = "times") -> list[float]:
    node = _require_mapping(node, path)
    _check_keys(node, {"start", "stop", "points", "spacing"}, path)
    for key in ("start", "stop", "points"):
        if key not in node:
            raise ConfigError(f"{path}.{key}", "required")
    start = _as_float(node["start"], f"{path}.start")
    stop = _as_float(node["stop"], f"{path}.stop")
    points = _as_int(node["points"], f"{path}.points")
    spacing = node.get("spacing", "log")
    if points < 2:
        raise ConfigError(f"{path}.points", "must be >= 2")
    if not 0.0 <= start < stop:
        raise ConfigError(path, "need 0 <= start < stop")
    if spacing == "log":
        if start <= 0.0:
            raise ConfigError(f"{path}.start", "must be > 0 for log spacing")
        ratio = (stop / start) ** (1.0 / (points - 1))
        return [start * ratio**i for i in range(points)]
    if spacing == "linear":
        step = (stop - start) / (points - 1)
        return [start + step * i for i in range(points)]
    raise ConfigError(f"{path}.spacing", "must be 'log' or 'linear'")


def _parse_bracket(node: Any, path: str = "bracket") -> tuple[float, float]:
    node = _require_mapping(node, path)
    _check_keys(node, {"lo", "hi"}, path)
    lo = _as_float(node.get("lo", 1e-4), f"{path}.lo")
    hi = _as_float(node.get("hi", 1e3), f"{path}.hi")
    if not 0.0 < lo < hi:
        raise ConfigError(path, "need 0 < lo < hi")
    return (lo, hi)


@dataclass(frozen=True)
class KernelScanConfig:
    """Config for the `dephasing` and `tradeoff` subcommands."""

    sd: SpectralDensity
    probe: ProbeConfig
    temperatures: list[float]  # units of omega_c
    times: list[float]  # t * omega_c
    method: DephasingMethod
    plot: bool
    seed: int
    threads: int


@dataclass(frozen=True)
class TimeOptConfig:
    """Config for the `timeopt` subcommand (grid sweep)."""

    sds: list[SpectralDensity]
    temperatures: list[float]
    probes: list[ProbeConfig]
    bracket: tuple[float, float]
    omega_c: float
    plot: bool
    seed: int
    threads: int


@dataclass(frozen=True)
class ChannelConfig:
    """Config for the `channel` subcommand."""

    sd: SpectralDensity
    temperature: float
    spins: list[float]
    couplings: list[float]
    bracket: tuple[float, float]
    grid_points: int
    restarts: int
    plot: bool
    seed: int
    threads: int


def _common(node: dict, seed_override, threads_override, plot_override):
    seed = node.get("seed", 1234)
    threads = node.get("threads", 1)
    plot = node.get("plot", False)
    if not isinstance(plot, bool):
        raise ConfigError("plot", "expected true/false")
    seed = _as_int(seed, "seed")
    threads = _as_int(threads, "threads")
    if seed_override is not None:
        seed = seed_override
    if threads_override is not None:
        threads = threads_override
    if plot_override:
        plot = True
    if threads < 1:
        raise ConfigError("threads", "must be >= 1")
    if seed < 0:
        raise ConfigError("seed", "must be >= 0")
    return seed, threads, plot


def parse_kernel_scan(
    raw: Any, seed=None, threads=None, plot=False
) -> KernelScanConfig:
    node = _require_mapping(raw, "")
    _check_keys(
        node,
        {"spectral", "probe", "temperatures", "times", "method", "plot", "seed", "threads"},
        "",
    )
    for key in ("spectral", "temperatures", "times"):
        if key not in node:
            raise ConfigError(key, "required")
    method_name = node.get("method", "auto")
    if method_name not in _METHODS:
        raise ConfigError("method", f"must be one of {sorted(_METHODS)}")
    temperatures = _as_float_list(node["temperatures"], "temperatures")
    for i, T in enumerate(temperatures):
        if T <= 0.0:
            raise ConfigError(f"temperatures[{i}]", "must be > 0")
    seed_v, threads_v, plot_v = _common(node, seed, threads, plot)
    probe = _parse_probe(node["probe"]) if "probe" in node else ProbeConfig(coupling=1.0)
    return KernelScanConfig(
        sd=_parse_spectral(node["spectral"]),
        probe=probe,
        temperatures=temperatures,
        times=_parse_time_grid(node["times"]),
        method=_METHODS[method_name],
        plot=plot_v,
        seed=seed_v,
        threads=threads_v,
    )


def parse_timeopt(raw: Any, seed=None, threads=None, plot=False) -> TimeOptConfig:
    node = _require_mapping(raw, "")
    _check_keys(node, {"grid", "omega_c", "theta", "bracket", "plot", "seed", "threads"}, "")
    if "grid" not in node:
        raise ConfigError("grid", "required")
    grid = _require_mapping(node["grid"], "grid")
    _check_keys(grid, {"s", "cutoff", "temperature", "coupling", "spin"}, "grid")
    for key in ("s", "temperature", "coupling"):
        if key not in grid:
            raise ConfigError(f"grid.{key}", "required")
    omega_c = _as_float(node.get("omega_c", 1.0), "omega_c")
    theta = _as_float(node.get("theta", math.pi / 2.0), "theta")
    cutoffs = grid.get("cutoff", ["exponential"])
    if not isinstance(cutoffs, list) or not cutoffs:
        raise ConfigError("grid.cutoff", "expected a non-empty list")
    for i, name in enumerate(cutoffs):
        if name not in _CUTOFFS:
            raise ConfigError(f"grid.cutoff[{i}]", f"must be one of {sorted(_CUTOFFS)}")
    spins = grid.get("spin", [0.5])
    try:
        sds = [
            SpectralDensity(s=s, omega_c=omega_c, cutoff=_CUTOFFS[name])
            for s in _as_float_list(grid["s"], "grid.s")
            for name in cutoffs
        ]
        probes = [
            ProbeConfig(coupling=c, theta=theta, spin=j)
            for c in _as_float_list(grid["coupling"], "grid.coupling")
            for j in _as_float_list(spins, "grid.spin")
        ]
    except ValueError as exc:
        raise ConfigError("grid", str(exc)) from exc
    temperatures = _as_float_list(grid["temperature"], "grid.temperature")
    for i, T in enumerate(temperatures):
        if T <= 0.0:
            raise ConfigError(f"grid.temperature[{i}]", "must be > 0")
    bracket = _parse_bracket(node.get("bracket", {}))
    seed_v, threads_v, plot_v = _common(node, seed, threads, plot)
    return TimeOptConfig(
        sds=sds,
        temperatures=[T * omega_c for T in temperatures],
        probes=probes,
        bracket=(bracket[0] / omega_c, bracket[1] / omega_c),
        omega_c=omega_c,
        plot=plot_v,
        seed=seed_v,
        threads=threads_v,
    )


def parse_channel(raw: Any, seed=None, threads=None, plot=False) -> ChannelConfig:
    node = _require_mapping(raw, "")
    _check_keys(
        node,
        {
            "spectral",
            "temperature",
            "spins",
            "couplings",
            "bracket",
            "grid_points",
            "restarts",
            "plot",
            "seed",
            "threads",
        },
        "",
    )
    for key in ("spectral", "temperature", "spins", "couplings"):
        if key not in node:
            raise ConfigError(key, "required")
    sd = _parse_spectral(node["spectral"])
    temperature = _as_float(node["temperature"], "temperature")
    if temperature <= 0.0:
        raise ConfigError("temperature", "must be > 0")
    spins = _as_float_list(node["spins"], "spins")
    for i, j in enumerate(spins):
        two_j = 2.0 * j
        if not (two_j >= 1.0 and abs(two_j - round(two_j)) < 1e-12):
            raise ConfigError(f"spins[{i}]", "must be a positive half-integer")
        if two_j + 1 > 16:
            raise ConfigError(f"spins[{i}]", "dimension 2j+1 must be <= 16")
    couplings = _as_float_list(node["couplings"], "couplings")
    for i, c in enumerate(couplings):
        if c <= 0.0:
            raise ConfigError(f"couplings[{i}]", "must be > 0")
    bracket = _parse_bracket(node.get("bracket", {}))
    grid_points = _as_int(node.get("grid_points", 48), "grid_points")
    restarts = _as_int(node.get("restarts", 5), "restarts")
    if grid_points < 8:
        raise ConfigError("grid_points", "must be >= 8")
    if restarts < 0:
        raise ConfigError("restarts", "must be >= 0")
    seed_v, threads_v, plot_v = _common(node, seed, threads, plot)
    return ChannelConfig(
        sd=sd,
        temperature=temperature * sd.omega_c,
        spins=spins,
        couplings=couplings,
        bracket=(bracket[0] / sd.omega_c, bracket[1] / sd.omega_c),
        grid_points=grid_points,
        restarts=restarts,
        plot=plot_v,
        seed=seed_v,
        threads=threads_v,
    )


def load_config_file(path: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return yaml.safe_load(fh)
    except FileNotFoundError as exc:
        raise ConfigError("config", f"file not found: {path}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError("config", f"invalid YAML: {exc}") from exc


def config_hash(raw: Any, overrides: Optional[dict] = None) -> str:
    """SHA-256 over the canonical JSON of the effective configuration."""
    effective = {"config": raw, "overrides": overrides or {}}
    blob = json.dumps(effective, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()
