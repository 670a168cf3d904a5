"""Plain-text run configuration: parsing, validation, rendering, builders.

The format is line oriented and case sensitive:

    # comment (runs to end of line)
    [mesh]
    x_left = -6.0
    x_right = 6.0
    n = 1000

Sections and keys come from a fixed schema; unknown names, malformed lines,
and duplicate keys are parse errors that name the offending line(s). Value
constraints (positivity, ranges, solver/initial compatibility) are validation
errors that name the key as "[section] key". parse + render round-trip
exactly because floats are rendered with shortest round-trip precision.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .errors import ConfigParseError, ConfigValidationError
from .fronttrack import FrontState, barenblatt_split_front
from .mesh_fem import FeField, Mesh1D, build_uniform_mesh
from .model import LotkaVolterra, ModelParams, gaussian_bump_initial
from .oracle import (
    BarenblattProfile,
    InterfaceTrajectory,
    barenblatt,
    explicit_segregated_fields,
    support_radius,
)
from .scheme import State, TimeStepping
from .snapshot_io import read_snapshot_csv

SOLVERS = ("eulerian", "fronttrack")
INITIAL_KINDS = ("gaussian-bumps", "barenblatt-split", "barenblatt-pme", "file")


@dataclass(frozen=True)
class SpeciesConfig:
    """Per-species coefficients: diffusion a, drift b, linear diffusion c,
    growth alpha, competition beta1 (against species 1) and beta2."""

    a: float
    b: float = 0.0
    c: float = 0.0
    alpha: float = 0.0
    beta1: float = 0.0
    beta2: float = 0.0


@dataclass(frozen=True)
class GaussianBumps:
    center1: float
    center2: float
    width: float


@dataclass(frozen=True)
class BarenblattSplit:
    x0: float
    t_star: float
    nodes_per_side: int = 150
    margin: float = 0.5


@dataclass(frozen=True)
class BarenblattPme:
    """Single-species profile: u1 = B(x, 0), u2 = 0."""

    t_star: float


@dataclass(frozen=True)
class FromFile:
    path: str


InitialSpec = GaussianBumps | BarenblattSplit | BarenblattPme | FromFile


@dataclass(frozen=True)
class SimulationConfig:
    x_left: float
    x_right: float
    n: int
    tau: float
    t_final: float
    tol: float
    k_max: int
    delta: float
    epsilon: float
    species1: SpeciesConfig
    species2: SpeciesConfig
    initial: InitialSpec
    snapshot_times: tuple[float, ...]
    solver: str

    def mesh(self) -> Mesh1D:
        return build_uniform_mesh(self.x_left, self.x_right, self.n)

    def time_stepping(self) -> TimeStepping:
        return TimeStepping(
            tau=self.tau, t_final=self.t_final, tol=self.tol, k_max=self.k_max
        )

    def model_params(self) -> ModelParams:
        s1, s2 = self.species1, self.species2
        return ModelParams(
            a=(s1.a, s2.a),
            b=(s1.b, s2.b),
            c=(s1.c, s2.c),
            delta=self.delta,
            epsilon=self.epsilon,
            lv=LotkaVolterra(
                alpha=(s1.alpha, s2.alpha),
                beta=((s1.beta1, s1.beta2), (s2.beta1, s2.beta2)),
            ),
        )

    def initial_state(self) -> State:
        """Starting fields for the Eulerian solver."""
        mesh = self.mesh()
        init = self.initial
        if isinstance(init, GaussianBumps):
            u1 = gaussian_bump_initial(mesh, init.center1, init.width)
            u2 = gaussian_bump_initial(mesh, init.center2, init.width)
        elif isinstance(init, BarenblattSplit):
            traj = InterfaceTrajectory(x0=init.x0, t_star=init.t_star)
            u1, u2 = explicit_segregated_fields(
                mesh, 0.0, traj, BarenblattProfile(init.t_star)
            )
        elif isinstance(init, BarenblattPme):
            u1 = FeField(mesh, barenblatt(mesh.nodes, 0.0, BarenblattProfile(init.t_star)))
            u2 = FeField(mesh, np.zeros(mesh.n_nodes))
        elif isinstance(init, FromFile):
            x, v1, v2 = read_snapshot_csv(init.path)
            if x.size != mesh.n_nodes or not np.allclose(x, mesh.nodes, atol=1e-9):
                raise ConfigValidationError(
                    f"[initial] path: nodes in {init.path} do not match the "
                    f"configured mesh"
                )
            u1 = FeField(mesh, v1)
            u2 = FeField(mesh, v2)
        else:  # pragma: no cover - schema keeps this unreachable
            raise ConfigValidationError(f"[initial] kind: unsupported {init!r}")
        return State(t=0.0, u1=u1, u2=u2)

    def initial_front(self) -> FrontState:
        """Starting state for the front tracker (split-profile initial only)."""
        init = self.initial
        if not isinstance(init, BarenblattSplit):
            raise ConfigValidationError(
                "[initial] kind: the front tracker needs kind = barenblatt-split"
            )
        traj = InterfaceTrajectory(x0=init.x0, t_star=init.t_star)
        return barenblatt_split_front(
            traj, n_per_side=init.nodes_per_side, margin=init.margin
        )


_SCHEMA: dict[str, set[str]] = {
    "mesh": {"x_left", "x_right", "n"},
    "time": {"tau", "t_final", "tol", "k_max"},
    "model": {"delta", "epsilon"},
    "species.1": {"a", "b", "c", "alpha", "beta1", "beta2"},
    "species.2": {"a", "b", "c", "alpha", "beta1", "beta2"},
    "initial": {
        "kind",
        "center1",
        "center2",
        "width",
        "x0",
        "t_star",
        "nodes_per_side",
        "margin",
        "path",
    },
    "output": {"snapshot_times", "solver"},
}

_KIND_KEYS: dict[str, set[str]] = {
    "gaussian-bumps": {"center1", "center2", "width"},
    "barenblatt-split": {"x0", "t_star", "nodes_per_side", "margin"},
    "barenblatt-pme": {"t_star"},
    "file": {"path"},
}

_KIND_OPTIONAL: dict[str, set[str]] = {
    "gaussian-bumps": set(),
    "barenblatt-split": {"nodes_per_side", "margin"},
    "barenblatt-pme": set(),
    "file": set(),
}

_INT_KEYS = {("mesh", "n"), ("time", "k_max"), ("initial", "nodes_per_side")}
_STR_KEYS = {("initial", "kind"), ("initial", "path"), ("output", "solver")}
_LIST_KEYS = {("output", "snapshot_times")}


def _parse_entries(text: str) -> dict[tuple[str, str], tuple[str, int]]:
    entries: dict[tuple[str, str], tuple[str, int]] = {}
    section: str | None = None
    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not (line.endswith("]") and len(line) > 2):
                raise ConfigParseError(f"line {line_no}: malformed section header {raw.strip()!r}")
            name = line[1:-1].strip()
            if name not in _SCHEMA:
                raise ConfigParseError(f"line {line_no}: unknown section [{name}]")
            section = name
            continue
        if "=" not in line:
            raise ConfigParseError(f"line {line_no}: expected 'key = value', got {raw.strip()!r}")
        if section is None:
            raise ConfigParseError(f"line {line_no}: key outside any section")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _SCHEMA[section]:
            raise ConfigParseError(f"line {line_no}: unknown key '{key}' in [{section}]")
        if not value:
            raise ConfigParseError(f"line {line_no}: empty value for '{key}'")
        if (section, key) in entries:
            raise ConfigParseError(
                f"duplicate key '{key}' in [{section}] "
                f"(lines {entries[(section, key)][1]} and {line_no})"
            )
        entries[(section, key)] = (value, line_no)
    return entries


class _Entries:
    def __init__(self, entries: dict[tuple[str, str], tuple[str, int]]):
        self.entries = entries
        self.used: set[tuple[str, str]] = set()

    def _convert(self, section: str, key: str, value: str, line_no: int):
        if (section, key) in _STR_KEYS:
            return value
        if (section, key) in _LIST_KEYS:
            parts = [p.strip() for p in value.split(",")]
            try:
                return tuple(float(p) for p in parts if p)
            except ValueError:
                raise ConfigParseError(
                    f"line {line_no}: '{key}' must be comma-separated numbers, got {value!r}"
                ) from None
        if (section, key) in _INT_KEYS:
            try:
                return int(value)
            except ValueError:
                raise ConfigParseError(
                    f"line {line_no}: '{key}' must be an integer, got {value!r}"
                ) from None
        try:
            return float(value)
        except ValueError:
            raise ConfigParseError(
                f"line {line_no}: '{key}' must be a number, got {value!r}"
            ) from None

    def get(self, section: str, key: str, default=None, required: bool = False):
        item = self.entries.get((section, key))
        if item is None:
            if required:
                raise ConfigValidationError(f"[{section}] {key} is required")
            return default
        self.used.add((section, key))
        return self._convert(section, key, item[0], item[1])

    def unused(self) -> list[tuple[str, str, int]]:
        return [
            (s, k, line)
            for (s, k), (_v, line) in self.entries.items()
            if (s, k) not in self.used
        ]


def _build_initial(e: _Entries) -> InitialSpec:
    kind = e.get("initial", "kind", required=True)
    if kind not in INITIAL_KINDS:
        raise ConfigValidationError(
            f"[initial] kind must be one of {', '.join(INITIAL_KINDS)}, got {kind!r}"
        )
    allowed = _KIND_KEYS[kind]
    optional = _KIND_OPTIONAL[kind]
    for sec, key in list(e.entries):
        if sec == "initial" and key != "kind" and key not in allowed:
            raise ConfigValidationError(
                f"[initial] {key} is not allowed for kind = {kind}"
            )
    def need(key):
        return e.get("initial", key, required=key not in optional)

    if kind == "gaussian-bumps":
        return GaussianBumps(
            center1=need("center1"), center2=need("center2"), width=need("width")
        )
    if kind == "barenblatt-split":
        spec = BarenblattSplit(x0=need("x0"), t_star=need("t_star"))
        nps = e.get("initial", "nodes_per_side")
        if nps is not None:
            spec = replace(spec, nodes_per_side=nps)
        margin = e.get("initial", "margin")
        if margin is not None:
            spec = replace(spec, margin=margin)
        return spec
    if kind == "barenblatt-pme":
        return BarenblattPme(t_star=need("t_star"))
    return FromFile(path=need("path"))


def validate_config(cfg: SimulationConfig) -> None:
    """Raise ConfigValidationError (with '[section] key' paths) on bad values."""
    if not (np.isfinite(cfg.x_left) and np.isfinite(cfg.x_right)) or not (
        cfg.x_left < cfg.x_right
    ):
        raise ConfigValidationError(
            f"[mesh] x_left/x_right must satisfy x_left < x_right, "
            f"got {cfg.x_left} and {cfg.x_right}"
        )
    if cfg.n < 2:
        raise ConfigValidationError(f"[mesh] n must be >= 2, got {cfg.n}")
    if not (np.isfinite(cfg.tau) and cfg.tau > 0):
        raise ConfigValidationError(f"[time] tau must be > 0, got {cfg.tau}")
    if not (np.isfinite(cfg.t_final) and cfg.t_final >= 0):
        raise ConfigValidationError(f"[time] t_final must be >= 0, got {cfg.t_final}")
    if not (np.isfinite(cfg.tol) and cfg.tol > 0):
        raise ConfigValidationError(f"[time] tol must be > 0, got {cfg.tol}")
    if cfg.k_max < 1:
        raise ConfigValidationError(f"[time] k_max must be >= 1, got {cfg.k_max}")
    if not (np.isfinite(cfg.delta) and cfg.delta >= 0):
        raise ConfigValidationError(f"[model] delta must be >= 0, got {cfg.delta}")
    if not (np.isfinite(cfg.epsilon) and cfg.epsilon > 0):
        raise ConfigValidationError(f"[model] epsilon must be > 0, got {cfg.epsilon}")
    for idx, sp in ((1, cfg.species1), (2, cfg.species2)):
        for key in ("a", "c"):
            v = getattr(sp, key)
            if not (np.isfinite(v) and v >= 0):
                raise ConfigValidationError(
                    f"[species.{idx}] {key} must be finite and >= 0, got {v}"
                )
        for key in ("b", "alpha", "beta1", "beta2"):
            v = getattr(sp, key)
            if not np.isfinite(v):
                raise ConfigValidationError(
                    f"[species.{idx}] {key} must be finite, got {v}"
                )
    if cfg.solver not in SOLVERS:
        raise ConfigValidationError(
            f"[output] solver must be one of {', '.join(SOLVERS)}, got {cfg.solver!r}"
        )
    for t_s in cfg.snapshot_times:
        if not (0.0 <= t_s <= cfg.t_final + 1e-12 * max(1.0, cfg.t_final)):
            raise ConfigValidationError(
                f"[output] snapshot_times entry {t_s} outside [0, {cfg.t_final}]"
            )
    init = cfg.initial
    if isinstance(init, GaussianBumps):
        if not (np.isfinite(init.width) and init.width > 0):
            raise ConfigValidationError(f"[initial] width must be > 0, got {init.width}")
        for key in ("center1", "center2"):
            if not np.isfinite(getattr(init, key)):
                raise ConfigValidationError(f"[initial] {key} must be finite")
    elif isinstance(init, (BarenblattSplit, BarenblattPme)):
        if not (np.isfinite(init.t_star) and init.t_star > 0):
            raise ConfigValidationError(
                f"[initial] t_star must be > 0, got {init.t_star}"
            )
        if isinstance(init, BarenblattSplit):
            r0 = support_radius(0.0, BarenblattProfile(init.t_star))
            if not (np.isfinite(init.x0) and abs(init.x0) < r0):
                raise ConfigValidationError(
                    f"[initial] x0 must satisfy |x0| < {r0}, got {init.x0}"
                )
            if init.nodes_per_side < 3:
                raise ConfigValidationError(
                    f"[initial] nodes_per_side must be >= 3, got {init.nodes_per_side}"
                )
            if not (0 < init.margin < r0 - abs(init.x0)):
                raise ConfigValidationError(
                    f"[initial] margin must lie in (0, {r0 - abs(init.x0)}), "
                    f"got {init.margin}"
                )
    elif isinstance(init, FromFile):
        if not init.path:
            raise ConfigValidationError("[initial] path must not be empty")
    if cfg.solver == "fronttrack" and not isinstance(init, BarenblattSplit):
        raise ConfigValidationError(
            "[output] solver = fronttrack requires [initial] kind = barenblatt-split"
        )


def parse_config(text: str) -> SimulationConfig:
    """Parse and validate a config; parse errors carry line numbers."""
    e = _Entries(_parse_entries(text))
    t_final = e.get("time", "t_final", required=True)
    snapshot_times = e.get("output", "snapshot_times")
    if snapshot_times is None:
        snapshot_times = (t_final,)
    cfg = SimulationConfig(
        x_left=e.get("mesh", "x_left", required=True),
        x_right=e.get("mesh", "x_right", required=True),
        n=e.get("mesh", "n", required=True),
        tau=e.get("time", "tau", required=True),
        t_final=t_final,
        tol=e.get("time", "tol", default=1e-4),
        k_max=e.get("time", "k_max", default=100),
        delta=e.get("model", "delta", default=0.0),
        epsilon=e.get("model", "epsilon", default=1e-3),
        species1=SpeciesConfig(
            a=e.get("species.1", "a", required=True),
            b=e.get("species.1", "b", default=0.0),
            c=e.get("species.1", "c", default=0.0),
            alpha=e.get("species.1", "alpha", default=0.0),
            beta1=e.get("species.1", "beta1", default=0.0),
            beta2=e.get("species.1", "beta2", default=0.0),
        ),
        species2=SpeciesConfig(
            a=e.get("species.2", "a", required=True),
            b=e.get("species.2", "b", default=0.0),
            c=e.get("species.2", "c", default=0.0),
            alpha=e.get("species.2", "alpha", default=0.0),
            beta1=e.get("species.2", "beta1", default=0.0),
            beta2=e.get("species.2", "beta2", default=0.0),
        ),
        initial=_build_initial(e),
        snapshot_times=tuple(snapshot_times),
        solver=e.get("output", "solver", required=True),
    )
    validate_config(cfg)
    return cfg


def parse_config_file(path: str | Path) -> SimulationConfig:
    return parse_config(Path(path).read_text())


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render_config(cfg: SimulationConfig) -> str:
    """Deterministic text form; parse_config(render_config(cfg)) == cfg."""
    lines = [
        "[mesh]",
        f"x_left = {_fmt(cfg.x_left)}",
        f"x_right = {_fmt(cfg.x_right)}",
        f"n = {cfg.n}",
        "",
        "[time]",
        f"tau = {_fmt(cfg.tau)}",
        f"t_final = {_fmt(cfg.t_final)}",
        f"tol = {_fmt(cfg.tol)}",
        f"k_max = {cfg.k_max}",
        "",
        "[model]",
        f"delta = {_fmt(cfg.delta)}",
        f"epsilon = {_fmt(cfg.epsilon)}",
    ]
    for idx, sp in ((1, cfg.species1), (2, cfg.species2)):
        lines += [
            "",
            f"[species.{idx}]",
            f"a = {_fmt(sp.a)}",
            f"b = {_fmt(sp.b)}",
            f"c = {_fmt(sp.c)}",
            f"alpha = {_fmt(sp.alpha)}",
            f"beta1 = {_fmt(sp.beta1)}",
            f"beta2 = {_fmt(sp.beta2)}",
        ]
    init = cfg.initial
    lines += ["", "[initial]"]
    if isinstance(init, GaussianBumps):
        lines += [
            "kind = gaussian-bumps",
            f"center1 = {_fmt(init.center1)}",
            f"center2 = {_fmt(init.center2)}",
            f"width = {_fmt(init.width)}",
        ]
    elif isinstance(init, BarenblattSplit):
        lines += [
            "kind = barenblatt-split",
            f"x0 = {_fmt(init.x0)}",
            f"t_star = {_fmt(init.t_star)}",
            f"nodes_per_side = {init.nodes_per_side}",
            f"margin = {_fmt(init.margin)}",
        ]
    elif isinstance(init, BarenblattPme):
        lines += ["kind = barenblatt-pme", f"t_star = {_fmt(init.t_star)}"]
    else:
        lines += ["kind = file", f"path = {init.path}"]
    lines += [
        "",
        "[output]",
        f"snapshot_times = {', '.join(_fmt(t) for t in cfg.snapshot_times)}",
        f"solver = {cfg.solver}",
        "",
    ]
    return "\n".join(lines)
