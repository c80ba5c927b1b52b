"""Run configuration: a JSON document with nested blocks.

Physical quantities are either plain numbers (SI) or strings/objects carrying
a unit, e.g. ``"1.7e5 kN/m"`` or ``{"value": 6.0e3, "unit": "kN·s/m"}``.
Everything is converted to SI at parse time.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .analysis.contours import DEFAULT_LEVELS, Metric, Region
from .devices import DeviceSpec
from .errors import ConfigError

_STIFFNESS = {"N/m": 1.0, "kN/m": 1e3}
_DAMPING = {"N·s/m": 1.0, "kN·s/m": 1e3}
_MASS = {"kg": 1.0}
_ALIASES = {"N*s/m": "N·s/m", "Ns/m": "N·s/m", "N.s/m": "N·s/m",
            "kN*s/m": "kN·s/m", "kNs/m": "kN·s/m", "kN.s/m": "kN·s/m"}
FORMATS = ("csv", "json", "svg", "all")


def parse_quantity(value, units: dict, what: str) -> float:
    if isinstance(value, bool):
        raise ConfigError(f"{what}: expected a number, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, dict):
        if "value" not in value:
            raise ConfigError(f"{what}: object form needs 'value'")
        number, unit = value["value"], value.get("unit", "")
    elif isinstance(value, str):
        parts = value.split(None, 1)
        number, unit = parts[0], parts[1].strip() if len(parts) > 1 else ""
    else:
        raise ConfigError(f"{what}: cannot parse {value!r}")
    try:
        number = float(number)
    except (TypeError, ValueError):
        raise ConfigError(f"{what}: {number!r} is not a number") from None
    if not unit:
        return number
    unit = _ALIASES.get(unit, unit)
    if unit not in units:
        raise ConfigError(f"{what}: unit {unit!r} not allowed here (use one of {sorted(units)})")
    return number * units[unit]


def parse_device(block: dict) -> DeviceSpec:
    if not isinstance(block, dict):
        raise ConfigError("device block must be an object")
    layout = block.get("layout")
    name = str(block.get("name", ""))
    if layout == "rational":
        return DeviceSpec("rational", name=name, num=tuple(block.get("num", ())),
                          den=tuple(block.get("den", ())))
    if "k" not in block:
        raise ConfigError("device block needs a stiffness 'k'")
    return DeviceSpec(
        layout=layout,
        k=parse_quantity(block["k"], _STIFFNESS, "k"),
        c=parse_quantity(block.get("c", 0.0), _DAMPING, "c"),
        b=parse_quantity(block.get("b", 0.0), _MASS, "b"),
        name=name,
    )


def _int_list(values, what):
    if isinstance(values, int) and not isinstance(values, bool):
        values = [values]
    if not isinstance(values, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in values):
        raise ConfigError(f"{what} must be a list of integers")
    return values


def _complex(v, what):
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    if isinstance(v, list) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, str):
        try:
            return complex(v.replace(" ", ""))
        except ValueError:
            pass
    raise ConfigError(f"{what}: cannot read complex value {v!r}")


@dataclass
class GridConfig:
    region: Region
    resolution: tuple = (400, 400)
    metric: Metric = Metric.MAX_F_ALL_I
    n_max: int = 200
    levels: list | None = None
    i_list: list = field(default_factory=lambda: [1])

    def level_list(self):
        return list(self.levels) if self.levels is not None else DEFAULT_LEVELS[self.metric]


@dataclass
class RunConfig:
    raw: dict
    mass: float | None = None
    devices: list = field(default_factory=list)
    N_list: list = field(default_factory=list)
    i_list: list = field(default_factory=lambda: [1])
    freq_range: tuple | None = None
    freq_relative: bool = True
    freq_points: int = 2000
    grid: GridConfig | None = None
    out_format: str = "all"
    prefix: str = "out/run"
    h_points: list = field(default_factory=list)
    i_max: int = 10
    omega1: float | None = None

    @property
    def device(self) -> DeviceSpec:
        if len(self.devices) != 1:
            raise ConfigError(f"this command needs exactly one device, config has {len(self.devices)}")
        return self.devices[0]

    def require_mass(self):
        if self.mass is None:
            raise ConfigError("config needs 'mass'")
        return self.mass


def _levels(spec):
    if spec is None:
        return None
    if isinstance(spec, dict):
        try:
            start, stop, step = float(spec["start"]), float(spec["stop"]), float(spec["step"])
        except (KeyError, TypeError, ValueError):
            raise ConfigError("levels object needs numeric start, stop, step") from None
        if step <= 0 or stop < start:
            raise ConfigError("levels need step > 0 and stop >= start")
        n = int(round((stop - start) / step)) + 1
        return [round(start + k * step, 12) for k in range(n)]
    if isinstance(spec, list) and all(isinstance(v, (int, float)) for v in spec):
        return [float(v) for v in spec]
    raise ConfigError("levels must be a list of ln(gamma) values or {start, stop, step}")


def parse_grid(block: dict) -> GridConfig:
    try:
        region = Region(*[float(v) for v in block["region"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"grid.region must be [re_min, re_max, im_min, im_max]: {exc}") from None
    res = block.get("resolution", [400, 400])
    if isinstance(res, int):
        res = [res, res]
    if not (isinstance(res, list) and len(res) == 2 and all(isinstance(r, int) and r >= 2 for r in res)):
        raise ConfigError("grid.resolution must be [nx, ny] with both >= 2")
    try:
        metric = Metric(block.get("metric", "MaxF_allI"))
    except ValueError:
        raise ConfigError(f"unknown metric {block.get('metric')!r}") from None
    n_max = block.get("n_max", 200)
    if not isinstance(n_max, int) or n_max < 1:
        raise ConfigError("grid.n_max must be a positive integer")
    i_list = _int_list(block.get("i", [1]), "grid.i")
    if not i_list or any(not 1 <= i <= n_max for i in i_list):
        raise ConfigError("grid.i entries must lie in 1..n_max")
    return GridConfig(region, tuple(res), metric, n_max, _levels(block.get("levels")), i_list)


def parse_config(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    cfg = RunConfig(raw=data)
    if "mass" in data:
        cfg.mass = parse_quantity(data["mass"], _MASS, "mass")
        if not cfg.mass > 0:
            raise ConfigError("mass must be positive")
    if "device" in data:
        cfg.devices = [parse_device(data["device"])]
    elif "devices" in data:
        if not isinstance(data["devices"], list):
            raise ConfigError("devices must be a list")
        cfg.devices = [parse_device(b) for b in data["devices"]]

    chain = data.get("chain", {})
    if chain:
        cfg.N_list = _int_list(chain.get("N", []), "chain.N")
        cfg.i_list = _int_list(chain.get("i", [1]), "chain.i")
        if any(n < 1 for n in cfg.N_list):
            raise ConfigError("chain.N entries must be >= 1")

    freq = data.get("frequency", {})
    if freq:
        rng = freq.get("range")
        if rng is not None:
            if not (isinstance(rng, list) and len(rng) == 2 and 0 < float(rng[0]) < float(rng[1])):
                raise ConfigError("frequency.range must be [lo, hi] with 0 < lo < hi")
            cfg.freq_range = (float(rng[0]), float(rng[1]))
        cfg.freq_relative = bool(freq.get("relative", cfg.freq_range is None))
        cfg.freq_points = int(freq.get("points", 2000))
        if cfg.freq_points < 2:
            raise ConfigError("frequency.points must be >= 2")
        if "omega1" in freq:
            cfg.omega1 = float(freq["omega1"])

    if "grid" in data:
        cfg.grid = parse_grid(data["grid"])

    out = data.get("output", {})
    cfg.out_format = out.get("format", "all")
    if cfg.out_format not in FORMATS:
        raise ConfigError(f"output.format must be one of {FORMATS}")
    cfg.prefix = str(out.get("prefix", cfg.prefix))

    pts = data.get("points", {})
    if pts:
        cfg.h_points = [_complex(v, "points.h") for v in pts.get("h", [])]
        for v in pts.get("g", []):
            g = _complex(v, "points.g")
            if g == 0:
                raise ConfigError("points.g = 0 corresponds to h = infinity")
            cfg.h_points.append(1 / g)
        cfg.i_max = int(pts.get("i_max", cfg.i_max))
        if cfg.i_max < 1:
            raise ConfigError("points.i_max must be >= 1")
    return cfg


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    return parse_config(data)
