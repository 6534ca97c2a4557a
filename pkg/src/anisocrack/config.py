"""JSON run configuration for the command-line front end.

Top-level blocks (dotted keys such as ``"material.1"`` are accepted as an
alternative to nesting)::

    {
      "material":   {"1": MATERIAL, "2": MATERIAL},
      "bimaterial": {"direct": {"H11": .., "H22": .., "alpha": .., ...}},
      "load":       {"mode3": {"sym": LOAD, "skew": LOAD},
                     "plane": {"sym": [LOAD, LOAD], "skew": [LOAD, LOAD]}},
      "numerics":   {"panels": 64, "order": 8, "scale": 1.0, "points": 200,
                     "method": "auto"},
      "output":     {"dir": "out", "x_min": 0.001, "x_max": 100.0},
      "sweep":      {"ratios": [..], "alpha_min": .., "alpha_max": .., "count": ..}
    }

``MATERIAL`` is one of ``{"stiffness": 6x6}``, ``{"compliance": 6x6}``,
``{"isotropic": {"E": .., "nu": ..}}`` or ``{"orthotropic": {...}}``, with an
optional ``"id"`` and in-plane rotation ``"rotate"`` in radians.

``LOAD`` is ``{"type": "line", "F": .., "a": ..}``, ``"patch"`` (``value``,
``start``, ``end``), ``"gaussian"`` (``total``, ``center``, ``width``),
``"tabulated"`` (``x``, ``y``), ``"zero"``, or a list of these (summed).
A line force of intensity ``F`` enters a symmetric part as ``-F delta`` and a
skew part as ``-2F delta``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .bimaterial import BimaterialParams
from .errors import ConfigError, CrackError
from .materials import MaterialSpec
from .singular_ops import HalfLineFunction, QuadratureScheme

__all__ = ["RunConfig", "LineForceInfo", "load_config", "parse_config"]

_TOP = {"material", "bimaterial", "load", "numerics", "output", "sweep"}
_DIRECT_KEYS = {"H11", "H22", "alpha", "beta", "delta1", "delta2", "lambda", "gamma", "H33", "nu"}
_METHODS = {"auto", "closed-form", "numeric"}


@dataclass(frozen=True)
class LineForceInfo:
    """Line-force content of one load part: total intensity and offset."""

    F: float
    a: float


@dataclass(frozen=True, eq=False)
class LoadPart:
    """A parsed load part with its line-force summary (``None`` if not purely a line force)."""

    function: HalfLineFunction
    line: LineForceInfo | None


@dataclass(frozen=True, eq=False)
class RunConfig:
    materials: tuple = ()
    direct: dict | None = None
    mode3: dict | None = None
    plane: dict | None = None
    scheme: QuadratureScheme = field(default_factory=QuadratureScheme)
    points: int = 200
    method: str = "auto"
    out_dir: Path = Path("out")
    x_min: float = 1e-3
    x_max: float = 100.0
    sweep: dict | None = None

    def bimaterial(self) -> BimaterialParams:
        """Parameters from the material pair or the direct block."""
        if self.direct is not None:
            d = self.direct
            return BimaterialParams.from_parameters(
                d["H11"], d["H22"], d.get("alpha", 0.0), d.get("beta", 0.0),
                d.get("delta1", 0.0), d.get("delta2", 0.0), d.get("lambda", 0.0),
                d.get("gamma", 0.0), H33=d.get("H33"), nu=d.get("nu"),
            )
        if len(self.materials) != 2:
            raise ConfigError("two material blocks or a bimaterial.direct block are required")
        return BimaterialParams.from_materials(*self.materials)


def _expand_dotted(raw: dict) -> dict:
    out: dict = {}
    for key, value in raw.items():
        parts = key.split(".")
        node = out
        for p in parts[:-1]:
            node = node.setdefault(p, {})
            if not isinstance(node, dict):
                raise ConfigError(f"conflicting config keys at {key!r}")
        leaf = parts[-1]
        if isinstance(value, dict) and isinstance(node.get(leaf), dict):
            node[leaf].update(value)
        else:
            node[leaf] = value
    return out


def _number(block, key, default=None, *, where):
    if key not in block:
        if default is None:
            raise ConfigError(f"{where}: missing {key!r}")
        return default
    v = block[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ConfigError(f"{where}: {key!r} must be a finite number")
    return float(v)


def _integer(block, key, default, *, where):
    v = block.get(key, default)
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{where}: {key!r} must be an integer")
    return v


def _material(block, index) -> MaterialSpec:
    where = f"material.{index}"
    if not isinstance(block, dict):
        raise ConfigError(f"{where} must be an object")
    mid = str(block.get("id", f"material{index}"))
    kinds = [k for k in ("stiffness", "compliance", "isotropic", "orthotropic") if k in block]
    if not kinds:
        raise ConfigError(f"{where}: one of stiffness, compliance, isotropic, orthotropic is required")
    try:
        if "isotropic" in kinds:
            iso = block["isotropic"]
            m = MaterialSpec.isotropic(_number(iso, "E", where=where), _number(iso, "nu", where=where), id=mid)
        elif "orthotropic" in kinds:
            o = block["orthotropic"]
            names = ("E1", "E2", "E3", "G23", "G13", "G12", "nu23", "nu13", "nu12")
            m = MaterialSpec.orthotropic(*(_number(o, n, where=where) for n in names), id=mid)
        else:
            m = MaterialSpec(id=mid, stiffness=block.get("stiffness"), compliance=block.get("compliance"))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, CrackError) and not isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"{where}: {exc}") from exc
    if "rotate" in block:
        m = m.rotated_in_plane(_number(block, "rotate", where=where), id=mid)
    return m


def _load_part(spec, *, skew: bool, where: str) -> LoadPart:
    """Parse one load part; line forces are scaled by 2 in skew parts."""
    if spec is None:
        return LoadPart(HalfLineFunction.zero(), None)
    if isinstance(spec, list):
        parts = [_load_part(s, skew=skew, where=where) for s in spec]
        total = HalfLineFunction.zero()
        for p in parts:
            total = total + p.function
        lines = [p.line for p in parts if p.line is not None]
        only_lines = all(p.line is not None or p.function.is_zero for p in parts)
        line = None
        if only_lines and lines and len({ln.a for ln in lines}) == 1:
            line = LineForceInfo(sum(ln.F for ln in lines), lines[0].a)
        return LoadPart(total, line)
    if not isinstance(spec, dict) or "type" not in spec:
        raise ConfigError(f"{where}: a load needs a 'type'")
    kind = spec["type"]
    if kind == "zero":
        return LoadPart(HalfLineFunction.zero(), None)
    if kind == "line":
        F = _number(spec, "F", where=where)
        a = _number(spec, "a", where=where)
        if not a > 0.0:
            raise ConfigError(f"{where}: line-force offset a must be positive")
        weight = -(2.0 if skew else 1.0) * F
        return LoadPart(HalfLineFunction.dirac(weight, -a), LineForceInfo(F, a))
    if kind == "patch":
        fn = HalfLineFunction.patch(
            _number(spec, "value", where=where),
            _number(spec, "start", where=where),
            _number(spec, "end", 0.0, where=where) if "end" in spec else 0.0,
        )
        return LoadPart(fn, None)
    if kind == "gaussian":
        fn = HalfLineFunction.gaussian(
            _number(spec, "total", where=where),
            _number(spec, "center", where=where),
            _number(spec, "width", where=where),
        )
        return LoadPart(fn, None)
    if kind == "tabulated":
        try:
            return LoadPart(HalfLineFunction.tabulated(spec["x"], spec["y"]), None)
        except KeyError as exc:
            raise ConfigError(f"{where}: tabulated load needs 'x' and 'y'") from exc
    raise ConfigError(f"{where}: unknown load type {kind!r}")


def _mode3(block):
    if not isinstance(block, dict):
        raise ConfigError("load.mode3 must be an object")
    unknown = set(block) - {"sym", "skew"}
    if unknown:
        raise ConfigError(f"load.mode3: unknown keys {sorted(unknown)}")
    return {
        "sym": _load_part(block.get("sym"), skew=False, where="load.mode3.sym"),
        "skew": _load_part(block.get("skew"), skew=True, where="load.mode3.skew"),
    }


def _plane(block):
    if not isinstance(block, dict):
        raise ConfigError("load.plane must be an object")
    unknown = set(block) - {"sym", "skew"}
    if unknown:
        raise ConfigError(f"load.plane: unknown keys {sorted(unknown)}")
    out = {}
    for name in ("sym", "skew"):
        pair = block.get(name, [None, None])
        if not isinstance(pair, list) or len(pair) != 2:
            raise ConfigError(f"load.plane.{name} must be a list of two loads (components 1, 2)")
        out[name] = tuple(
            _load_part(p, skew=(name == "skew"), where=f"load.plane.{name}[{i + 1}]") for i, p in enumerate(pair)
        )
    return out


def parse_config(raw: dict) -> RunConfig:
    """Validate a decoded JSON document."""
    if not isinstance(raw, dict):
        raise ConfigError("the configuration must be a JSON object")
    raw = _expand_dotted(raw)
    unknown = set(raw) - _TOP
    if unknown:
        raise ConfigError(f"unknown config blocks: {sorted(unknown)}")

    mats = raw.get("material", {})
    if not isinstance(mats, dict):
        raise ConfigError("material must be an object with keys '1' and '2'")
    if set(mats) - {"1", "2"}:
        raise ConfigError("material blocks must be named '1' and '2'")
    materials = tuple(_material(mats[k], k) for k in sorted(mats))

    direct = None
    bim = raw.get("bimaterial", {})
    if bim:
        if set(bim) - {"direct"}:
            raise ConfigError("bimaterial only accepts a 'direct' block")
        direct = dict(bim["direct"])
        bad = set(direct) - _DIRECT_KEYS
        if bad:
            raise ConfigError(f"bimaterial.direct: unknown keys {sorted(bad)}")
        for k in ("H11", "H22"):
            _number(direct, k, where="bimaterial.direct")
        for k in set(direct) & _DIRECT_KEYS:
            _number(direct, k, where="bimaterial.direct")
    if direct is not None and materials:
        raise ConfigError("give either material blocks or bimaterial.direct, not both")

    load = raw.get("load", {})
    if not isinstance(load, dict) or set(load) - {"mode3", "plane"}:
        raise ConfigError("load accepts 'mode3' and 'plane' blocks")
    mode3 = _mode3(load["mode3"]) if "mode3" in load else None
    plane = _plane(load["plane"]) if "plane" in load else None

    num = raw.get("numerics", {})
    where = "numerics"
    method = num.get("method", "auto")
    if method not in _METHODS:
        raise ConfigError(f"numerics.method must be one of {sorted(_METHODS)}")
    try:
        scheme = QuadratureScheme(
            scale=_number(num, "scale", 1.0, where=where),
            panels=_integer(num, "panels", 64, where=where),
            order=_integer(num, "order", 8, where=where),
        )
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    points = _integer(num, "points", 200, where=where)
    if points < 2:
        raise ConfigError("numerics.points must be at least 2")

    out = raw.get("output", {})
    x_min = _number(out, "x_min", 1e-3, where="output")
    x_max = _number(out, "x_max", 100.0, where="output")
    if not 0.0 < x_min < x_max:
        raise ConfigError("output: 0 < x_min < x_max is required")

    sweep = raw.get("sweep")
    if sweep is not None:
        ratios = sweep.get("ratios")
        if not isinstance(ratios, list) or not ratios:
            raise ConfigError("sweep.ratios must be a non-empty list")
        for r in ratios:
            _number({"r": r}, "r", where="sweep.ratios")
        sweep = {
            "ratios": [float(r) for r in ratios],
            "alpha_min": _number(sweep, "alpha_min", where="sweep"),
            "alpha_max": _number(sweep, "alpha_max", where="sweep"),
            "count": _integer(sweep, "count", 81, where="sweep"),
        }
        if sweep["count"] < 2 or not sweep["alpha_min"] < sweep["alpha_max"]:
            raise ConfigError("sweep: need count >= 2 and alpha_min < alpha_max")

    return RunConfig(
        materials=materials,
        direct=direct,
        mode3=mode3,
        plane=plane,
        scheme=scheme,
        points=points,
        method=method,
        out_dir=Path(out.get("dir", "out")),
        x_min=x_min,
        x_max=x_max,
        sweep=sweep,
    )


def load_config(path) -> RunConfig:
    """Read and validate a JSON configuration file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    return parse_config(raw)
