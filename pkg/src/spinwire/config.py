"""Strict JSON run configuration shared by every CLI command.

A run is described by a single JSON document. Parsing is strict: unknown
fields are rejected so a typo cannot silently fall back to a default,
and every value is validated against the library preconditions before
any computation starts. Interaction hermiticity is deliberately not
enforced here; commands that require a physical interaction validate it
themselves, which keeps deliberately broken specs expressible for the
verification negative controls.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, Sequence

from .interaction import PRESET_NAMES, BetaSpec, InteractionSpec, preset
from .operator_lattice import PacketRecipe, PlaneGrid
from .radial_solver import RadialGrid, default_r_max


class ConfigError(ValueError):
    """Configuration document rejected; the message names the violation."""


def _require_mapping(obj: Any, where: str) -> Mapping[str, Any]:
    if not isinstance(obj, dict):
        raise ConfigError(f"{where} must be a JSON object, got {type(obj).__name__}")
    return obj


def _reject_unknown(doc: Mapping[str, Any], allowed: Sequence[str], where: str) -> None:
    unknown = sorted(set(doc) - set(allowed))
    if unknown:
        raise ConfigError(
            f"unknown field(s) {unknown} in {where}; allowed: {sorted(allowed)}"
        )


def _get_int(doc: Mapping[str, Any], key: str, where: str, default: Any = KeyError) -> Any:
    if key not in doc:
        if default is KeyError:
            raise ConfigError(f"missing required field '{key}' in {where}")
        return default
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"'{key}' in {where} must be an integer, got {v!r}")
    return v


def _get_float(doc: Mapping[str, Any], key: str, where: str, default: Any = KeyError) -> Any:
    if key not in doc:
        if default is KeyError:
            raise ConfigError(f"missing required field '{key}' in {where}")
        return default
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"'{key}' in {where} must be a number, got {v!r}")
    v = float(v)
    if not math.isfinite(v):
        raise ConfigError(f"'{key}' in {where} must be finite, got {v!r}")
    return v


def _get_pair(doc: Mapping[str, Any], key: str, where: str, default: Any) -> tuple[float, float]:
    if key not in doc:
        return default
    v = doc[key]
    if not (isinstance(v, list) and len(v) == 2):
        raise ConfigError(f"'{key}' in {where} must be a 2-element list, got {v!r}")
    out = []
    for i, x in enumerate(v):
        if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(float(x)):
            raise ConfigError(f"'{key}[{i}]' in {where} must be a finite number, got {x!r}")
        out.append(float(x))
    return (out[0], out[1])


def _parse_coefficients(entries: Any, two_s: int, where: str) -> dict[int, complex]:
    if not isinstance(entries, list) or not entries:
        raise ConfigError(f"{where} must be a nonempty list of objects")
    coeffs: dict[int, complex] = {}
    for i, entry in enumerate(entries):
        item = _require_mapping(entry, f"{where}[{i}]")
        _reject_unknown(item, ("two_k", "re", "im"), f"{where}[{i}]")
        two_k = _get_int(item, "two_k", f"{where}[{i}]")
        re = _get_float(item, "re", f"{where}[{i}]", 0.0)
        im = _get_float(item, "im", f"{where}[{i}]", 0.0)
        if two_k in coeffs:
            raise ConfigError(f"duplicate two_k={two_k} in {where}")
        coeffs[two_k] = complex(re, im)
    return coeffs


def _parse_spec(doc: Mapping[str, Any], two_s: int) -> InteractionSpec:
    has_alphas = "alphas" in doc
    has_preset = "preset" in doc
    if has_alphas == has_preset:
        raise ConfigError("exactly one of 'alphas' or 'preset' is required")
    if has_alphas:
        coeffs = _parse_coefficients(doc["alphas"], two_s, "alphas")
        try:
            return InteractionSpec(two_s, coeffs)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    block = _require_mapping(doc["preset"], "preset")
    _reject_unknown(block, ("name", "params"), "preset")
    name = block.get("name")
    if not isinstance(name, str):
        raise ConfigError(f"'preset.name' must be a string, got {name!r}")
    if name not in PRESET_NAMES:
        raise ConfigError(f"unknown preset {name!r}; available: {list(PRESET_NAMES)}")
    params = _require_mapping(block.get("params", {}), "preset.params")
    clean: dict[str, float] = {}
    for key, value in params.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"'preset.params.{key}' must be a number, got {value!r}")
        clean[key] = float(value)
    try:
        return preset(name, two_s, **clean)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


@dataclass(frozen=True)
class Tolerances:
    """Verification thresholds, all overridable from the config document."""

    rel_tol: float = 2e-3
    residual_threshold: float = 1e-3
    condition_tol: float = 1e-13
    ladder_top_max: float = 0.05
    ladder_overlap_min: float = 0.99
    casimir_rel_max: float = 5e-3


@dataclass(frozen=True)
class RunConfig:
    """Everything a command needs, parsed and precondition-checked."""

    two_s: int
    mass: float
    spec: InteractionSpec
    betas: BetaSpec | None
    radial: RadialGrid
    plane: PlaneGrid
    refinement_levels: int
    two_jz_min: int
    two_jz_max: int
    tolerances: Tolerances
    packet: PacketRecipe
    angles: tuple[float, ...]

    @property
    def sector_values(self) -> tuple[int, ...]:
        return tuple(range(self.two_jz_min, self.two_jz_max + 1, 2))

    def plane_refinements(self, levels: int | None = None) -> tuple[PlaneGrid, ...]:
        """Refinement ladder from the base plane grid, spacing ratio 1.5."""
        if levels is None:
            levels = self.refinement_levels
        return tuple(self.plane.refined(1.5**i) for i in range(levels))


_TOP_FIELDS = (
    "two_s",
    "mass",
    "alphas",
    "preset",
    "betas",
    "radial",
    "plane",
    "sectors",
    "tolerances",
    "packet",
    "angles",
)


def parse_config(doc: Any) -> RunConfig:
    """Build a RunConfig from a decoded JSON document, strictly."""
    top = _require_mapping(doc, "config")
    _reject_unknown(top, _TOP_FIELDS, "config")

    two_s = _get_int(top, "two_s", "config")
    if two_s < 0:
        raise ConfigError(f"two_s must be nonnegative, got {two_s}")
    mass = _get_float(top, "mass", "config")
    if mass <= 0.0:
        raise ConfigError(f"mass must be positive, got {mass}")

    spec = _parse_spec(top, two_s)

    betas = None
    if "betas" in top:
        coeffs = _parse_coefficients(top["betas"], two_s, "betas")
        try:
            betas = BetaSpec(two_s, coeffs)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    radial_block = _require_mapping(top.get("radial", {}), "radial")
    _reject_unknown(radial_block, ("r_max", "n_points"), "radial")
    r_max = radial_block.get("r_max")
    if r_max is None:
        if spec.max_abs_alpha > 0.0:
            r_max = default_r_max(spec, mass)
        else:
            r_max = 60.0
    else:
        r_max = _get_float(radial_block, "r_max", "radial")
    n_points = _get_int(radial_block, "n_points", "radial", 3000)
    try:
        radial = RadialGrid(r_max, n_points)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    plane_block = _require_mapping(top.get("plane", {}), "plane")
    _reject_unknown(plane_block, ("half_extent", "n", "refinement_levels"), "plane")
    half_extent = _get_float(plane_block, "half_extent", "plane", 12.0)
    plane_n = _get_int(plane_block, "n", "plane", 384)
    refinement_levels = _get_int(plane_block, "refinement_levels", "plane", 3)
    if refinement_levels < 1:
        raise ConfigError(f"refinement_levels must be >= 1, got {refinement_levels}")
    try:
        plane = PlaneGrid(half_extent, plane_n)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    sector_block = _require_mapping(top.get("sectors", {}), "sectors")
    _reject_unknown(sector_block, ("two_jz_min", "two_jz_max"), "sectors")
    two_jz_min = _get_int(sector_block, "two_jz_min", "sectors", -(two_s + 4))
    two_jz_max = _get_int(sector_block, "two_jz_max", "sectors", two_s + 4)
    if two_jz_min > two_jz_max:
        raise ConfigError(
            f"two_jz_min={two_jz_min} must not exceed two_jz_max={two_jz_max}"
        )
    for key, val in (("two_jz_min", two_jz_min), ("two_jz_max", two_jz_max)):
        if (val - two_s) % 2 != 0:
            raise ConfigError(
                f"{key}={val} has the wrong parity: two_jz must differ from "
                f"two_s={two_s} by an even doubled integer"
            )

    tol_block = _require_mapping(top.get("tolerances", {}), "tolerances")
    tol_fields = (
        "rel_tol",
        "residual_threshold",
        "condition_tol",
        "ladder_top_max",
        "ladder_overlap_min",
        "casimir_rel_max",
    )
    _reject_unknown(tol_block, tol_fields, "tolerances")
    defaults = Tolerances()
    tol_values = {}
    for name in tol_fields:
        tol_values[name] = _get_float(tol_block, name, "tolerances", getattr(defaults, name))
        if tol_values[name] <= 0.0:
            raise ConfigError(f"tolerances.{name} must be positive, got {tol_values[name]}")
    tolerances = Tolerances(**tol_values)

    packet_block = _require_mapping(top.get("packet", {}), "packet")
    _reject_unknown(packet_block, ("center", "width", "momentum", "spin_weights"), "packet")
    center = _get_pair(packet_block, "center", "packet", (4.6, 3.4))
    width = _get_float(packet_block, "width", "packet", 0.75)
    if width <= 0.0:
        raise ConfigError(f"packet.width must be positive, got {width}")
    momentum = _get_pair(packet_block, "momentum", "packet", (0.7, -0.4))
    weights_raw = packet_block.get("spin_weights")
    if weights_raw is None:
        spin_weights = tuple(1.0 + 0.0j for _ in range(two_s + 1))
    else:
        if not (isinstance(weights_raw, list) and len(weights_raw) == two_s + 1):
            raise ConfigError(
                f"packet.spin_weights must be a list of {two_s + 1} entries "
                f"(one per spin component), got {weights_raw!r}"
            )
        parsed = []
        for i, entry in enumerate(weights_raw):
            if isinstance(entry, (int, float)) and not isinstance(entry, bool):
                parsed.append(complex(float(entry)))
            elif isinstance(entry, list) and len(entry) == 2:
                item = {"re": entry[0], "im": entry[1]}
                re = _get_float(item, "re", f"packet.spin_weights[{i}]")
                im = _get_float(item, "im", f"packet.spin_weights[{i}]")
                parsed.append(complex(re, im))
            else:
                raise ConfigError(
                    f"packet.spin_weights[{i}] must be a number or [re, im] pair, "
                    f"got {entry!r}"
                )
        if not any(abs(w) > 0.0 for w in parsed):
            raise ConfigError("packet.spin_weights must not all vanish")
        spin_weights = tuple(parsed)
    packet = PacketRecipe(center, width, momentum, spin_weights)

    angles_raw = top.get("angles", [0.0])
    if not (isinstance(angles_raw, list) and angles_raw):
        raise ConfigError(f"angles must be a nonempty list of numbers, got {angles_raw!r}")
    angles = []
    for i, a in enumerate(angles_raw):
        if isinstance(a, bool) or not isinstance(a, (int, float)) or not math.isfinite(float(a)):
            raise ConfigError(f"angles[{i}] must be a finite number, got {a!r}")
        angles.append(float(a))

    return RunConfig(
        two_s=two_s,
        mass=mass,
        spec=spec,
        betas=betas,
        radial=radial,
        plane=plane,
        refinement_levels=refinement_levels,
        two_jz_min=two_jz_min,
        two_jz_max=two_jz_max,
        tolerances=tolerances,
        packet=packet,
        angles=tuple(angles),
    )


def load_config(path: str | Path) -> RunConfig:
    """Read and parse a JSON config file ('-' reads standard input)."""
    import sys

    if str(path) == "-":
        text = sys.stdin.read()
    else:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return parse_config(doc)
