"""Dielectric functions on the imaginary frequency axis and the materials registry.

All models return the real permittivity eps(i xi) for xi >= 0 in rad/s.
Three forms are supported:

* ``Constant``: frequency independent, the default for dispersion-free estimates.
* ``Drude``: ``1 + wp^2 / (xi (xi + gamma))``.
* ``Lorentz``: Ninham-Parsegian oscillator sum
  ``1 + sum_k C_k w_k^2 / (w_k^2 + xi^2 + gamma_k xi)``.

Registry files are TOML with one ``[[material]]`` table per entry::

    [[material]]
    name = "toluene"
    model = "constant"
    epsilon = 2.25
    provenance = "static optical value"

    [[material]]
    name = "gold"
    model = "drude"
    plasma_frequency = 1.37e16   # rad/s
    damping = 5.32e13            # rad/s

    [[material]]
    name = "water_uv"
    model = "lorentz"
    oscillators = [
        { strength = 0.77, frequency = 1.9e16, damping = 0.0 },
    ]

Unknown keys are rejected, as are duplicate names.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Union

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


@dataclass(frozen=True)
class Constant:
    epsilon: float

    def __post_init__(self):
        if not (self.epsilon > 0 and math.isfinite(self.epsilon)):
            raise ValueError(f"constant permittivity must be finite and > 0, got {self.epsilon}")

    def __call__(self, xi):
        return _check_xi(xi) * 0.0 + self.epsilon


@dataclass(frozen=True)
class Drude:
    plasma_frequency: float
    damping: float = 0.0

    def __post_init__(self):
        if not self.plasma_frequency > 0:
            raise ValueError("Drude plasma_frequency must be > 0")
        if not self.damping >= 0:
            raise ValueError("Drude damping must be >= 0")

    def __call__(self, xi):
        xi = _check_xi(xi)
        if np.any(xi == 0):
            raise ValueError("Drude permittivity has a pole at xi = 0")
        return 1.0 + self.plasma_frequency**2 / (xi * (xi + self.damping))


@dataclass(frozen=True)
class Oscillator:
    strength: float
    frequency: float
    damping: float = 0.0

    def __post_init__(self):
        if not self.strength >= 0:
            raise ValueError("oscillator strength must be >= 0")
        if not self.frequency > 0:
            raise ValueError("oscillator frequency must be > 0")
        if not self.damping >= 0:
            raise ValueError("oscillator damping must be >= 0")


@dataclass(frozen=True)
class Lorentz:
    oscillators: tuple[Oscillator, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "oscillators", tuple(self.oscillators))

    def __call__(self, xi):
        xi = _check_xi(xi)
        eps = 1.0 + 0.0 * xi
        for osc in self.oscillators:
            w2 = osc.frequency**2
            eps = eps + osc.strength * w2 / (w2 + xi * xi + osc.damping * xi)
        return eps

    @property
    def static_value(self) -> float:
        return 1.0 + sum(osc.strength for osc in self.oscillators)


PermittivityModel = Union[Constant, Drude, Lorentz]


def _check_xi(xi):
    xi = np.asarray(xi, dtype=float)
    if np.any(xi < 0) or np.any(np.isnan(xi)):
        raise ValueError("imaginary frequency xi must be >= 0")
    return xi


def permittivity_at(model: PermittivityModel, xi):
    """eps(i xi) for scalar or array ``xi`` (rad/s). Scalars in, float out."""
    value = model(xi)
    return float(value) if np.ndim(value) == 0 else value


def static_permittivity(model: PermittivityModel) -> float:
    """eps(0), or ``inf`` for a Drude model."""
    if isinstance(model, Drude):
        return math.inf
    return permittivity_at(model, 0.0)


def is_constant(model: PermittivityModel) -> bool:
    return isinstance(model, Constant) or (
        isinstance(model, Lorentz) and all(o.strength == 0 for o in model.oscillators)
    )


@dataclass(frozen=True)
class Material:
    name: str
    model: PermittivityModel
    provenance: str = ""


class RegistryError(ValueError):
    """Malformed or inconsistent materials file."""


_MODEL_KEYS = {
    "constant": {"epsilon"},
    "drude": {"plasma_frequency", "damping"},
    "lorentz": {"oscillators"},
}
_COMMON_KEYS = {"name", "model", "provenance"}
_OSC_KEYS = {"strength", "frequency", "damping"}


def parse_registry(text: str, source: str = "<string>") -> list[Material]:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise RegistryError(f"{source}: {exc}") from exc

    extra = set(doc) - {"material"}
    if extra:
        raise RegistryError(f"{source}: unknown top-level key(s) {sorted(extra)}")
    entries = doc.get("material", [])
    if not isinstance(entries, list):
        raise RegistryError(f"{source}: 'material' must be an array of tables ([[material]])")

    materials = []
    seen = set()
    for i, entry in enumerate(entries):
        where = f"{source}: material #{i + 1}"
        if "name" not in entry:
            raise RegistryError(f"{where}: missing field 'name'")
        name = entry["name"]
        where = f"{where} ({name!r})"
        if name in seen:
            raise RegistryError(f"{where}: duplicate material name")
        seen.add(name)
        kind = entry.get("model")
        if kind not in _MODEL_KEYS:
            raise RegistryError(f"{where}: field 'model' must be one of {sorted(_MODEL_KEYS)}, got {kind!r}")
        unknown = set(entry) - _COMMON_KEYS - _MODEL_KEYS[kind]
        if unknown:
            raise RegistryError(f"{where}: unknown field(s) {sorted(unknown)} for model {kind!r}")
        try:
            model = _build_model(kind, entry)
        except (KeyError, TypeError, ValueError) as exc:
            raise RegistryError(f"{where}: {exc}") from exc
        materials.append(Material(name=name, model=model, provenance=entry.get("provenance", "")))
    return materials


def _build_model(kind, entry) -> PermittivityModel:
    if kind == "constant":
        return Constant(float(entry["epsilon"]))
    if kind == "drude":
        return Drude(float(entry["plasma_frequency"]), float(entry.get("damping", 0.0)))
    oscillators = []
    for j, osc in enumerate(entry["oscillators"]):
        unknown = set(osc) - _OSC_KEYS
        if unknown:
            raise ValueError(f"oscillator #{j + 1}: unknown field(s) {sorted(unknown)}")
        oscillators.append(
            Oscillator(float(osc["strength"]), float(osc["frequency"]), float(osc.get("damping", 0.0)))
        )
    return Lorentz(tuple(oscillators))


def registry_load(path) -> list[Material]:
    path = Path(path)
    return parse_registry(path.read_text(encoding="utf-8"), source=str(path))


def default_registry() -> list[Material]:
    text = resources.files("casimir_lifshitz").joinpath("data/materials.toml").read_text(encoding="utf-8")
    return parse_registry(text, source="materials.toml")


def lookup(materials: list[Material], name: str) -> Material:
    for m in materials:
        if m.name == name:
            return m
    raise KeyError(f"no material named {name!r}; known: {[m.name for m in materials]}")
