"""Information content at each stage from seen object to stored word.

Default configuration is an apple in ordinary light, read by the eye and
finally stored as the five-letter word "apple".
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields

from .errors import InvalidInputError, ParseError

PLANCK = 6.626e-34  # J s
SPEED_OF_LIGHT = 2.998e8  # m / s

# order-of-magnitude figures the default configuration is meant to reproduce
REFERENCE_BITS = {
    "h_real": 5e18,
    "h_retina": 2e8,
    "h_nerve": 1e6,
    "h_feature": 700.0,
    "h_concept": 40.0,
}

STAGES = ("h_real", "h_retina", "h_nerve", "h_feature", "h_concept")


def photon_count(surface_area: float, intensity: float, wavelength: float, duration: float) -> float:
    """Photons leaving the surface: emitted energy over the energy h*c/wavelength of one photon."""
    for name, value in (
        ("surface_area", surface_area),
        ("intensity", intensity),
        ("wavelength", wavelength),
        ("duration", duration),
    ):
        if not (value > 0) or math.isinf(value):
            raise InvalidInputError(f"{name} must be positive and finite, got {value!r}")
    return surface_area * intensity * duration * wavelength / (PLANCK * SPEED_OF_LIGHT)


@dataclass(frozen=True)
class LadderConfig:
    surface_area: float = 0.02
    intensity: float = 100.0
    wavelength: float = 500e-9
    duration: float = 1.0
    retina_pixels: float = 2e8
    nerve_channels: float = 1e6
    feature_count: float = 10
    feature_probability: float = 0.01
    concept_text: str = "apple"
    bits_per_symbol: float = 8

    def validate(self) -> None:
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name == "concept_text":
                if not value:
                    raise InvalidInputError("concept_text must not be empty")
            elif not (value > 0) or math.isinf(value):
                raise InvalidInputError(f"{f.name} must be positive and finite, got {value!r}")
        if self.feature_probability > 1:
            raise InvalidInputError(f"feature_probability must be <= 1, got {self.feature_probability!r}")


@dataclass(frozen=True)
class LadderReport:
    h_real: float
    h_retina: float
    h_nerve: float
    h_feature: float
    h_concept: float

    @property
    def stages(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in STAGES}

    @property
    def compression_factors(self) -> dict[str, float]:
        values = list(self.stages.items())
        return {f"{a}/{b}": va / vb for (a, va), (b, vb) in zip(values, values[1:])}

    @property
    def total_compression(self) -> float:
        return self.h_real / self.h_concept

    def as_dict(self) -> dict:
        out = asdict(self)
        out["compression_factors"] = self.compression_factors
        out["total_compression"] = self.total_compression
        return out


def ladder(config: LadderConfig | None = None) -> LadderReport:
    config = config or LadderConfig()
    config.validate()
    n_photons = photon_count(config.surface_area, config.intensity, config.wavelength, config.duration)
    return LadderReport(
        h_real=n_photons,  # one bit per photon
        h_retina=float(config.retina_pixels),
        h_nerve=float(config.nerve_channels),
        h_feature=config.feature_count * -math.log2(config.feature_probability),
        h_concept=len(config.concept_text) * float(config.bits_per_symbol),
    )


def parse_config(text: str) -> LadderConfig:
    """``key = value`` lines in SI units; unknown keys are rejected."""
    known = {f.name: f for f in fields(LadderConfig)}
    values = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ParseError(line_no, "expected 'key = value'")
        if key not in known:
            raise ParseError(line_no, f"unknown ladder key {key!r}")
        if key == "concept_text":
            values[key] = value
        else:
            try:
                values[key] = float(value)
            except ValueError:
                raise ParseError(line_no, f"{key} must be a number, got {value!r}") from None
    config = LadderConfig(**values)
    config.validate()
    return config


def format_report(report: LadderReport) -> str:
    """Aligned table followed by machine-readable ``key = value`` lines."""
    lines = [f"{'stage':<10} {'bits':>14} {'reference':>12}"]
    for name, bits in report.stages.items():
        lines.append(f"{name:<10} {bits:>14.6g} {REFERENCE_BITS[name]:>12.3g}")
    lines.append(f"{'total':<10} {report.total_compression:>14.6g}")
    lines.append("")
    for name, bits in report.stages.items():
        lines.append(f"{name} = {bits:g} bits")
    for name, factor in report.compression_factors.items():
        lines.append(f"compression {name} = {factor:g}")
    lines.append(f"total_compression = {report.total_compression:g}")
    return "\n".join(lines) + "\n"
