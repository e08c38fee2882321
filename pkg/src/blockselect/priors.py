"""Conjugate-prior hyperparameters shared by both model families."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class PriorConfig:
    """Beta(alpha, beta) on affinities, Dirichlet(delta) on block weights,
    Dirichlet(gamma) on per-block degree propensities."""

    alpha: float = 1.0
    beta: float = 1.0
    delta: float = 1.0
    gamma: float = 1.0

    def __post_init__(self):
        for name in ("alpha", "beta", "delta", "gamma"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"prior {name} must be finite and > 0")

    @classmethod
    def uniform(cls) -> "PriorConfig":
        return cls(1.0, 1.0, 1.0, 1.0)

    @classmethod
    def jeffreys(cls) -> "PriorConfig":
        return cls(0.5, 0.5, 0.5, 0.5)

    @classmethod
    def from_spec(cls, spec) -> "PriorConfig":
        """Accept a preset name or a mapping with alpha/beta/delta/gamma."""
        if isinstance(spec, PriorConfig):
            return spec
        if isinstance(spec, str):
            presets = {"uniform": cls.uniform, "jeffreys": cls.jeffreys}
            if spec not in presets:
                raise ValueError(f"unknown prior preset {spec!r}")
            return presets[spec]()
        return cls(**{key: float(spec[key]) for key in spec})


UNIFORM = PriorConfig.uniform()
JEFFREYS = PriorConfig.jeffreys()
