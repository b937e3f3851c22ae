"""Analytic error injection with seeded, control-flow-independent streams.

Rotational errors perturb circuit parameters, gradient errors perturb
screened derivative measurements; both are zero-mean Gaussians applied
directly to the classical values (no density-matrix machinery).  Each
error kind owns its own child stream of the base seed so that noiseless
and noisy runs with the same seed differ only by the injected values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class RotationNoise:
    sigma: float
    rng: np.random.Generator

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError("sigma must be nonnegative")


@dataclass
class GradientNoise:
    sigma: float
    rng: np.random.Generator

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError("sigma must be nonnegative")


@dataclass
class NoiseModel:
    rotation: RotationNoise | None = None
    gradient: GradientNoise | None = None

    @property
    def has_rotation(self) -> bool:
        return self.rotation is not None and self.rotation.sigma > 0

    @property
    def has_gradient(self) -> bool:
        return self.gradient is not None and self.gradient.sigma > 0


def make_noise_model(seed: int, rotation_sigma: float = 0.0, gradient_sigma: float = 0.0) -> tuple[np.random.Generator, NoiseModel]:
    """(control stream, noise model) from one base seed; the control
    stream is untouched by noise draws and vice versa."""
    control_ss, rotation_ss, gradient_ss = np.random.SeedSequence(seed).spawn(3)
    model = NoiseModel(
        rotation=RotationNoise(rotation_sigma, np.random.default_rng(rotation_ss)) if rotation_sigma > 0 else None,
        gradient=GradientNoise(gradient_sigma, np.random.default_rng(gradient_ss)) if gradient_sigma > 0 else None,
    )
    return np.random.default_rng(control_ss), model


def perturb_parameters(params: np.ndarray, noise: RotationNoise | None) -> np.ndarray:
    """Independent N(0, sigma^2) offset per entry, draws consumed in
    parameter order; the zero-sigma path returns the input untouched."""
    if noise is None or noise.sigma == 0:
        return params
    return params + noise.rng.normal(0.0, noise.sigma, size=len(params))


def perturb_gradients(grads: list[float], noise: GradientNoise | None) -> list[float]:
    """One independent draw per measured gradient, in pool order."""
    if noise is None or noise.sigma == 0:
        return grads
    offsets = noise.rng.normal(0.0, noise.sigma, size=len(grads))
    return [g + d for g, d in zip(grads, offsets)]
