"""Seeded channel realizations for Monte-Carlo experiments.

Randomness policy: every draw builds a fresh PCG64 generator from the spec
seed plus an integer stream key, so each call is a pure function of its
arguments and trials indexed by stream can run in any order (or in parallel)
with bit-identical results. All variates are derived from uniform draws only
(inverse CDF for gains, Box-Muller for complex Gaussians), which keeps the
sequences stable across numpy releases.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

FADING_KINDS = ("deterministic", "rayleigh")


@dataclass(frozen=True)
class FadingSpec:
    """Fading model for a link: distribution kind, mean power gain, seed."""

    kind: str = "rayleigh"
    mean_gain: float = 1.0
    seed: int = 1

    def __post_init__(self) -> None:
        if self.kind not in FADING_KINDS:
            raise ValueError(f"unknown fading kind {self.kind!r}; expected one of {FADING_KINDS}")
        if not self.mean_gain > 0.0:
            raise ValueError(f"mean_gain must be positive, got {self.mean_gain}")
        if int(self.seed) < 0:
            raise ValueError(f"seed must be a non-negative integer, got {self.seed}")


def rng_for(seed: int, *key: int) -> np.random.Generator:
    """Independent PCG64 generator for a (seed, stream key) pair."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(ss))


def draw_gains(spec: FadingSpec, n: int, stream: int = 0) -> np.ndarray:
    """n channel power gains for the given fading spec.

    deterministic: n copies of mean_gain. rayleigh: i.i.d. exponential gains
    with mean mean_gain (the |h|^2 of a circularly-symmetric complex Gaussian
    h). For a fixed (spec, n, stream) the sequence is always identical, and
    shorter draws are prefixes of longer ones from the same stream.
    """
    if n < 1:
        raise ValueError(f"draw_gains: n must be >= 1, got {n}")
    if spec.kind == "deterministic":
        return np.full(n, float(spec.mean_gain))
    u = rng_for(spec.seed, stream).random(n)
    return -spec.mean_gain * np.log1p(-u)


def draw_matrix(spec: FadingSpec, rows: int, cols: int, stream: int = 0) -> np.ndarray:
    """rows x cols matrix of i.i.d. circularly-symmetric complex Gaussians.

    E[|entry|^2] = mean_gain regardless of spec.kind (a matrix draw is always
    Gaussian; the kind field only selects the scalar-gain distribution).
    """
    if rows < 1 or cols < 1:
        raise ValueError(f"draw_matrix: need rows, cols >= 1, got {rows}x{cols}")
    rng = rng_for(spec.seed, stream)
    u1 = rng.random((rows, cols))
    u2 = rng.random((rows, cols))
    radius = np.sqrt(-spec.mean_gain * np.log1p(-u1))
    return radius * np.exp(2j * np.pi * u2)
