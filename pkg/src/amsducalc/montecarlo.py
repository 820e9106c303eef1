"""Seeded Monte-Carlo cross-check for the closed-form error model.

Each simulated frame draws its number of errored trials from a binomial
distribution (equivalent to flipping every bit/microsecond independently);
the frame fails when at least one trial errs. A fixed seed reproduces the
exact failure count.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["simulate_failures", "simulate_per", "standard_error"]


def simulate_failures(rate: float, trials: int, frames: int, seed) -> int:
    """Number of frames (out of ``frames``) with at least one errored trial."""
    if not 0.0 <= rate <= 1.0:
        raise ValueError(f"rate must be in [0, 1] (got {rate!r})")
    if trials < 0 or frames <= 0:
        raise ValueError("trials must be >= 0 and frames > 0")
    if trials == 0:
        return 0
    rng = np.random.default_rng(seed)
    errored = rng.binomial(trials, rate, size=frames)
    return int(np.count_nonzero(errored > 0))


def simulate_per(rate: float, trials: int, frames: int, seed) -> float:
    """Monte-Carlo frame failure frequency."""
    return simulate_failures(rate, trials, frames, seed) / frames


def standard_error(per: float, frames: int) -> float:
    """Binomial standard error of a failure frequency over ``frames`` frames."""
    return math.sqrt(per * (1.0 - per) / frames)
