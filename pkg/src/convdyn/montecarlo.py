"""Seeded random-walk sampling as an independent check on exact powers.

Pseudorandom scheme
-------------------
Draws come from SplitMix64 (Steele, Lea & Vigna, "Fast Splittable
Pseudorandom Number Generators", OOPSLA 2014; reference implementation
``splitmix64.c`` by Vigna), used here as a two-level counter-based
generator so that every draw is a pure function of (seed, trial, step):

    stream(t)  = mix64(seed + (t + 1) * GAMMA)        # per-trial stream seed
    draw(t, j) = mix64(stream(t) + (j + 1) * GAMMA)   # j-th step of trial t

where GAMMA = 0x9E3779B97F4A7C15 and mix64 is the SplitMix64 finalizer.
All arithmetic is modulo 2^64.  Trials are therefore independent streams
derived from (seed, trial index): results are bit-reproducible and do not
depend on evaluation or aggregation order.

Element selection
-----------------
Weights are turned into exact cumulative boundaries, scaled by 2^64 and
ceiled to integers once per measure; a raw 64-bit draw r selects the
first element whose boundary exceeds r.  No float rounding enters the
selection, so exact-mode weights are sampled without bias beyond the
2^-64 lattice.

A walk multiplies its step draws left to right:
g(draw 0) * g(draw 1) * ... * g(draw steps-1).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BudgetError, DomainError
from .measures import ProbMeasure, l1_distance

GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_MASK = (1 << 64) - 1

DEFAULT_BUDGET = 10**8


def _budget() -> int:
    raw = os.environ.get("MC_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        return int(raw)
    except ValueError:
        raise DomainError(f"MC_BUDGET must be an integer, got {raw!r}") from None


def mix64(state: np.ndarray) -> np.ndarray:
    """SplitMix64 output finalizer over uint64 arrays."""
    with np.errstate(over="ignore"):
        z = state
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
        return z ^ (z >> np.uint64(31))


def draw_matrix(seed: int, trials: int, steps: int) -> np.ndarray:
    """The (trials, steps) matrix of raw 64-bit draws defined above."""
    with np.errstate(over="ignore"):
        t = np.arange(1, trials + 1, dtype=np.uint64)
        streams = mix64(np.uint64(seed) + t * np.uint64(GAMMA))
        j = np.arange(1, steps + 1, dtype=np.uint64)
        return mix64(streams[:, None] + j[None, :] * np.uint64(GAMMA))


@dataclass(frozen=True)
class WalkConfig:
    """Configuration for sampling n-step products with i.i.d. steps."""

    measure: ProbMeasure
    steps: int
    trials: int
    seed: int

    def __post_init__(self):
        if self.steps < 1:
            raise DomainError("steps must be >= 1")
        if self.trials < 1:
            raise DomainError("trials must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must fit in an unsigned 64-bit integer")
        if self.steps * self.trials > _budget():
            raise BudgetError(
                f"{self.trials} trials x {self.steps} steps exceeds the draw "
                f"budget {_budget()} (MC_BUDGET)"
            )


def cdf_thresholds(measure: ProbMeasure) -> np.ndarray:
    """ceil(cumulative weight * 2^64) for the leading elements, exact.

    A draw r selects element i = #{thresholds <= r}.  Boundaries that
    reach 2^64 exactly (the cumulative mass is already 1, so every later
    element has weight zero) are dropped: no 64-bit r ever meets them, and
    they would not fit in the uint64 array.
    """
    out = []
    acc = Fraction(0)
    for w in measure.weights[:-1]:
        acc += Fraction(w)
        scaled = acc * (1 << 64)
        boundary = -((-scaled.numerator) // scaled.denominator)
        if boundary > _MASK:
            break
        out.append(boundary)
    return np.array(out, dtype=np.uint64)


def _walk_endpoints(cfg: WalkConfig, draws: np.ndarray) -> np.ndarray:
    thresholds = cdf_thresholds(cfg.measure)
    indices = np.searchsorted(thresholds, draws, side="right")
    cayley = np.array(cfg.measure.group.cayley, dtype=np.int64)
    state = np.full(draws.shape[0], cfg.measure.group.identity, dtype=np.int64)
    for j in range(draws.shape[1]):
        state = cayley[state, indices[:, j]]
    return state


def sample_walk(cfg: WalkConfig, trial: int = 0) -> int:
    """One realization: the ordered product of ``steps`` i.i.d. draws,
    taken from the stream for (seed, trial)."""
    if not 0 <= trial < cfg.trials:
        raise DomainError(f"trial must be in 0..{cfg.trials - 1}")
    with np.errstate(over="ignore"):
        stream = mix64(np.uint64(cfg.seed) + np.uint64((trial + 1) * GAMMA & _MASK))
        j = np.arange(1, cfg.steps + 1, dtype=np.uint64)
        draws = mix64(stream + j * np.uint64(GAMMA))[None, :]
    return int(_walk_endpoints(cfg, draws)[0])


def empirical_distribution(cfg: WalkConfig) -> ProbMeasure:
    """Frequency vector of walk endpoints over all trials (float mode)."""
    draws = draw_matrix(cfg.seed, cfg.trials, cfg.steps)
    endpoints = _walk_endpoints(cfg, draws)
    counts = np.bincount(endpoints, minlength=cfg.measure.group.order)
    return ProbMeasure(
        cfg.measure.group, tuple(float(c) / cfg.trials for c in counts)
    )


def tv_distance(a: ProbMeasure, b: ProbMeasure) -> float:
    """Total variation distance, half the l1 distance."""
    return 0.5 * float(l1_distance(a.to_float(), b.to_float()))
