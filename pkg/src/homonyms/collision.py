"""Generalized birthday-problem engine.

Monte Carlo estimation of the proportion of individuals in a group of
size n that share their label with someone else, together with analytic
and brute-force oracles used to validate the simulation.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Protocol, runtime_checkable

import numpy as np
import pandas as pd

from .distributions import CategoricalDist
from .errors import TooLarge
from .rng import substream

BRUTE_FORCE_GUARD = 10**7

# bincount is direct-address counting: use it while the table stays small
# relative to the sample; fall back to hashing for sparse code spaces.
_DENSE_COUNT_CAP = 1 << 26
_HASH_MIN_DRAWS = 1 << 16


@runtime_checkable
class LabelSource(Protocol):
    """Anything that can draw n integer label codes i.i.d.

    Codes identify labels within one sample; `code_space` is the size of
    the integer domain the codes live in (used to pick a counting
    strategy, never materialized).
    """

    @property
    def code_space(self) -> int: ...

    def draw_codes(self, n: int, rng: np.random.Generator) -> np.ndarray: ...

    def describe(self) -> str: ...


def _duplicated_draws(codes: np.ndarray, code_space: int) -> int:
    """Number of draws whose code occurs at least twice in `codes`."""
    n = codes.size
    if code_space <= max(1024, 16 * n) and code_space <= _DENSE_COUNT_CAP:
        counts = np.bincount(codes)
    elif n >= _HASH_MIN_DRAWS:
        counts = pd.Series(codes).value_counts(sort=False).to_numpy()
    else:
        counts = np.unique(codes, return_counts=True)[1]
    return int(counts[counts >= 2].sum())


def homonym_proportion_once(source: LabelSource, n: int,
                            rng: np.random.Generator) -> float:
    """One simulated group: fraction of the n draws that have an alter ego.

    Draws n labels, counts multiplicities in a single pass, and returns
    the fraction of draws whose label occurs at least twice. O(n) time,
    O(distinct labels) extra space.
    """
    if n < 1:
        raise ValueError("group size n must be >= 1")
    codes = source.draw_codes(n, rng)
    return _duplicated_draws(codes, source.code_space) / n


@dataclass(frozen=True)
class SimulationPlan:
    """Grid of group sizes, replicates per size, and the master seed."""

    n_grid: tuple[int, ...]
    replicates: int = 200
    seed: int = 0

    def __post_init__(self):
        grid = tuple(int(n) for n in self.n_grid)
        object.__setattr__(self, "n_grid", grid)
        if len(grid) == 0:
            raise ValueError("n_grid must contain at least one group size")
        if grid[0] < 1:
            raise ValueError("group sizes must be >= 1")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("n_grid must be strictly ascending")
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")


@dataclass(frozen=True)
class CurvePoint:
    """Replicate statistics of the homonym proportion at one group size."""

    n: int
    mean: float
    stderr: float
    replicates: int
    values: np.ndarray | None = None


@dataclass(frozen=True)
class CollisionCurve:
    points: tuple[CurvePoint, ...]
    source: str


def _summarize(n: int, values: np.ndarray) -> CurvePoint:
    values.flags.writeable = False
    r = values.size
    stderr = float(values.std(ddof=1) / math.sqrt(r)) if r > 1 else 0.0
    return CurvePoint(n=n, mean=float(values.mean()), stderr=stderr,
                      replicates=r, values=values)


def estimate_curve(plan: SimulationPlan, source: LabelSource,
                   workers: int = 1) -> CollisionCurve:
    """Monte Carlo curve of the homonym proportion over plan.n_grid.

    Each (grid index, replicate index) task runs on its own stream derived
    from plan.seed, and results are placed by index, so the output is
    bit-identical for any worker count.
    """
    grid = plan.n_grid
    reps = plan.replicates
    values = np.empty((len(grid), reps), dtype=np.float64)

    def run_task(task: tuple[int, int]) -> None:
        i, r = task
        values[i, r] = homonym_proportion_once(
            source, grid[i], substream(plan.seed, i, r))

    tasks = [(i, r) for i in range(len(grid)) for r in range(reps)]
    if workers <= 1:
        for task in tasks:
            run_task(task)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run_task, tasks))

    points = tuple(_summarize(n, values[i]) for i, n in enumerate(grid))
    return CollisionCurve(points=points, source=source.describe())


def _as_probs(dist) -> np.ndarray:
    if isinstance(dist, CategoricalDist):
        return dist.probs
    return np.asarray(dist, dtype=np.float64)


def analytic_expected_proportion(dist, n: int) -> float:
    """Exact expectation of the simulated proportion: 1 - sum_i p_i (1-p_i)^(n-1).

    A draw with label i has no alter ego iff none of the other n-1 draws
    hits i. Evaluated through log1p so tiny p_i do not lose precision.
    `dist` may be a CategoricalDist or a bare probability vector.
    """
    if n < 1:
        raise ValueError("group size n must be >= 1")
    if n == 1:
        return 0.0
    probs = _as_probs(dist)
    with np.errstate(divide="ignore"):
        survive = np.exp((n - 1) * np.log1p(-probs))
    return float(1.0 - np.dot(probs, survive))


def brute_force_expected_proportion(dist, n: int) -> float:
    """Enumeration oracle: average homonym fraction over all k^n outcomes.

    Each outcome is weighted by its product probability. Guarded to
    k^n <= 10^7; intended for tests, not production sizes.
    """
    if n < 1:
        raise ValueError("group size n must be >= 1")
    probs = _as_probs(dist)
    k = probs.size
    if k**n > BRUTE_FORCE_GUARD:
        raise TooLarge(f"k^n = {k}^{n} exceeds the enumeration guard")
    total = 0.0
    for outcome in itertools.product(range(k), repeat=n):
        weight = math.prod(probs[i] for i in outcome)
        multiplicity = Counter(outcome)
        duplicated = sum(c for c in multiplicity.values() if c >= 2)
        total += weight * (duplicated / n)
    return total


def uniform_all_distinct_exact(k: int, n: int) -> float:
    """P(all n draws distinct) under the uniform law on k labels.

    Falling-factorial product prod_{i<n} (1 - i/k), accumulated from the
    largest factor down. Zero when n > k by pigeonhole.

    Note: this equals k!/((k-n)! k^n); write-ups sometimes quote the
    binomial form C(k, n)/k^n, which drops the n! orderings.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > k:
        return 0.0
    product = 1.0
    for i in range(n):
        product *= 1.0 - i / k
    return product


def uniform_all_distinct_approx(k: int, n: int) -> float:
    """Classic exp(-n^2 / 2k) approximation of the all-distinct probability."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if n < 0:
        raise ValueError("n must be >= 0")
    return math.exp(-(n * n) / (2.0 * k))


def log_grid(start: int, stop: int, points: int) -> tuple[int, ...]:
    """Log-spaced integer grid from start to stop, deduplicated ascending."""
    if start < 1 or stop < start or points < 1:
        raise ValueError("need 1 <= start <= stop and points >= 1")
    raw = np.geomspace(start, stop, points)
    grid = np.unique(np.rint(raw).astype(np.int64))
    return tuple(int(n) for n in grid)
