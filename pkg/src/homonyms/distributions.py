"""Finite categorical distributions: construction, constant-time weighted
sampling, Zipf rank-frequency model, and concentration statistics.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import (
    DegenerateInput,
    DuplicateLabel,
    EmptyInput,
    EmptySupport,
    InvalidAlpha,
    NegativeWeight,
)

PROB_TOL = 1e-12

ALPHA_SEARCH_RANGE = (0.01, 10.0)
ALPHA_SEARCH_TOL = 1e-6


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


class AliasSampler:
    """Walker/Vose alias table over a probability vector.

    Build is O(k); each draw costs one uniform, one integer draw and one
    table lookup, so a batch of n draws is O(n) regardless of k.
    """

    __slots__ = ("probs", "_accept", "_alias", "_cum")

    def __init__(self, probs: np.ndarray):
        probs = np.asarray(probs, dtype=np.float64)
        k = probs.size
        scaled = probs * k
        accept = np.ones(k, dtype=np.float64)
        alias = np.arange(k, dtype=np.int64)
        small = [i for i in range(k) if scaled[i] < 1.0]
        large = [i for i in range(k) if scaled[i] >= 1.0]
        while small and large:
            s = small.pop()
            g = large.pop()
            accept[s] = scaled[s]
            alias[s] = g
            scaled[g] -= 1.0 - scaled[s]
            (small if scaled[g] < 1.0 else large).append(g)
        # leftovers are numerically ~1 and keep accept=1, alias=self
        self.probs = _readonly(probs)
        self._accept = _readonly(accept)
        self._alias = _readonly(alias)
        self._cum = _readonly(np.cumsum(probs))

    @property
    def k(self) -> int:
        return self.probs.size

    def draw(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """Draw n label indices i.i.d. with P(i) = probs[i]."""
        if n < 0:
            raise ValueError("n must be >= 0")
        j = rng.integers(0, self.k, size=n)
        u = rng.random(n)
        return np.where(u < self._accept[j], j, self._alias[j])

    def draw_inversion(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """Cumulative-inversion sampler, O(log k) per draw.

        Kept as an independent route for distribution-equivalence checks
        against the alias table.
        """
        if n < 0:
            raise ValueError("n must be >= 0")
        u = rng.random(n)
        idx = np.searchsorted(self._cum, u, side="right")
        return np.minimum(idx, self.k - 1).astype(np.int64)


@dataclass(frozen=True)
class CategoricalDist:
    """A finite label set with normalized probabilities and a sampler.

    Immutable after construction; safe to share across workers. Drawing
    goes through the alias table by default.
    """

    labels: tuple[str, ...]
    probs: np.ndarray
    sampler: AliasSampler = field(repr=False)
    name: str = ""

    @property
    def k(self) -> int:
        return len(self.labels)

    # protocol used by the collision engine: integer codes in [0, code_space)
    @property
    def code_space(self) -> int:
        return self.k

    def draw_codes(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return self.sampler.draw(n, rng)

    def describe(self) -> str:
        return self.name or f"categorical(k={self.k})"

    def sample(self, n: int, rng: np.random.Generator, method: str = "alias") -> np.ndarray:
        """Draw n i.i.d. label indices; `method` is "alias" or "inversion"."""
        if method == "alias":
            return self.sampler.draw(n, rng)
        if method == "inversion":
            return self.sampler.draw_inversion(n, rng)
        raise ValueError(f"unknown sampling method {method!r}")


def build_dist(labels, weights, name: str = "") -> CategoricalDist:
    """Build a CategoricalDist from labels and non-negative weights.

    Weights are normalized to probabilities; the alias table is built once
    here (O(k)) so that later draws are O(1) each.
    """
    labels = tuple(str(x) for x in labels)
    weights = np.asarray(weights, dtype=np.float64)
    if len(labels) != weights.size:
        raise ValueError("labels and weights must have equal length")
    if len(labels) == 0:
        raise EmptySupport("no labels")
    if len(set(labels)) != len(labels):
        raise DuplicateLabel("labels must be distinct")
    if np.any(weights < 0):
        raise NegativeWeight("weights must be non-negative")
    total = weights.sum()
    if total <= 0:
        raise EmptySupport("all weights are zero")
    probs = weights / total
    return CategoricalDist(labels=labels, probs=_readonly(probs),
                           sampler=AliasSampler(probs), name=name)


def sample_n(dist: CategoricalDist, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw n i.i.d. label indices from dist (alias route)."""
    return dist.sample(n, rng)


def zipf_pmf(alpha: float, k: int, name: str = "") -> CategoricalDist:
    """Zipf/Pareto rank-frequency law p_i = i^(-alpha) / sum_j j^(-alpha).

    Ranks are 1-indexed; labels are the rank strings "1".."k". alpha = 0
    degenerates to the uniform distribution.
    """
    if not np.isfinite(alpha) or alpha < 0:
        raise InvalidAlpha(f"alpha must be finite and >= 0, got {alpha}")
    if k < 1:
        raise ValueError("k must be >= 1")
    ranks = np.arange(1, k + 1, dtype=np.float64)
    weights = ranks ** float(-alpha)
    return build_dist([str(i) for i in range(1, k + 1)], weights,
                      name=name or f"zipf(alpha={alpha:g}, k={k})")


@dataclass(frozen=True)
class ZipfFit:
    """Maximum-likelihood Zipf exponent over an observed support."""

    alpha: float
    k: int
    log_likelihood: float
    normalizer: float

    def pmf(self, ranks) -> np.ndarray:
        """Fitted probability at the given 1-indexed ranks."""
        ranks = np.asarray(ranks, dtype=np.float64)
        return ranks ** (-self.alpha) / self.normalizer


def fit_zipf(counts) -> ZipfFit:
    """Fit the Zipf exponent by discrete MLE on descending rank counts.

    `counts` must be sorted in decreasing order; the position of each count
    is its rank (ties keep input order). Zero counts are dropped, so the
    model support is the observed support. alpha maximizes
    sum_i counts[i] * log pmf_alpha(i) via bounded one-dimensional search
    on [0.01, 10] to 1e-6.
    """
    counts = np.asarray(counts, dtype=np.float64)
    if counts.ndim != 1:
        raise ValueError("counts must be one-dimensional")
    if np.any(counts < 0) or not np.all(np.isfinite(counts)):
        raise ValueError("counts must be finite and non-negative")
    if np.any(counts[:-1] < counts[1:]):
        raise ValueError("counts must be sorted in decreasing order")
    counts = counts[counts > 0]
    k = counts.size
    if k < 2 or counts[0] == counts[-1]:
        raise DegenerateInput(
            "need at least two ranks with distinct counts to fit an exponent")

    ranks = np.arange(1, k + 1, dtype=np.float64)
    log_ranks = np.log(ranks)
    weighted_log_rank = float(np.dot(counts, log_ranks))
    total = float(counts.sum())

    def negative_log_likelihood(alpha: float) -> float:
        return alpha * weighted_log_rank + total * np.log(np.sum(ranks ** -alpha))

    lo, hi = ALPHA_SEARCH_RANGE
    result = minimize_scalar(negative_log_likelihood, bounds=(lo, hi),
                             method="bounded",
                             options={"xatol": ALPHA_SEARCH_TOL})
    alpha = float(result.x)
    normalizer = float(np.sum(ranks ** -alpha))
    return ZipfFit(alpha=alpha, k=k, log_likelihood=float(-result.fun),
                   normalizer=normalizer)


def loglog_regression_alpha(counts) -> float:
    """Least-squares slope of log count on log rank, as a diagnostic only.

    Over-weights the sparse tail relative to the MLE; exposed so fits can
    be sanity-checked, not as the estimator of record.
    """
    counts = np.asarray(counts, dtype=np.float64)
    counts = counts[counts > 0]
    if counts.size < 2:
        raise DegenerateInput("need at least two positive counts")
    x = np.log(np.arange(1, counts.size + 1, dtype=np.float64))
    y = np.log(counts)
    slope = np.polyfit(x, y, 1)[0]
    return float(-slope)


def top_share(counts, m: int) -> float:
    """Fraction of total mass carried by the m most frequent labels."""
    if m < 1:
        raise ValueError("m must be >= 1")
    counts = np.asarray(counts, dtype=np.float64)
    if counts.size == 0:
        raise EmptyInput("counts is empty")
    if np.any(counts < 0):
        raise ValueError("counts must be non-negative")
    total = counts.sum()
    if total <= 0:
        raise EmptyInput("counts sum to zero")
    if m >= counts.size:
        return 1.0
    largest = np.partition(counts, counts.size - m)[counts.size - m:]
    return float(largest.sum() / total)
