"""Joint (first name, last name) distributions.

Holds the sparse empirical pair law, its two marginals, the independence
product built from them, and Pearson chi-square diagnostics for how far
the empirical law sits from independence.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .distributions import AliasSampler, CategoricalDist, build_dist
from .errors import DegenerateTable, EmptyInput

DEFAULT_TOP = 20


@dataclass(frozen=True)
class JointDist:
    """Sparse counts over (first, last) pairs with label dictionaries.

    Pair p is stored as three parallel arrays: first index, last index and
    count, one slot per distinct observed pair. Label order is first
    appearance in the input.
    """

    first_labels: tuple[str, ...]
    last_labels: tuple[str, ...]
    pair_first: np.ndarray = field(repr=False)
    pair_last: np.ndarray = field(repr=False)
    pair_counts: np.ndarray = field(repr=False)
    total: int = 0

    @property
    def k1(self) -> int:
        return len(self.first_labels)

    @property
    def k2(self) -> int:
        return len(self.last_labels)

    @property
    def n_pairs(self) -> int:
        return self.pair_counts.size

    def counts_dict(self) -> dict[tuple[str, str], int]:
        return {
            (self.first_labels[i], self.last_labels[j]): int(c)
            for i, j, c in zip(self.pair_first, self.pair_last, self.pair_counts)
        }


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


def from_counts(pair_counts) -> JointDist:
    """Build a JointDist from (first, last, count) triples.

    Triples with the same pair are merged; label indices follow first
    appearance. Counts must be positive integers.
    """
    firsts: dict[str, int] = {}
    lasts: dict[str, int] = {}
    cells: dict[tuple[int, int], int] = {}
    for first, last, count in pair_counts:
        count = int(count)
        if count < 1:
            raise ValueError("pair counts must be >= 1")
        i = firsts.setdefault(str(first), len(firsts))
        j = lasts.setdefault(str(last), len(lasts))
        cells[(i, j)] = cells.get((i, j), 0) + count
    if not cells:
        raise EmptyInput("no pair records")
    pair_first = np.fromiter((ij[0] for ij in cells), dtype=np.int64, count=len(cells))
    pair_last = np.fromiter((ij[1] for ij in cells), dtype=np.int64, count=len(cells))
    counts = np.fromiter(cells.values(), dtype=np.int64, count=len(cells))
    return JointDist(
        first_labels=tuple(firsts),
        last_labels=tuple(lasts),
        pair_first=_freeze(pair_first),
        pair_last=_freeze(pair_last),
        pair_counts=_freeze(counts),
        total=int(counts.sum()),
    )


def from_records(records) -> JointDist:
    """Aggregate raw (first, last) records into a JointDist."""
    return from_counts((first, last, 1) for first, last in records)


def marginals(joint: JointDist) -> tuple[CategoricalDist, CategoricalDist]:
    """Marginal laws of first names and last names."""
    first_counts = np.bincount(joint.pair_first, weights=joint.pair_counts,
                               minlength=joint.k1)
    last_counts = np.bincount(joint.pair_last, weights=joint.pair_counts,
                              minlength=joint.k2)
    return (
        build_dist(joint.first_labels, first_counts, name="first-name marginal"),
        build_dist(joint.last_labels, last_counts, name="last-name marginal"),
    )


@dataclass(frozen=True)
class IndependentPairSampler:
    """Draws first and last independently from two marginal laws.

    Realizes the independence product without ever materializing the
    k1 x k2 table; a draw is the composite code i1 * k2 + i2.
    """

    firsts: CategoricalDist
    lasts: CategoricalDist

    @property
    def code_space(self) -> int:
        return self.firsts.k * self.lasts.k

    def draw_codes(self, n: int, rng: np.random.Generator) -> np.ndarray:
        i1 = self.firsts.sample(n, rng)
        i2 = self.lasts.sample(n, rng)
        return i1 * np.int64(self.lasts.k) + i2

    def describe(self) -> str:
        return f"independent-product(k1={self.firsts.k}, k2={self.lasts.k})"


@dataclass(frozen=True)
class EmpiricalPairSampler:
    """Draws whole (first, last) pairs with their empirical frequencies.

    Codes are indices into the distinct observed pairs, so unobserved
    combinations have probability zero by construction.
    """

    joint: JointDist
    sampler: AliasSampler = field(repr=False)

    @property
    def code_space(self) -> int:
        return self.joint.n_pairs

    def draw_codes(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return self.sampler.draw(n, rng)

    def describe(self) -> str:
        j = self.joint
        return f"empirical-pairs(k1={j.k1}, k2={j.k2}, pairs={j.n_pairs})"


def independent_product_sampler(joint: JointDist) -> IndependentPairSampler:
    """Sampler for the independence product of joint's marginals."""
    firsts, lasts = marginals(joint)
    return IndependentPairSampler(firsts=firsts, lasts=lasts)


def empirical_pair_sampler(joint: JointDist) -> EmpiricalPairSampler:
    """Sampler for the empirical pair law counts/total."""
    probs = joint.pair_counts / joint.total
    return EmpiricalPairSampler(joint=joint, sampler=AliasSampler(probs))


@dataclass(frozen=True)
class ResidualCell:
    first: str
    last: str
    observed: int
    expected: float
    residual: float


@dataclass(frozen=True)
class ResidualTable:
    """Pearson residuals of an independence test on a restricted table."""

    cells: tuple[ResidualCell, ...]
    chi_square: float
    dof: int
    top_first: tuple[str, ...]
    top_last: tuple[str, ...]


def pearson_residuals(joint: JointDist, top_first: int = DEFAULT_TOP,
                      top_last: int = DEFAULT_TOP) -> ResidualTable:
    """Chi-square independence diagnostics on the top-m contingency table.

    The table is restricted to the `top_first` most frequent first names
    and `top_last` most frequent last names (ties broken by input order);
    expected cell counts come from the restricted table's own margins.
    """
    if not 1 <= top_first <= joint.k1:
        raise ValueError(f"top_first must be in [1, {joint.k1}]")
    if not 1 <= top_last <= joint.k2:
        raise ValueError(f"top_last must be in [1, {joint.k2}]")

    first_counts = np.bincount(joint.pair_first, weights=joint.pair_counts,
                               minlength=joint.k1)
    last_counts = np.bincount(joint.pair_last, weights=joint.pair_counts,
                              minlength=joint.k2)
    rows = np.argsort(-first_counts, kind="stable")[:top_first]
    cols = np.argsort(-last_counts, kind="stable")[:top_last]

    row_pos = {int(i): r for r, i in enumerate(rows)}
    col_pos = {int(j): c for c, j in enumerate(cols)}
    observed = np.zeros((top_first, top_last), dtype=np.int64)
    for i, j, c in zip(joint.pair_first, joint.pair_last, joint.pair_counts):
        r = row_pos.get(int(i))
        s = col_pos.get(int(j))
        if r is not None and s is not None:
            observed[r, s] += c

    row_totals = observed.sum(axis=1)
    col_totals = observed.sum(axis=0)
    grand = observed.sum()
    if np.any(row_totals == 0) or np.any(col_totals == 0):
        raise DegenerateTable(
            "restricted table has an empty row or column; lower the top-m cut")

    expected = np.outer(row_totals, col_totals) / grand
    residual = (observed - expected) / np.sqrt(expected)
    chi_square = float(np.sum(residual**2))

    first_names = tuple(joint.first_labels[int(i)] for i in rows)
    last_names = tuple(joint.last_labels[int(j)] for j in cols)
    cells = tuple(
        ResidualCell(first=first_names[r], last=last_names[s],
                     observed=int(observed[r, s]),
                     expected=float(expected[r, s]),
                     residual=float(residual[r, s]))
        for r in range(top_first) for s in range(top_last)
    )
    return ResidualTable(cells=cells, chi_square=chi_square,
                         dof=(top_first - 1) * (top_last - 1),
                         top_first=first_names, top_last=last_names)
