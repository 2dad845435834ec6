"""Local-cluster invariants of 1-D periodic sequences.

For a radius ``alpha`` every motif point ``p`` has a centered cluster: the
signed offsets ``q - p`` of all sequence points ``q`` with ``|q - p| <= alpha``.
Grouping motif points by equal clusters gives the alpha-partition; one
weighted representative per class gives the isoset.  Partitions only change
at the finitely many critical radii ``|p_i - p_j + c*l|``, so every scan
below runs over that event set instead of a continuous parameter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import IndexOutOfRange, NegativeRadius, RadiusMismatch
from .seqcore import DEFAULT_EPS, PeriodicSequence1D, check_eps, gap_array


@dataclass(frozen=True)
class CenteredCluster:
    offsets: tuple[float, ...]
    radius: float

    def matches(self, other: "CenteredCluster", eps: float = DEFAULT_EPS) -> bool:
        if len(self.offsets) != len(other.offsets):
            return False
        return all(abs(a - b) <= eps for a, b in zip(self.offsets, other.offsets))


@dataclass(frozen=True)
class AlphaPartition:
    radius: float
    classes: tuple[tuple[tuple[int, ...], CenteredCluster], ...]

    def blocks(self) -> frozenset[frozenset[int]]:
        return frozenset(frozenset(idx) for idx, _ in self.classes)

    def same_blocks(self, other: "AlphaPartition") -> bool:
        return self.blocks() == other.blocks()

    def refines(self, other: "AlphaPartition") -> bool:
        """True if every class of ``self`` sits inside one class of ``other``."""
        coarse = other.blocks()
        return all(any(b <= c for c in coarse) for b in self.blocks())

    def __len__(self) -> int:
        return len(self.classes)


@dataclass(frozen=True)
class Isoset:
    radius: float
    items: tuple[tuple[CenteredCluster, Fraction], ...]

    def __len__(self) -> int:
        return len(self.items)


def _check_radius(alpha: float) -> float:
    alpha = float(alpha)
    if not alpha >= 0:
        raise NegativeRadius(f"radius must be >= 0, got {alpha}")
    return alpha


def alpha_cluster(S: PeriodicSequence1D, index: int, alpha: float, eps: float = DEFAULT_EPS) -> CenteredCluster:
    alpha = _check_radius(alpha)
    eps = check_eps(eps)
    if not 0 <= index < len(S):
        raise IndexOutOfRange(f"motif index {index} not in [0, {len(S)})")
    p = S.motif[index]
    reach = math.ceil(alpha / S.period) + 1
    offsets = []
    for c in range(-reach, reach + 1):
        for q in S.motif:
            o = (q - p) + c * S.period
            if abs(o) <= alpha + eps:
                offsets.append(o)
    offsets.sort()
    return CenteredCluster(tuple(offsets), alpha)


def alpha_partition(S: PeriodicSequence1D, alpha: float, eps: float = DEFAULT_EPS) -> AlphaPartition:
    """Group motif indices by equal centered clusters; classes ordered by first index."""
    groups: list[tuple[list[int], CenteredCluster]] = []
    for i in range(len(S)):
        cl = alpha_cluster(S, i, alpha, eps)
        for members, rep in groups:
            if rep.matches(cl, eps):
                members.append(i)
                break
        else:
            groups.append(([i], cl))
    return AlphaPartition(float(alpha), tuple((tuple(idx), rep) for idx, rep in groups))


def critical_radii(S: PeriodicSequence1D, alpha_max: float, eps: float = DEFAULT_EPS) -> list[float]:
    """Sorted distinct values ``|q - p + c*l| <= alpha_max``, always including 0."""
    alpha_max = _check_radius(alpha_max)
    reach = math.ceil(alpha_max / S.period) + 1
    found = {0.0}
    for p in S.motif:
        for c in range(-reach, reach + 1):
            for q in S.motif:
                d = abs((q - p) + c * S.period)
                if d <= alpha_max:
                    found.add(d)
    out: list[float] = []
    for d in sorted(found):
        if not out or d - out[-1] > eps:
            out.append(d)
    return out


def bridge(S: PeriodicSequence1D) -> float:
    return float(np.max(gap_array(S)))


def min_stable_radius(S: PeriodicSequence1D, eps: float = DEFAULT_EPS) -> float:
    """Smallest radius ``alpha >= beta`` with ``P(alpha) == P(alpha - beta)``.

    ``beta`` is the bridge length.  The lower radius ``alpha - beta`` must also
    reach the nearest neighbour (at least the minimum gap), so a partition
    compared against bare single-point clusters never counts as stable.  This
    only matters for lattices, whose partition is always a single class; for
    them the result is ``beta + l``.
    """
    beta = bridge(S)
    min_gap = float(np.min(gap_array(S)))
    radii = critical_radii(S, S.period + beta, eps)
    candidates = {beta}
    candidates.update(d for d in radii if d >= beta)
    candidates.update(d + beta for d in radii if d <= S.period)
    for alpha in sorted(candidates):
        if alpha > beta + S.period + eps:
            break
        if alpha - beta < min_gap - eps:
            continue
        if alpha_partition(S, alpha, eps).same_blocks(alpha_partition(S, alpha - beta, eps)):
            return alpha
    raise AssertionError("no stable radius found up to beta + period")


def isoset(S: PeriodicSequence1D, alpha: float, eps: float = DEFAULT_EPS) -> Isoset:
    part = alpha_partition(S, alpha, eps)
    m = len(S)
    items = [(rep, Fraction(len(idx), m)) for idx, rep in part.classes]
    items.sort(key=lambda item: (len(item[0].offsets), item[0].offsets))
    return Isoset(float(alpha), tuple(items))


def isotree(S: PeriodicSequence1D, alpha_max: float, eps: float = DEFAULT_EPS) -> list[tuple[float, AlphaPartition]]:
    """Radii in ``[0, alpha_max]`` where the partition changes, with the partition from there on."""
    events: list[tuple[float, AlphaPartition]] = []
    for alpha in critical_radii(S, alpha_max, eps):
        part = alpha_partition(S, alpha, eps)
        if not events or not part.same_blocks(events[-1][1]):
            events.append((alpha, part))
    return events


def isoset_equal(I: Isoset, J: Isoset, eps: float = DEFAULT_EPS) -> bool:
    """True iff a weight-preserving bijection matches clusters within ``eps``."""
    eps = check_eps(eps)
    if abs(I.radius - J.radius) > eps:
        raise RadiusMismatch(f"isosets at different radii {I.radius} and {J.radius}")
    if len(I) != len(J):
        return False
    cost = np.ones((len(I), len(J)))
    for a, (ci, wi) in enumerate(I.items):
        for b, (cj, wj) in enumerate(J.items):
            if wi == wj and ci.matches(cj, eps):
                cost[a, b] = 0.0
    rows, cols = linear_sum_assignment(cost)
    return bool(cost[rows, cols].sum() == 0.0)
