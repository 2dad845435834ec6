"""Periodic sequences in the real line and their distance-list invariants.

A periodic sequence ``{p_1, ..., p_m} + l*Z`` is stored as its sorted motif
inside ``[0, l)`` plus the period ``l``.  The gap list ``(d_1, ..., d_m)``
with ``d_i = p_{i+1} - p_i`` (and ``p_{m+1} = p_1 + l``) determines the
sequence up to translation; its lexicographically smallest rotation is a
complete translation invariant, and adding reversed rotations gives a
complete isometry invariant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import accumulate
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    DuplicatePoint,
    EmptyMotif,
    InvalidSequence,
    NegativeTolerance,
    NonPositivePeriod,
    ZeroFactor,
)

DEFAULT_EPS = 1e-9


def check_eps(eps: float) -> float:
    eps = float(eps)
    if not eps >= 0.0:
        raise NegativeTolerance(f"tolerance must be >= 0, got {eps}")
    return eps


@dataclass(frozen=True)
class PeriodicSequence1D:
    """Sorted motif in ``[0, period)`` repeated with the given period.

    The constructor only validates; use :func:`normalize` to build a sequence
    from arbitrary (unsorted, unreduced) coordinates.
    """

    motif: tuple[float, ...]
    period: float

    def __post_init__(self):
        motif = tuple(float(p) for p in self.motif)
        period = float(self.period)
        object.__setattr__(self, "motif", motif)
        object.__setattr__(self, "period", period)
        if not (period > 0.0 and math.isfinite(period)):
            raise NonPositivePeriod(f"period must be a positive real, got {period}")
        if not motif:
            raise EmptyMotif("motif must contain at least one point")
        for p in motif:
            if not (0.0 <= p < period):
                raise InvalidSequence(f"motif point {p} outside [0, {period})")
        for a, b in zip(motif, motif[1:]):
            if not a < b:
                raise InvalidSequence(f"motif must be strictly increasing, got {a} before {b}")

    def __len__(self) -> int:
        return len(self.motif)

    @property
    def size(self) -> int:
        return len(self.motif)

    def points(self, periods: int = 1) -> np.ndarray:
        """Motif points unrolled over ``periods`` consecutive period intervals."""
        base = np.asarray(self.motif)
        return np.concatenate([base + j * self.period for j in range(periods)])


@dataclass(frozen=True)
class DistanceList:
    gaps: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "gaps", tuple(float(g) for g in self.gaps))

    def __len__(self) -> int:
        return len(self.gaps)

    def __iter__(self) -> Iterator[float]:
        return iter(self.gaps)

    def __getitem__(self, i):
        return self.gaps[i]

    @property
    def total(self) -> float:
        return math.fsum(self.gaps)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.gaps, dtype=float)


def normalize(points: Iterable[float], period: float, eps: float = DEFAULT_EPS) -> PeriodicSequence1D:
    """Reduce ``points`` modulo ``period`` into ``[0, period)`` and sort them.

    Raises :class:`DuplicatePoint` if two inputs coincide modulo the period
    within ``eps``; near-coincident points are never merged.
    """
    eps = check_eps(eps)
    period = float(period)
    if not (period > 0.0 and math.isfinite(period)):
        raise NonPositivePeriod(f"period must be a positive real, got {period}")
    reduced = []
    for p in points:
        r = float(p) % period
        # tiny negative inputs round up to the period itself
        if r >= period:
            r = 0.0
        reduced.append(r)
    if not reduced:
        raise EmptyMotif("motif must contain at least one point")
    reduced.sort()
    for a, b in zip(reduced, reduced[1:]):
        if b - a <= eps:
            raise DuplicatePoint(f"points {a} and {b} coincide modulo {period}")
    if len(reduced) > 1 and reduced[0] + period - reduced[-1] <= eps:
        raise DuplicatePoint(f"points {reduced[0]} and {reduced[-1]} coincide modulo {period}")
    return PeriodicSequence1D(tuple(reduced), period)


def gap_array(S: PeriodicSequence1D) -> np.ndarray:
    motif = np.asarray(S.motif)
    return np.diff(np.append(motif, motif[0] + S.period))


def distance_list(S: PeriodicSequence1D) -> DistanceList:
    return DistanceList(tuple(gap_array(S).tolist()))


def from_gaps(gaps: Sequence[float], start: float = 0.0) -> PeriodicSequence1D:
    """Rebuild ``p_i = start + sum_{j<i} d_j`` with period ``sum(d)``."""
    gaps = [float(g) for g in gaps]
    if not gaps:
        raise EmptyMotif("gap list is empty")
    if any(g <= 0 for g in gaps):
        raise InvalidSequence("gaps must be positive")
    points = list(accumulate(gaps[:-1], initial=start))
    return normalize(points, sum(gaps), eps=0.0)


def multiple(S: PeriodicSequence1D, k: int) -> PeriodicSequence1D:
    """The sequence ``kS`` with ``k*m`` motif points in ``[0, k*l)``."""
    k = int(k)
    if k < 1:
        raise ZeroFactor(f"multiplication factor must be >= 1, got {k}")
    if k == 1:
        return S
    motif = tuple(p + j * S.period for j in range(k) for p in S.motif)
    return PeriodicSequence1D(motif, k * S.period)


def translate(S: PeriodicSequence1D, t: float) -> PeriodicSequence1D:
    return normalize([p + t for p in S.motif], S.period, eps=0.0)


def reflect(S: PeriodicSequence1D) -> PeriodicSequence1D:
    """Mirror image ``-S`` (equal as a set to ``l - S``)."""
    return normalize([-p for p in S.motif], S.period, eps=0.0)


def scale(S: PeriodicSequence1D, a: float) -> PeriodicSequence1D:
    if not a > 0:
        raise ValueError(f"scale factor must be positive, got {a}")
    return PeriodicSequence1D(tuple(a * p for p in S.motif), a * S.period)


def _divisors(m: int) -> list[int]:
    small = [d for d in range(1, math.isqrt(m) + 1) if m % d == 0]
    return sorted(set(small + [m // d for d in small]))


def rotation_period(gaps: Sequence[float], eps: float = DEFAULT_EPS) -> int:
    """Smallest divisor ``d`` of ``m`` with ``gaps`` invariant under rotation by ``d``."""
    g = np.asarray(gaps, dtype=float)
    m = len(g)
    for d in _divisors(m):
        if d == m or np.all(np.abs(g - np.roll(g, -d)) <= eps):
            return d
    return m


def reduce_to_minimal_period(S: PeriodicSequence1D, eps: float = DEFAULT_EPS) -> PeriodicSequence1D:
    eps = check_eps(eps)
    gaps = gap_array(S)
    d = rotation_period(gaps, eps)
    if d == len(S):
        return S
    return normalize(S.motif[:d], math.fsum(gaps[:d]), eps=eps)


# lexicographic minima over rotations


def lex_compare(x: Sequence[float], y: Sequence[float], eps: float = 0.0) -> int:
    """Return -1, 0, 1 comparing equal-length lists; entries within eps tie."""
    for a, b in zip(x, y):
        if a < b - eps:
            return -1
        if a > b + eps:
            return 1
    return 0


def least_rotation(s: Sequence) -> int:
    """Booth's algorithm: start index of a lexicographically least rotation."""
    n = len(s)
    f = [-1] * (2 * n)
    k = 0
    for j in range(1, 2 * n):
        sj = s[j % n]
        i = f[j - k - 1]
        while i != -1 and sj != s[(k + i + 1) % n]:
            if sj < s[(k + i + 1) % n]:
                k = j - i - 1
            i = f[i]
        if sj != s[(k + i + 1) % n]:
            # here i == -1
            if sj < s[k % n]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return k % n


def min_rotation_index(gaps: Sequence[float], eps: float = DEFAULT_EPS) -> int:
    """Index of the lexicographically least rotation; ties go to the smallest index.

    With ``eps == 0`` Booth's linear-time algorithm is used.  Otherwise every
    rotation is scanned (quadratic), comparing entries with tolerance.
    """
    gaps = list(gaps)
    m = len(gaps)
    if eps == 0.0:
        return least_rotation(gaps)
    best = 0
    for r in range(1, m):
        for i in range(m):
            a = gaps[(r + i) % m]
            b = gaps[(best + i) % m]
            if a < b - eps:
                best = r
                break
            if a > b + eps:
                break
    return best


def _rotate(gaps: Sequence[float], r: int) -> tuple[float, ...]:
    gaps = tuple(gaps)
    return gaps[r:] + gaps[:r]


def sdl_oriented(S: PeriodicSequence1D, eps: float = DEFAULT_EPS) -> DistanceList:
    gaps = distance_list(S).gaps
    return DistanceList(_rotate(gaps, min_rotation_index(gaps, check_eps(eps))))


def sdl(S: PeriodicSequence1D, eps: float = DEFAULT_EPS) -> DistanceList:
    eps = check_eps(eps)
    gaps = distance_list(S).gaps
    forward = _rotate(gaps, min_rotation_index(gaps, eps))
    rev = gaps[::-1]
    backward = _rotate(rev, min_rotation_index(rev, eps))
    if lex_compare(backward, forward, eps) < 0:
        return DistanceList(backward)
    return DistanceList(forward)


def ndl_oriented(S: PeriodicSequence1D, eps: float = DEFAULT_EPS) -> DistanceList:
    return DistanceList(tuple(g / S.period for g in sdl_oriented(S, eps)))


def ndl(S: PeriodicSequence1D, eps: float = DEFAULT_EPS) -> DistanceList:
    return DistanceList(tuple(g / S.period for g in sdl(S, eps)))
