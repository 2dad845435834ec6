"""Periodic sequences in R x R^(n-1): time gaps plus value geometry.

A sequence has motif points ``(t_i, v_i)`` with strictly increasing times in
``[0, l)`` and value vectors ``v_i`` in ``R^(n-1)``; it repeats along the
time axis with period ``l``.  Two sequences are equivalent when a time
translation combined with an isometry of the value space maps one onto the
other.  The complete invariant pairs the time gap list with the cyclic
distance matrix (CDM) of the ordered values, up to a simultaneous cyclic
shift of list entries and matrix columns.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import (
    DimensionMismatch,
    DuplicatePoint,
    EmptyMotif,
    InvalidSequence,
    NonGenericInput,
    NonPositivePeriod,
    TooFewPoints,
    ZeroFactor,
)
from .metric1d import DEFAULT_MAX_LCM, ElasticDistance, common_size
from .seqcore import DEFAULT_EPS, PeriodicSequence1D, check_eps, rotation_period

logger = logging.getLogger(__name__)

Mode = Literal["generic", "full"]


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PeriodicSequenceND:
    """``times`` has shape (m,), ``values`` has shape (m, n-1)."""

    times: np.ndarray
    values: np.ndarray
    period: float

    def __post_init__(self):
        times = _frozen(self.times)
        values = _frozen(self.values)
        period = float(self.period)
        if times.ndim != 1:
            raise InvalidSequence("times must be a 1-D array")
        if values.ndim == 1 and len(times) == len(values) and values.size == 0:
            values = _frozen(np.zeros((len(times), 0)))
        if values.ndim != 2 or values.shape[0] != times.shape[0]:
            raise DimensionMismatch(
                f"values must have shape (m, n-1) with m={len(times)}, got {values.shape}"
            )
        if not (period > 0.0 and math.isfinite(period)):
            raise NonPositivePeriod(f"period must be a positive real, got {period}")
        if len(times) == 0:
            raise EmptyMotif("motif must contain at least one point")
        if times[0] < 0 or times[-1] >= period or np.any(np.diff(times) <= 0):
            raise InvalidSequence("times must be strictly increasing inside [0, period)")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "period", period)

    def __len__(self) -> int:
        return len(self.times)

    @property
    def value_dim(self) -> int:
        return self.values.shape[1]


def make_sequence_nd(points, period: float, eps: float = DEFAULT_EPS) -> PeriodicSequenceND:
    """Build a sequence from rows ``[t, v_1, ..., v_{n-1}]``.

    Times are reduced modulo the period and the rows sorted by time.  Two
    rows whose times coincide modulo the period (within ``eps``) raise
    :class:`DuplicatePoint`.
    """
    eps = check_eps(eps)
    period = float(period)
    if not (period > 0.0 and math.isfinite(period)):
        raise NonPositivePeriod(f"period must be a positive real, got {period}")
    pts = np.array(points, dtype=float)
    if pts.size == 0:
        raise EmptyMotif("motif must contain at least one point")
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2 or pts.shape[1] < 1:
        raise DimensionMismatch("each point needs a time coordinate")
    t = pts[:, 0] % period
    t[t >= period] = 0.0
    order = np.argsort(t, kind="stable")
    t = t[order]
    gaps = np.diff(np.append(t, t[0] + period))
    if len(t) > 1 and np.any(gaps <= eps):
        i = int(np.argmax(gaps <= eps))
        raise DuplicatePoint(f"time coordinates {t[i]} and {t[(i + 1) % len(t)]} coincide modulo {period}")
    return PeriodicSequenceND(t, pts[order, 1:], period)


def project_time(S: PeriodicSequenceND) -> PeriodicSequence1D:
    return PeriodicSequence1D(tuple(S.times.tolist()), S.period)


def project_values(S: PeriodicSequenceND) -> np.ndarray:
    return S.values.copy()


def time_gaps(S: PeriodicSequenceND) -> np.ndarray:
    return np.diff(np.append(S.times, S.times[0] + S.period))


def multiple_nd(S: PeriodicSequenceND, k: int) -> PeriodicSequenceND:
    k = int(k)
    if k < 1:
        raise ZeroFactor(f"multiplication factor must be >= 1, got {k}")
    if k == 1:
        return S
    times = np.concatenate([S.times + j * S.period for j in range(k)])
    return PeriodicSequenceND(times, np.tile(S.values, (k, 1)), k * S.period)


def reduce_nd(S: PeriodicSequenceND, eps: float = DEFAULT_EPS) -> PeriodicSequenceND:
    """Shrink to the smallest period over which times and values literally repeat."""
    eps = check_eps(eps)
    m = len(S)
    gaps = time_gaps(S)
    d0 = rotation_period(gaps, eps)
    # the value period must be a multiple of the gap period and divide m
    for d in range(d0, m, d0):
        if m % d == 0 and np.all(np.abs(S.values - np.roll(S.values, -d, axis=0)) <= eps):
            break
    else:
        return S
    period = math.fsum(gaps[:d])
    return make_sequence_nd(np.column_stack([S.times[:d], S.values[:d]]), period, eps)


# cyclic distance matrices


def _as_points(points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None] if pts.size else pts.reshape(0, 0)
    if pts.ndim != 2:
        raise DimensionMismatch(f"expected an (m, d) array of points, got shape {pts.shape}")
    return pts


def genericity_diagnostic(points, eps_rank: float | None = None) -> str | None:
    """Explain why ``points`` fail to be generic, or return None if they are.

    Generic means every window of ``n`` cyclically successive points affinely
    spans ``R^(n-1)``.  Rank uses a singular-value threshold that defaults to
    ``1e-8`` times the largest pairwise distance.
    """
    pts = _as_points(points)
    m, dim = pts.shape
    if m < 1:
        raise TooFewPoints("need at least one point")
    n = dim + 1
    if m < n:
        return f"{m} points cannot affinely span R^{dim}"
    if dim == 0:
        return None
    if eps_rank is None:
        diam = max(float(np.max(np.linalg.norm(pts - p, axis=1))) for p in pts)
        eps_rank = 1e-8 * diam
    for i in range(m):
        window = pts[[(i + j) % m for j in range(n)]]
        sv = np.linalg.svd(window[1:] - window[0], compute_uv=False)
        rank = int(np.sum(sv > eps_rank))
        if rank < dim:
            return f"window starting at point {i} has affine rank {rank} < {dim}"
    return None


def is_generic(points, eps_rank: float | None = None) -> bool:
    reason = genericity_diagnostic(points, eps_rank)
    if reason is not None:
        logger.debug("non-generic input: %s", reason)
    return reason is None


def _cdm_entries(pts: np.ndarray, rows: int) -> np.ndarray:
    m = len(pts)
    out = np.empty((rows, m))
    for i in range(1, rows + 1):
        out[i - 1] = np.linalg.norm(pts - np.roll(pts, -i, axis=0), axis=1)
    return out


def _row_count(m: int, dim: int, mode: Mode) -> int:
    if mode == "full":
        return max(m - 1, 0)
    if mode == "generic":
        return min(dim + 1, m - 1)
    raise ValueError(f"unknown CDM mode {mode!r}")


@dataclass(frozen=True, eq=False)
class CyclicDistanceMatrix:
    """``entries[i-1, j] = |p_j - p_{(i+j) mod m}|`` for offsets ``i = 1..rows``."""

    entries: np.ndarray
    mode: str

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def shifted(self, s: int) -> np.ndarray:
        """Columns cyclically shifted so that column ``j`` becomes old column ``j + s``."""
        return np.roll(self.entries, -s, axis=1)


def cdm(points, mode: Mode = "full") -> CyclicDistanceMatrix:
    pts = _as_points(points)
    m = len(pts)
    if m < 2:
        raise TooFewPoints(f"a cyclic distance matrix needs m >= 2 points, got {m}")
    rows = _row_count(m, pts.shape[1], mode)
    if mode == "generic":
        reason = genericity_diagnostic(pts)
        if reason is not None:
            raise NonGenericInput(reason)
    return CyclicDistanceMatrix(_frozen(_cdm_entries(pts, rows)), mode)


def pairwise_from_cdm(entries: np.ndarray) -> np.ndarray:
    """Full symmetric distance matrix from a full-mode CDM (m-1 rows)."""
    entries = np.asarray(entries, dtype=float)
    rows, m = entries.shape
    if rows != m - 1:
        raise ValueError(f"need a full CDM with {m - 1} rows, got {rows}")
    D = np.zeros((m, m))
    for i in range(1, m):
        for j in range(m):
            D[j, (i + j) % m] = entries[i - 1, j]
    return D


def reconstruct_from_cdm(entries: np.ndarray, dim: int, tol: float = 1e-9) -> np.ndarray:
    """Rebuild ordered points in ``R^dim`` (up to isometry) from a full CDM.

    Points are placed one at a time.  The first sits at the origin; each
    point that leaves the span of the points fixed so far opens a new
    coordinate axis with positive coordinate, and every other point is
    determined by its distances to that affine frame.
    """
    D = pairwise_from_cdm(entries)
    m = len(D)
    scale = max(float(D.max()), 1.0)
    X = np.zeros((m, dim))
    frame: list[int] = []  # frame[k] has nonzero coordinates only up to axis k
    for j in range(1, m):
        y = np.zeros(dim)
        r0 = D[j, 0] ** 2
        for k, f in enumerate(frame):
            # 2 <x_f, y> = |y|^2 + |x_f|^2 - |y - x_f|^2
            rhs = 0.5 * (r0 + X[f] @ X[f] - D[j, f] ** 2)
            y[k] = (rhs - X[f, :k] @ y[:k]) / X[f, k]
        h2 = r0 - y[: len(frame)] @ y[: len(frame)]
        if len(frame) < dim and h2 > (tol * scale) ** 2:
            y[len(frame)] = math.sqrt(h2)
            frame.append(j)
        X[j] = y
    return X


# time-value invariant


@dataclass(frozen=True, eq=False)
class TimeValueInvariant:
    time_gaps: np.ndarray
    value_matrix: CyclicDistanceMatrix

    def __post_init__(self):
        if len(self.time_gaps) != self.value_matrix.cols:
            raise DimensionMismatch("time gap count must equal the CDM column count")


def tvi(S: PeriodicSequenceND, mode: Mode = "full") -> TimeValueInvariant:
    """Time gaps and value CDM, kept in motif order (not canonicalised)."""
    return TimeValueInvariant(_frozen(time_gaps(S)), cdm(S.values, mode))


def _common_multiples(S, Q, max_lcm):
    if S.value_dim != Q.value_dim:
        raise DimensionMismatch(
            f"value dimensions differ: {S.value_dim} vs {Q.value_dim}"
        )
    m = common_size(len(S), len(Q), max_lcm)
    return multiple_nd(S, m // len(S)), multiple_nd(Q, m // len(Q)), m


def _nd_shift_costs(S, Q, mode, max_lcm) -> np.ndarray:
    """``max(d_t, d_v)`` for every cyclic shift of the second sequence."""
    S, Q, m = _common_multiples(S, Q, max_lcm)
    a = time_gaps(S)
    b = time_gaps(Q)
    rows = _row_count(m, S.value_dim, mode)
    if mode == "generic":
        for X in (S, Q):
            reason = genericity_diagnostic(X.values)
            if reason is not None:
                raise NonGenericInput(reason)
    A = _cdm_entries(S.values, rows)
    B = _cdm_entries(Q.values, rows)
    b2 = np.concatenate([b, b])
    B2 = np.concatenate([B, B], axis=1)
    costs = np.empty(m)
    for s in range(m):
        d_t = np.max(np.abs(a - b2[s:s + m]))
        d_v = np.max(np.abs(A - B2[:, s:s + m])) if rows else 0.0
        costs[s] = max(d_t, d_v)
    return costs


def elm_oriented_nd(
    S: PeriodicSequenceND,
    Q: PeriodicSequenceND,
    mode: Mode = "full",
    *,
    reduce: bool = True,
    eps: float = DEFAULT_EPS,
    max_lcm: int = DEFAULT_MAX_LCM,
) -> ElasticDistance:
    """Elastic distance: min over cyclic shifts of ``max(d_t, d_v)``.

    ``d_t`` is the L-infinity distance of the time gap lists and ``d_v`` the
    largest absolute difference of CDM entries under the same column shift.
    Costs ``O(m^3)`` in full mode for ``m = lcm(|S|, |Q|)``.
    """
    if reduce:
        S = reduce_nd(S, eps)
        Q = reduce_nd(Q, eps)
    costs = _nd_shift_costs(S, Q, mode, max_lcm)
    s = int(np.argmin(costs))
    return ElasticDistance(float(costs[s]), s, False)


def equivalent(
    S: PeriodicSequenceND,
    Q: PeriodicSequenceND,
    eps: float = DEFAULT_EPS,
    *,
    max_lcm: int = DEFAULT_MAX_LCM,
) -> bool:
    """True iff some cyclic shift matches time gaps and full CDMs within ``eps``."""
    eps = check_eps(eps)
    costs = _nd_shift_costs(S, Q, "full", max_lcm)
    return bool(np.min(costs) <= eps)
