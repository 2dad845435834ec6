"""Elastic distances between 1-D periodic sequences.

Both sequences are brought to a common motif size ``m = lcm(|S|, |Q|)`` by
repeating their gap lists, then the L-infinity distance between the gap
lists is minimised over the ``m`` cyclic shifts (oriented version) or over
the ``2m`` shifts and reversed shifts (unoriented version).  The total cost
is ``O(m^2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import MotifSizeOverflow
from .seqcore import (
    DEFAULT_EPS,
    PeriodicSequence1D,
    check_eps,
    gap_array,
    normalize,
    reduce_to_minimal_period,
)

DEFAULT_MAX_LCM = 2**20

# floats per block of shifted windows; small enough to stay in cache
_BLOCK_FLOATS = 1 << 16


@dataclass(frozen=True)
class ElasticDistance:
    """Distance value plus the alignment that achieves it.

    ``argmin_shift = s`` pairs entry ``i`` of the first gap list with entry
    ``(i + s) mod m`` of the second one, after reversing the second list when
    ``reversed`` is true.
    """

    value: float
    argmin_shift: int
    reversed: bool = False

    def __float__(self) -> float:
        return self.value


def common_size(a: int, b: int, max_lcm: int = DEFAULT_MAX_LCM) -> int:
    m = math.lcm(a, b)
    if m > max_lcm:
        raise MotifSizeOverflow(f"lcm({a}, {b}) = {m} exceeds the bound {max_lcm}")
    return m


def shift_norms(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``out[s] = max_i |a[i] - b[(i + s) % m]|`` for every shift ``s``."""
    m = len(a)
    windows = sliding_window_view(np.concatenate([b, b]), m)[:m]
    out = np.empty(m)
    step = max(1, _BLOCK_FLOATS // m)
    for start in range(0, m, step):
        block = windows[start:start + step]
        out[start:start + step] = np.abs(block - a).max(axis=1)
    return out


def _common_gaps(S, Q, reduce, eps, max_lcm):
    if reduce:
        S = reduce_to_minimal_period(S, eps)
        Q = reduce_to_minimal_period(Q, eps)
    m = common_size(len(S), len(Q), max_lcm)
    a = np.tile(gap_array(S), m // len(S))
    b = np.tile(gap_array(Q), m // len(Q))
    return a, b


def elm_oriented(
    S: PeriodicSequence1D,
    Q: PeriodicSequence1D,
    *,
    reduce: bool = True,
    eps: float = DEFAULT_EPS,
    max_lcm: int = DEFAULT_MAX_LCM,
) -> ElasticDistance:
    """Translation-invariant elastic distance.

    ``reduce`` first shrinks both sequences to their minimal periods, which
    leaves the value unchanged but can shrink the common size a lot.
    """
    a, b = _common_gaps(S, Q, reduce, check_eps(eps), max_lcm)
    norms = shift_norms(a, b)
    s = int(np.argmin(norms))
    return ElasticDistance(float(norms[s]), s, False)


def elm(
    S: PeriodicSequence1D,
    Q: PeriodicSequence1D,
    *,
    reduce: bool = True,
    eps: float = DEFAULT_EPS,
    max_lcm: int = DEFAULT_MAX_LCM,
) -> ElasticDistance:
    """Isometry-invariant elastic distance; never exceeds :func:`elm_oriented`."""
    a, b = _common_gaps(S, Q, reduce, check_eps(eps), max_lcm)
    forward = shift_norms(a, b)
    backward = shift_norms(a, b[::-1].copy())
    sf = int(np.argmin(forward))
    sb = int(np.argmin(backward))
    if backward[sb] < forward[sf]:
        return ElasticDistance(float(backward[sb]), sb, True)
    return ElasticDistance(float(forward[sf]), sf, False)


def _unit_period(S: PeriodicSequence1D) -> PeriodicSequence1D:
    return normalize([p / S.period for p in S.motif], 1.0, eps=0.0)


def elm_normalized(
    S: PeriodicSequence1D,
    Q: PeriodicSequence1D,
    oriented: bool = False,
    *,
    eps: float = DEFAULT_EPS,
    max_lcm: int = DEFAULT_MAX_LCM,
) -> ElasticDistance:
    """Similarity-invariant distance.

    Both sequences are reduced to their minimal periods and rescaled to
    period 1; the result is ``elm`` (or ``elm_oriented``) of those.
    """
    S = _unit_period(reduce_to_minimal_period(S, eps))
    Q = _unit_period(reduce_to_minimal_period(Q, eps))
    metric = elm_oriented if oriented else elm
    return metric(S, Q, reduce=False, eps=eps, max_lcm=max_lcm)
