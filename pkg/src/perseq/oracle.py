"""Independent verification harness.

Random generators, order-preserving perturbations, an exact bottleneck
distance for the small-perturbation regime, and a randomized checker for the
metric axioms.  All randomness goes through ``numpy.random.default_rng``
(PCG64); trial ``i`` of a run seeded with ``K`` uses ``default_rng([K, i])``
so any single failing trial can be replayed on its own.

Random 1-D sequences are drawn on a dyadic grid (periods in steps of 1/8,
points in steps of 1/64).  Every sum and difference of such numbers is exact
in double precision, so checks stated as exact equalities stay meaningful.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import EpsilonTooLarge
from .highdim import PeriodicSequenceND, elm_oriented_nd, make_sequence_nd, multiple_nd
from .metric1d import DEFAULT_MAX_LCM, common_size, elm, elm_oriented
from .seqcore import (
    DEFAULT_EPS,
    PeriodicSequence1D,
    gap_array,
    min_rotation_index,
    multiple,
    normalize,
    reflect,
    sdl_oriented,
    translate,
)

PERIOD_STEP = 1 / 8
POINT_STEP = 1 / 64


def random_sequence(
    rng: np.random.Generator,
    max_size: int = 8,
    period_range: tuple[float, float] = (1.0, 10.0),
) -> PeriodicSequence1D:
    lo, hi = (round(x / PERIOD_STEP) for x in period_range)
    period = int(rng.integers(lo, hi + 1)) * PERIOD_STEP
    slots = round(period / POINT_STEP)
    m = int(rng.integers(1, min(max_size, slots) + 1))
    idx = rng.choice(slots, size=m, replace=False)
    return normalize(np.sort(idx) * POINT_STEP, period, eps=0.0)


def random_orthogonal(rng: np.random.Generator, dim: int) -> np.ndarray:
    if dim == 0:
        return np.zeros((0, 0))
    q, r = np.linalg.qr(rng.standard_normal((dim, dim)))
    return q * np.sign(np.diag(r))


def random_sequence_nd(
    rng: np.random.Generator,
    max_size: int = 4,
    value_dim: int = 2,
    period_range: tuple[float, float] = (1.0, 10.0),
) -> PeriodicSequenceND:
    t = random_sequence(rng, max_size, period_range)
    values = rng.integers(-64, 65, size=(len(t), value_dim)) / 16
    return PeriodicSequenceND(np.array(t.motif), values, t.period)


# perturbations


@dataclass(frozen=True)
class PerturbationSpec:
    epsilon: float
    seed: int = 0
    preserve_order: bool = True


def _check_spec(spec: PerturbationSpec, min_gap: float) -> None:
    if not spec.epsilon > 0:
        raise EpsilonTooLarge(f"epsilon must be positive, got {spec.epsilon}")
    if spec.preserve_order and not 2 * spec.epsilon < min_gap:
        raise EpsilonTooLarge(
            f"epsilon {spec.epsilon} must be below half the minimum gap {min_gap}"
        )


def perturb(S: PeriodicSequence1D, spec: PerturbationSpec) -> PeriodicSequence1D:
    """Move every motif point by an independent uniform draw from ``[-eps, eps]``.

    The identity pairing of old and new points witnesses a bottleneck
    distance of at most ``eps``.
    """
    _check_spec(spec, float(np.min(gap_array(S))))
    rng = np.random.default_rng(spec.seed)
    shift = rng.uniform(-spec.epsilon, spec.epsilon, size=len(S))
    return normalize(np.asarray(S.motif) + shift, S.period, eps=0.0)


def perturb_nd(S: PeriodicSequenceND, spec: PerturbationSpec) -> PeriodicSequenceND:
    """Move every point of ``R x R^(n-1)`` by a random vector of length at most eps."""
    gaps = np.diff(np.append(S.times, S.times[0] + S.period))
    _check_spec(spec, float(np.min(gaps)))
    rng = np.random.default_rng(spec.seed)
    n = 1 + S.value_dim
    direction = rng.standard_normal((len(S), n))
    direction /= np.linalg.norm(direction, axis=1, keepdims=True)
    # keep strictly inside the ball so rounding cannot push past eps
    radius = spec.epsilon * rng.uniform(0.0, 1.0, size=(len(S), 1)) * (1 - 1e-12)
    move = direction * radius
    pts = np.column_stack([S.times, S.values]) + move
    return make_sequence_nd(pts, S.period, eps=0.0)


# bottleneck distance


def bottleneck_1d(
    S: PeriodicSequence1D,
    Q: PeriodicSequence1D,
    eps: float = DEFAULT_EPS,
    max_lcm: int = DEFAULT_MAX_LCM,
) -> float:
    """Bottleneck distance up to translation, over order-preserving bijections.

    Both sequences are taken to a common motif size; if their periods then
    differ by more than ``eps`` the densities differ and the distance is
    infinite.  Otherwise, for each cyclic index shift ``j`` the pairing
    ``p_i -> q_{i+j}`` (with lattice offsets) leaves displacements ``delta_i``
    and the best translation is their midrange, costing half their spread.
    Equals the true bottleneck infimum whenever the result is below half of
    the minimum gap.
    """
    m = common_size(len(S), len(Q), max_lcm)
    Sm = multiple(S, m // len(S))
    Qm = multiple(Q, m // len(Q))
    if abs(Sm.period - Qm.period) > eps:
        return math.inf
    p = np.asarray(Sm.motif)
    q = np.asarray(Qm.motif)
    q_ext = np.concatenate([q, q + Qm.period])
    best = math.inf
    for j in range(m):
        delta = p - q_ext[j:j + m]
        best = min(best, (delta.max() - delta.min()) / 2)
    return float(best)


# axiom checker


@dataclass
class Violation:
    check: str
    metric: str
    trial: int
    detail: dict

    def to_dict(self) -> dict:
        return {"check": self.check, "metric": self.metric, "trial": self.trial, "detail": self.detail}


@dataclass
class AxiomReport:
    trials: int
    seed: int
    counts: Counter = field(default_factory=Counter)
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "seed": self.seed,
            "checks": dict(sorted(self.counts.items())),
            "violations": [v.to_dict() for v in self.violations],
            "ok": self.ok,
        }


def _seq_repr(S) -> dict:
    if isinstance(S, PeriodicSequence1D):
        return {"motif": list(S.motif), "period": S.period}
    return {"times": S.times.tolist(), "values": S.values.tolist(), "period": S.period}


def _reversed_sdl(S: PeriodicSequence1D, eps: float) -> tuple[float, ...]:
    rev = tuple(gap_array(S)[::-1].tolist())
    r = min_rotation_index(rev, eps)
    return rev[r:] + rev[:r]


class _Recorder:
    def __init__(self, report: AxiomReport, trial: int):
        self.report = report
        self.trial = trial

    def __call__(self, check: str, metric: str, ok: bool, **witness):
        self.report.counts[f"{metric}:{check}"] += 1
        if not ok:
            detail = {k: _seq_repr(v) if not isinstance(v, (int, float)) else v for k, v in witness.items()}
            self.report.violations.append(Violation(check, metric, self.trial, detail))


def _check_1d(record, rng, sampler, eps):
    S, Q, T = sampler(rng), sampler(rng), sampler(rng)
    t = int(rng.integers(-640, 641)) * POINT_STEP
    k = int(rng.integers(2, 7))
    for name, d in (("elm", elm), ("elm_oriented", elm_oriented)):
        sq = d(S, Q).value
        record("nonnegative", name, sq >= 0, S=S, Q=Q, value=sq)
        qs = d(Q, S).value
        record("symmetry", name, sq == qs, S=S, Q=Q, forward=sq, backward=qs)
        st, qt = d(S, T).value, d(Q, T).value
        record("triangle", name, st <= sq + qt + eps, S=S, Q=Q, T=T, st=st, sq=sq, qt=qt)
        same = d(S, translate(S, t)).value
        record("identity", name, same <= eps, S=S, shift=t, value=same)
        mult = d(multiple(S, k), Q).value
        record("multiple_invariance", name, mult == sq, S=S, Q=Q, k=k, multiple=mult, base=sq)
    unoriented, oriented = elm(S, Q).value, elm_oriented(S, Q).value
    record("order", "elm", unoriented <= oriented, S=S, Q=Q, elm=unoriented, elm_oriented=oriented)
    mirror = elm(S, reflect(S)).value
    record("reflection_identity", "elm", mirror <= eps, S=S, value=mirror)
    chiral_zero = elm_oriented(S, reflect(S)).value <= eps
    achiral = sdl_oriented(S, eps).gaps == _reversed_sdl(S, eps)
    record("reflection_iff", "elm_oriented", chiral_zero == achiral, S=S)


def _check_nd(record, rng, sampler, eps):
    S, Q, T = sampler(rng), sampler(rng), sampler(rng)
    name = "elm_oriented_nd"
    sq = elm_oriented_nd(S, Q).value
    qs = elm_oriented_nd(Q, S).value
    record("nonnegative", name, sq >= 0, S=S, Q=Q, value=sq)
    record("symmetry", name, sq == qs, S=S, Q=Q, forward=sq, backward=qs)
    st, qt = elm_oriented_nd(S, T).value, elm_oriented_nd(Q, T).value
    record("triangle", name, st <= sq + qt + eps, S=S, Q=Q, T=T, st=st, sq=sq, qt=qt)
    g = random_orthogonal(rng, S.value_dim)
    shift_t = int(rng.integers(-640, 641)) * POINT_STEP
    offset = rng.standard_normal(S.value_dim)
    moved = make_sequence_nd(np.column_stack([S.times + shift_t, S.values @ g.T + offset]), S.period, 0.0)
    same = elm_oriented_nd(S, moved).value
    record("identity", name, same <= eps, S=S, moved=moved, value=same)
    k = int(rng.integers(2, 7))
    base = elm_oriented_nd(S, Q, reduce=False).value
    mult = elm_oriented_nd(multiple_nd(S, k), Q, reduce=False).value
    record("multiple_invariance", name, mult == base, S=S, Q=Q, k=k, multiple=mult, base=base)


def check_axioms(
    sampler: Callable[[np.random.Generator], PeriodicSequence1D] | None = None,
    trials: int = 1000,
    seed: int = 0,
    *,
    nd_sampler: Callable[[np.random.Generator], PeriodicSequenceND] | None = None,
    include_nd: bool = True,
    eps: float = DEFAULT_EPS,
) -> AxiomReport:
    """Randomized metric-axiom checks for ``elm``, ``elm_oriented`` and ``elm_oriented_nd``.

    Symmetry and multiple invariance are checked as exact equalities,
    identity as ``<= eps`` and the triangle inequality with ``+ eps`` slack.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    sampler = sampler or random_sequence
    nd_sampler = nd_sampler or random_sequence_nd
    report = AxiomReport(trials, seed)
    for trial in range(trials):
        rng = np.random.default_rng([seed, trial])
        record = _Recorder(report, trial)
        _check_1d(record, rng, sampler, eps)
        if include_nd:
            _check_nd(record, rng, nd_sampler, eps)
    return report
