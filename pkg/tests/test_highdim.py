from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _support import PAIR_PARAMS, pair_d11_d22, six_point_pair
from perseq import errors
from perseq.highdim import (
    PeriodicSequenceND,
    cdm,
    elm_oriented_nd,
    equivalent,
    genericity_diagnostic,
    is_generic,
    make_sequence_nd,
    multiple_nd,
    pairwise_from_cdm,
    project_time,
    project_values,
    reconstruct_from_cdm,
    reduce_nd,
    time_gaps,
    tvi,
)
from perseq.oracle import PerturbationSpec, perturb_nd, random_orthogonal, random_sequence_nd
from perseq.seqcore import normalize

nd_seqs = st.integers(0, 2**31 - 1).map(lambda s: random_sequence_nd(np.random.default_rng(s)))


def brute_elm_nd(S, Q):
    """Direct definition: shift every list/column by hand, all CDM rows."""
    m = math.lcm(len(S), len(Q))
    S, Q = multiple_nd(S, m // len(S)), multiple_nd(Q, m // len(Q))
    best = math.inf
    for s in range(m):
        dt = max(abs(time_gaps(S)[j] - time_gaps(Q)[(j + s) % m]) for j in range(m))
        dv = 0.0
        for i in range(1, m):
            for j in range(m):
                a = np.linalg.norm(S.values[j] - S.values[(i + j) % m])
                b = np.linalg.norm(Q.values[(j + s) % m] - Q.values[(i + j + s) % m])
                dv = max(dv, abs(a - b))
        best = min(best, max(dt, dv))
    return best


class TestSequence:
    def test_make_sorts_and_reduces(self):
        S = make_sequence_nd([[5, 1, 1], [0.5, 2, 2]], 4)
        np.testing.assert_array_equal(S.times, [0.5, 1])
        np.testing.assert_array_equal(S.values, [[2, 2], [1, 1]])

    def test_projections_of_pair(self):
        A, _ = six_point_pair(**PAIR_PARAMS)
        assert project_time(A) == normalize([0, 1, 1.5, 2, 3, 3.5], 4)
        assert project_values(A).shape == (6, 2)

    def test_scalar_sequence(self):
        S = make_sequence_nd([[0], [1]], 3)
        assert S.value_dim == 0
        assert project_values(S).shape == (2, 0)

    def test_single_point(self):
        S = make_sequence_nd([[7.5, 1, 2]], 2)
        assert project_time(S).motif == (1.5,)

    def test_duplicate_times(self):
        with pytest.raises(errors.DuplicatePoint):
            make_sequence_nd([[0, 1], [4, 2]], 4)

    def test_ragged_values(self):
        with pytest.raises(errors.DimensionMismatch):
            PeriodicSequenceND(np.array([0.0, 1.0]), np.zeros((3, 2)), 2)

    def test_immutable(self):
        S = make_sequence_nd([[0, 1]], 2)
        with pytest.raises(ValueError):
            S.values[0, 0] = 3

    def test_reduce(self):
        S = make_sequence_nd([[0, 1], [1, 2], [2, 1], [3, 2]], 4)
        R = reduce_nd(S)
        assert R.period == 2 and len(R) == 2
        # times repeat with period 1 but values only with period 2
        assert reduce_nd(multiple_nd(R, 3)).period == 2

    def test_reduce_keeps_distinct_values(self):
        S = make_sequence_nd([[0, 1], [1, 2], [2, 3]], 3)
        assert reduce_nd(S) is S


class TestGenericity:
    def test_triangle(self):
        assert is_generic([[0, 0], [1, 0], [0, 1]])

    def test_collinear(self):
        assert not is_generic([[0, 0], [1, 1], [2, 2], [3, 3]])
        assert "rank" in genericity_diagnostic([[0, 0], [1, 1], [2, 2]])

    def test_too_few(self):
        assert not is_generic([[0, 0], [1, 0]])
        assert "cannot" in genericity_diagnostic([[0, 0], [1, 0]])

    def test_scale_aware_threshold(self):
        pts = np.array([[0, 0], [1, 0], [0, 1]]) * 1e-6
        assert is_generic(pts)


class TestCdm:
    def test_three_points_display(self):
        pts = np.array([[0, 0], [3, 0], [0, 4]])
        a, b, c = 3.0, 5.0, 4.0  # |p1p2|, |p2p3|, |p3p1|
        M = cdm(pts, "generic").entries
        np.testing.assert_allclose(M, [[a, b, c], [c, a, b]])

    def test_right_angle(self):
        r2 = math.sqrt(2)
        np.testing.assert_allclose(cdm([[0, 0], [1, 0], [0, 1]]).entries, [[1, r2, 1], [1, 1, r2]])

    def test_pair_third_row(self):
        A, B = six_point_pair(**PAIR_PARAMS)
        wz, cz = PAIR_PARAMS["wz"], PAIR_PARAMS["cz"]
        M = cdm(A.values, "generic").entries
        assert M.shape == (3, 6)
        np.testing.assert_allclose(M[2], [2 * wz, 2 * cz, 0, 2 * wz, 2 * cz, 0], atol=1e-15)

    def test_pair_differs_at_highlighted_entries(self):
        A, B = six_point_pair(**PAIR_PARAMS)
        MA, MB = cdm(A.values, "generic").entries, cdm(B.values, "generic").entries
        d11, d22 = pair_d11_d22(**PAIR_PARAMS)
        diff = np.argwhere(~np.isclose(MA, MB, atol=1e-12, rtol=0))
        assert {(int(i), int(j)) for i, j in diff} == {(0, 0), (0, 3), (1, 1), (1, 4)}
        assert MA[0, 0] == pytest.approx(d11) and MB[0, 0] == pytest.approx(d22)
        assert MA[1, 1] == pytest.approx(d22) and MB[1, 1] == pytest.approx(d11)
        assert np.max(np.abs(MA - MB)) == pytest.approx(abs(d11 - d22))

    def test_errors(self):
        with pytest.raises(errors.TooFewPoints):
            cdm([[0, 0]])
        with pytest.raises(errors.NonGenericInput):
            cdm([[0, 0], [1, 1], [2, 2]], "generic")
        assert cdm([[0, 0], [1, 1], [2, 2]], "full").rows == 2
        with pytest.raises(ValueError):
            cdm([[0, 0], [1, 1]], "other")

    @settings(max_examples=100)
    @given(st.integers(0, 2**31 - 1), st.integers(2, 9), st.integers(1, 4))
    def test_isometry_invariance(self, seed, m, dim):
        rng = np.random.default_rng(seed)
        pts = rng.standard_normal((m, dim))
        moved = pts @ random_orthogonal(rng, dim).T + rng.standard_normal(dim)
        np.testing.assert_allclose(cdm(moved).entries, cdm(pts).entries, atol=1e-9)

    @given(st.integers(0, 2**31 - 1), st.integers(2, 9))
    def test_row_symmetry(self, seed, m):
        pts = np.random.default_rng(seed).integers(-8, 9, size=(m, 2)).astype(float)
        M = cdm(pts).entries
        for i in range(1, m):
            for j in range(m):
                assert M[i - 1, j] == M[m - i - 1, (i + j) % m]

    @settings(max_examples=100)
    @given(st.integers(0, 2**31 - 1), st.integers(2, 8), st.floats(1e-3, 1.0))
    def test_perturbation_bound(self, seed, m, e):
        rng = np.random.default_rng(seed)
        pts = rng.standard_normal((m, 3))
        step = rng.standard_normal((m, 3))
        step *= e * rng.uniform(0, 1, (m, 1)) / np.linalg.norm(step, axis=1, keepdims=True)
        assert np.max(np.abs(cdm(pts + step).entries - cdm(pts).entries)) <= 2 * e + 1e-12


class TestReconstruction:
    @pytest.mark.parametrize("dim", [2, 3])
    def test_random_generic(self, dim):
        rng = np.random.default_rng(dim)
        for _ in range(50):
            m = int(rng.integers(dim + 1, 12))
            pts = rng.standard_normal((m, dim))
            assert is_generic(pts)
            M = cdm(pts).entries
            X = reconstruct_from_cdm(M, dim)
            np.testing.assert_allclose(cdm(X).entries, M, atol=1e-8)

    def test_degenerate_frame(self):
        # first three points collinear; the frame still completes later
        pts = np.array([[0, 0], [1, 0], [2, 0], [0, 1], [3, 2]], dtype=float)
        M = cdm(pts).entries
        np.testing.assert_allclose(cdm(reconstruct_from_cdm(M, 2)).entries, M, atol=1e-9)

    def test_pairwise_layout(self):
        pts = np.array([[0, 0], [3, 0], [0, 4]], dtype=float)
        D = pairwise_from_cdm(cdm(pts).entries)
        np.testing.assert_allclose(D, np.linalg.norm(pts[:, None] - pts[None], axis=2))


class TestTvi:
    def test_scalar_degenerates_to_gaps(self):
        S = make_sequence_nd([[0], [1], [3]], 6)
        T = tvi(S)
        np.testing.assert_array_equal(T.time_gaps, [1, 2, 3])
        assert not T.value_matrix.entries.any()

    def test_rotation_invariant(self):
        rng = np.random.default_rng(5)
        S = random_sequence_nd(rng, max_size=6, value_dim=3)
        if len(S) < 2:
            S = multiple_nd(S, 2)
        g = random_orthogonal(rng, 3)
        R = PeriodicSequenceND(S.times, S.values @ g.T, S.period)
        np.testing.assert_allclose(tvi(R).value_matrix.entries, tvi(S).value_matrix.entries, atol=1e-12)


class TestEquivalence:
    def test_pair_distinguished(self):
        A, B = six_point_pair(**PAIR_PARAMS)
        assert not equivalent(A, B)

    @pytest.mark.parametrize("zero", ["wz", "cz"])
    def test_pair_collapses(self, zero):
        A, B = six_point_pair(**{**PAIR_PARAMS, zero: 0.0})
        assert equivalent(A, B)
        assert elm_oriented_nd(A, B).value == pytest.approx(0, abs=1e-12)

    def test_moved_copy(self):
        rng = np.random.default_rng(9)
        S = random_sequence_nd(rng, max_size=5)
        g = random_orthogonal(rng, 2)
        moved = make_sequence_nd(np.column_stack([S.times + 0.75, S.values @ g.T + 3]), S.period)
        assert equivalent(S, moved)

    def test_dimension_mismatch(self):
        A = make_sequence_nd([[0, 1]], 1)
        B = make_sequence_nd([[0, 1, 2]], 1)
        with pytest.raises(errors.DimensionMismatch):
            equivalent(A, B)


class TestElmNd:
    def test_pair_value(self):
        A, B = six_point_pair(**PAIR_PARAMS)
        d11, d22 = pair_d11_d22(**PAIR_PARAMS)
        d = elm_oriented_nd(A, B)
        assert d.value == pytest.approx(abs(d11 - d22), abs=1e-12)
        assert d.value == pytest.approx(abs(math.sqrt(1.28) - math.sqrt(0.68)), abs=1e-12)
        assert d.argmin_shift == 0
        assert d.value == pytest.approx(brute_elm_nd(A, B), abs=1e-12)

    def test_generic_mode_on_pair(self):
        A, B = six_point_pair(**PAIR_PARAMS)
        d11, d22 = pair_d11_d22(**PAIR_PARAMS)
        assert elm_oriented_nd(A, B, "generic").value >= abs(d11 - d22) - 1e-12

    def test_self_zero(self):
        A, _ = six_point_pair(**PAIR_PARAMS)
        assert elm_oriented_nd(A, A).value == 0

    def test_overflow(self):
        A = random_sequence_nd(np.random.default_rng(0), max_size=4)
        with pytest.raises(errors.MotifSizeOverflow):
            elm_oriented_nd(multiple_nd(A, 3), multiple_nd(A, 4), reduce=False, max_lcm=2)

    @settings(max_examples=60, deadline=None)
    @given(nd_seqs, nd_seqs)
    def test_matches_brute_force(self, S, Q):
        assert elm_oriented_nd(S, Q, reduce=False).value == pytest.approx(brute_elm_nd(S, Q), abs=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(nd_seqs, nd_seqs, nd_seqs)
    def test_axioms(self, S, Q, T):
        sq = elm_oriented_nd(S, Q).value
        assert sq >= 0
        assert sq == elm_oriented_nd(Q, S).value
        assert elm_oriented_nd(S, T).value <= sq + elm_oriented_nd(Q, T).value + 1e-9

    @settings(max_examples=100, deadline=None)
    @given(nd_seqs, st.floats(0.01, 0.49), st.integers(0, 2**32 - 1))
    def test_continuity(self, S, frac, seed):
        e = frac * float(np.min(time_gaps(S)))
        P = perturb_nd(S, PerturbationSpec(e, seed))
        assert elm_oriented_nd(S, P, reduce=False).value <= 2 * e + 1e-12
