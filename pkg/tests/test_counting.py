import math

import numpy as np
import pytest

from simtri.counting import (
    PointConfig,
    averaging_identity_check,
    build_similarity_hypergraph,
    count_brute_force,
    count_delta_similar,
    count_eps_similar,
    local_improve,
    _codegree_zero_pairs,
)
from simtri.errors import BudgetExceeded, InvalidEpsilon
from simtri.geometry import TriangleShape

SQRT3 = math.sqrt(3.0)
EQ = TriangleShape.equilateral()
RIGHT_ISO = TriangleShape.from_degrees(90, 45, 45)
DEG1 = math.radians(1.0)

EQUILATERAL3 = PointConfig([[0, 0], [1, 0], [0.5, SQRT3 / 2]])
UNIT_SQUARE = PointConfig([[0, 0], [1, 0], [1, 1], [0, 1]])


class TestBuildHypergraph:
    def test_triangle_itself(self):
        sc = build_similarity_hypergraph(EQUILATERAL3, EQ, DEG1)
        assert sc.total == 1
        assert sc.hypergraph.edges == {(1, 2, 3)}

    def test_collinear_points(self):
        P = PointConfig([[i, 0] for i in range(20)])
        assert count_eps_similar(P, EQ, DEG1) == 0

    def test_unit_square(self):
        sc = build_similarity_hypergraph(UNIT_SQUARE, RIGHT_ISO, DEG1)
        assert sc.total == 4

    def test_total_matches_edge_count(self, rng):
        P = PointConfig(rng.normal(size=(12, 2)))
        sc = build_similarity_hypergraph(P, EQ, 0.3)
        assert sc.total == len(sc.hypergraph.edges)

    def test_invalid_eps(self):
        with pytest.raises(InvalidEpsilon):
            count_eps_similar(UNIT_SQUARE, EQ, 0.0)

    def test_pruned_equals_brute_force(self, rng):
        for n in (8, 15, 30, 60):
            P = PointConfig(rng.normal(size=(n, 2)))
            for T, eps in ((EQ, 0.25), (RIGHT_ISO, 0.12), (EQ, DEG1)):
                assert count_eps_similar(P, T, eps) == count_brute_force(P, T, eps)

    def test_rigid_motion_invariance(self, rng):
        P = PointConfig(rng.normal(size=(15, 2)))
        base = count_eps_similar(P, EQ, 0.2)
        for _ in range(10):
            Q = P.transformed(
                scale=rng.uniform(0.1, 8),
                angle=rng.uniform(0, 2 * math.pi),
                shift=rng.normal(size=2),
                reflect=bool(rng.integers(2)),
            )
            assert count_eps_similar(Q, EQ, 0.2) == base

    def test_deletion_monotonicity(self, rng):
        P = PointConfig(rng.normal(size=(12, 2)))
        full = count_eps_similar(P, EQ, 0.3)
        for x in range(len(P)):
            assert count_eps_similar(P.without(x), EQ, 0.3) <= full


class TestDeltaCount:
    def test_exact_copy(self):
        assert count_delta_similar(UNIT_SQUARE, UNIT_SQUARE, 0.0) == 1

    def test_clusters_lower_bound(self, rng):
        # k groups of m points each clustered at the reference corners
        A = PointConfig([[0, 0], [1, 0], [0.5, SQRT3 / 2]])
        m = 3
        pts = []
        for corner in A.points:
            for _ in range(m):
                pts.append(corner + rng.normal(scale=1e-4, size=2))
        P = PointConfig(pts)
        assert count_delta_similar(P, A, 0.05) >= m**3

    def test_collinear_never_square(self):
        P = PointConfig([[i, 0] for i in range(8)])
        assert count_delta_similar(P, UNIT_SQUARE, 0.1) == 0

    def test_budget(self):
        P = PointConfig(np.random.default_rng(0).normal(size=(41, 2)))
        with pytest.raises(BudgetExceeded):
            count_delta_similar(P, UNIT_SQUARE, 0.1)

    def test_k_range(self):
        with pytest.raises(ValueError):
            count_delta_similar(UNIT_SQUARE, PointConfig([[0, 0], [1, 0]]), 0.1)


class TestAveragingIdentity:
    def test_random_configs(self, rng):
        for _ in range(10):
            n = int(rng.integers(5, 12))
            P = PointConfig(rng.normal(size=(n, 2)))
            assert averaging_identity_check(P, EQ, 0.3)

    def test_square_plus_center(self):
        P = PointConfig([[0, 0], [1, 0], [1, 1], [0, 1], [0.5, 0.5]])
        assert averaging_identity_check(P, RIGHT_ISO, DEG1)

    def test_zero_count_config(self):
        P = PointConfig([[i, 0] for i in range(6)])
        assert averaging_identity_check(P, EQ, DEG1)


class TestLocalImprove:
    def test_isolated_point_gets_used(self):
        pts = np.vstack([EQUILATERAL3.points, [[40.0, 37.0]]])
        P = PointConfig(pts)
        before = count_eps_similar(P, EQ, DEG1)
        assert before == 1
        out = local_improve(P, EQ, DEG1, eta=0.05, seed=3)
        after = count_eps_similar(out, EQ, DEG1)
        assert after >= 2

    def test_no_zero_codegree_is_fixed_point(self):
        out = local_improve(EQUILATERAL3, EQ, DEG1, eta=0.01)
        assert np.array_equal(out.points, EQUILATERAL3.points)

    def test_count_never_decreases(self, rng):
        P = PointConfig(rng.normal(size=(8, 2)))
        before = count_eps_similar(P, EQ, 0.25)
        out = local_improve(P, EQ, 0.25, eta=0.1, seed=11, max_retries=10)
        assert count_eps_similar(out, EQ, 0.25) >= before

    def test_termination_certificate(self, rng):
        """At a fixed point, no zero-codegree pair with unequal degrees
        admits a verified improving move under the search's own move rule
        (the replacement-degree consequence)."""
        eta = 0.08
        P = PointConfig(rng.normal(size=(7, 2)))
        out = local_improve(P, EQ, 0.3, eta=eta, seed=5, max_retries=60)
        sc = build_similarity_hypergraph(out, EQ, 0.3)
        count = sc.total
        pairs = _codegree_zero_pairs(sc.hypergraph)
        probe = np.random.default_rng(99)
        for u, v in pairs:
            du, dv = sc.hypergraph.degree(u), sc.hypergraph.degree(v)
            if du == dv:
                continue  # equal degrees are allowed at optimality
            keep, lose = (u, v) if du > dv else (v, u)
            for _ in range(12):
                r = eta * math.sqrt(probe.uniform())
                th = probe.uniform(0, 2 * math.pi)
                cand = out.points[keep - 1] + [r * math.cos(th), r * math.sin(th)]
                trial = out.points.copy()
                trial[lose - 1] = cand
                trial_sc = build_similarity_hypergraph(PointConfig(trial), EQ, 0.3)
                improving = trial_sc.total > count or (
                    trial_sc.total == count
                    and len(_codegree_zero_pairs(trial_sc.hypergraph)) < len(pairs)
                )
                assert not improving

    def test_eta_validation(self):
        with pytest.raises(ValueError):
            local_improve(EQUILATERAL3, EQ, DEG1, eta=0.0)
