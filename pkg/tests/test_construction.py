import math
from fractions import Fraction

import numpy as np
import pytest

from simtri.construction import (
    FusionSpec,
    allocate_counts,
    build_recursive,
    build_skeleton_hypergraph,
    build_verified,
    example_fusion_spec,
    examples_catalog,
    fuse,
    get_example,
    safe_radius,
    solve_quad_chain_angle,
    threepartite_spec,
)
from simtri.counting import PointConfig, count_eps_similar
from simtri.errors import NoSafeRadius, SizeMismatch
from simtri.geometry import TriangleShape
from simtri.hypergraph import contains_pattern, get_pattern
from simtri.optimize import f_eval
from simtri.recursion import g_sequence

SQRT3 = math.sqrt(3.0)
DEG_HALF = math.radians(0.5)


class TestSkeletonHypergraph:
    def test_rectangle_all_triples(self):
        ex = get_example("rectangle")
        F = build_skeleton_hypergraph(ex.Q, ex.T, DEG_HALF)
        assert F.edges == {(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)}

    def test_pentagon_consecutive(self):
        ex = get_example("pentagon_wide")
        F = build_skeleton_hypergraph(ex.Q, ex.T, DEG_HALF)
        assert len(F.edges) == 5
        # each edge is a consecutive triple around the pentagon
        for e in F.edges:
            gaps = sorted((b - a) % 5 for a in e for b in e if a != b)
            assert gaps[0] == 1

    def test_hexagon_twelve(self):
        ex = get_example("hexagon")
        F = build_skeleton_hypergraph(ex.Q, ex.T, DEG_HALF)
        assert len(F.edges) == 12

    def test_duplicate_points_rejected(self):
        Q = PointConfig([[0, 0], [0, 0], [1, 0]])
        with pytest.raises(ValueError):
            build_skeleton_hypergraph(Q, TriangleShape.equilateral(), DEG_HALF)


class TestAllocateCounts:
    def test_thirds_with_deficit(self):
        assert allocate_counts(10, (1 / 3, 1 / 3, 1 / 3)) == [4, 3, 3]

    def test_exact_thirds(self):
        assert allocate_counts(9, (1 / 3, 1 / 3, 1 / 3)) == [3, 3, 3]

    def test_largest_fraction_rule(self):
        # fracs (.5, .75, .75): the two ceil bumps go to indices 2 and 3
        assert allocate_counts(7, (0.5, 0.25, 0.25)) == [3, 2, 2]

    def test_floor_or_ceil_and_sum(self, rng):
        for _ in range(100):
            r = int(rng.integers(2, 8))
            x = rng.dirichlet(np.ones(r))
            n = int(rng.integers(0, 500))
            y = allocate_counts(n, list(x))
            assert sum(y) == n
            for yi, xi in zip(y, x):
                assert yi in (math.floor(n * xi), math.ceil(n * xi))

    def test_exact_fractions(self):
        y = allocate_counts(10, (Fraction(1, 3),) * 3)
        assert y == [4, 3, 3]


class TestSafeRadius:
    def test_equilateral_small_eps(self):
        Q = PointConfig([[1, 0], [-0.5, SQRT3 / 2], [-0.5, -SQRT3 / 2]])
        rho = safe_radius(Q, TriangleShape.equilateral(), math.radians(1))
        assert rho > 0
        assert rho < SQRT3 / 100  # min distance over 100

    def test_scale_equivariance(self):
        Q1 = PointConfig([[1, 0], [-0.5, SQRT3 / 2], [-0.5, -SQRT3 / 2]])
        Q2 = PointConfig(Q1.points / 2.0)
        T = TriangleShape.equilateral()
        r1 = safe_radius(Q1, T, math.radians(1))
        r2 = safe_radius(Q2, T, math.radians(1))
        assert r2 == pytest.approx(r1 / 2.0, rel=1e-12)

    def test_boundary_raises(self):
        # a triple sitting exactly on the eps threshold has no safe radius
        eps = math.radians(1)
        a1 = math.pi / 3 + eps
        a2 = math.pi / 3
        r = math.sin(a2) / math.sin(math.pi - a1 - a2)
        Q = PointConfig([[0, 0], [1, 0], [r * math.cos(a1), r * math.sin(a1)]])
        with pytest.raises(NoSafeRadius):
            safe_radius(Q, TriangleShape.equilateral(), eps)


class TestFuse:
    def test_singleton_parts(self):
        spec = threepartite_spec()
        rho = safe_radius(spec.Q, spec.T, spec.eps)
        parts = [PointConfig([[0.0, 0.0]]) for _ in range(3)]
        out = fuse(spec.Q, parts, rho)
        assert np.allclose(out.points, spec.Q.points)
        assert count_eps_similar(out, spec.T, spec.eps) == 1

    def test_threepartite_27(self, htable_300):
        spec = threepartite_spec()
        rho = safe_radius(spec.Q, spec.T, spec.eps)
        small = build_recursive(spec, 3, rho=rho)
        out = fuse(spec.Q, [small.config] * 3, rho)
        assert count_eps_similar(out, spec.T, spec.eps) == 27 + 3  # = h(9)
        assert htable_300.values[9] == 30

    def test_rectangle_pairs(self):
        ex = get_example("rectangle")
        spec = example_fusion_spec(ex)
        rho = safe_radius(spec.Q, spec.T, spec.eps)
        pair = PointConfig([[0.0, 0.0], [0.01, 0.0]])
        out = fuse(spec.Q, [pair] * 4, rho)
        # every skeleton edge contributes 2*2*2 cross triangles, none inside
        assert count_eps_similar(out, spec.T, spec.eps) == 4 * 8

    def test_size_mismatch(self):
        spec = threepartite_spec()
        with pytest.raises(SizeMismatch):
            fuse(spec.Q, [PointConfig([[0, 0]])] * 2, 0.01)

    def test_parts_stay_in_disks(self, rng):
        spec = threepartite_spec()
        rho = 0.001
        parts = [PointConfig(rng.normal(size=(4, 2)) * 50) for _ in range(3)]
        out = fuse(spec.Q, parts, rho)
        for i, q in enumerate(spec.Q.points):
            blk = out.points[4 * i : 4 * (i + 1)]
            assert (np.linalg.norm(blk - q, axis=1) <= rho).all()


class TestBuildRecursive:
    def test_n2_empty_count(self):
        spec = threepartite_spec()
        built = build_verified(spec, 2)
        assert built.predicted == 0
        assert len(built.config) == 2

    def test_sizes_exact(self):
        spec = threepartite_spec()
        for n in (0, 1, 5, 17, 40):
            built = build_recursive(spec, n)
            assert len(built.config) == n

    def test_threepartite_27_recount(self, htable_300):
        spec = threepartite_spec()
        built = build_verified(spec, 27)
        assert built.predicted == htable_300.values[27] == 819
        assert count_eps_similar(built.config, spec.T, spec.eps) == 819

    def test_example1_recurrence_match(self):
        spec = example_fusion_spec(get_example("rectangle"))
        built = build_verified(spec, 100)
        g, _ = g_sequence(spec.F, spec.x, 100)
        assert built.predicted == g[100]
        assert count_eps_similar(built.config, spec.T, spec.eps) == g[100]

    def test_lower_bound_inequality(self, htable_300):
        # the count of the built set dominates the pure split recurrence
        spec = threepartite_spec()
        for n in (10, 20, 33):
            built = build_verified(spec, n)
            y = allocate_counts(n, spec.x)
            p = 1
            for yi in y:
                p *= yi
            floor = p + sum(htable_300.values[yi] for yi in y)
            assert built.predicted >= floor


class TestExample4:
    def test_root_residual(self):
        a = solve_quad_chain_angle()
        assert 0 < a < math.pi / 3
        assert abs(math.sin(3 * a) ** 3 - math.sin(a) * math.sin(2 * a) ** 2) < 1e-12

    def test_quad_chain_structure_matches_triangle_center(self):
        qc = build_skeleton_hypergraph(
            get_example("quad_chain").Q, get_example("quad_chain").T, 1e-4
        )
        tc = build_skeleton_hypergraph(
            get_example("triangle_center").Q,
            get_example("triangle_center").T,
            1e-4,
        )
        assert len(qc.edges) == len(tc.edges) == 3
        # identical apex structure: same hypergraph up to the identity labels
        assert qc.edges == tc.edges

    def test_angles_structure(self):
        ex = get_example("quad_chain")
        a = solve_quad_chain_angle()
        assert ex.T.angles == pytest.approx(
            tuple(sorted((a, 2 * a, math.pi - 3 * a), reverse=True)), abs=1e-12
        )


class TestCatalog:
    def test_nine_examples(self):
        names = [ex.name for ex in examples_catalog()]
        assert names == [
            "rectangle",
            "square_center",
            "triangle_center",
            "quad_chain",
            "hexagon",
            "pentagon_wide",
            "pentagon_narrow",
            "heptagon",
            "orbit_five",
        ]

    def test_optimum_consistency(self):
        for ex in examples_catalog():
            F = build_skeleton_hypergraph(ex.Q, ex.T, 1e-4)
            assert f_eval(F, list(ex.optimum_x)) == pytest.approx(
                ex.optimum_value, abs=1e-9
            ), ex.name

    def test_known_values(self):
        assert get_example("rectangle").optimum_value == pytest.approx(1 / 15)
        assert get_example("square_center").optimum_value == pytest.approx(
            1 / (6 * math.sqrt(2) + 6)
        )
        assert get_example("orbit_five").optimum_value == pytest.approx(1 / 24)
        assert get_example("orbit_five").optimum_x == (1 / 3, 1 / 3, 1 / 9, 1 / 9, 1 / 9)

    def test_orbit_five_is_f32(self):
        ex = get_example("orbit_five")
        F = build_skeleton_hypergraph(ex.Q, ex.T, 1e-4)
        assert F.edges == get_pattern("F32").graph.edges

    def test_triangle_center_is_k4_minus(self):
        ex = get_example("triangle_center")
        F = build_skeleton_hypergraph(ex.Q, ex.T, 1e-4)
        assert contains_pattern(F, get_pattern("K4-")) is not None
        assert len(F.edges) == 3

    def test_unknown_example(self):
        with pytest.raises(KeyError):
            get_example("dodecahedron")
