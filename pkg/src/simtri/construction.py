"""Explicit point-set constructions: weight allocation, the safe disk radius,
the fusion operation that nests shrunken configurations at skeleton points,
the recursive family P_n it generates, and a catalog of the closed-form
skeleton examples.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidEpsilon, NoSafeRadius, SizeMismatch
from .counting import PointConfig, build_similarity_hypergraph, count_eps_similar
from .geometry import TriangleShape, angles_of, check_epsilon, is_degenerate
from .hypergraph import Hypergraph3

# conservative divisor mapping angular slack to displacement
SAFE_RADIUS_KAPPA = 10.0
SAFE_RADIUS_PROBES = 10_000
SAFE_RADIUS_MAX_HALVINGS = 40
BOUNDARY_TOL = 1e-12
REBUILD_MAX_SHRINKS = 20


@dataclass
class FusionSpec:
    """Skeleton Q with target shape, tolerance and weights; F is derived."""

    Q: PointConfig
    T: TriangleShape
    eps: float
    x: tuple
    F: Hypergraph3 = field(init=False)

    def __post_init__(self):
        check_epsilon(self.T, self.eps)
        self.x = tuple(self.x)
        r = len(self.Q)
        if r < 3:
            raise ValueError("skeleton needs at least 3 points")
        if len(self.x) != r:
            raise SizeMismatch(f"{len(self.x)} weights for {r} skeleton points")
        if any(xi <= 0 for xi in self.x):
            raise ValueError("weights must be strictly positive")
        total = sum(self.x)
        if abs(float(total) - 1.0) > 1e-9:
            raise ValueError(f"weights must sum to 1, got {total}")
        self.F = build_skeleton_hypergraph(self.Q, self.T, self.eps)


@dataclass
class ExampleConfig:
    """A skeleton from the catalog with its known optimal weights and value."""

    name: str
    Q: PointConfig
    T: TriangleShape
    optimum_x: tuple[float, ...]
    optimum_value: float


def build_skeleton_hypergraph(
    Q: PointConfig, T: TriangleShape, eps: float
) -> Hypergraph3:
    """F(Q, T, eps): triples of Q forming eps-similar copies of T."""
    pts = Q.points
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if np.array_equal(pts[i], pts[j]):
                raise ValueError("skeleton points must be pairwise distinct")
    return build_similarity_hypergraph(Q, T, eps).hypergraph


def allocate_counts(n: int, x: Sequence) -> list[int]:
    """Integer allocation y with y_i in {floor(n x_i), ceil(n x_i)}, sum n.

    The deficit after flooring goes to the coordinates with the largest
    fractional parts, ties broken by lower index.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    floors = [math.floor(n * xi) for xi in x]
    fracs = [n * xi - f for xi, f in zip(x, floors)]
    deficit = n - sum(floors)
    order = sorted(range(len(x)), key=lambda i: (-fracs[i], i))
    y = list(floors)
    for i in order[:deficit]:
        y[i] += 1
    return y


def _triple_margin(pts: np.ndarray, T: TriangleShape, eps: float) -> float:
    """Smallest displacement slack over all triples: angular slack to the
    eps threshold times the triple's minimum pairwise distance."""
    n = len(pts)
    target = np.array(T.angles)
    margin = math.inf
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                dmin = min(
                    float(np.hypot(*(pts[a] - pts[b])))
                    for a, b in ((i, j), (i, k), (j, k))
                )
                if is_degenerate(pts[i], pts[j], pts[k]):
                    # flat triples stay dissimilar; slack is the full gap
                    slack = T.gamma - eps
                else:
                    ang = np.array(angles_of(pts[i], pts[j], pts[k]))
                    dev = float(np.max(np.abs(ang - target)))
                    slack = abs(dev - eps)
                if slack < BOUNDARY_TOL:
                    raise NoSafeRadius(
                        f"triple ({i+1},{j+1},{k+1}) sits on the eps boundary"
                    )
                margin = min(margin, slack * dmin)
    return margin


def safe_radius(Q: PointConfig, T: TriangleShape, eps: float) -> float:
    """A radius rho such that moving each point within rho preserves every
    triple's edge/non-edge classification.

    Starts from the conservative slack estimate margin/kappa and halves it
    until randomized perturbation probing confirms the classification is
    stable (scale-free sampling, so rho scales with Q).
    """
    check_epsilon(T, eps)
    pts = Q.points
    if len(pts) < 3:
        raise ValueError("need at least 3 points")
    base = build_skeleton_hypergraph(Q, T, eps).edges
    rho = _triple_margin(pts, T, eps) / SAFE_RADIUS_KAPPA
    rng = np.random.default_rng(12345)
    offsets = rng.uniform(-1.0, 1.0, size=(SAFE_RADIUS_PROBES, len(pts), 2))
    norms = np.sqrt((offsets**2).sum(axis=2, keepdims=True))
    offsets = np.where(norms > 1.0, offsets / norms, offsets)
    for _ in range(SAFE_RADIUS_MAX_HALVINGS):
        if _probe_ok(pts, offsets * rho, T, eps, base):
            return rho
        rho *= 0.5
    raise NoSafeRadius("no radius validated after maximum halvings")


def _probe_ok(pts, scaled_offsets, T, eps, base_edges) -> bool:
    """Vectorized check that every probe keeps every triple's classification."""
    import itertools as it

    from .geometry import DEGENERACY_REL_TOL

    target = np.array(T.angles)
    P = pts[None, :, :] + scaled_offsets  # (probes, r, 2)
    for i, j, k in it.combinations(range(len(pts)), 3):
        u = P[:, j] - P[:, i]
        v = P[:, k] - P[:, i]
        w = P[:, k] - P[:, j]
        c2 = (u**2).sum(axis=1)
        b2 = (v**2).sum(axis=1)
        a2 = (w**2).sum(axis=1)
        cross = np.abs(u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0])
        mx = np.maximum(np.maximum(a2, b2), c2)
        nondeg = cross >= DEGENERACY_REL_TOL * mx
        with np.errstate(divide="ignore", invalid="ignore"):
            cos_i = np.clip((b2 + c2 - a2) / (2 * np.sqrt(b2 * c2)), -1, 1)
            cos_j = np.clip((a2 + c2 - b2) / (2 * np.sqrt(a2 * c2)), -1, 1)
            cos_k = np.clip((a2 + b2 - c2) / (2 * np.sqrt(a2 * b2)), -1, 1)
        ang = np.arccos(np.stack([cos_i, cos_j, cos_k], axis=1))
        ang.sort(axis=1)
        similar = nondeg & np.all(np.abs(ang[:, ::-1] - target) < eps, axis=1)
        if (i + 1, j + 1, k + 1) in base_edges:
            if not similar.all():
                return False
        elif similar.any():
            return False
    return True


def fuse(Q: PointConfig, parts: Sequence[PointConfig], rho: float) -> PointConfig:
    """Replace each skeleton point q_i by a copy of parts[i] shrunk into the
    disk B(q_i, rho); the combined set keeps the cross-disk similarity
    structure of the skeleton.
    """
    if len(parts) != len(Q):
        raise SizeMismatch(f"{len(parts)} parts for {len(Q)} skeleton points")
    out = []
    for q, part in zip(Q.points, parts):
        pp = part.points
        if len(pp) == 0:
            continue
        if len(pp) == 1:
            out.append(q[None, :])
            continue
        center = pp.mean(axis=0)
        d = pp[:, None, :] - pp[None, :, :]
        diam = math.sqrt(float(np.einsum("ijk,ijk->ij", d, d).max()))
        if diam == 0.0:
            out.append(np.repeat(q[None, :], len(pp), axis=0))
            continue
        scale = rho / (2.0 * diam)
        out.append((pp - center) * scale + q)
    if not out:
        return PointConfig(np.zeros((0, 2)))
    return PointConfig(np.vstack(out))


@dataclass
class RecursiveBuild:
    """A built P_n with the exact counts the recurrence predicts."""

    config: PointConfig
    n: int
    predicted: int
    tree: dict
    rho: float


def build_recursive(spec: FusionSpec, n: int, rho: Optional[float] = None) -> RecursiveBuild:
    """The recursive family P_n: allocate sizes by weight, build each part,
    and fuse the parts at the skeleton points.

    The returned ``predicted`` count follows the fusion counting identity
    level by level; ``tree`` records the allocation used at every level.
    A geometric recount is the caller's cross-check, not performed here.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if rho is None:
        rho = safe_radius(spec.Q, spec.T, spec.eps)
    memo: dict[int, RecursiveBuild] = {}

    def build(m: int) -> RecursiveBuild:
        if m in memo:
            return memo[m]
        if m == 0:
            res = RecursiveBuild(PointConfig(np.zeros((0, 2))), 0, 0, {"n": 0}, rho)
        elif m == 1:
            res = RecursiveBuild(PointConfig([[0.0, 0.0]]), 1, 0, {"n": 1}, rho)
        elif m == 2:
            # deterministic micro-segment; any 2-point set has no triples
            res = RecursiveBuild(
                PointConfig([[0.0, 0.0], [rho / 4.0, 0.0]]), 2, 0, {"n": 2}, rho
            )
        else:
            y = allocate_counts(m, spec.x)
            kids = [build(yi) for yi in y]
            cross = 0
            for i, j, k in spec.F.edges:
                cross += y[i - 1] * y[j - 1] * y[k - 1]
            predicted = cross + sum(k.predicted for k in kids)
            cfg = fuse(spec.Q, [k.config for k in kids], rho)
            res = RecursiveBuild(
                cfg,
                m,
                predicted,
                {"n": m, "y": y, "cross": cross, "children": [k.tree for k in kids]},
                rho,
            )
        memo[m] = res
        return res

    return build(n)


def build_verified(spec: FusionSpec, n: int) -> RecursiveBuild:
    """build_recursive plus a geometric recount; on mismatch the radius is
    shrunk tenfold and the whole family rebuilt (bounded retries)."""
    rho = safe_radius(spec.Q, spec.T, spec.eps)
    for _ in range(REBUILD_MAX_SHRINKS):
        built = build_recursive(spec, n, rho=rho)
        if count_eps_similar(built.config, spec.T, spec.eps) == built.predicted:
            return built
        rho /= 10.0
    raise NoSafeRadius(f"recount never matched prediction for n={n}")


def solve_quad_chain_angle() -> float:
    """Root in (0, pi/3) of (sin 3a)^3 = sin a (sin 2a)^2, by bisection.

    The shape with angles (a, 2a, pi - 3a) then makes two chained triangles
    on a convex quadrilateral close up into a third similar one.
    """

    def w(a: float) -> float:
        return math.sin(3 * a) ** 3 - math.sin(a) * math.sin(2 * a) ** 2

    lo, hi = 1e-9, math.pi / 3 - 1e-9
    assert w(lo) > 0 > w(hi)
    while hi - lo > 1e-14:
        mid = 0.5 * (lo + hi)
        if w(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _regular_polygon(k: int) -> PointConfig:
    return PointConfig(
        [
            [math.cos(2 * math.pi * i / k), math.sin(2 * math.pi * i / k)]
            for i in range(k)
        ]
    )


def _example4_quad() -> tuple[PointConfig, TriangleShape]:
    a = solve_quad_chain_angle()
    T = TriangleShape.from_angles(a, 2 * a, math.pi - 3 * a)
    # apex q4 at the origin; rays at 0, a, 2a with lengths in the similarity
    # ratio sin(2a)/sin(3a) chaining two similar triangles
    t = math.sin(2 * a) / math.sin(3 * a)
    q4 = (0.0, 0.0)
    q1 = (1.0, 0.0)
    q2 = (t * math.cos(a), t * math.sin(a))
    q3 = (t * t * math.cos(2 * a), t * t * math.sin(2 * a))
    return PointConfig([q1, q2, q3, q4]), T


def _example9_points(z: complex) -> PointConfig:
    zs = [0j, 1 + 0j, z, 1 / (1 - z), (z - 1) / z]
    return PointConfig([[w.real, w.imag] for w in zs])


_EX2_X = (3.0 - math.sqrt(2.0)) / 7.0
_EX3_X = (9.0 - math.sqrt(24.0)) / 19.0


def _ex3_value(x: float) -> float:
    return x * (1.0 - 3.0 * x) / (3.0 - 9.0 * x + 8.0 * x * x)


DEFAULT_EXAMPLE9_Z = complex(
    math.sin(1.1) / math.sin(math.pi - 2.3) * math.cos(1.2),
    math.sin(1.1) / math.sin(math.pi - 2.3) * math.sin(1.2),
)


def examples_catalog(example9_z: complex = DEFAULT_EXAMPLE9_Z) -> list[ExampleConfig]:
    """The nine catalog skeletons with their optimal weights and values."""
    sq2 = math.sqrt(2.0)
    ex4_Q, ex4_T = _example4_quad()
    u5 = (0.2,) * 5
    catalog = [
        ExampleConfig(
            "rectangle",
            PointConfig([[0, 0], [2, 0], [2, 1], [0, 1]]),
            TriangleShape.from_angles(
                math.pi / 2, math.atan2(2, 1), math.atan2(1, 2)
            ),
            (0.25, 0.25, 0.25, 0.25),
            1.0 / 15.0,
        ),
        ExampleConfig(
            "square_center",
            PointConfig([[1, 1], [-1, 1], [-1, -1], [1, -1], [0, 0]]),
            TriangleShape.from_degrees(90, 45, 45),
            (_EX2_X,) * 4 + (1.0 - 4.0 * _EX2_X,),
            1.0 / (6.0 * sq2 + 6.0),
        ),
        ExampleConfig(
            "triangle_center",
            PointConfig(
                [
                    [1, 0],
                    [-0.5, math.sqrt(3) / 2],
                    [-0.5, -math.sqrt(3) / 2],
                    [0, 0],
                ]
            ),
            TriangleShape.from_degrees(120, 30, 30),
            (_EX3_X,) * 3 + (1.0 - 3.0 * _EX3_X,),
            _ex3_value(_EX3_X),
        ),
        ExampleConfig(
            "quad_chain",
            ex4_Q,
            ex4_T,
            (_EX3_X,) * 3 + (1.0 - 3.0 * _EX3_X,),
            _ex3_value(_EX3_X),
        ),
        ExampleConfig(
            "hexagon",
            _regular_polygon(6),
            TriangleShape.from_degrees(90, 60, 30),
            (1.0 / 6.0,) * 6,
            2.0 / 35.0,
        ),
        ExampleConfig(
            "pentagon_wide",
            _regular_polygon(5),
            TriangleShape.from_degrees(108, 36, 36),
            u5,
            1.0 / 24.0,
        ),
        ExampleConfig(
            "pentagon_narrow",
            _regular_polygon(5),
            TriangleShape.from_degrees(72, 72, 36),
            u5,
            1.0 / 24.0,
        ),
        ExampleConfig(
            "heptagon",
            _regular_polygon(7),
            TriangleShape.from_angles(
                4 * math.pi / 7, 2 * math.pi / 7, math.pi / 7
            ),
            (1.0 / 7.0,) * 7,
            1.0 / 24.0,
        ),
        ExampleConfig(
            "orbit_five",
            _example9_points(example9_z),
            TriangleShape.from_z(example9_z),
            (1 / 3, 1 / 3, 1 / 9, 1 / 9, 1 / 9),
            1.0 / 24.0,
        ),
    ]
    return catalog


def get_example(name: str, example9_z: complex = DEFAULT_EXAMPLE9_Z) -> ExampleConfig:
    for ex in examples_catalog(example9_z):
        if ex.name == name:
            return ex
    raise KeyError(f"unknown example {name!r}")


def pick_fusion_eps(Q: PointConfig, T: TriangleShape, cap: float = math.radians(10)) -> float:
    """A tolerance with a comfortable perturbation margin for deep recursion.

    Large eps means a large safe radius, which keeps the deepest nested
    disks well above floating-point noise; the ceiling is half the smallest
    deviation of any non-edge triple (so the skeleton hypergraph is
    unchanged) and a fraction of the smallest target angle.
    """
    pts = Q.points
    target = np.array(T.angles)
    min_nonedge = math.inf
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            for k in range(j + 1, len(pts)):
                if is_degenerate(pts[i], pts[j], pts[k]):
                    dev = T.gamma  # flat triples miss the smallest angle entirely
                else:
                    ang = np.array(angles_of(pts[i], pts[j], pts[k]))
                    dev = float(np.max(np.abs(ang - target)))
                if dev > 1e-6:
                    min_nonedge = min(min_nonedge, dev)
    eps = min(cap, 0.8 * T.gamma, 0.45 * min_nonedge)
    return max(eps, 1e-4)


def example_fusion_spec(ex: ExampleConfig, eps: Optional[float] = None) -> FusionSpec:
    if eps is None:
        eps = pick_fusion_eps(ex.Q, ex.T)
    return FusionSpec(Q=ex.Q, T=ex.T, eps=eps, x=ex.optimum_x)


def threepartite_spec(eps: float = 1.0 / 50.0) -> FusionSpec:
    """The base construction: equilateral skeleton, equal weights."""
    Q = PointConfig(
        [[1, 0], [-0.5, math.sqrt(3) / 2], [-0.5, -math.sqrt(3) / 2]]
    )
    return FusionSpec(
        Q=Q,
        T=TriangleShape.equilateral(),
        eps=eps,
        x=(Fraction(1, 3), Fraction(1, 3), Fraction(1, 3)),
    )
