"""Planar primitives: angle triples, almost-similarity predicates, exact
pi/3 rotations and the complex-parameter representation of triangle shapes.

Angles are always radians.  A triangle shape is a triangle up to similarity,
carried both as a sorted angle triple and as a complex number ``z`` for which
the triangle (0, 1, z) has that shape.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DegenerateTarget,
    DegenerateTriangle,
    InvalidEpsilon,
    RealShape,
    SizeMismatch,
)

# A point triple counts as degenerate when its doubled signed area falls below
# this factor times the squared maximum pairwise distance.
DEGENERACY_REL_TOL = 1e-12

# Deduplication / verification tolerance for shape orbits.
ORBIT_TOL = 1e-9

PointLike = Sequence[float]


def _pt(p) -> np.ndarray:
    q = np.asarray(getattr(p, "points", p), dtype=float)
    if q.shape != (2,):
        raise ValueError(f"expected a planar point, got shape {q.shape}")
    return q


def _pts(ps) -> np.ndarray:
    q = np.asarray(getattr(ps, "points", ps), dtype=float)
    if q.ndim != 2 or q.shape[1] != 2:
        raise ValueError(f"expected an array of planar points, got shape {q.shape}")
    return q


def is_degenerate(a: PointLike, b: PointLike, c: PointLike) -> bool:
    """True when a, b, c coincide or are collinear within tolerance."""
    pa, pb, pc = _pt(a), _pt(b), _pt(c)
    ab = pb - pa
    ac = pc - pa
    bc = pc - pb
    d2 = max(ab @ ab, ac @ ac, bc @ bc)
    if d2 == 0.0:
        return True
    cross = abs(ab[0] * ac[1] - ab[1] * ac[0])
    return cross < DEGENERACY_REL_TOL * d2


def angles_of(a: PointLike, b: PointLike, c: PointLike) -> tuple[float, float, float]:
    """Sorted (descending) interior angles of the triangle abc.

    Raises DegenerateTriangle for coincident or collinear input.
    """
    if is_degenerate(a, b, c):
        raise DegenerateTriangle(f"degenerate triple {a}, {b}, {c}")
    pa, pb, pc = _pt(a), _pt(b), _pt(c)

    def vertex_angle(p, q, r):
        u = q - p
        v = r - p
        return math.atan2(abs(u[0] * v[1] - u[1] * v[0]), float(u @ v))

    ang = sorted(
        (vertex_angle(pa, pb, pc), vertex_angle(pb, pc, pa), vertex_angle(pc, pa, pb)),
        reverse=True,
    )
    return ang[0], ang[1], ang[2]


@dataclass(frozen=True)
class TriangleShape:
    """A triangle up to similarity.

    ``alpha >= beta >= gamma`` are the sorted angles (summing to pi) and ``z``
    is a complex number with Im(z) != 0 such that the triangle (0, 1, z) has
    exactly these angles.
    """

    alpha: float
    beta: float
    gamma: float
    z: complex

    def __post_init__(self):
        if not (self.alpha >= self.beta >= self.gamma > 0):
            raise ValueError(f"angles must be sorted positive, got {self.angles}")
        if abs(self.alpha + self.beta + self.gamma - math.pi) > 1e-9:
            raise ValueError("angles must sum to pi")
        if self.z.imag == 0:
            raise RealShape("shape parameter must have nonzero imaginary part")
        got = angles_of((0.0, 0.0), (1.0, 0.0), (self.z.real, self.z.imag))
        if max(abs(g - a) for g, a in zip(got, self.angles)) > 1e-9:
            raise ValueError("z inconsistent with the angle triple")

    @property
    def angles(self) -> tuple[float, float, float]:
        return (self.alpha, self.beta, self.gamma)

    @classmethod
    def from_angles(cls, a: float, b: float, c: float) -> "TriangleShape":
        """Shape with the given angles (any order, radians, summing to pi)."""
        alpha, beta, gamma = sorted((a, b, c), reverse=True)
        if gamma <= 0:
            raise ValueError(f"angles must be positive, got {(a, b, c)}")
        if abs(alpha + beta + gamma - math.pi) > 1e-9:
            raise ValueError(f"angles must sum to pi, got sum {a + b + c}")
        # absorb rounding so the sum is exactly pi, then restore sortedness
        alpha, beta, gamma = sorted((alpha, beta, math.pi - alpha - beta), reverse=True)
        # canonical parameter: angle alpha at 0, beta at 1, gamma at z
        z = (math.sin(beta) / math.sin(gamma)) * cmath.exp(1j * alpha)
        return cls(alpha, beta, gamma, z)

    @classmethod
    def from_degrees(cls, a: float, b: float, c: float) -> "TriangleShape":
        return cls.from_angles(math.radians(a), math.radians(b), math.radians(c))

    @classmethod
    def from_z(cls, z: complex) -> "TriangleShape":
        if z.imag == 0:
            raise RealShape("shape parameter must have nonzero imaginary part")
        alpha, beta, gamma = angles_of((0.0, 0.0), (1.0, 0.0), (z.real, z.imag))
        return cls(alpha, beta, gamma, complex(z))

    @classmethod
    def equilateral(cls) -> "TriangleShape":
        t = math.pi / 3
        return cls(t, t, t, cmath.exp(1j * t))


def check_epsilon(T: TriangleShape, eps: float) -> None:
    """Validate 0 < eps < gamma(T); raise InvalidEpsilon otherwise."""
    if not (0.0 < eps < T.gamma):
        raise InvalidEpsilon(
            f"eps must lie in (0, {T.gamma:.6g}) for this shape, got {eps}"
        )


def is_eps_similar(
    a: PointLike, b: PointLike, c: PointLike, T: TriangleShape, eps: float
) -> bool:
    """Whether triangle abc has each sorted angle within eps of T's.

    Componentwise strict inequality on sorted triples; degenerate triples are
    never similar.
    """
    check_epsilon(T, eps)
    if is_degenerate(a, b, c):
        return False
    got = angles_of(a, b, c)
    return all(abs(g - t) < eps for g, t in zip(got, T.angles))


def _pair_distances(pts: np.ndarray) -> np.ndarray:
    i, j = np.triu_indices(len(pts), k=1)
    d = pts[i] - pts[j]
    return np.hypot(d[:, 0], d[:, 1])


def is_delta_similar(A, B, delta: float, relabel: bool = False) -> bool:
    """Whether B is delta-similar to the k-point reference A.

    True when a single scale factor puts every pairwise distance ratio
    |a_i a_j| / |b_i b_j| inside [1-delta, 1+delta], equivalently when the
    ratio spread is at most (1+delta)/(1-delta).  With ``relabel`` the best
    labeling of B is searched over all k! bijections (k <= 6 only).
    """
    pa, pb = _pts(A), _pts(B)
    if len(pa) != len(pb):
        raise SizeMismatch(f"|A|={len(pa)} != |B|={len(pb)}")
    k = len(pa)
    if k < 2:
        raise ValueError("delta-similarity needs at least 2 points")
    if not (0.0 <= delta < 1.0):
        raise ValueError(f"delta must lie in [0, 1), got {delta}")
    if relabel:
        if k > 6:
            raise ValueError("relabeling search supported only for k <= 6")
        return any(
            _delta_similar_fixed(pa, pb[list(perm)], delta)
            for perm in itertools.permutations(range(k))
        )
    return _delta_similar_fixed(pa, pb, delta)


def _delta_similar_fixed(pa: np.ndarray, pb: np.ndarray, delta: float) -> bool:
    da = _pair_distances(pa)
    db = _pair_distances(pb)
    zero_b = db == 0.0
    if np.any(zero_b):
        if np.any(da[zero_b] != 0.0):
            raise DegenerateTarget("candidate has coincident points the reference does not")
        keep = ~zero_b
        da, db = da[keep], db[keep]
        if len(da) == 0:
            return True  # both configurations fully coincident
    if np.any(da == 0.0):
        return False  # reference pair collapses, candidate pair does not
    r = da / db
    return float(r.max()) * (1.0 - delta) <= float(r.min()) * (1.0 + delta)


def rotate_q(x: PointLike, y: PointLike, sign) -> np.ndarray:
    """Rotate y about x by pi/3, anticlockwise for '+' and clockwise for '-'.

    x, y and the result are the vertices of an exact equilateral triangle.
    """
    s = {"+": 1, "-": -1, 1: 1, -1: -1}.get(sign)
    if s is None:
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    px, py = _pt(x), _pt(y)
    if np.array_equal(px, py):
        raise DegenerateTriangle("rotation center coincides with the rotated point")
    c, sn = 0.5, s * (math.sqrt(3.0) / 2.0)
    v = py - px
    return px + np.array([c * v[0] - sn * v[1], sn * v[0] + c * v[1]])


@dataclass(frozen=True)
class ShapeOrbit:
    """The <= 12 complex parameters w with (0, 1, w) similar to (0, 1, z)."""

    values: tuple[complex, ...]

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)


_ORBIT_MAPS = (
    lambda z: z,
    lambda z: 1 - z,
    lambda z: 1 / z,
    lambda z: 1 - 1 / z,
    lambda z: 1 / (1 - z),
    lambda z: z / (z - 1),
)


def shape_orbit(z: complex) -> ShapeOrbit:
    """Orbit of z under the six shape maps and conjugation, deduplicated."""
    z = complex(z)
    if z.imag == 0:
        raise RealShape("shape parameter must have nonzero imaginary part")
    raw = []
    for f in _ORBIT_MAPS:
        w = f(z)
        raw.append(w)
        raw.append(w.conjugate())
    out: list[complex] = []
    for w in raw:
        if all(abs(w - v) > ORBIT_TOL * max(1.0, abs(v)) for v in out):
            out.append(w)
    return ShapeOrbit(tuple(out))


def orbit_array(z: complex) -> np.ndarray:
    """shape_orbit as a complex ndarray (convenience for vectorized search)."""
    return np.array(shape_orbit(z).values, dtype=complex)


def third_vertex(a: PointLike, b: PointLike, w: complex) -> np.ndarray:
    """The point v = w(b-a)+a; triangle (a, b, v) is similar to (0, 1, w)."""
    pa, pb = _pt(a), _pt(b)
    if np.array_equal(pa, pb):
        raise DegenerateTriangle("base points coincide")
    za = complex(pa[0], pa[1])
    zb = complex(pb[0], pb[1])
    v = complex(w) * (zb - za) + za
    return np.array([v.real, v.imag])


def edge_ratio_bound(T: TriangleShape, eps: float) -> float:
    """Upper bound on max-edge/min-edge over all triangles eps-similar to T.

    By the law of sines the ratio equals sin(largest)/sin(smallest); the bands
    (alpha +- eps), (gamma +- eps) bound it by max-sin over the alpha band
    divided by sin(gamma - eps).
    """
    check_epsilon(T, eps)
    lo, hi = T.alpha - eps, T.alpha + eps
    smax = 1.0 if lo <= math.pi / 2 <= hi else max(math.sin(lo), math.sin(hi))
    return smax / math.sin(T.gamma - eps)


def normalize_diameter(points) -> np.ndarray:
    """Scale a point set about its centroid so the diameter is exactly 1."""
    pts = _pts(points).copy()
    if len(pts) < 2:
        return pts
    d = _pair_distances(pts)
    diam = float(d.max())
    if diam == 0.0:
        raise DegenerateTriangle("all points coincide; diameter undefined")
    center = pts.mean(axis=0)
    return (pts - center) / diam + center
