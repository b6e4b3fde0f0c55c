"""Algebraic shape analysis: integer linear relations among a triangle's
angles, the closed-path sign congruences behind 5-cycle realizations,
chain-based realizability of forbidden patterns by a given shape, shape-space
scans, and the exact triangular-grid argument that the equilateral shape
cannot realize the cycle-minus-edge pattern.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .counting import PointConfig
from .errors import UnsupportedPattern
from .geometry import TriangleShape, angles_of, orbit_array, rotate_q
from .hypergraph import Pattern, get_pattern

COEFF_BOUND = 5
LINEAR_TOL = 1e-9
COINCIDE_TOL = 1e-9


@dataclass(frozen=True)
class LinearRelation:
    """Integer relation n1*alpha + n2*beta + n3*gamma + n4*pi = 0, with the
    coefficient vector independent from (1, 1, 1, -1)."""

    n1: int
    n2: int
    n3: int
    n4: int

    def residual(self, T: TriangleShape) -> float:
        return abs(
            self.n1 * T.alpha
            + self.n2 * T.beta
            + self.n3 * T.gamma
            + self.n4 * math.pi
        )

    def coefficients(self) -> tuple[int, int, int, int]:
        return (self.n1, self.n2, self.n3, self.n4)


def _is_trivial_direction(n1: int, n2: int, n3: int, n4: int) -> bool:
    return n1 == n2 == n3 == -n4


def find_linear_relation(
    T: TriangleShape, tol: float = LINEAR_TOL
) -> Optional[LinearRelation]:
    """First (lexicographic) nontrivial integer relation annihilating
    (alpha, beta, gamma, pi), coefficients bounded by 5; None if there is
    none within tol."""
    vals = (T.alpha, T.beta, T.gamma, math.pi)
    rng = range(-COEFF_BOUND, COEFF_BOUND + 1)
    for n1, n2, n3, n4 in itertools.product(rng, rng, rng, rng):
        if _is_trivial_direction(n1, n2, n3, n4):
            continue
        if abs(n1 * vals[0] + n2 * vals[1] + n3 * vals[2] + n4 * vals[3]) < tol:
            return LinearRelation(n1, n2, n3, n4)
    return None


@dataclass(frozen=True)
class SignRelation:
    """A satisfied closed-path congruence: signed angle picks summing to a
    multiple of 2*pi, with the integer relation it reduces to."""

    signs: tuple[int, ...]
    assignment: tuple[int, ...]  # 0 -> alpha, 1 -> beta, 2 -> gamma
    relation: LinearRelation


def c5_sign_relations(T: TriangleShape, tol: float = LINEAR_TOL) -> list[SignRelation]:
    """All sign patterns and angle assignments with sum(+-delta_i) = 0 mod
    2*pi within tol, each reduced to an integer relation (even pi
    coefficient, odd angle-coefficient sum by construction)."""
    angles = (T.alpha, T.beta, T.gamma)
    out = []
    for signs in itertools.product((1, -1), repeat=5):
        for assign in itertools.product((0, 1, 2), repeat=5):
            total = sum(s * angles[a] for s, a in zip(signs, assign))
            k = round(total / (2.0 * math.pi))
            if abs(total - 2.0 * math.pi * k) < tol:
                n = [0, 0, 0]
                for s, a in zip(signs, assign):
                    n[a] += s
                out.append(
                    SignRelation(signs, assign, LinearRelation(n[0], n[1], n[2], -2 * k))
                )
    return out


@dataclass
class RealizationResult:
    found: bool
    Q: Optional[PointConfig]
    branch_trace: list[int]
    residual: float


# Placement orders: q1 = 0, q2 = 1 pinned; each entry places a new vertex v
# from an edge {a, b, v} with a, b already placed.  Edges not used for
# placement become consistency constraints.  P7- keeps q4 free and is solved
# numerically.
_PLACEMENTS: dict[str, dict] = {
    "K4-": {"steps": [(4, 1, 2), (3, 1, 4)], "check": [(2, 3, 4)]},
    "C5": {"steps": [(3, 1, 2), (4, 2, 3), (5, 3, 4)], "check": [(4, 5, 1), (5, 1, 2)]},
    "C5-": {"steps": [(3, 1, 2), (4, 1, 2), (5, 1, 3)], "check": [(2, 4, 5)]},
    "C5+": {
        "steps": [(6, 1, 2), (3, 2, 6), (4, 3, 6), (5, 4, 6)],
        "check": [(5, 1, 6)],
    },
    "L2": {
        "steps": [(3, 1, 2), (4, 1, 2), (5, 1, 2), (6, 1, 3)],
        "check": [(4, 5, 6)],
    },
    "L3": {
        "steps": [(3, 1, 2), (4, 1, 2), (5, 1, 3), (6, 2, 5)],
        "check": [(3, 4, 6)],
    },
    "L4": {
        "steps": [(3, 1, 2), (4, 1, 2), (5, 3, 4), (6, 1, 5)],
        "check": [(2, 5, 6)],
    },
    "L5": {
        "steps": [(3, 1, 2), (4, 1, 2), (5, 1, 4), (6, 3, 4)],
        "check": [(3, 5, 6)],
    },
    "F32": {"steps": [(3, 1, 2), (4, 1, 2), (5, 1, 2)], "check": [(3, 4, 5)]},
}
_PLACEMENTS["L6"] = _PLACEMENTS["L5"]


def _edge_residuals(Q: np.ndarray, edge, orbit: np.ndarray) -> np.ndarray:
    """Relative distance from satisfying one consistency edge, per state.

    Q has shape (states, nverts+1), complex.  The residual is the distance
    from q_c to the nearest similar-triangle completion over q_a q_b, scaled
    by max(1, |q_a q_b|); a fully coincident triple gets residual 0.
    """
    a, b, c = edge
    qa, qb, qc = Q[:, a], Q[:, b], Q[:, c]
    base = qb - qa
    d = np.abs(qc[:, None] - (orbit[None, :] * base[:, None] + qa[:, None]))
    return d.min(axis=1) / np.maximum(1.0, np.abs(base))


def realize_pattern(L: Pattern | str, z: complex, tol: float = 1e-9) -> RealizationResult:
    """Search for a point multiset realizing pattern L with every edge
    similar to the shape z (or fully coincident).

    Pins q1 = 0, q2 = 1, then branches each chained vertex over the <= 12
    orbit parameters; edges not used for placement are checked to relative
    tolerance.  Patterns without a full chain (P7-) solve their one free
    vertex by damped Newton from a grid of starts inside each branch.
    """
    if isinstance(L, str):
        L = get_pattern(L)
    if L.name == "P7-":
        return _realize_p7(L, z, tol)
    plan = _PLACEMENTS.get(L.name)
    if plan is None:
        raise UnsupportedPattern(f"no placement order for pattern {L.name!r}")
    orbit = orbit_array(z)
    k = len(orbit)
    r = L.graph.r
    Q = np.zeros((1, r + 1), dtype=complex)
    Q[:, 2] = 1.0
    for v, a, b in plan["steps"]:
        base = Q[:, b] - Q[:, a]
        newpts = orbit[None, :] * base[:, None] + Q[:, a][:, None]
        Q = np.repeat(Q, k, axis=0)
        Q[:, v] = newpts.reshape(-1)
    res = np.zeros(len(Q))
    for edge in plan["check"]:
        res = np.maximum(res, _edge_residuals(Q, edge, orbit))
    best = int(np.argmin(res))
    if res[best] > tol:
        return RealizationResult(False, None, [], float(res[best]))
    trace = []
    idx = best
    for _ in plan["steps"]:
        trace.append(idx % k)
        idx //= k
    trace.reverse()
    pts = np.stack([Q[best, 1:].real, Q[best, 1:].imag], axis=1)
    return RealizationResult(True, PointConfig(pts), trace, float(res[best]))


def _p7_residuals(orbit, q3, w5, w7, w6, q4):
    """Residuals of the two terminal edges (167) and (257) at free q4."""
    q5 = w5 * q4
    q7 = w7 * (q4 - q3) + q3
    q6 = w6 * (q4 - 1.0) + 1.0
    r1 = np.abs(q7[:, None] - orbit[None, :] * q6[:, None]).min(axis=1) / np.maximum(
        1.0, np.abs(q6)
    )
    base = q5 - 1.0
    r2 = np.abs(
        q7[:, None] - (orbit[None, :] * base[:, None] + 1.0)
    ).min(axis=1) / np.maximum(1.0, np.abs(base))
    return r1, r2


def _realize_p7(L: Pattern, z: complex, tol: float) -> RealizationResult:
    """P7- search: chain q3, keep q4 free, express q5, q7, q6 affinely in q4
    per orbit branch, solve edge (167) exactly for q4 and test edge (257).

    For fixed orbit choices both terminal constraints are affine in q4, so
    each branch yields one exact candidate (or is infeasible); a damped
    Newton polish from the candidate absorbs the tolerance fuzz.
    """
    orbit = orbit_array(z)
    k = len(orbit)
    combos = np.array(
        list(itertools.product(range(k), repeat=5)), dtype=np.intp
    )  # (i3, i5, i7, i6, u) with u the orbit pick inside edge 167
    q3 = orbit[combos[:, 0]]
    w5 = orbit[combos[:, 1]]
    w7 = orbit[combos[:, 2]]
    w6 = orbit[combos[:, 3]]
    u = orbit[combos[:, 4]]
    # q7 - u*q6 = A*q4 + B with the chained points substituted
    A = w7 - u * w6
    B = (1.0 - w7) * q3 + u * (w6 - 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        q4 = np.where(np.abs(A) > 1e-13, -B / np.where(A == 0, 1.0, A), np.nan)
    # vacuous first constraint (A = B = 0): q4 unconstrained; pick the second
    # constraint's exact solution instead
    free = (np.abs(A) <= 1e-13) & (np.abs(B) <= 1e-12)
    if free.any():
        for idx in np.nonzero(free)[0]:
            for v in orbit:
                C = w7[idx] - v * w5[idx]
                D = (1.0 - w7[idx]) * q3[idx] + v - 1.0
                if abs(C) > 1e-13:
                    q4[idx] = -D / C
                    break
    finite = np.isfinite(q4)
    if not finite.any():
        return RealizationResult(False, None, [], math.inf)
    r1, r2 = _p7_residuals(orbit, q3[finite], w5[finite], w7[finite], w6[finite], q4[finite])
    err = np.maximum(r1, r2)
    order = np.argsort(err)[:32]
    fin_idx = np.nonzero(finite)[0]
    best_err, best_combo, best_q4 = math.inf, None, None
    for o in order:
        gi = fin_idx[o]
        e, q = _p7_polish(orbit, q3[gi], w5[gi], w7[gi], w6[gi], complex(q4[gi]))
        if e < best_err:
            best_err, best_combo, best_q4 = e, gi, q
        if best_err <= tol:
            break
    if best_err > tol or best_combo is None:
        return RealizationResult(False, None, [], float(best_err))
    c3, c5, c7, c6 = (
        complex(q3[best_combo]),
        complex(w5[best_combo]),
        complex(w7[best_combo]),
        complex(w6[best_combo]),
    )
    pts = [
        0.0,
        1.0,
        c3,
        best_q4,
        c5 * best_q4,
        c6 * (best_q4 - 1.0) + 1.0,
        c7 * (best_q4 - c3) + c3,
    ]
    arr = np.stack([[p.real for p in pts], [p.imag for p in pts]], axis=1)
    trace = [int(v) for v in combos[best_combo, :4]]
    return RealizationResult(True, PointConfig(arr), trace, float(best_err))


def _p7_polish(orbit, q3, w5, w7, w6, q4: complex, iters: int = 12):
    """Damped Newton on the two terminal residuals from one start."""
    cur = np.array([q4])
    r1, r2 = _p7_residuals(orbit, q3, w5, w7, w6, cur)
    err = float(max(r1[0], r2[0]))
    h = 1e-8
    for _ in range(iters):
        if err < 1e-15:
            break
        r1x, r2x = _p7_residuals(orbit, q3, w5, w7, w6, cur + h)
        r1y, r2y = _p7_residuals(orbit, q3, w5, w7, w6, cur + 1j * h)
        j = np.array(
            [
                [(r1x[0] - r1[0]) / h, (r1y[0] - r1[0]) / h],
                [(r2x[0] - r2[0]) / h, (r2y[0] - r2[0]) / h],
            ]
        )
        try:
            dx, dy = np.linalg.solve(j, [r1[0], r2[0]])
        except np.linalg.LinAlgError:
            break
        step = complex(dx, dy)
        improved = False
        for damp in (1.0, 0.5, 0.25, 0.1):
            trial = cur - damp * step
            t1, t2 = _p7_residuals(orbit, q3, w5, w7, w6, trial)
            terr = float(max(t1[0], t2[0]))
            if terr < err:
                cur, err, (r1, r2) = trial, terr, (t1, t2)
                improved = True
                break
        if not improved:
            break
    return err, complex(cur[0])


def verify_realization(result: RealizationResult, L: Pattern | str, z: complex,
                       angle_tol: float = 1e-6) -> bool:
    """Geometric check of a found realization: every pattern edge's triple is
    either fully coincident or similar to (0, 1, z) within angle_tol."""
    if isinstance(L, str):
        L = get_pattern(L)
    if not result.found or result.Q is None:
        return False
    pts = result.Q.points
    target = angles_of((0.0, 0.0), (1.0, 0.0), (z.real, z.imag))
    scale = max(1.0, float(np.abs(pts).max()))
    for i, j, kk in L.graph.edges:
        a, b, c = pts[i - 1], pts[j - 1], pts[kk - 1]
        d = max(np.hypot(*(a - b)), np.hypot(*(a - c)), np.hypot(*(b - c)))
        if d <= COINCIDE_TOL * scale:
            continue
        try:
            got = angles_of(a, b, c)
        except Exception:
            return False
        if max(abs(g - t) for g, t in zip(got, target)) > angle_tol:
            return False
    return True


def shape_grid(grid_steps: int) -> list[TriangleShape]:
    """A grid over the shape domain alpha >= beta >= gamma > 0 summing to pi.

    Walks (gamma, beta) over grid_steps x grid_steps cell centers and keeps
    the admissible combinations.
    """
    shapes = []
    third = math.pi / 3
    for i in range(grid_steps):
        gamma = third * (i + 0.5) / grid_steps
        for j in range(grid_steps):
            beta = gamma + (math.pi - 3 * gamma) / 2 * (j + 0.5) / grid_steps
            alpha = math.pi - beta - gamma
            if alpha >= beta >= gamma > 0:
                shapes.append(TriangleShape.from_angles(alpha, beta, gamma))
    return shapes


@dataclass
class ScanRow:
    alpha: float
    beta: float
    gamma: float
    realizable: bool
    residual: float


@dataclass
class ScanResult:
    fraction: float
    rows: list[ScanRow]

    @property
    def hits(self) -> list[ScanRow]:
        return [row for row in self.rows if row.realizable]


def scan_shape_space(
    L: Pattern | str, grid_steps: int, tol: float = 1e-6, threads: int = 0
) -> ScanResult:
    """Fraction of grid shapes realizing L at the given tolerance."""
    if isinstance(L, str):
        L = get_pattern(L)
    shapes = shape_grid(grid_steps)

    def row(T: TriangleShape) -> ScanRow:
        res = realize_pattern(L, T.z, tol)
        return ScanRow(T.alpha, T.beta, T.gamma, res.found, res.residual)

    if threads and threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as ex:
            rows = list(ex.map(row, shapes))
    else:
        rows = [row(T) for T in shapes]
    hits = sum(1 for r in rows if r.realizable)
    return ScanResult(fraction=hits / max(1, len(rows)), rows=rows)


def verify_equilateral_grid_case() -> bool:
    """The two triangular-grid cases showing the equilateral shape cannot
    realize the cycle-minus-edge pattern: with q1=0, q2=1, both equilateral
    completions of q3 = q4 (coincident or opposite sides), the candidate sets
    for q5 coming from edge 135 and from edge 245 are disjoint."""
    q1 = np.array([0.0, 0.0])
    q2 = np.array([1.0, 0.0])
    up = rotate_q(q1, q2, "+")  # (1/2, +sqrt3/2)
    down = rotate_q(q1, q2, "-")

    def candidates(center, target):
        return [rotate_q(center, target, "+"), rotate_q(center, target, "-")]

    def disjoint(s1, s2):
        return all(np.hypot(*(a - b)) > 1e-9 for a in s1 for b in s2)

    from_135 = candidates(q1, up)  # q5 with q1 q3 q5 equilateral, q3 = up
    # case A: q3 = q4 = up
    from_245_a = candidates(q2, up)
    # case B: q4 = down, opposite side of the line q1 q2
    from_245_b = candidates(q2, down)
    four_distinct = len({tuple(np.round(p, 9)) for p in from_135 + from_245_a}) == 4
    return four_distinct and disjoint(from_135, from_245_a) and disjoint(
        from_135, from_245_b
    )
