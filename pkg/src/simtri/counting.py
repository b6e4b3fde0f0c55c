"""Counting almost-similar triangles in point sets: the similarity
hypergraph, delta-similar k-subsets, the replacement local search, and the
averaging identity used to compare densities across set sizes.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from .errors import BudgetExceeded, DegenerateTriangle
from .geometry import (
    DEGENERACY_REL_TOL,
    TriangleShape,
    check_epsilon,
    edge_ratio_bound,
    is_delta_similar,
    is_eps_similar,
)
from .hypergraph import Hypergraph3

# Work budget for the delta-similar subset scan: C(n, k) * k! pair checks.
DELTA_COUNT_BUDGET = 25_000_000


@dataclass
class PointConfig:
    """An ordered list of planar points; duplicates are permitted."""

    points: np.ndarray

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float).reshape(-1, 2)
        if not np.all(np.isfinite(self.points)):
            raise ValueError("coordinates must be finite")

    @classmethod
    def from_list(cls, pts: Iterable) -> "PointConfig":
        return cls(np.asarray(list(pts), dtype=float))

    def __len__(self) -> int:
        return len(self.points)

    def without(self, index: int) -> "PointConfig":
        return PointConfig(np.delete(self.points, index, axis=0))

    def transformed(self, scale=1.0, angle=0.0, shift=(0.0, 0.0), reflect=False):
        c, s = math.cos(angle), math.sin(angle)
        rot = np.array([[c, -s], [s, c]])
        pts = self.points @ rot.T * scale
        if reflect:
            pts = pts * np.array([1.0, -1.0])
        return PointConfig(pts + np.asarray(shift, dtype=float))


@dataclass
class SimilarityCount:
    """Total count together with the similarity hypergraph behind it."""

    total: int
    hypergraph: Hypergraph3


def _triple_chunks(pts: np.ndarray, T: TriangleShape, eps: float):
    """Yield (i, j, k, similar_mask) arrays, one chunk per smallest index.

    Prefilters each chunk by the edge-ratio bound before evaluating angles,
    then applies the same sorted-angle test as ``is_eps_similar``.
    """
    n = len(pts)
    d = pts[:, None, :] - pts[None, :, :]
    d2 = np.einsum("ijk,ijk->ij", d, d)
    rmax2 = edge_ratio_bound(T, eps) ** 2 * (1.0 + 1e-9)
    target = np.array(T.angles)

    for i in range(n - 2):
        j, k = np.triu_indices(n - i - 1, k=1)
        j = j + i + 1
        k = k + i + 1
        a2 = d2[j, k]
        b2 = d2[i, k]
        c2 = d2[i, j]
        mx = np.maximum(np.maximum(a2, b2), c2)
        mn = np.minimum(np.minimum(a2, b2), c2)
        cand = (mn > 0.0) & (mx <= rmax2 * mn)
        if not cand.any():
            yield j, k, np.zeros(len(j), dtype=bool)
            continue
        ja, ka = j[cand], k[cand]
        a2c, b2c, c2c = a2[cand], b2[cand], c2[cand]
        # degeneracy: doubled area below tolerance * squared max distance
        vx = pts[ja] - pts[i]
        wx = pts[ka] - pts[i]
        cross = np.abs(vx[:, 0] * wx[:, 1] - vx[:, 1] * wx[:, 0])
        nondeg = cross >= DEGENERACY_REL_TOL * np.maximum(
            np.maximum(a2c, b2c), c2c
        )
        ab = np.sqrt(b2c * c2c)
        bc = np.sqrt(a2c * c2c)
        ca = np.sqrt(a2c * b2c)
        with np.errstate(divide="ignore", invalid="ignore"):
            cos_i = np.clip((b2c + c2c - a2c) / (2.0 * ab), -1.0, 1.0)
            cos_j = np.clip((a2c + c2c - b2c) / (2.0 * bc), -1.0, 1.0)
            cos_k = np.clip((a2c + b2c - c2c) / (2.0 * ca), -1.0, 1.0)
        ang = np.arccos(np.stack([cos_i, cos_j, cos_k], axis=1))
        ang.sort(axis=1)
        ok = nondeg & np.all(np.abs(ang[:, ::-1] - target) < eps, axis=1)
        mask = np.zeros(len(j), dtype=bool)
        mask[cand] = ok
        yield j, k, mask


def count_eps_similar(P: PointConfig, T: TriangleShape, eps: float) -> int:
    """Number of eps-similar triples, without materializing the hypergraph."""
    check_epsilon(T, eps)
    pts = P.points
    if len(pts) < 3:
        return 0
    return sum(int(m.sum()) for _, _, m in _triple_chunks(pts, T, eps))


def build_similarity_hypergraph(
    P: PointConfig, T: TriangleShape, eps: float
) -> SimilarityCount:
    """The 3-uniform hypergraph of eps-similar triples of P (1-based)."""
    check_epsilon(T, eps)
    pts = P.points
    edges = []
    if len(pts) >= 3:
        for idx, (j, k, m) in enumerate(_triple_chunks(pts, T, eps)):
            for jj, kk in zip(j[m], k[m]):
                edges.append((idx + 1, int(jj) + 1, int(kk) + 1))
    H = Hypergraph3.from_edges(len(pts), edges)
    return SimilarityCount(total=len(H.edges), hypergraph=H)


def count_brute_force(P: PointConfig, T: TriangleShape, eps: float) -> int:
    """Unpruned reference counter: plain triple loop over is_eps_similar."""
    check_epsilon(T, eps)
    pts = P.points
    total = 0
    for a, b, c in itertools.combinations(range(len(pts)), 3):
        if is_eps_similar(pts[a], pts[b], pts[c], T, eps):
            total += 1
    return total


def count_delta_similar(P: PointConfig, A: PointConfig, delta: float) -> int:
    """Number of k-subsets of P delta-similar to A under some labeling."""
    k = len(A)
    if not (3 <= k <= 5):
        raise ValueError(f"reference size must be 3..5, got {k}")
    n = len(P)
    work = math.comb(n, k) * math.factorial(k)
    if work > DELTA_COUNT_BUDGET or (k >= 4 and n > 40):
        raise BudgetExceeded(
            f"n={n}, k={k} needs {work} labeled checks; budget is "
            f"{DELTA_COUNT_BUDGET} and n <= 40 for k >= 4"
        )
    pts = P.points
    total = 0
    for sub in itertools.combinations(range(n), k):
        if is_delta_similar(A.points, pts[list(sub)], delta, relabel=True):
            total += 1
    return total


def averaging_identity_check(P: PointConfig, T: TriangleShape, eps: float) -> bool:
    """Exactness of sum_x count(P minus x) = (n-3) * count(P).

    Every subset count on the right is recomputed independently; the identity
    holds because each similar triple survives exactly n-3 of the deletions.
    """
    n = len(P)
    if n < 4:
        raise ValueError("identity needs at least 4 points")
    full = count_eps_similar(P, T, eps)
    left = sum(count_eps_similar(P.without(x), T, eps) for x in range(n))
    return left == (n - 3) * full


@dataclass
class LocalImproveResult:
    config: PointConfig
    count: int
    accepted_moves: int


def _codegree_zero_pairs(H: Hypergraph3) -> list[tuple[int, int]]:
    n = H.r
    co = np.zeros((n + 1, n + 1), dtype=np.int64)
    for e in H.edges:
        for u, v in itertools.combinations(e, 2):
            co[u, v] += 1
    return [(u, v) for u in range(1, n) for v in range(u + 1, n + 1) if co[u, v] == 0]


def local_improve(
    P: PointConfig,
    T: TriangleShape,
    eps: float,
    eta: float,
    seed: int = 0,
    max_retries: int = 30,
) -> PointConfig:
    """Replacement local search: while some pair has codegree zero, move the
    lower-degree endpoint next to the other and keep the move only when a
    recount verifies no loss.

    eta is validated a posteriori by the recount, so any eta > 0 is safe; bad
    moves are rolled back.  Accepts a move when the count strictly grows, or
    stays equal while the number of zero-codegree pairs drops, which makes
    progress monotone and termination certain.
    """
    check_epsilon(T, eps)
    if eta <= 0:
        raise ValueError("eta must be positive")
    rng = np.random.default_rng(seed)
    cur = PointConfig(P.points.copy())
    sc = build_similarity_hypergraph(cur, T, eps)
    count = sc.total
    pairs = _codegree_zero_pairs(sc.hypergraph)

    while pairs:
        improved = False
        for u, v in pairs:
            H = sc.hypergraph
            du, dv = H.degree(u), H.degree(v)
            keep, lose = (u, v) if (du > dv or (du == dv and u < v)) else (v, u)
            anchor = cur.points[keep - 1]
            for _ in range(max_retries):
                r = eta * math.sqrt(rng.uniform(0.0, 1.0))
                th = rng.uniform(0.0, 2.0 * math.pi)
                candidate = anchor + np.array([r * math.cos(th), r * math.sin(th)])
                trial = cur.points.copy()
                trial[lose - 1] = candidate
                trial_cfg = PointConfig(trial)
                trial_sc = build_similarity_hypergraph(trial_cfg, T, eps)
                if trial_sc.total < count:
                    continue
                trial_pairs = _codegree_zero_pairs(trial_sc.hypergraph)
                if trial_sc.total > count or len(trial_pairs) < len(pairs):
                    cur, sc, count, pairs = trial_cfg, trial_sc, trial_sc.total, trial_pairs
                    improved = True
                    break
            if improved:
                break
        if not improved:
            break  # no verified improving move: NoProgress is not an error
    return cur
