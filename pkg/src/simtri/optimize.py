"""The density functional f(x) = p(x) / (1 - sum x_i^3) on the probability
simplex and its maximization by multi-start projected gradient ascent.

p is the multilinear sum of x_i x_j x_k over edges ijk of the skeleton
hypergraph; f is the leading n^3 coefficient of the recursive construction's
triangle count for weights x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateDenominator, SizeMismatch
from .hypergraph import Hypergraph3

DEFAULT_STARTS = 200
DEFAULT_TOL = 1e-12
DEFAULT_SEED = 0
MAX_ITERS = 4000


@dataclass
class WeightVector:
    """Nonnegative reals summing to 1: a point of the probability simplex."""

    x: np.ndarray

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float).ravel()
        if np.any(self.x < -1e-12):
            raise ValueError("weights must be nonnegative")
        if abs(float(self.x.sum()) - 1.0) > 1e-12:
            raise ValueError(f"weights must sum to 1, got {self.x.sum()}")

    def __len__(self):
        return len(self.x)

    def __iter__(self):
        return iter(self.x)


@dataclass
class OptimizationResult:
    x_star: WeightVector
    value: float
    starts_used: int
    converged: bool


def _edge_index(F: Hypergraph3) -> np.ndarray:
    if len(F.edges) == 0:
        return np.zeros((0, 3), dtype=np.intp)
    return np.array(sorted(F.edges), dtype=np.intp) - 1


def p_eval(F: Hypergraph3, y: Sequence) -> float:
    """Edge monomial sum p(y) = sum over ijk in F of y_i y_j y_k."""
    if len(y) != F.r:
        raise SizeMismatch(f"vector length {len(y)} != vertex count {F.r}")
    total = 0
    for i, j, k in F.edges:
        total += y[i - 1] * y[j - 1] * y[k - 1]
    return total


def f_eval(F: Hypergraph3, x: Sequence) -> float:
    """Density functional p(x) / (1 - sum x^3); denominator must not vanish."""
    if len(x) != F.r:
        raise SizeMismatch(f"vector length {len(x)} != vertex count {F.r}")
    cubes = sum(xi**3 for xi in x)
    denom = 1 - cubes
    if float(denom) < 1e-15:
        raise DegenerateDenominator(f"1 - sum(x^3) = {denom} is not positive")
    return p_eval(F, x) / denom


def _p_batch(E: np.ndarray, X: np.ndarray) -> np.ndarray:
    if len(E) == 0:
        return np.zeros(X.shape[0])
    return (X[:, E[:, 0]] * X[:, E[:, 1]] * X[:, E[:, 2]]).sum(axis=1)


def _grad_p_batch(E: np.ndarray, X: np.ndarray) -> np.ndarray:
    G = np.zeros_like(X)
    for a, b, c in E:
        G[:, a] += X[:, b] * X[:, c]
        G[:, b] += X[:, a] * X[:, c]
        G[:, c] += X[:, a] * X[:, b]
    return G


def _f_batch(E: np.ndarray, X: np.ndarray) -> np.ndarray:
    return _p_batch(E, X) / (1.0 - (X**3).sum(axis=1))


def f_gradient(F: Hypergraph3, x: Sequence) -> np.ndarray:
    """Analytic gradient of f at x (valid off the simplex as well)."""
    if len(x) != F.r:
        raise SizeMismatch(f"vector length {len(x)} != vertex count {F.r}")
    X = np.asarray(x, dtype=float)[None, :]
    E = _edge_index(F)
    D = 1.0 - (X**3).sum(axis=1)
    p = _p_batch(E, X)
    gp = _grad_p_batch(E, X)
    return ((gp * D[:, None] + 3.0 * X**2 * p[:, None]) / D[:, None] ** 2)[0]


def project_simplex(X: np.ndarray) -> np.ndarray:
    """Euclidean projection of each row onto the probability simplex."""
    X = np.atleast_2d(X)
    n = X.shape[1]
    U = np.sort(X, axis=1)[:, ::-1]
    css = np.cumsum(U, axis=1) - 1.0
    ks = np.arange(1, n + 1)
    cond = U - css / ks > 0
    rho = n - np.argmax(cond[:, ::-1], axis=1) - 1
    theta = css[np.arange(len(X)), rho] / (rho + 1.0)
    return np.maximum(X - theta[:, None], 0.0)


def maximize_f(
    F: Hypergraph3,
    starts: int = DEFAULT_STARTS,
    tol: float = DEFAULT_TOL,
    seed: int = DEFAULT_SEED,
    max_iters: int = MAX_ITERS,
) -> OptimizationResult:
    """Best-of-starts projected gradient ascent of f over the simplex.

    Starts are Dirichlet(1) samples (plus the uniform point); every start
    runs monotone ascent with per-start backtracking step control and simplex
    projection after each step.  Convergence means the projected gradient
    norm falls below tol; the best non-converged value is still reported,
    flagged accordingly.
    """
    if len(F.edges) == 0:
        raise ValueError("hypergraph must have at least one edge")
    r = F.r
    E = _edge_index(F)
    rng = np.random.default_rng(seed)
    X = rng.dirichlet(np.ones(r), size=max(1, starts))
    X[0] = np.full(r, 1.0 / r)

    step = np.full(len(X), 0.25)
    fX = _f_batch(E, X)
    converged = np.zeros(len(X), dtype=bool)
    probe = 1e-7
    for _ in range(max_iters):
        active = ~converged & (step > 1e-17)
        if not active.any():
            break
        idx = np.nonzero(active)[0]
        Xa = X[idx]
        D = 1.0 - (Xa**3).sum(axis=1)
        p = _p_batch(E, Xa)
        G = (_grad_p_batch(E, Xa) * D[:, None] + 3.0 * Xa**2 * p[:, None]) / D[
            :, None
        ] ** 2
        pg = (project_simplex(Xa + probe * G) - Xa) / probe
        converged[idx[np.sqrt((pg**2).sum(axis=1)) < tol]] = True
        trial = project_simplex(Xa + step[idx, None] * G)
        ftrial = _f_batch(E, trial)
        better = ftrial > fX[idx]
        X[idx[better]] = trial[better]
        fX[idx[better]] = ftrial[better]
        # stretch improving rows, backtrack stalled ones
        step[idx] = np.where(better, step[idx] * 1.2, step[idx] * 0.5)
    best = int(np.argmax(fX))
    x_star = project_simplex(X[best])[0]
    x_star = x_star / x_star.sum()
    return OptimizationResult(
        x_star=WeightVector(x_star),
        value=float(_f_batch(E, x_star[None, :])[0]),
        starts_used=len(X),
        converged=bool(converged[best]),
    )
