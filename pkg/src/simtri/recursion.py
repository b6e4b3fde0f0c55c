"""The recursively defined lower-bound sequence h(n) and the recurrence
verifiers behind it: the cubic upper bound with equality at powers of 3,
density monotonicity, supermultiplicativity, the two-sided gamma bounds, and
the g(n) recurrence of the recursive construction.

All sequence values are exact integers; verifier comparisons cross-multiply
rather than divide.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidWeights, PrerequisiteFailed
from .hypergraph import Hypergraph3

# int64 stays exact while n^3 < 2^63; the cap reflects the O(n^2) memory of
# the pruning table rather than arithmetic width.
MAX_N = 10_000


@dataclass
class HTable:
    """h(0..n_max) with, per n >= 3, the chosen split (a, b, c), a<=b<=c."""

    values: list[int]
    splits: list[Optional[tuple[int, int, int]]]

    @property
    def n_max(self) -> int:
        return len(self.values) - 1

    def h(self, n: int) -> int:
        return self.values[n]

    def upper_bound_num(self, n: int) -> int:
        """Numerator of the cubic bound: h(n) <= (n^3 - n)/24."""
        return n**3 - n


@dataclass
class RecurrenceReport:
    """Result of one recurrence check: empty violations means it passed."""

    gamma_estimate: float
    violations: list
    s: int
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations


_BOUND_SEGMENTS = 4


def compute_h(n_max: int) -> HTable:
    """Exact table of h(n) = max(abc + h(a)+h(b)+h(c)) over proper splits.

    The per-n scan walks the smallest part a and skips any a whose upper
    bound cannot reach the best value seen; the bound decouples the product
    term (monotone along a row) from the h-pair term (a precomputed suffix
    maximum) on a few segments of the row.  A second pass recovers the
    lexicographically smallest maximizing split.  Pruning only skips rows
    provably below the maximum, so the result equals the full scan's.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    if n_max > MAX_N:
        raise ValueError(f"n_max beyond the validated range {MAX_N}")
    size = n_max + 1
    h = np.zeros(size, dtype=np.int64)
    splits: list[Optional[tuple[int, int, int]]] = [None] * size
    if n_max < 3:
        return HTable(values=[int(v) for v in h], splits=splits)

    B = np.arange(size, dtype=np.int64)
    B2 = B * B
    # pairmax[m, b0] = max over b in [b0, m//2] of h[b] + h[m - b]
    pairmax = np.zeros((size, n_max // 2 + 2), dtype=np.int64)

    def build_pairmax_row(m: int) -> None:
        k = m // 2
        vals = h[: k + 1] + h[m - k : m + 1][::-1]
        pairmax[m, : k + 1] = np.maximum.accumulate(vals[::-1])[::-1]

    def row_values(n: int, a: int) -> tuple[np.ndarray, int]:
        """Split values for fixed smallest part a; returns (values, b_start)."""
        m = n - a
        b0 = a if a > 0 else 1
        k = m // 2
        if b0 > k:
            return np.zeros(0, dtype=np.int64), b0
        prod = m * B[b0 : k + 1] - B2[b0 : k + 1]
        return a * prod + (h[a] + h[b0 : k + 1] + h[m - k : m - b0 + 1][::-1]), b0

    def row_bound(n: int, a: int) -> int:
        """Upper bound for row a: segmented product-max + pair-suffix-max."""
        m = n - a
        k = m // 2
        width = k - a + 1
        best = 0
        for j in range(_BOUND_SEGMENTS):
            lo = a + (width * j) // _BOUND_SEGMENTS
            hi = a + (width * (j + 1)) // _BOUND_SEGMENTS - 1
            if hi < lo:
                continue
            cand = a * hi * (m - hi) + int(pairmax[m, lo])
            if cand > best:
                best = cand
        return best + int(h[a])

    for m in range(3):
        build_pairmax_row(m)

    for n in range(3, size):
        amax = n // 3
        best = np.int64(0)
        for a in range(max(1, amax - 2), amax + 1):
            vals, _ = row_values(n, a)
            if len(vals):
                best = max(best, vals.max())
        row0, _ = row_values(n, 0)
        if len(row0):
            best = max(best, row0.max())
        a_arr = np.arange(1, amax + 1, dtype=np.int64)
        if len(a_arr):
            m_arr = n - a_arr
            k_arr = m_arr // 2
            w_arr = k_arr - a_arr + 1
            bounds = np.full(len(a_arr), np.iinfo(np.int64).min, dtype=np.int64)
            for j in range(_BOUND_SEGMENTS):
                lo = a_arr + (w_arr * j) // _BOUND_SEGMENTS
                hi = a_arr + (w_arr * (j + 1)) // _BOUND_SEGMENTS - 1
                ok = hi >= lo
                cand = a_arr * hi * (m_arr - hi) + pairmax[m_arr, np.minimum(lo, k_arr)]
                np.maximum(bounds, np.where(ok, cand, np.iinfo(np.int64).min), out=bounds)
            bounds += h[a_arr]
            for idx in np.nonzero(bounds >= best)[0]:
                if bounds[idx] < best:
                    continue
                vals, _ = row_values(n, int(a_arr[idx]))
                if len(vals):
                    best = max(best, vals.max())
        hn = int(best)
        h[n] = hn
        # lexicographically smallest maximizing (a, b)
        found = None
        for a in range(0, amax + 1):
            if a > 0 and row_bound(n, a) < hn:
                continue
            vals, b0 = row_values(n, a)
            hits = np.nonzero(vals == hn)[0]
            if len(hits):
                b = int(hits[0]) + b0
                found = (a, b, n - a - b)
                break
        splits[n] = found
        build_pairmax_row(n)
    return HTable(values=[int(v) for v in h], splits=splits)


def is_power_of_3(n: int) -> bool:
    if n < 1:
        return False
    while n % 3 == 0:
        n //= 3
    return n == 1


def verify_upper_bound(table: HTable) -> RecurrenceReport:
    """Check 24*h(n) <= n^3 - n for all n, equality exactly at powers of 3."""
    violations = []
    for n, hn in enumerate(table.values):
        lhs, rhs = 24 * hn, n**3 - n
        if lhs > rhs:
            violations.append(("bound", n))
        elif n >= 3 and (lhs == rhs) != is_power_of_3(n):
            violations.append(("equality-pattern", n))
    return RecurrenceReport(
        gamma_estimate=_tail_density(table.values, 3),
        violations=violations,
        s=3,
    )


def _tail_density(f: Sequence[int], s: int) -> float:
    n = len(f) - 1
    return float(f[n]) / comb(n, s) if n >= s else 0.0


def verify_density_monotone(f: Sequence[int], s: int) -> RecurrenceReport:
    """Non-increase of f(n)/C(n,s), compared via exact cross-multiplication."""
    if s < 2:
        raise ValueError("s must be at least 2")
    violations = [
        n
        for n in range(s, len(f) - 1)
        if f[n] * comb(n + 1, s) < f[n + 1] * comb(n, s)
    ]
    return RecurrenceReport(_tail_density(f, s), violations, s)


def verify_supermultiplicative(f: Sequence[int], s: int) -> RecurrenceReport:
    """f(ab) >= a*f(b) + f(a)*b^s for all ordered pairs with ab in range."""
    n_max = len(f) - 1
    violations = [
        (a, b)
        for a in range(1, n_max + 1)
        for b in range(1, n_max // a + 1)
        if f[a * b] < a * f[b] + f[a] * b**s
    ]
    return RecurrenceReport(_tail_density(f, s), violations, s)


def verify_gamma_bounds(
    f: Sequence[int], s: int, gamma: Fraction | float | None = None
) -> RecurrenceReport:
    """Two-sided bounds gamma*(n^s - n)/s! >= f(n) >= gamma*C(n,s).

    Requires the density-monotone and supermultiplicative properties to hold
    first (PrerequisiteFailed otherwise).  A Fraction gamma is checked
    exactly; a float gamma at 1e-9 relative tolerance; omitted gamma is
    estimated from the final table entry, which monotonicity makes valid for
    every prefix index.
    """
    pre1 = verify_density_monotone(f, s)
    pre2 = verify_supermultiplicative(f, s)
    if not pre1.ok or not pre2.ok:
        raise PrerequisiteFailed(
            f"hypotheses failed: monotone={len(pre1.violations)}, "
            f"supermultiplicative={len(pre2.violations)} violations"
        )
    n_max = len(f) - 1
    if gamma is None:
        gamma = Fraction(f[n_max], comb(n_max, s))
    violations = []
    fact = 1
    for i in range(2, s + 1):
        fact *= i
    if isinstance(gamma, (Fraction, int)):
        g = Fraction(gamma)
        for n in range(n_max + 1):
            if g * (n**s - n) < fact * f[n]:
                violations.append(("upper", n))
            if f[n] < g * comb(n, s):
                violations.append(("lower", n))
    else:
        rel = 1.0 + 1e-9
        for n in range(n_max + 1):
            if float(gamma) * (n**s - n) * rel < fact * f[n]:
                violations.append(("upper", n))
            if float(f[n]) * rel < float(gamma) * comb(n, s):
                violations.append(("lower", n))
    return RecurrenceReport(float(gamma), violations, s)


def g_sequence(
    F: Hypergraph3,
    x: Sequence,
    n_max: int,
) -> tuple[list[int], RecurrenceReport]:
    """The construction-count recurrence g(n) = sum g(y_i(n)) + p(y(n)).

    y(n) is the floor/ceil allocation of the weights, p the edge monomial sum.
    The report records every n <= n_max violating the density band
    |g(n) - f(x) n^3| < r n^2 / (1 - x0).  Exact rational arithmetic is used
    throughout when the weights are Fractions.
    """
    from .construction import allocate_counts  # deferred: construction is a client too
    from .optimize import f_eval, p_eval

    r = F.r
    if len(x) != r:
        raise InvalidWeights(f"weight length {len(x)} != vertex count {r}")
    if any(xi <= 0 for xi in x):
        raise InvalidWeights("weights must be strictly positive")
    total = sum(x)
    exact = all(isinstance(xi, (Fraction, int)) for xi in x)
    if exact:
        if total != 1:
            raise InvalidWeights(f"weights must sum to 1, got {total}")
    elif abs(float(total) - 1.0) > 1e-12:
        raise InvalidWeights(f"weights must sum to 1, got {total}")
    if F.support() != frozenset(range(1, r + 1)):
        raise InvalidWeights("hypergraph must be nonempty and cover all vertices")

    x0 = max(x)
    fx = f_eval(F, [float(xi) for xi in x])
    if exact:
        px = p_eval(F, list(map(Fraction, x)))
        fx_exact = px / (1 - sum(Fraction(xi) ** 3 for xi in x))
    edges = [tuple(e) for e in F.edges]

    g: list[int] = [0] * (n_max + 1)
    violations = []
    band_coeff = r / (1.0 - float(x0))
    for n in range(3, n_max + 1):
        y = allocate_counts(n, x)
        if max(y) >= n:
            raise InvalidWeights(
                f"allocation at n={n} puts all points in one part "
                f"(max weight {float(x0):.3f} too close to 1)"
            )
        p = 0
        for i, j, k in edges:
            p += y[i - 1] * y[j - 1] * y[k - 1]
        g[n] = sum(g[yi] for yi in y) + p
    # n = 0 is excluded: both sides vanish and the strict bound is vacuous
    for n in range(1, n_max + 1):
        if exact:
            dev = abs(g[n] - fx_exact * n**3)
            if dev * (1 - Fraction(x0)) >= r * n**2:
                violations.append(n)
        else:
            if abs(g[n] - fx * n**3) >= band_coeff * n**2:
                violations.append(n)
    report = RecurrenceReport(
        gamma_estimate=_tail_density(g, 3) if n_max >= 3 else 0.0,
        violations=violations,
        s=3,
        details={"f_x": fx, "x0": float(x0), "r": r},
    )
    return g, report
