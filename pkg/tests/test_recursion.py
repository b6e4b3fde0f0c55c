import math
from fractions import Fraction

import pytest

from simtri.construction import threepartite_spec
from simtri.errors import InvalidWeights, PrerequisiteFailed
from simtri.hypergraph import Hypergraph3
from simtri.recursion import (
    compute_h,
    g_sequence,
    is_power_of_3,
    verify_gamma_bounds,
    verify_density_monotone,
    verify_supermultiplicative,
    verify_upper_bound,
)


def brute_force_h(n_max):
    h = [0] * (n_max + 1)
    splits = [None] * (n_max + 1)
    for n in range(3, n_max + 1):
        best, arg = -1, None
        for a in range(0, n // 3 + 1):
            b_lo = a if a > 0 else 1
            for b in range(b_lo, (n - a) // 2 + 1):
                c = n - a - b
                v = a * b * c + h[a] + h[b] + h[c]
                if v > best:
                    best, arg = v, (a, b, c)
        h[n], splits[n] = best, arg
    return h, splits


class TestComputeH:
    def test_small_values(self, htable_300):
        t = htable_300
        assert t.values[:10] == [0, 0, 0, 1, 2, 4, 8, 13, 20, 30]
        assert t.splits[6] == (2, 2, 2)
        assert t.splits[9] == (3, 3, 3)

    def test_powers_of_three(self, htable_300):
        for n in (3, 9, 27, 81, 243):
            assert 24 * htable_300.values[n] == n**3 - n

    def test_matches_brute_force(self):
        hb, spb = brute_force_h(120)
        t = compute_h(120)
        assert t.values == hb
        assert t.splits[3:] == spb[3:]

    def test_split_is_maximizing(self, htable_300):
        t = htable_300
        for n in (17, 50, 100, 299):
            a, b, c = t.splits[n]
            assert a + b + c == n and a <= b <= c
            assert a * b * c + t.values[a] + t.values[b] + t.values[c] == t.values[n]

    def test_nondecreasing(self, htable_300):
        v = htable_300.values
        assert all(v[n + 1] >= v[n] for n in range(len(v) - 1))

    def test_tiny_tables(self):
        assert compute_h(0).values == [0]
        assert compute_h(2).values == [0, 0, 0]


class TestUpperBound:
    def test_no_violations(self, htable_300):
        assert verify_upper_bound(htable_300).ok

    def test_equality_n27(self, htable_300):
        assert htable_300.values[27] == 819 == (27**3 - 27) // 24

    def test_h10_below_bound(self, htable_300):
        assert htable_300.values[10] <= 41  # bound is 41.25

    def test_power_detection(self):
        assert [n for n in range(1, 100) if is_power_of_3(n)] == [1, 3, 9, 27, 81]

    def test_doctored_table_fails(self, htable_300):
        from simtri.recursion import HTable

        bad = HTable(values=list(htable_300.values), splits=list(htable_300.splits))
        bad.values[10] = 60  # above (1000 - 10)/24
        assert not verify_upper_bound(bad).ok


class TestDensityMonotone:
    def test_h_prefix_densities(self, htable_300):
        v = htable_300.values
        # 1/1 >= 2/4 >= 4/10 >= 8/20 on the first few entries
        assert (v[3], v[4], v[5], v[6]) == (1, 2, 4, 8)
        assert verify_density_monotone(v, 3).ok

    def test_zero_sequence(self):
        assert verify_density_monotone([0] * 40, 3).ok

    def test_binomial_sequence(self):
        f = [math.comb(n, 3) for n in range(40)]
        assert verify_density_monotone(f, 3).ok

    def test_violation_reported(self):
        f = [0, 0, 0, 1, 1, 1, 20]  # jump at n=6
        rep = verify_density_monotone(f, 3)
        assert 5 in rep.violations


class TestSupermultiplicative:
    def test_power_equality(self, htable_300):
        v = htable_300.values
        assert v[9] == 3 * v[3] + v[3] * 27

    def test_h_full_range(self, htable_300):
        assert verify_supermultiplicative(htable_300.values, 3).ok

    def test_violation_detected(self):
        f = [0, 0, 0, 1] + [1] * 12  # f(9) = 1 < 3*1 + 1*27
        rep = verify_supermultiplicative(f, 3)
        assert (3, 3) in rep.violations


class TestGammaBounds:
    def test_h_with_quarter_gamma(self, htable_300):
        rep = verify_gamma_bounds(htable_300.values, 3, Fraction(1, 4))
        assert rep.ok

    def test_estimated_gamma(self, htable_300):
        rep = verify_gamma_bounds(htable_300.values, 3, None)
        assert rep.ok

    def test_prerequisite_enforced(self):
        f = [0, 0, 0, 1, 1, 1, 20]
        with pytest.raises(PrerequisiteFailed):
            verify_gamma_bounds(f, 3, Fraction(1, 4))

    def test_endpoints(self, htable_300):
        v = htable_300.values
        assert Fraction(1, 4) * (27 - 3) >= Fraction(6 * v[3], 6)
        assert v[3] >= Fraction(1, 4) * math.comb(3, 3)


class TestGSequence:
    def test_threepartite_powers(self):
        spec = threepartite_spec()
        g, rep = g_sequence(spec.F, spec.x, 800)
        for k in (1, 2, 3, 4, 5, 6):
            n = 3**k
            if n <= 800:
                assert g[n] == (n**3 - n) // 24
        assert rep.ok

    def test_threepartite_equals_h(self, htable_300):
        # equal weights on one triangle reproduce the split recurrence exactly
        spec = threepartite_spec()
        g, _ = g_sequence(spec.F, spec.x, 300)
        assert g == htable_300.values

    def test_band_details(self):
        spec = threepartite_spec()
        _, rep = g_sequence(spec.F, spec.x, 100)
        assert rep.details["f_x"] == pytest.approx(1 / 24)
        assert 0 < rep.details["f_x"] < 1 / 6

    def test_bad_weights(self):
        F = Hypergraph3.from_edges(3, [(1, 2, 3)])
        with pytest.raises(InvalidWeights):
            g_sequence(F, (0.5, 0.5), 10)
        with pytest.raises(InvalidWeights):
            g_sequence(F, (0.2, 0.3, 0.6), 10)

    def test_uncovered_vertex(self):
        F = Hypergraph3.from_edges(4, [(1, 2, 3)])
        with pytest.raises(InvalidWeights):
            g_sequence(F, (0.25, 0.25, 0.25, 0.25), 10)

    def test_degenerate_allocation_guard(self):
        F = Hypergraph3.from_edges(3, [(1, 2, 3)])
        with pytest.raises(InvalidWeights):
            g_sequence(F, (Fraction(9, 10), Fraction(1, 20), Fraction(1, 20)), 30)


def test_gap_ratio_stays_bounded(htable_300):
    # h(n) = n^3/24 - O(n log n): report-style check on the prefix
    v = htable_300.values
    ratios = [
        (n**3 / 24 - v[n]) / (n * math.log2(n)) for n in range(4, 301)
    ]
    assert max(ratios) < 0.5
