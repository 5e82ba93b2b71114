#!/usr/bin/env python3
"""
Test suite for the closed disk formula and the invariant extraction
"""

from fractions import Fraction

import pytest

from disk_closed import (
    disk_potential_Q,
    extract_invariants,
    guarded_disk_potential,
    identity_mirror_map,
    nested_disk_potential_q,
    nested_levels,
    zero_point_disk_potential,
)
from mirror_series import Geometry, double_factorial, tau_series
from series_core import HalfSeries

GEOMETRIES = [(3,), (5,), (3, 3), (7,), (3, 5)]


def all_geometries():
    return [Geometry(degrees) for degrees in GEOMETRIES]


def test_cubic_leading_coefficient():
    assert nested_disk_potential_q(Geometry((3,)), 1)[1] == 6


def test_quintic_nested_potential():
    assert nested_disk_potential_q(Geometry((5,)), 3) == HalfSeries([0, 30, 0, 16150], 3)


def test_quintic_invariants():
    dp = disk_potential_Q(Geometry((5,)), 3)
    assert dp.in_Q == HalfSeries([0, 30, 0, 4600], 3)
    assert extract_invariants(dp) == {1: 30, 3: 4600}


def test_degree_one_invariant_is_twice_double_factorial_product():
    for g in all_geometries():
        expected = 2
        for a in g.degrees:
            expected *= double_factorial(a)
        assert extract_invariants(disk_potential_Q(g, 3))[1] == expected


def test_known_degree_one_values():
    values = {(3,): 6, (5,): 30, (3, 3): 18, (7,): 210, (3, 5): 90}
    for degrees, expected in values.items():
        assert extract_invariants(disk_potential_Q(Geometry(degrees), 1))[1] == expected


def test_invariants_cover_odd_degrees_only():
    for g in all_geometries():
        dp = disk_potential_Q(g, 9)
        invariants = extract_invariants(dp)
        assert sorted(invariants) == [1, 3, 5, 7, 9]
        assert all(isinstance(v, Fraction) for v in invariants.values())
        assert dp.in_q.is_odd_supported()
        assert dp.in_Q.is_odd_supported()


def test_nested_levels_start_from_tau():
    for g in all_geometries():
        levels = nested_levels(g, 7)
        assert len(levels) == g.p_max + 1
        assert levels[-1] == nested_disk_potential_q(g, 7)


def test_nested_potential_is_linear_in_tau():
    for g in all_geometries():
        tau = tau_series(g, 9)
        assert nested_disk_potential_q(g, 9, tau=tau * 2) == nested_disk_potential_q(g, 9) * 2


def test_identity_mirror_map_leaves_potential_unchanged():
    for g in all_geometries():
        dp = disk_potential_Q(g, 9, q_of_Q=identity_mirror_map(5))
        assert dp.in_Q == dp.in_q


def test_truncation_guard_order():
    for g in all_geometries():
        assert nested_disk_potential_q(g, 11).truncate(9) == nested_disk_potential_q(g, 9)
        assert disk_potential_Q(g, 11).in_Q.truncate(9) == disk_potential_Q(g, 9).in_Q


def test_guarded_potential_reports_the_requested_order():
    for g in all_geometries():
        guarded = guarded_disk_potential(g, 9)
        plain = disk_potential_Q(g, 9)
        assert guarded.trunc_u == 9
        assert guarded.in_Q == plain.in_Q
        assert guarded.in_q == plain.in_q
        assert extract_invariants(guarded) == extract_invariants(plain)
    assert guarded_disk_potential(Geometry((5,)), 3, guard_orders=0).in_Q == HalfSeries([0, 30, 0, 4600], 3)


def test_zero_point_potential_quintic():
    assert zero_point_disk_potential(Geometry((5,)), 3) == HalfSeries([0, 60, 0, Fraction(9200, 3)], 3)


def test_divisor_equation():
    for degrees in [(5,), (3, 3)]:
        g = Geometry(degrees)
        zero_point = zero_point_disk_potential(g, 9)
        assert zero_point.q_log_derivative() == disk_potential_Q(g, 9).in_Q


def test_zero_point_range():
    with pytest.raises(ValueError, match="out of implemented range"):
        zero_point_disk_potential(Geometry((3,)), 5)
    with pytest.raises(ValueError, match="out of implemented range"):
        zero_point_disk_potential(Geometry((7,)), 5)


def main():
    from suite_runner import run_suite
    return run_suite("CLOSED DISK FORMULA TEST SUITE", globals())


if __name__ == "__main__":
    success = main()
    exit(0 if success else 1)
