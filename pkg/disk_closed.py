#!/usr/bin/env python3
"""
Closed Disk Formula
Nested-derivative evaluation of the one-point disk potential

Z_1(Q) = 2^p / I_p * q d/dq { 1/I_(p-1) * q d/dq { ... q d/dq { tau_a / I_0 } } }

evaluated in q-coordinates first, then rewritten in U = Q^(1/2) through the
inverse mirror map in a single substitution.
"""

import logging
from dataclasses import dataclass

from mirror_series import GUARD_ORDERS, Geometry, I_tower, mirror_q_of_Q, tau_series
from series_core import HalfSeries, QSeries, substitute_half

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DiskPotential:
    """One-point disk potential in both coordinate systems"""

    geometry: Geometry
    in_q: HalfSeries
    in_Q: HalfSeries
    trunc_u: int


def nested_levels(g, trunc_u, tau=None):
    """
    Every level of the nested expression, scaled by 2^p_max

    Level s is 2^p_max * S_s with S_0 = tau/I_0 and S_s = (1/I_s) q d/dq S_(s-1).

    Parameters:
    g (Geometry): multi-degree
    trunc_u (int): u-order
    tau (HalfSeries): seed series, tau_series(g, trunc_u) when omitted

    Returns:
    list of HalfSeries, indices 0..p_max
    """
    if tau is None:
        tau = tau_series(g, trunc_u)
    tower = I_tower(g, trunc_u // 2)
    scale = 2 ** g.p_max

    level = tau / tower[0]
    levels = [level * scale]
    for j in range(1, g.p_max + 1):
        level = level.q_log_derivative() / tower[j]
        levels.append(level * scale)
    return levels


def nested_disk_potential_q(g, trunc_u, tau=None):
    """
    Right-hand side of the closed formula in q-coordinates

    For p_max = 0 this is tau_a/I_0.
    """
    return nested_levels(g, trunc_u, tau)[-1]


def disk_potential_Q(g, trunc_u, q_of_Q=None):
    """
    Closed-formula disk potential and its image under the mirror map

    Parameters:
    g (Geometry): multi-degree
    trunc_u (int): highest u-exponent (disk degree) kept
    q_of_Q (QSeries): inverse mirror map, mirror_q_of_Q(g, trunc_u//2 + 1) when omitted

    Returns:
    DiskPotential
    """
    in_q = nested_disk_potential_q(g, trunc_u)
    if q_of_Q is None:
        q_of_Q = mirror_q_of_Q(g, trunc_u // 2 + 1)
    in_Q = substitute_half(in_q, q_of_Q)
    logger.debug("disk potential for %s valid to U^%d", g.label, in_Q.trunc)
    return DiskPotential(geometry=g, in_q=in_q, in_Q=in_Q, trunc_u=in_Q.trunc)


def guarded_disk_potential(g, trunc_u, guard_orders=GUARD_ORDERS):
    """
    disk_potential_Q computed guard_orders beyond trunc_u, reported to trunc_u

    Returns:
    DiskPotential valid to U^trunc_u
    """
    dp = disk_potential_Q(g, trunc_u + guard_orders)
    logger.debug("guarded disk potential for %s: computed to u^%d, reported to u^%d",
                 g.label, dp.trunc_u, trunc_u)
    return DiskPotential(
        geometry=g,
        in_q=dp.in_q.truncate(trunc_u),
        in_Q=dp.in_Q.truncate(trunc_u),
        trunc_u=trunc_u,
    )


def extract_invariants(dp):
    """
    N_(1,d) = coefficient of U^d in Z_1(Q), odd d <= trunc_u

    Returns:
    dict: {d: Fraction}
    """
    return {d: dp.in_Q[d] for d in range(1, dp.trunc_u + 1, 2)}


def zero_point_disk_potential(g, trunc_u):
    """
    Divisor-equation diagnostic for p_max = 1

    2 tau_a/I_0 rewritten in U = Q^(1/2). Since Q d/dQ = (q/I_1) d/dq, its
    Q d/dQ derivative is the one-point potential Z_1(Q).
    """
    if g.p_max != 1:
        raise ValueError(f"out of implemented range: divisor reduction needs p_max = 1, got {g.p_max}")
    tower = I_tower(g, trunc_u // 2)
    seed = tau_series(g, trunc_u) * 2 / tower[0]
    return substitute_half(seed, mirror_q_of_Q(g, trunc_u // 2 + 1))


def identity_mirror_map(trunc):
    """q(Q) = Q, for runs that switch the mirror map off"""
    return QSeries.monomial(1, trunc)
