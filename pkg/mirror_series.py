#!/usr/bin/env python3
"""
Mirror Series for Calabi-Yau Complete Intersections
Explicit generating series attached to a multi-degree a = (a_1, ..., a_l)

System Configuration:
- X_a in P^(n-1), n = sum(a_k), every a_k odd
- odd dimension: n - l positive and even, p_max = (n - l - 2)/2
- F(w, q): hypergeometric series, stored as w-jets of order p_max
- M operator tower I_0, ..., I_p
- mirror map Q = q exp(J(q)) and its inverse q(Q)
- disk seed tau_a(q) in u = q^(1/2)
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from series_core import (
    HalfSeries,
    JetSeries,
    QSeries,
    WJet,
    invert_unit_relation,
    series_exp,
)

logger = logging.getLogger(__name__)

# extra orders every pipeline computes beyond the reported one
GUARD_ORDERS = 2


class GeometryError(ValueError):
    """A multi-degree violating the standing hypotheses"""


@dataclass(frozen=True)
class Geometry:
    """
    Multi-degree of an odd-dimensional Calabi-Yau complete intersection

    Parameters:
    degrees: tuple of positive odd integers a_1, ..., a_l
    """

    degrees: tuple

    def __post_init__(self):
        degrees = tuple(int(a) for a in self.degrees)
        object.__setattr__(self, "degrees", degrees)
        if not degrees:
            raise GeometryError("at least one degree is required")
        if any(a < 1 for a in degrees):
            raise GeometryError("degrees must be positive")
        if any(a % 2 == 0 for a in degrees):
            raise GeometryError("degrees must be odd")
        gap = self.n - self.l
        if gap <= 0 or gap % 2:
            raise GeometryError("n − l must be positive and even")

    @property
    def n(self):
        return sum(self.degrees)

    @property
    def l(self):
        return len(self.degrees)

    @property
    def m(self):
        return self.n // 2

    @property
    def p_max(self):
        return (self.n - self.l - 2) // 2

    @property
    def label(self):
        return "(" + ",".join(str(a) for a in self.degrees) + ")"

    def summary(self):
        return {
            'degrees': list(self.degrees),
            'n': self.n,
            'l': self.l,
            'p_max': self.p_max,
        }


@lru_cache(maxsize=None)
def factorial(k):
    return math.factorial(k)


@lru_cache(maxsize=None)
def double_factorial(k):
    """
    Odd double factorial k!! = k (k-2) ... 3 * 1

    Parameters:
    k (int): odd positive integer

    Returns:
    int: exact product
    """
    if k < 1 or k % 2 == 0:
        raise ValueError(f"double factorial defined here for odd positive integers, got {k}")
    return math.prod(range(1, k + 1, 2))


@lru_cache(maxsize=None)
def hypergeom_F(g, jet_order, trunc):
    """
    F(w, q) = sum_d q^d prod_k prod_(r<=a_k d) (a_k w + r) / prod_(r<=d) (w + r)^n

    The coefficients are rational in w and regular at w = 0; each one is
    stored as its Taylor jet to degree ``jet_order``.

    Parameters:
    g (Geometry): multi-degree
    jet_order (int): w-degree kept in every coefficient
    trunc (int): q-order

    Returns:
    JetSeries: F with constant term 1
    """
    if jet_order < 0:
        raise ValueError("jet order must be non-negative")
    coeffs = [WJet.constant(1, jet_order)]
    numerator = WJet.constant(1, jet_order)
    denominator = WJet.constant(1, jet_order)
    for d in range(1, trunc + 1):
        for a in g.degrees:
            for r in range(a * (d - 1) + 1, a * d + 1):
                numerator = numerator * WJet.linear(r, a, jet_order)
        denominator = denominator * WJet.linear(d, 1, jet_order) ** g.n
        coeffs.append(numerator / denominator)
    return JetSeries(coeffs, trunc)


def apply_M(H):
    """
    M H = (1 + (q/w) d/dq) (H(w, q) / H(0, q))

    Parameters:
    H (JetSeries): constant term 1 at (w, q) = (0, 0), jet order >= 1

    Returns:
    JetSeries: jet order one less than H
    """
    if H.coeffs[0].at_zero() != 1:
        raise ValueError("constant-term mismatch: M needs H(0, 0) = 1")
    order = H.jet_order
    if order < 1:
        raise ValueError("M needs a jet of order at least 1")

    normalized = H / H.at_w0()
    derivative = normalized.q_log_derivative()
    for d, c in enumerate(derivative.coeffs):
        if c.at_zero() != 0:
            raise ValueError(f"M-operator divisibility violated at q^{d}")
    return normalized.truncate_jets(order - 1) + derivative.divide_by_w()


@lru_cache(maxsize=None)
def I_tower(g, trunc, jet_order=None):
    """
    I_0, ..., I_(jet_order) from a single jet of F

    Returns:
    tuple of QSeries, each in 1 + q Q[[q]]
    """
    if jet_order is None:
        jet_order = g.p_max
    H = hypergeom_F(g, jet_order, trunc)
    tower = [H.at_w0()]
    for _ in range(jet_order):
        H = apply_M(H)
        tower.append(H.at_w0())
    logger.debug("built I-tower for %s: %d series to q^%d", g.label, len(tower), trunc)
    return tuple(tower)


def I_series(g, p, trunc):
    """I_p(q) = M^p F(0, q)"""
    if p < 0:
        raise ValueError(f"I_p needs p >= 0, got {p}")
    return I_tower(g, trunc, max(p, g.p_max))[p]


def J_series(g, trunc):
    """
    Mirror-map exponent J(q) in q Q[[q]]

    J = (1/I_0) sum_(d>=1) q^d prod_k (a_k d)!/(d!)^n * sum_k sum_(r=d+1..a_k d) a_k/r
    """
    coeffs = [Fraction(0)]
    for d in range(1, trunc + 1):
        weight = Fraction(math.prod(factorial(a * d) for a in g.degrees), factorial(d) ** g.n)
        harmonic = sum(Fraction(a, r) for a in g.degrees for r in range(d + 1, a * d + 1))
        coeffs.append(weight * harmonic)
    return QSeries(coeffs, trunc) / I_series(g, 0, trunc)


def tau_series(g, trunc_u):
    """
    Disk seed tau_a = 2 sum_(d odd) u^d prod_k (a_k d)!! / (d!!)^n, u = q^(1/2)
    """
    coeffs = [Fraction(0)] * (trunc_u + 1)
    for d in range(1, trunc_u + 1, 2):
        numerator = math.prod(double_factorial(a * d) for a in g.degrees)
        coeffs[d] = Fraction(2 * numerator, double_factorial(d) ** g.n)
    return HalfSeries(coeffs, trunc_u)


def q_of_Q_from_mirror_series(J):
    """Invert Q = q exp(J(q)) for any J in q Q[[q]]"""
    return invert_unit_relation(series_exp(J))


def mirror_q_of_Q(g, trunc):
    """
    Inverse mirror map q(Q), valid to Q^trunc

    Returns:
    QSeries: q(Q) = Q + O(Q^2)
    """
    return q_of_Q_from_mirror_series(J_series(g, trunc))
