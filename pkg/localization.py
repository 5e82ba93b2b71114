#!/usr/bin/env python3
"""
Torus Localization Model
Fixed-point evaluation of the one-point disk graph sum

System Configuration:
- m-torus acting on P^(n-1) with weights (l1, -l1, ..., lm, -lm[, 0])
- fixed points P_1..P_2m, half-edge disks of odd degree gamma
- series Y(x, hbar, q) and the tower D^s Y_0 at x = alpha_i, hbar = 2 alpha_i/gamma
- residue-theorem oracle and exact verification against the closed formula

Weights are numeric rationals; agreement across several weight assignments
stands in for identities in Q(l1, ..., lm).
"""

import logging
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from disk_closed import nested_levels
from mirror_series import I_tower, double_factorial
from series_core import HalfSeries, QSeries

logger = logging.getLogger(__name__)


class WeightCollisionError(ValueError):
    """A vanishing denominator in an edge factor or in Y"""

    def __init__(self, message, collisions=()):
        super().__init__(message)
        self.collisions = list(collisions)


@dataclass(frozen=True)
class WeightAssignment:
    """Torus weights l_1..l_m: nonzero, pairwise distinct in absolute value"""

    lambdas: tuple

    def __post_init__(self):
        lambdas = tuple(Fraction(x) for x in self.lambdas)
        object.__setattr__(self, "lambdas", lambdas)
        if any(x == 0 for x in lambdas):
            raise ValueError("torus weights must be nonzero")
        if len({abs(x) for x in lambdas}) != len(lambdas):
            raise ValueError("torus weights must be pairwise distinct in absolute value")

    @property
    def m(self):
        return len(self.lambdas)

    def conjugate(self):
        return WeightAssignment(tuple(-x for x in self.lambdas))

    def labels(self):
        return [str(x) for x in self.lambdas]


@dataclass(frozen=True)
class AlphaVector:
    alphas: tuple


@dataclass(frozen=True)
class FixedPointTerm:
    i: int
    gamma: int
    hbar: Fraction
    edge: Fraction


@dataclass(frozen=True)
class WeightCollision:
    i: int
    gamma: int
    k: int
    s: int


def conjugate_weights(w):
    return w.conjugate()


def alpha_from_lambda(n, w):
    """
    Restrict the big-torus weights: (l1, -l1, ..., lm, -lm), plus a trailing 0 for odd n
    """
    if n // 2 != w.m:
        raise ValueError(f"size mismatch: n = {n} needs {n // 2} torus weights, got {w.m}")
    alphas = []
    for x in w.lambdas:
        alphas.extend([x, -x])
    if n % 2:
        alphas.append(Fraction(0))
    return AlphaVector(tuple(alphas))


def validate_weights(g, w, trunc_u):
    """
    Scan every denominator the run can meet

    Checks s*alpha_i/gamma - alpha_k != 0 for fixed points i <= 2m, odd gamma and
    odd s up to trunc_u, every k, (k, s) != (i, gamma). The Y denominators
    alpha_i - alpha_k + r*2*alpha_i/gamma are the cases s = gamma + 2r.

    Returns:
    list of WeightCollision (empty when the weights are usable)
    """
    alpha = alpha_from_lambda(g.n, w)
    collisions = []
    for i in range(1, 2 * g.m + 1):
        alpha_i = alpha.alphas[i - 1]
        for gamma in range(1, trunc_u + 1, 2):
            for s in range(1, trunc_u + 1, 2):
                pole = alpha_i * s / gamma
                for k, alpha_k in enumerate(alpha.alphas, 1):
                    if (k, s) != (i, gamma) and pole == alpha_k:
                        collisions.append(WeightCollision(i, gamma, k, s))
    return collisions


def edge_exponent(g, gamma):
    """(n*gamma + l)/2, an integer since n and l have the same parity"""
    total = g.n * gamma + g.l
    assert total % 2 == 0
    return total // 2


def disk_edge_factor(g, i, gamma, alpha, exponent_shift=0):
    """
    Half-edge disk factor D_(1,i,gamma)

    prod_k (a_k gamma)!! / [gamma * prod_((k,s) != (i,gamma)) (s alpha_i/gamma - alpha_k)]
        * (alpha_i/gamma)^((n gamma + l)/2)

    Parameters:
    g (Geometry): multi-degree
    i (int): fixed point index, 1 <= i <= 2m
    gamma (int): odd edge degree
    alpha (AlphaVector): restricted weights
    exponent_shift (int): added to the power of alpha_i/gamma (0 for the true factor)

    Returns:
    Fraction
    """
    if not 1 <= i <= 2 * g.m:
        raise ValueError(f"fixed point index {i} outside 1..{2 * g.m}")
    if gamma < 1 or gamma % 2 == 0:
        raise ValueError(f"edge degree must be odd and positive, got {gamma}")

    ratio = alpha.alphas[i - 1] / gamma
    denominator = Fraction(gamma)
    for k, alpha_k in enumerate(alpha.alphas, 1):
        for s in range(1, gamma + 1, 2):
            if (k, s) == (i, gamma):
                continue
            factor = s * ratio - alpha_k
            if factor == 0:
                raise WeightCollisionError(
                    f"weight collision: s={s}, gamma={gamma}, i={i}, k={k}",
                    [WeightCollision(i, gamma, k, s)],
                )
            denominator *= factor
    numerator = math.prod(double_factorial(a * gamma) for a in g.degrees)
    return numerator * ratio ** (edge_exponent(g, gamma) + exponent_shift) / denominator


def y_series(g, x, hbar, alpha, trunc_q):
    """
    Y(x, hbar, q) = sum_d q^d prod_k prod_(r<=a_k d) (a_k x + r hbar)
                              / prod_(r<=d) prod_k (x - alpha_k + r hbar)
    """
    x, hbar = Fraction(x), Fraction(hbar)
    coeffs = [Fraction(1)]
    numerator = Fraction(1)
    denominator = Fraction(1)
    for d in range(1, trunc_q + 1):
        for a in g.degrees:
            for r in range(a * (d - 1) + 1, a * d + 1):
                numerator *= a * x + r * hbar
        for alpha_k in alpha.alphas:
            factor = x - alpha_k + d * hbar
            if factor == 0:
                raise WeightCollisionError(f"weight collision: x - alpha_k + {d}*hbar vanishes")
            denominator *= factor
        coeffs.append(numerator / denominator)
    return QSeries(coeffs, trunc_q)


def ds_y0_tower(g, s_max, x, hbar, alpha, trunc_q, tower=None):
    """
    D^0 Y_0, ..., D^s_max Y_0 at numeric x, hbar

    D^0 Y_0 = x^l Y / I_0,  D^s Y_0 = (1/I_s) (x + hbar q d/dq) D^(s-1) Y_0
    """
    if tower is None:
        tower = I_tower(g, trunc_q, max(s_max, g.p_max))
    x, hbar = Fraction(x), Fraction(hbar)
    current = y_series(g, x, hbar, alpha, trunc_q) * x ** g.l / tower[0]
    levels = [current]
    for s in range(1, s_max + 1):
        current = (current * x + current.q_log_derivative() * hbar) / tower[s]
        levels.append(current)
    return levels


def ds_y0_series(g, s, x, hbar, alpha, trunc_q):
    if s < 0:
        raise ValueError(f"D^s Y_0 needs s >= 0, got {s}")
    return ds_y0_tower(g, s, x, hbar, alpha, trunc_q)[s]


class LocalizationModel:
    """
    Fixed-point sum for one geometry, one weight assignment and one u-order

    Edge factors and D^s Y_0 series are computed once per (i, gamma) and reused
    by every (p, s) combination.
    """

    def __init__(self, g, weights, trunc_u, edge_factor=disk_edge_factor):
        self.geometry = g
        self.weights = weights
        self.trunc_u = trunc_u
        self.alpha = alpha_from_lambda(g.n, weights)
        self.edge_factor = edge_factor
        self.tower = I_tower(g, trunc_u // 2)
        self._terms = None
        self._levels = {}

    def terms(self):
        """Fixed points i <= 2m and odd edge degrees gamma <= trunc_u"""
        if self._terms is None:
            terms = []
            for i in range(1, 2 * self.geometry.m + 1):
                alpha_i = self.alpha.alphas[i - 1]
                for gamma in range(1, self.trunc_u + 1, 2):
                    terms.append(FixedPointTerm(
                        i=i,
                        gamma=gamma,
                        hbar=2 * alpha_i / gamma,
                        edge=self.edge_factor(self.geometry, i, gamma, self.alpha),
                    ))
            self._terms = terms
        return self._terms

    def _ds_levels(self, term):
        key = (term.i, term.gamma)
        if key not in self._levels:
            trunc_q = (self.trunc_u - term.gamma) // 2
            self._levels[key] = ds_y0_tower(
                self.geometry, self.geometry.p_max, self.alpha.alphas[term.i - 1],
                term.hbar, self.alpha, trunc_q, self.tower,
            )
        return self._levels[key]

    def fixed_point_sum(self, p, s):
        """
        sum_i sum_gamma u^gamma D_(1,i,gamma) alpha_i^(-l) hbar^p D^s Y_0(alpha_i, hbar, q)
        """
        g = self.geometry
        if p < 0 or s < 0 or p + s > g.p_max:
            raise ValueError(f"out of implemented range: p={p}, s={s}, p_max={g.p_max}")
        total = HalfSeries.zero(self.trunc_u)
        for term in self.terms():
            alpha_i = self.alpha.alphas[term.i - 1]
            scale = term.edge * term.hbar ** p / alpha_i ** g.l
            # u^gamma * D^s Y_0(u^2)
            total = total + HalfSeries.from_q_series(self._ds_levels(term)[s], offset=term.gamma) * scale
        return total


def fixed_point_sum(g, p, s, w, trunc_u, edge_factor=disk_edge_factor):
    return LocalizationModel(g, w, trunc_u, edge_factor).fixed_point_sum(p, s)


def _residue_at_zero(g, t, alpha, exponent):
    """
    Res_(w=0) w^exponent * prod_k (a_k t)!! / prod_k prod_(s odd <= t) (s - alpha_k w)
    """
    needed = -1 - exponent
    if needed < 0:
        return Fraction(0)
    expansion = QSeries.one(needed)
    for alpha_k in alpha.alphas:
        for s in range(1, t + 1, 2):
            # 1/(s - alpha_k w) = sum_j alpha_k^j w^j / s^(j+1)
            expansion = expansion * QSeries(
                [alpha_k ** j / Fraction(s) ** (j + 1) for j in range(needed + 1)], needed)
    return math.prod(double_factorial(a * t) for a in g.degrees) * expansion[needed]


def residue_oracle(g, p, trunc_u, alpha):
    """
    2^p sum_(t odd) u^t Res_(w=0) { w^(p_max-1-p) prod (a_k t)!! / prod (s - alpha_k w) }

    Zero for p < p_max; for p = p_max the residue is the value at w = 0 and the
    series is 2^p_max * tau_a/2.
    """
    if p < 0 or p > g.p_max:
        raise ValueError(f"out of implemented range: residue oracle needs 0 <= p <= {g.p_max}, got {p}")
    coeffs = [Fraction(0)] * (trunc_u + 1)
    exponent = g.p_max - 1 - p
    for t in range(1, trunc_u + 1, 2):
        coeffs[t] = 2 ** p * _residue_at_zero(g, t, alpha, exponent)
    return HalfSeries(coeffs, trunc_u)


@dataclass(frozen=True)
class IdentityCheck:
    identity: str
    p: int
    s: int
    sample: int
    passed: bool
    first_difference: object = None
    seconds: float = 0.0


@dataclass
class VerificationReport:
    geometry: object
    trunc_u: int
    weights: list
    checks: list = field(default_factory=list)
    guard_orders: int = 0

    @property
    def work_order(self):
        """u-order every series was computed to"""
        return self.trunc_u + self.guard_orders

    @property
    def passed(self):
        return all(check.passed for check in self.checks)

    @property
    def failures(self):
        return [check for check in self.checks if not check.passed]

    def identities(self):
        return sorted({check.identity for check in self.checks})


def _record(report, identity, p, s, sample, lhs, rhs, started):
    diff = lhs.first_difference(rhs)
    check = IdentityCheck(
        identity=identity, p=p, s=s, sample=sample,
        passed=diff is None, first_difference=diff,
        seconds=time.perf_counter() - started,
    )
    report.checks.append(check)
    if not check.passed:
        logger.info("identity %s failed: p=%d s=%d sample=%d first difference at u^%d",
                    identity, p, s, sample, diff)
    return check


def verify_identities(g, weight_samples, trunc_u, edge_factor=disk_edge_factor, guard_orders=0):
    """
    Exact check of the localization identities against the closed formula

    Identities recorded per weight sample:
    - residue: I_0 * fps(p, 0) = residue_oracle(p), 0 <= p <= p_max
    - vanishing: fps(p, s) = 0 for p + s <= p_max - 1
    - nested: 2 * fps(p_max - s, s) = level s of the nested expression
    - theorem: 2 * fps(0, p_max) = nested_disk_potential_q
    - lambda_independence: fps(p, s) equal to its value for sample 0
    - guard: with guard_orders > 0, 2 * fps(0, p_max) at the guard order agrees
      with the closed formula computed at trunc_u on their shared coefficients

    Every series is computed to trunc_u + guard_orders, so the identities above
    also cover the guard coefficients.

    Parameters:
    g (Geometry): multi-degree
    weight_samples (list): at least two WeightAssignment
    trunc_u (int): reported u-order
    edge_factor (callable): edge factor used by the fixed-point sums
    guard_orders (int): extra u-orders computed beyond trunc_u

    Returns:
    VerificationReport
    """
    if len(weight_samples) < 2:
        raise ValueError("need ≥ 2 weight samples")
    work = trunc_u + guard_orders
    for w in weight_samples:
        collisions = validate_weights(g, w, work)
        if collisions:
            raise WeightCollisionError(
                f"weight collision for weights {w.labels()}: {len(collisions)} vanishing factors",
                collisions,
            )

    report = VerificationReport(geometry=g, trunc_u=trunc_u, weights=list(weight_samples),
                                guard_orders=guard_orders)
    tower = I_tower(g, work // 2)
    levels = nested_levels(g, work)
    reported = nested_levels(g, trunc_u)[-1] if guard_orders else None
    combos = [(p, s) for p in range(g.p_max + 1) for s in range(g.p_max + 1 - p)]
    reference = {}

    for sample, w in enumerate(weight_samples):
        model = LocalizationModel(g, w, work, edge_factor)
        sums = {}
        for p, s in combos:
            started = time.perf_counter()
            sums[(p, s)] = model.fixed_point_sum(p, s)
            if sample == 0:
                reference[(p, s)] = sums[(p, s)]
            else:
                _record(report, "lambda_independence", p, s, sample,
                        sums[(p, s)], reference[(p, s)], started)

        for p in range(g.p_max + 1):
            started = time.perf_counter()
            _record(report, "residue", p, 0, sample,
                    sums[(p, 0)] * tower[0], residue_oracle(g, p, work, model.alpha), started)

        for p, s in combos:
            if p + s <= g.p_max - 1:
                started = time.perf_counter()
                _record(report, "vanishing", p, s, sample,
                        sums[(p, s)], HalfSeries.zero(work), started)

        for s in range(g.p_max + 1):
            started = time.perf_counter()
            _record(report, "nested", g.p_max - s, s, sample,
                    sums[(g.p_max - s, s)] * 2, levels[s], started)

        started = time.perf_counter()
        _record(report, "theorem", 0, g.p_max, sample,
                sums[(0, g.p_max)] * 2, levels[g.p_max], started)

        if guard_orders:
            started = time.perf_counter()
            _record(report, "guard", 0, g.p_max, sample,
                    sums[(0, g.p_max)] * 2, reported, started)

    logger.info("verified %s with %d weight samples: %d checks, %d failures",
                g.label, len(weight_samples), len(report.checks), len(report.failures))
    return report


def odd_primes(limit=200):
    """Odd primes below ``limit``"""
    sieve = np.ones(limit, dtype=bool)
    sieve[:2] = False
    for k in range(2, int(limit ** 0.5) + 1):
        if sieve[k]:
            sieve[k * k::k] = False
    return [int(p) for p in np.flatnonzero(sieve) if p % 2]


def sample_weights(g, trunc_u, count, seed, max_attempts=10000):
    """
    Seeded weight assignments drawn from distinct odd primes in [3, 199]

    Draws that fail validate_weights are rejected and redrawn.

    Returns:
    list of WeightAssignment
    """
    primes = odd_primes(200)
    if g.m > len(primes):
        raise ValueError(f"cannot draw {g.m} distinct odd primes below 200")
    rng = np.random.default_rng(seed)
    samples = []
    attempts = 0
    while len(samples) < count:
        attempts += 1
        if attempts > max_attempts:
            raise WeightCollisionError(f"no collision-free weights after {max_attempts} draws")
        draw = rng.choice(primes, size=g.m, replace=False)
        w = WeightAssignment(tuple(int(x) for x in draw))
        if validate_weights(g, w, trunc_u):
            logger.debug("rejected weights %s", w.labels())
            continue
        samples.append(w)
    return samples
