#!/usr/bin/env python3
"""
Exact Series Kernel
Truncated formal power series with exact rational coefficients

Provides:
- WJet: polynomials in the auxiliary variable w truncated above a fixed degree
- QSeries: truncated series in q (coefficients in Q or in the w-jet ring)
- HalfSeries: truncated series in u = q^(1/2), indexed by u-exponent
- JetSeries: QSeries whose coefficients are w-jets
- exp / log / sqrt / composition / functional inversion / half-integer substitution

Every series records the order it is valid to (``trunc``): the series is known
modulo var^(trunc+1). Binary operations keep the smaller of the two orders.
"""

import logging
import numbers
import operator
from fractions import Fraction

logger = logging.getLogger(__name__)


def _to_fraction(value):
    """Convert an exact rational scalar to Fraction, rejecting floats"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, numbers.Integral):
        return Fraction(int(value))
    if isinstance(value, numbers.Rational):
        return Fraction(int(value.numerator), int(value.denominator))
    raise TypeError(f"exact rational coefficient required, got {type(value).__name__}")


def _is_scalar(value):
    return isinstance(value, numbers.Rational)


class WJet:
    """
    Polynomial in w with rational coefficients, truncated above degree ``order``
    """

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs, order):
        if order < 0:
            raise ValueError("jet order must be non-negative")
        values = [_to_fraction(c) for c in list(coeffs)[:order + 1]]
        values.extend([Fraction(0)] * (order + 1 - len(values)))
        self.coeffs = tuple(values)
        self.order = order

    @classmethod
    def constant(cls, value, order):
        return cls([value], order)

    @classmethod
    def linear(cls, c0, c1, order):
        """The jet of c0 + c1*w"""
        return cls([c0, c1], order)

    def _lift(self, other):
        if isinstance(other, WJet):
            return other
        if _is_scalar(other):
            return WJet.constant(other, self.order)
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        order = min(self.order, other.order)
        return WJet([self.coeffs[j] + other.coeffs[j] for j in range(order + 1)], order)

    __radd__ = __add__

    def __neg__(self):
        return WJet([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if _is_scalar(other):
            factor = _to_fraction(other)
            return WJet([c * factor for c in self.coeffs], self.order)
        if not isinstance(other, WJet):
            return NotImplemented
        order = min(self.order, other.order)
        product = [Fraction(0)] * (order + 1)
        for j, a in enumerate(self.coeffs[:order + 1]):
            if not a:
                continue
            for k, b in enumerate(other.coeffs[:order + 1 - j]):
                product[j + k] += a * b
        return WJet(product, order)

    __rmul__ = __mul__

    def inverse(self):
        """Multiplicative inverse; requires a nonzero constant term"""
        c0 = self.coeffs[0]
        if c0 == 0:
            raise ValueError("non-unit divisor: w-jet has zero constant term")
        b0 = 1 / c0
        inv = [b0]
        for n in range(1, self.order + 1):
            acc = sum((self.coeffs[k] * inv[n - k] for k in range(1, n + 1)), Fraction(0))
            inv.append(-b0 * acc)
        return WJet(inv, self.order)

    def __truediv__(self, other):
        if _is_scalar(other):
            if other == 0:
                raise ValueError("non-unit divisor: division of a w-jet by zero")
            return self * (1 / _to_fraction(other))
        if not isinstance(other, WJet):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent):
        if not isinstance(exponent, int) or exponent < 0:
            return NotImplemented
        result = WJet.constant(1, self.order)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def at_zero(self):
        return self.coeffs[0]

    def coefficient(self, j):
        return self.coeffs[j] if j <= self.order else Fraction(0)

    def truncate(self, order):
        if order > self.order:
            raise ValueError(f"cannot raise jet order {self.order} to {order}")
        return WJet(self.coeffs[:order + 1], order)

    def divide_by_w(self):
        """Exact division by w; the constant term must vanish"""
        if self.coeffs[0] != 0:
            raise ValueError("w-jet is not divisible by w")
        if self.order == 0:
            raise ValueError("cannot divide a jet of order 0 by w")
        return WJet(self.coeffs[1:], self.order - 1)

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if _is_scalar(other):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        if not isinstance(other, WJet):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __repr__(self):
        terms = []
        for j, c in enumerate(self.coeffs):
            if c == 0:
                continue
            terms.append(str(c) if j == 0 else f"{c}*w" if j == 1 else f"{c}*w^{j}")
        return f"({' + '.join(terms) or '0'} + O(w^{self.order + 1}))"


def _normalize_coefficient(value):
    if isinstance(value, WJet):
        return value
    return _to_fraction(value)


def _coefficient_inverse(value):
    if isinstance(value, WJet):
        return value.inverse()
    if value == 0:
        raise ValueError("non-unit divisor: constant term is zero")
    return 1 / value


class TruncatedSeries:
    """
    Series in one variable known modulo var^(trunc+1)

    Subclasses fix the variable name and how q d/dq acts on a monomial.
    Coefficients are Fractions or WJets; all operations are exact.
    """

    __slots__ = ("coeffs", "trunc")

    variable = "q"
    # q d/dq multiplies var^k by k * _degree_weight
    _degree_weight = Fraction(1)

    def __init__(self, coeffs, trunc=None):
        values = [_normalize_coefficient(c) for c in coeffs]
        if not values:
            values = [Fraction(0)]
        if trunc is None:
            trunc = len(values) - 1
        if trunc < 0:
            raise ValueError("truncation order must be non-negative")
        zero = values[0] * 0
        values = values[:trunc + 1]
        values.extend([zero] * (trunc + 1 - len(values)))
        self.coeffs = tuple(values)
        self.trunc = trunc

    # Construction helpers

    @classmethod
    def constant(cls, value, trunc):
        return cls([value], trunc)

    @classmethod
    def zero(cls, trunc):
        return cls([0], trunc)

    @classmethod
    def one(cls, trunc):
        return cls([1], trunc)

    @classmethod
    def monomial(cls, power, trunc, coeff=1):
        coeffs = [0] * (trunc + 1)
        if power <= trunc:
            coeffs[power] = coeff
        return cls(coeffs, trunc)

    def _like(self, coeffs, trunc):
        return type(self)(coeffs, trunc)

    def _coerce(self, other):
        if isinstance(other, type(self)):
            return other
        if isinstance(other, TruncatedSeries):
            return None
        if _is_scalar(other) or isinstance(other, WJet):
            return type(self).constant(other, self.trunc)
        return None

    # Container protocol

    def __getitem__(self, k):
        if k < 0 or k > self.trunc:
            raise IndexError(f"coefficient {k} outside valid order {self.trunc}")
        return self.coeffs[k]

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    # Ring operations

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        trunc = min(self.trunc, other.trunc)
        return self._like([self.coeffs[k] + other.coeffs[k] for k in range(trunc + 1)], trunc)

    __radd__ = __add__

    def __neg__(self):
        return self._like([-c for c in self.coeffs], self.trunc)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if _is_scalar(other) or isinstance(other, WJet):
            return self._like([c * other for c in self.coeffs], self.trunc)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        trunc = min(self.trunc, other.trunc)
        a, b = self.coeffs, other.coeffs
        product = []
        for n in range(trunc + 1):
            acc = a[0] * b[n]
            for k in range(1, n + 1):
                if a[k]:
                    acc = acc + a[k] * b[n - k]
            product.append(acc)
        return self._like(product, trunc)

    __rmul__ = __mul__

    def inverse(self):
        """1/self; the constant term must be a unit of the coefficient ring"""
        b0 = _coefficient_inverse(self.coeffs[0])
        inv = [b0]
        for n in range(1, self.trunc + 1):
            acc = self.coeffs[1] * inv[n - 1]
            for k in range(2, n + 1):
                if self.coeffs[k]:
                    acc = acc + self.coeffs[k] * inv[n - k]
            inv.append(-(b0 * acc))
        return self._like(inv, self.trunc)

    def __truediv__(self, other):
        if _is_scalar(other):
            return self * _coefficient_inverse(_to_fraction(other))
        if isinstance(other, WJet):
            return self * other.inverse()
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent):
        if not isinstance(exponent, int) or exponent < 0:
            return NotImplemented
        result = type(self).one(self.trunc) if not isinstance(self.coeffs[0], WJet) \
            else self._like([self.coeffs[0] * 0 + 1], self.trunc)
        for _ in range(exponent):
            result = result * self
        return result

    # Calculus

    def q_log_derivative(self):
        """q d/dq, acting on var^k as multiplication by k (k/2 for u = q^(1/2))"""
        weight = self._degree_weight
        return self._like([c * (k * weight) for k, c in enumerate(self.coeffs)], self.trunc)

    def derivative(self):
        """d/dvar; loses one order of validity"""
        if self.trunc == 0:
            return self._like([self.coeffs[0] * 0], 0)
        return self._like([c * k for k, c in enumerate(self.coeffs) if k > 0], self.trunc - 1)

    def truncate(self, trunc):
        if trunc > self.trunc:
            raise ValueError(f"cannot extend a series valid to order {self.trunc} to order {trunc}")
        return self._like(self.coeffs[:trunc + 1], trunc)

    def exp(self):
        """exp(self) by e_n = (1/n) sum_k k s_k e_(n-k)"""
        if self.coeffs[0] != 0:
            raise ValueError("constant-term mismatch: exp needs a zero constant term")
        s = self.coeffs
        e = [s[0] * 0 + 1]
        for n in range(1, self.trunc + 1):
            acc = s[1] * e[n - 1]
            for k in range(2, n + 1):
                if s[k]:
                    acc = acc + s[k] * k * e[n - k]
            e.append(acc * Fraction(1, n))
        return self._like(e, self.trunc)

    def log(self):
        """log(self) by l_n = s_n - (1/n) sum_(k<n) k l_k s_(n-k)"""
        if self.coeffs[0] != 1:
            raise ValueError("constant-term mismatch: log needs constant term 1")
        s = self.coeffs
        logs = [s[0] * 0]
        for n in range(1, self.trunc + 1):
            acc = s[0] * 0
            for k in range(1, n):
                if logs[k]:
                    acc = acc + logs[k] * k * s[n - k]
            logs.append(s[n] - acc * Fraction(1, n))
        return self._like(logs, self.trunc)

    def sqrt(self):
        """Square root with constant term 1"""
        if self.coeffs[0] != 1:
            raise ValueError("constant-term mismatch: sqrt needs constant term 1")
        s = self.coeffs
        root = [s[0]]
        for n in range(1, self.trunc + 1):
            acc = s[n]
            for k in range(1, n):
                acc = acc - root[k] * root[n - k]
            root.append(acc * Fraction(1, 2))
        return self._like(root, self.trunc)

    def compose(self, inner):
        """self(inner(var)) for an inner series with zero constant term"""
        if not isinstance(inner, type(self)):
            raise TypeError("composition needs two series in the same variable")
        if inner.coeffs[0] != 0:
            raise ValueError("constant-term mismatch: inner series must have zero constant term")
        trunc = min(self.trunc, inner.trunc)
        inner = inner.truncate(trunc)
        result = type(self).constant(self.coeffs[trunc], trunc)
        for k in range(trunc - 1, -1, -1):
            result = result * inner + self.coeffs[k]
        return result

    # Comparison and display

    def is_zero(self):
        return not any(self.coeffs)

    def first_difference(self, other):
        """First exponent below the common order where two series differ, or None"""
        trunc = min(self.trunc, other.trunc)
        for k in range(trunc + 1):
            if self.coeffs[k] != other.coeffs[k]:
                return k
        return None

    def agrees_with(self, other):
        return self.first_difference(other) is None

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries) or type(other) is not type(self):
            return NotImplemented
        return self.trunc == other.trunc and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((type(self).__name__, self.trunc, self.coeffs))

    def format_coefficients(self):
        return ", ".join(str(c) for c in self.coeffs)

    def __repr__(self):
        return f"{type(self).__name__}([{self.format_coefficients()}] + O({self.variable}^{self.trunc + 1}))"


class QSeries(TruncatedSeries):
    """Truncated power series in q"""

    __slots__ = ()
    variable = "q"


class HalfSeries(TruncatedSeries):
    """
    Truncated power series in u = q^(1/2), indexed by u-exponent

    q d/dq acts on u^d as multiplication by d/2. A QSeries operand is embedded
    through q^j = u^(2j).
    """

    __slots__ = ()
    variable = "u"
    _degree_weight = Fraction(1, 2)

    @classmethod
    def from_q_series(cls, series, offset=0):
        """
        Embed a q-series as u^offset * series(u^2)

        A q-series valid to q^T gives a u-series valid to u^(offset + 2T + 1).
        """
        trunc = offset + 2 * series.trunc + 1
        coeffs = [0] * (trunc + 1)
        for j, c in enumerate(series.coeffs):
            coeffs[offset + 2 * j] = c
        return cls(coeffs, trunc)

    def _coerce(self, other):
        if isinstance(other, QSeries):
            return HalfSeries.from_q_series(other)
        return super()._coerce(other)

    def is_odd_supported(self):
        return all(c == 0 for k, c in enumerate(self.coeffs) if k % 2 == 0)


class JetSeries(TruncatedSeries):
    """
    Series in q whose coefficients are w-jets

    Houses F(w, q) and the images of the M operator. Evaluation at w = 0 is a
    ring homomorphism onto plain QSeries.
    """

    __slots__ = ()
    variable = "q"

    def __init__(self, coeffs, trunc=None):
        super().__init__(coeffs, trunc)
        if not all(isinstance(c, WJet) for c in self.coeffs):
            raise TypeError("JetSeries coefficients must be WJet instances")

    @property
    def jet_order(self):
        return min(c.order for c in self.coeffs)

    @classmethod
    def from_q_series(cls, series, jet_order):
        return cls([WJet.constant(c, jet_order) for c in series.coeffs], series.trunc)

    def _coerce(self, other):
        if isinstance(other, JetSeries):
            return other
        if isinstance(other, QSeries):
            return JetSeries.from_q_series(other, self.jet_order)
        if isinstance(other, TruncatedSeries):
            return None
        if _is_scalar(other):
            return JetSeries([WJet.constant(other, self.jet_order)], self.trunc)
        if isinstance(other, WJet):
            return JetSeries([other], self.trunc)
        return None

    @classmethod
    def constant(cls, value, trunc):
        if not isinstance(value, WJet):
            raise TypeError("JetSeries constants must be w-jets")
        return cls([value], trunc)

    @classmethod
    def one(cls, trunc, jet_order=0):
        return cls([WJet.constant(1, jet_order)], trunc)

    def at_w0(self):
        return QSeries([c.at_zero() for c in self.coeffs], self.trunc)

    def w_coefficient(self, j):
        return QSeries([c.coefficient(j) for c in self.coeffs], self.trunc)

    def truncate_jets(self, order):
        return JetSeries([c.truncate(order) for c in self.coeffs], self.trunc)

    def divide_by_w(self):
        return JetSeries([c.divide_by_w() for c in self.coeffs], self.trunc)


# Module-level operations

_ARITH = {
    "add": operator.add,
    "sub": operator.sub,
    "mul": operator.mul,
    "div": operator.truediv,
}


def series_arith(lhs, rhs, op):
    """
    Add, subtract, multiply or divide two series of the same kind

    Parameters:
    lhs, rhs: QSeries, HalfSeries or JetSeries
    op: one of 'add', 'sub', 'mul', 'div'

    Returns:
    Series truncated at the smaller of the two orders
    """
    if op not in _ARITH:
        raise ValueError(f"unknown series operation '{op}'")
    return _ARITH[op](lhs, rhs)


def series_exp(series):
    return series.exp()


def series_log(series):
    return series.log()


def series_sqrt(series):
    return series.sqrt()


def series_compose(outer, inner):
    return outer.compose(inner)


def q_log_derivative(series):
    return series.q_log_derivative()


def invert_unit_relation(unit):
    """
    Solve Q = q * U(q) for q as a series in Q

    Newton iteration on phi(q) = q U(q) - Q; each pass doubles the number of
    correct coefficients. The result is valid to the same order as U.

    Parameters:
    unit: QSeries U with constant term 1

    Returns:
    QSeries q(Q) = Q + O(Q^2)
    """
    if unit.coeffs[0] != 1:
        raise ValueError("constant-term mismatch: inversion needs U(0) = 1")
    trunc = unit.trunc
    if trunc == 0:
        return QSeries([0], 0)

    phi_full = QSeries((0,) + unit.coeffs, trunc + 1)
    dphi = phi_full.derivative()
    phi = phi_full.truncate(trunc)
    identity = QSeries.monomial(1, trunc)

    estimate = identity
    max_passes = trunc.bit_length() + 2
    for n_pass in range(max_passes + 1):
        residual = phi.compose(estimate) - identity
        if residual.is_zero():
            logger.debug("mirror inversion converged after %d Newton passes (order %d)", n_pass, trunc)
            return estimate
        estimate = estimate - residual / dphi.compose(estimate)
    raise RuntimeError(f"functional inversion did not converge to order {trunc}")


def substitute_half(series_in_u, q_of_Q):
    """
    Rewrite sum_d c_d q^(d/2) as a series in U = Q^(1/2)

    Uses q^(1/2) = Q^(1/2) * sqrt(q(Q)/Q), so an odd-supported input stays
    odd-supported. Valid to u-order min(input order, 2 * q_of_Q.trunc).

    Parameters:
    series_in_u: odd-supported HalfSeries in u = q^(1/2)
    q_of_Q: QSeries q(Q) = Q + O(Q^2)

    Returns:
    HalfSeries in U
    """
    if q_of_Q.trunc < 1 or q_of_Q.coeffs[0] != 0 or q_of_Q.coeffs[1] != 1:
        raise ValueError("substitution needs q(Q) = Q + O(Q^2)")
    if not series_in_u.is_odd_supported():
        raise ValueError("substitution needs an odd-supported series in q^(1/2)")

    ratio = QSeries(q_of_Q.coeffs[1:], q_of_Q.trunc - 1)
    root = ratio.sqrt()
    root_squared = root * root
    trunc = min(series_in_u.trunc, 2 * q_of_Q.trunc)

    coeffs = [Fraction(0)] * (trunc + 1)
    power = root
    for d in range(1, trunc + 1, 2):
        c = series_in_u.coeffs[d]
        if c:
            for j, r in enumerate(power.coeffs):
                if d + 2 * j > trunc:
                    break
                coeffs[d + 2 * j] += c * r
        power = power * root_squared
    return HalfSeries(coeffs, trunc)
