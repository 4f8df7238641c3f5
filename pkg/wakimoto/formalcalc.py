"""Formal delta calculus in several commuting variables.

Variables come in pairs z_i, w_i (i = 0..size-1). `LaurentPoly` is a finite
Laurent polynomial in both sets, `DeltaExpr` a finite sum
Σ_j c_j(w) ∂^{(j)} δ(z/w) kept in normal form (w-only coefficients), and
`LambdaPoly` the image of a `DeltaExpr` under the Fourier transform F^λ.

δ is never expanded; every operation works on the finite normal form.
"""

from fractions import Fraction
from itertools import product
from math import factorial, prod

from sympy import binomial

from .errors import ContractViolation, DimensionError, IndexRangeError
from .lattice import add, sub, zero


def _accumulate(terms, key, value):
    total = terms.get(key, 0) + value
    if total:
        terms[key] = total
    else:
        terms.pop(key, None)


def _check_same_size(a, b):
    if a.size != b.size:
        raise DimensionError(f"variable counts differ: {a.size} and {b.size}")


def _falling_box(order):
    # every k with 0 <= k <= order componentwise
    return product(*(range(j + 1) for j in order))


def _divided(order):
    return prod(factorial(j) for j in order)


# Sparse Laurent polynomial in z_0..z_{size-1}, w_0..w_{size-1}.
#
# Keys are (z-exponent, w-exponent) pairs of tuples, values nonzero Fractions.
class LaurentPoly:
    __slots__ = ("size", "terms")

    def __init__(self, size, terms=None):
        self.size = size
        self.terms = {}
        for (zexp, wexp), coeff in (terms or {}).items():
            if len(zexp) != size or len(wexp) != size:
                raise DimensionError(f"exponent length does not match {size} variables")
            _accumulate(self.terms, (tuple(zexp), tuple(wexp)), Fraction(coeff))

    @classmethod
    def constant(cls, size, value=1):
        return cls(size, {(zero(size), zero(size)): value})

    @classmethod
    def monomial(cls, size, zexp=None, wexp=None, coeff=1):
        return cls(size, {(tuple(zexp or zero(size)), tuple(wexp or zero(size))): coeff})

    @classmethod
    def z(cls, size, i, power=1):
        return cls.monomial(size, zexp=tuple(power if k == i else 0 for k in range(size)))

    @classmethod
    def w(cls, size, i, power=1):
        return cls.monomial(size, wexp=tuple(power if k == i else 0 for k in range(size)))

    # (z - w)^k as a product over coordinates
    @classmethod
    def z_minus_w(cls, size, order):
        result = cls.constant(size)
        for i, power in enumerate(order):
            factor = cls.z(size, i) - cls.w(size, i)
            for _ in range(power):
                result = result * factor
        return result

    def is_zero(self):
        return not self.terms

    def is_w_only(self):
        return all(not any(zexp) for zexp, _ in self.terms)

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.size == other.size and self.terms == other.terms

    def __add__(self, other):
        _check_same_size(self, other)
        result = LaurentPoly(self.size, self.terms)
        for key, coeff in other.terms.items():
            _accumulate(result.terms, key, coeff)
        return result

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            return self.scale(other)
        _check_same_size(self, other)
        result = LaurentPoly(self.size)
        for (za, wa), ca in self.terms.items():
            for (zb, wb), cb in other.terms.items():
                _accumulate(result.terms, (add(za, zb), add(wa, wb)), ca * cb)
        return result

    __rmul__ = __mul__

    def scale(self, factor):
        factor = Fraction(factor)
        if not factor:
            return LaurentPoly(self.size)
        return LaurentPoly(self.size, {key: c * factor for key, c in self.terms.items()})

    # z_p ∂/∂z_p
    def euler(self, p):
        if not 0 <= p < self.size:
            raise IndexRangeError(f"variable index {p} out of range")
        return LaurentPoly(
            self.size,
            {(zexp, wexp): c * zexp[p] for (zexp, wexp), c in self.terms.items()},
        )

    def coefficient(self, zexp, wexp=None):
        return self.terms.get((tuple(zexp), tuple(wexp or zero(self.size))), Fraction(0))

    # Substitute w = 1.
    def at_unit(self):
        result = LaurentPoly(self.size)
        for (zexp, _), c in self.terms.items():
            _accumulate(result.terms, (zexp, zero(self.size)), c)
        return result

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (zexp, wexp), c in sorted(self.terms.items()):
            parts.append(f"{c}*z^{zexp}*w^{wexp}")
        return " + ".join(parts)


# Σ_j c_j(w) ∂^{(j)} δ(z/w) with w-only coefficients.
#
# `live` marks the coordinates that still carry a δ(z_i/w_i) factor; a
# residue in z_i consumes the factor and clears the flag.
class DeltaExpr:
    __slots__ = ("size", "parts", "live")

    def __init__(self, size, parts=None, live=None):
        self.size = size
        self.live = tuple(live) if live is not None else (True,) * size
        self.parts = {}
        for order, coeff in (parts or {}).items():
            order = tuple(order)
            if len(order) != size:
                raise DimensionError(f"derivative order {order} does not match {size} variables")
            if any(j < 0 for j in order):
                raise ContractViolation(f"derivative order {order} has a negative entry")
            if not coeff.is_w_only():
                raise ContractViolation("δ coefficients must be w-only; use multiply_into_delta")
            self._accumulate(order, coeff)

    def _accumulate(self, order, coeff):
        current = self.parts.get(order)
        total = coeff if current is None else current + coeff
        if total.is_zero():
            self.parts.pop(order, None)
        else:
            self.parts[order] = total

    # coeff(w) ∂^{(order)} δ(z/w).
    @classmethod
    def derivative(cls, size, order, coeff=None):
        return cls(size, {tuple(order): coeff if coeff is not None else LaurentPoly.constant(size)})

    @classmethod
    def delta(cls, size):
        return cls.derivative(size, zero(size))

    def is_zero(self):
        return not self.parts

    def max_order(self):
        if not self.parts:
            return zero(self.size)
        return tuple(max(order[i] for order in self.parts) for i in range(self.size))

    def __eq__(self, other):
        if not isinstance(other, DeltaExpr):
            return NotImplemented
        return self.size == other.size and self.live == other.live and self.parts == other.parts

    def __add__(self, other):
        _check_same_size(self, other)
        if self.live != other.live:
            raise ContractViolation("cannot add δ expressions with different live variables")
        result = DeltaExpr(self.size, self.parts, self.live)
        for order, coeff in other.parts.items():
            result._accumulate(order, coeff)
        return result

    def scale(self, factor):
        return DeltaExpr(self.size, {j: c.scale(factor) for j, c in self.parts.items()}, self.live)

    # Substitute w = 1, turning δ(z/w) into δ(z).
    def at_unit(self):
        return DeltaExpr(self.size, {j: c.at_unit() for j, c in self.parts.items()}, self.live)

    def __repr__(self):
        if not self.parts:
            return "0"
        return " + ".join(f"({c})*d{j}" for j, c in sorted(self.parts.items()))


# Σ_k c_k(w) λ^k with w-only coefficients.
class LambdaPoly:
    __slots__ = ("size", "terms")

    def __init__(self, size, terms=None):
        self.size = size
        self.terms = {}
        for exp, coeff in (terms or {}).items():
            self._accumulate(tuple(exp), coeff)

    def _accumulate(self, exp, coeff):
        current = self.terms.get(exp)
        total = coeff if current is None else current + coeff
        if total.is_zero():
            self.terms.pop(exp, None)
        else:
            self.terms[exp] = total

    # λ^{(j)} = λ^j / j!
    @classmethod
    def divided_power(cls, size, order):
        return cls(size, {tuple(order): LaurentPoly.constant(size, Fraction(1, _divided(order)))})

    def __eq__(self, other):
        if not isinstance(other, LambdaPoly):
            return NotImplemented
        return self.size == other.size and self.terms == other.terms

    def __add__(self, other):
        result = LambdaPoly(self.size, self.terms)
        for exp, coeff in other.terms.items():
            result._accumulate(exp, coeff)
        return result

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*lambda^{k}" for k, c in sorted(self.terms.items()))


# Normal form of f(z, w) · d.
#
# Per coordinate, z^a ∂^{(j)} δ(z/w) = Σ_{k<=j} C(a, k) w^{a-k} ∂^{(j-k)} δ(z/w),
# which is f(z,w)δ = f(w,w)δ together with (z-w)∂^{(j+1)}δ = ∂^{(j)}δ.
def multiply_into_delta(f, d):
    _check_same_size(f, d)
    size = f.size
    result = DeltaExpr(size, live=d.live)
    for (zexp, wexp), c in f.terms.items():
        for i, exponent in enumerate(zexp):
            if exponent and not d.live[i]:
                raise ContractViolation(f"z_{i} has already been integrated out")
        for order, coeff in d.parts.items():
            for k in _falling_box(order):
                weight = c
                for a, ki in zip(zexp, k):
                    if ki:
                        weight *= Fraction(int(binomial(a, ki)))
                if not weight:
                    continue
                shift = LaurentPoly.monomial(size, wexp=add(wexp, sub(zexp, k)), coeff=weight)
                result._accumulate(sub(order, k), coeff * shift)
    return result


# Res_{z_i}.
#
# On a `LaurentPoly` this is the coefficient of z_i^{-1} with the other
# variables kept. On a `DeltaExpr` the δ(z_i/w_i) factor is integrated out:
# Res_z ∂^{(j)} δ(z/w) = ∂^{(j)} w, i.e. w, 1, 0 for j = 0, 1, >= 2. With
# `normalized=True` the atom is read as ∂^{(j)} δ(z - w) = ∂^{(j)} w^{-1} δ(z/w),
# whose residue is 1 for j = 0 and 0 otherwise. When no δ factor remains the
# result is returned as a `LaurentPoly`.
def residue(obj, i, normalized=False):
    if not 0 <= i < obj.size:
        raise IndexRangeError(f"variable index {i} out of range for {obj.size} variables")
    size = obj.size
    if isinstance(obj, LaurentPoly):
        terms = {}
        for (zexp, wexp), c in obj.terms.items():
            if zexp[i] == -1:
                kept = tuple(0 if k == i else e for k, e in enumerate(zexp))
                _accumulate(terms, (kept, wexp), c)
        return LaurentPoly(size, terms)

    if not obj.live[i]:
        raise ContractViolation(f"z_{i} has already been integrated out")
    live = tuple(False if k == i else flag for k, flag in enumerate(obj.live))
    result = DeltaExpr(size, live=live)
    for order, coeff in obj.parts.items():
        j = order[i]
        if normalized:
            if j:
                continue
            factor = coeff
        elif j == 0:
            factor = coeff * LaurentPoly.w(size, i)
        elif j == 1:
            factor = coeff
        else:
            continue
        result._accumulate(tuple(0 if k == i else e for k, e in enumerate(order)), factor)
    if any(live):
        return result
    return result.parts.get(zero(size), LaurentPoly(size))


# F^λ: ∂^{(j)} δ(z/w) ↦ λ^{(j)}, extended linearly over w-coefficients.
def fourier_lambda(d):
    if not all(d.live):
        raise ContractViolation("the Fourier transform needs every δ factor present")
    result = LambdaPoly(d.size)
    for order, coeff in d.parts.items():
        result._accumulate(order, coeff.scale(Fraction(1, _divided(order))))
    return result


# Res_{z_0}…Res_{z_N} e^{Σ λ_i (z_i - w_i)} d, computed term by term.
#
# Only (z-w)^k with k <= max order survive, so the exponential series is
# finite here. Residues use the normalized atom.
def fourier_by_residue(d):
    if not all(d.live):
        raise ContractViolation("the Fourier transform needs every δ factor present")
    size = d.size
    result = LambdaPoly(size)
    for k in _falling_box(d.max_order()):
        reduced = multiply_into_delta(LaurentPoly.z_minus_w(size, k), d)
        for i in range(size):
            reduced = residue(reduced, i, normalized=True)
        if not reduced.is_zero():
            result._accumulate(k, reduced.scale(Fraction(1, _divided(k))))
    return result
