# The Fock space C[x] ⊗ C[y] as exact sparse polynomials.
#
# Variables are x_{ij}(m) for 1 <= i < j <= n+1 and y_i(k) for 1 <= i <= n with
# k > 0. A vector maps monomials (sorted tuples of (VarKey, exponent) pairs) to
# nonzero Fractions. Vectors are never mutated once built.
#
# Grading: deg x_{ij}(q) = -q, deg y_i(k) = k, so a mode-m operator lowers the
# degree by m.

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

from .errors import ContractViolation, DimensionError, IndexRangeError
from .lattice import OrderScheme, add, box, neg, zero


class VarKey(NamedTuple):
    kind: str
    i: int
    j: int
    mode: tuple

    def __str__(self):
        mode = ",".join(str(c) for c in self.mode)
        if self.kind == "x":
            return f"x[{self.i},{self.j}]({mode})"
        return f"y[{self.i}]({mode})"


def x_var(i, j, m):
    return VarKey("x", i, j, tuple(m))


def y_var(i, k):
    return VarKey("y", i, 0, tuple(k))


def check_key(key, n, scheme):
    if len(key.mode) != scheme.size:
        raise DimensionError(f"{key} has a mode of length {len(key.mode)}, expected {scheme.size}")
    if key.kind == "x":
        if not 1 <= key.i < key.j <= n + 1:
            raise IndexRangeError(f"{key}: need 1 <= i < j <= {n + 1}")
    elif key.kind == "y":
        if not 1 <= key.i <= n:
            raise IndexRangeError(f"{key}: need 1 <= i <= {n}")
        if scheme.sign(key.mode) <= 0:
            raise ContractViolation(f"{key}: y-variables need a positive mode")
    else:
        raise IndexRangeError(f"unknown variable kind {key.kind!r}")
    return key


def key_degree(key):
    return neg(key.mode) if key.kind == "x" else key.mode


def _bump(monomial, key, delta):
    # exponent of `key` changed by `delta`; returns (new monomial, old exponent)
    items = dict(monomial)
    old = items.get(key, 0)
    new = old + delta
    if new:
        items[key] = new
    else:
        items.pop(key, None)
    return tuple(sorted(items.items())), old


class FockVector:
    __slots__ = ("terms", "_support", "_hash")

    def __init__(self, terms=None):
        self.terms = {}
        self._support = None
        self._hash = None
        for monomial, coeff in (terms or {}).items():
            self._accumulate(tuple(sorted(monomial)), Fraction(coeff))

    def _accumulate(self, monomial, coeff):
        total = self.terms.get(monomial, 0) + coeff
        if total:
            self.terms[monomial] = total
        else:
            self.terms.pop(monomial, None)

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def constant(cls, value=1):
        return cls({(): value})

    @classmethod
    def variable(cls, key, power=1, coeff=1):
        return cls({((key, power),): coeff})

    @classmethod
    def from_monomial(cls, factors, coeff=1):
        return cls({tuple(sorted(factors)): coeff})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, FockVector):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __add__(self, other):
        result = FockVector(self.terms)
        for monomial, coeff in other.terms.items():
            result._accumulate(monomial, coeff)
        return result

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        result = FockVector(self.terms)
        for monomial, coeff in other.terms.items():
            result._accumulate(monomial, -coeff)
        return result

    def scale(self, factor):
        factor = Fraction(factor)
        result = FockVector()
        if factor:
            result.terms = {m: c * factor for m, c in self.terms.items()}
        return result

    def __mul__(self, other):
        if not isinstance(other, FockVector):
            return self.scale(other)
        result = FockVector()
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                product = dict(ma)
                for key, exp in mb:
                    product[key] = product.get(key, 0) + exp
                result._accumulate(tuple(sorted(product.items())), ca * cb)
        return result

    __rmul__ = __mul__

    def multiply_var(self, key, coeff=1):
        result = FockVector()
        coeff = Fraction(coeff)
        if not coeff:
            return result
        for monomial, c in self.terms.items():
            bumped, _ = _bump(monomial, key, 1)
            result._accumulate(bumped, c * coeff)
        return result

    def derive(self, key):
        result = FockVector()
        if key not in self.support():
            return result
        for monomial, c in self.terms.items():
            for factor, exp in monomial:
                if factor == key:
                    lowered, _ = _bump(monomial, key, -1)
                    result._accumulate(lowered, c * exp)
                    break
        return result

    # Every variable occurring in some monomial.
    def support(self):
        if self._support is None:
            self._support = frozenset(key for monomial in self.terms for key, _ in monomial)
        return self._support

    def x_modes(self, i, j):
        return sorted(key.mode for key in self.support() if key.kind == "x" and key.i == i and key.j == j)

    def y_modes(self, i):
        return sorted(key.mode for key in self.support() if key.kind == "y" and key.i == i)

    def to_text(self):
        return vector_to_text(self)

    def __repr__(self):
        return f"FockVector({vector_to_text(self)})"


# Σ c_k v_k built in one pass over a single term dict
def combine(items):
    result = FockVector()
    for vector, coeff in items:
        coeff = Fraction(coeff)
        if not coeff:
            continue
        for monomial, c in vector.terms.items():
            result._accumulate(monomial, c * coeff)
    return result


def monomial_to_text(monomial):
    factors = []
    for key, exp in monomial:
        factors.append(str(key) if exp == 1 else f"{key}^{exp}")
    return "*".join(factors) if factors else "1"


# Sorted textual form used for failure witnesses in reports.
def vector_to_text(vector):
    if vector.is_zero():
        return "0"
    parts = []
    for monomial, coeff in sorted(vector.terms.items()):
        parts.append(f"{coeff}*{monomial_to_text(monomial)}")
    return " + ".join(parts)


def monomial_degree(monomial, size):
    degree = zero(size)
    for key, exp in monomial:
        step = key_degree(key)
        degree = add(degree, tuple(exp * c for c in step))
    return degree


# Common degree of all monomials, or None when the vector is inhomogeneous.
#
# The zero vector has no degree and also returns None.
def degree(vector, size):
    degrees = {monomial_degree(monomial, size) for monomial in vector.terms}
    if len(degrees) != 1:
        return None
    return degrees.pop()


@dataclass(frozen=True)
class SamplingConfig:
    n: int
    size: int
    scheme: OrderScheme
    radius: int = 1
    max_monomials: int = 3
    max_factors: int = 3
    max_exponent: int = 2
    seed: int = 0
    modes: Optional[tuple] = None

    def mode_box(self):
        if self.modes is not None:
            return [tuple(m) for m in self.modes]
        return box(self.size, self.radius)

    def x_keys(self):
        modes = self.mode_box()
        return [
            x_var(i, j, m)
            for i in range(1, self.n + 2)
            for j in range(i + 1, self.n + 2)
            for m in modes
        ]

    def y_keys(self):
        modes = [m for m in self.mode_box() if self.scheme.sign(m) > 0]
        return [y_var(i, k) for i in range(1, self.n + 1) for k in modes]


def _coefficient(rng):
    numerator = rng.choice([-3, -2, -1, 1, 2, 3])
    return Fraction(numerator, rng.randint(1, 3))


def _random_monomial(rng, keys, cfg):
    factors = {}
    for _ in range(rng.randint(1, cfg.max_factors)):
        key = rng.choice(keys)
        factors[key] = factors.get(key, 0) + rng.randint(1, cfg.max_exponent)
    return tuple(sorted(factors.items()))


# Seeded sparse vector with every variable drawn from the mode box.
def random_vector(cfg):
    if not cfg.mode_box():
        raise DimensionError("the mode box is empty")
    rng = random.Random(cfg.seed)
    keys = cfg.x_keys() + cfg.y_keys()
    while True:
        vector = FockVector()
        for _ in range(rng.randint(1, cfg.max_monomials)):
            vector._accumulate(_random_monomial(rng, keys, cfg), _coefficient(rng))
        if not vector.is_zero():
            return vector


# Seeded vector whose monomials all share one degree.
#
# A random base monomial is multiplied by degree-zero pairs
# x_{ij}(q) x_{kl}(-q) or x_{ij}(q) y_k(q) with q > 0.
def random_homogeneous_vector(cfg):
    rng = random.Random(cfg.seed)
    x_keys = cfg.x_keys()
    y_keys = cfg.y_keys()
    positive = [m for m in cfg.mode_box() if cfg.scheme.sign(m) > 0]
    pairs = [(x_var(i, j, q), x_var(k, l, neg(q)))
             for q in positive
             for (i, j) in {(key.i, key.j) for key in x_keys}
             for (k, l) in {(key.i, key.j) for key in x_keys}]
    pairs += [(x_var(key.i, key.j, q), y_var(i, q))
              for key in x_keys if key.mode == zero(cfg.size)
              for q in positive for i in range(1, cfg.n + 1)]
    base = dict(_random_monomial(rng, x_keys + y_keys, cfg))
    vector = FockVector()
    vector._accumulate(tuple(sorted(base.items())), _coefficient(rng))
    pairs.sort()
    for _ in range(rng.randint(0, cfg.max_monomials - 1)):
        if not pairs:
            break
        first, second = rng.choice(pairs)
        extended = dict(base)
        extended[first] = extended.get(first, 0) + 1
        extended[second] = extended.get(second, 0) + 1
        vector._accumulate(tuple(sorted(extended.items())), _coefficient(rng))
    return vector
