"""Multi-indices in Z^{N+1}, the total group order that splits the lattice
into positive, zero and negative parts, and the θ indicator built on it.

Multi-indices are plain tuples of ints; every function here is pure.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .errors import DimensionError

MultiIndex = tuple


def zero(size):
    return (0,) * size


def add(m, n):
    return tuple(a + b for a, b in zip(m, n))


def sub(m, n):
    return tuple(a - b for a, b in zip(m, n))


def neg(m):
    return tuple(-a for a in m)


def unit(size, i):
    return tuple(1 if k == i else 0 for k in range(size))


# Every multi-index with entries in [-radius, radius], in lexicographic order.
def box(size, radius):
    span = range(-radius, radius + 1)
    return [tuple(m) for m in product(span, repeat=size)]


def check_size(m, size):
    if len(m) != size:
        raise DimensionError(f"multi-index {m} has {len(m)} coordinates, expected {size}")
    return m


@dataclass(frozen=True)
class OrderScheme:
    """Weighted sum first, first nonzero coordinate on ties.

    Any rational weights give a total order compatible with addition, so the
    positive cone is closed under sums and s(-m) = -s(m).
    """

    weights: tuple

    def __post_init__(self):
        if not self.weights:
            raise DimensionError("an order scheme needs at least one weight")
        object.__setattr__(self, "weights", tuple(Fraction(w) for w in self.weights))

    @property
    def size(self):
        return len(self.weights)

    @classmethod
    def uniform(cls, size):
        return cls(tuple(Fraction(1) for _ in range(size)))

    @classmethod
    def ramp(cls, size):
        return cls(tuple(Fraction(k + 1) for k in range(size)))

    def sign(self, m):
        check_size(m, self.size)
        total = sum(w * c for w, c in zip(self.weights, m))
        if total > 0:
            return 1
        if total < 0:
            return -1
        for c in m:
            if c:
                return 1 if c > 0 else -1
        return 0

    def is_positive(self, m):
        return self.sign(m) > 0

    def to_list(self):
        return [str(w) for w in self.weights]


def order_sign(m, scheme):
    return scheme.sign(m)


def theta(m, scheme):
    return 1 if scheme.sign(m) > 0 else 0


def positive_part(modes, scheme):
    return [m for m in modes if scheme.sign(m) > 0]
