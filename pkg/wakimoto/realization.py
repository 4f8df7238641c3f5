# Generator modes of the free-field realization.
#
# For 1 <= r <= n the fields ρ(E_r), ρ(F_r), ρ(H_r) are short lists of
# ordered products of a, a*, κ·D a* and Φ(b) factors. ρ(E_0) is a single
# multiplication, ρ(H_0) the negated sum of the ρ(H_r), and ρ(F_0) three blocks
# of products along chains 1 = q_1 < q_2 < … < q_i.

import logging
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import NamedTuple, Optional

from .cartan import CartanMatrix
from .errors import DimensionError, IndexRangeError
from .fock import FockVector, combine
from .kappa import rational_to_str
from .lattice import OrderScheme, check_size
from .operators import (
    EvalContext,
    SummableOperator,
    a,
    apply_summable,
    astar,
    kd_astar,
    phi_b,
    term,
)

logger = logging.getLogger(__name__)


# logged once per λ tuple, however often replace() rebuilds the params
@lru_cache(maxsize=None)
def _warn_lambda_mismatch(lambdas):
    logger.warning("λ_0=%s is not -Σλ_i; Φ(b_0) follows b_0 = -Σ b_i regardless", lambdas[0])


@dataclass(frozen=True)
class RealizationParams:
    n: int
    scheme: OrderScheme
    spec: object
    lambdas: tuple = ()
    mutated: bool = False

    def __post_init__(self):
        CartanMatrix(self.n)
        if self.spec.size != self.scheme.size:
            raise DimensionError(f"κ has {self.spec.size} coordinates, the order scheme {self.scheme.size}")
        lambdas = tuple(Fraction(c) for c in self.lambdas)
        if not lambdas:
            lambdas = (Fraction(0),) * (self.n + 1)
        elif len(lambdas) == self.n:
            # only λ_1..λ_n given; λ_0 follows from b_0 = -Σ b_i
            lambdas = (-sum(lambdas),) + lambdas
        elif len(lambdas) != self.n + 1:
            raise DimensionError(f"expected {self.n + 1} λ values, got {len(lambdas)}")
        object.__setattr__(self, "lambdas", lambdas)
        if lambdas[0] != -sum(lambdas[1:]):
            _warn_lambda_mismatch(lambdas)

    @property
    def size(self):
        return self.scheme.size

    def context(self):
        return EvalContext(self.n, self.scheme, self.spec, self.lambdas)

    def to_dict(self):
        return {
            "n": self.n,
            "N": self.size - 1,
            "weights": self.scheme.to_list(),
            "lambdas": [rational_to_str(c) for c in self.lambdas],
            "mutated": self.mutated,
        }


# Chains
# -----------------------------

class Chain(NamedTuple):
    entries: tuple

    @property
    def last(self):
        return self.entries[-1]

    @property
    def penultimate(self):
        return self.entries[-2] if len(self.entries) > 1 else None

    # Consecutive pairs (q_l, q_{l+1}), closed off by `terminal` if given.
    def edges(self, terminal=None):
        points = self.entries + ((terminal,) if terminal is not None else ())
        return list(zip(points, points[1:]))


@dataclass(frozen=True)
class ChainConstraint:
    last_equals: Optional[int] = None
    last_at_most: Optional[int] = None
    penultimate_at_most: Optional[int] = None

    def accepts(self, chain):
        if self.last_equals is not None and chain.last != self.last_equals:
            return False
        if self.last_at_most is not None and chain.last > self.last_at_most:
            return False
        if self.penultimate_at_most is not None:
            if chain.penultimate is not None and chain.penultimate > self.penultimate_at_most:
                return False
        return True


# Chains 1 = q_1 < … < q_i <= n, so that n+1 can close every chain.
def chain_enumerate(n, constraint=None):
    chains = []
    interior = range(2, n + 1)
    for length in range(len(interior) + 1):
        for picked in combinations(interior, length):
            chain = Chain((1,) + picked)
            if constraint is None or constraint.accepts(chain):
                chains.append(chain)
    return chains


# Operator construction
# -----------------------------

def _check_mode(params, m):
    return check_size(tuple(m), params.size)


def _check_generator(params, r):
    if not 0 <= r <= params.n:
        raise IndexRangeError(f"generator index {r} outside 0..{params.n}")


def _build(params, terms, m, label):
    for t in terms:
        t.check_indices(params.n)
    return SummableOperator(tuple(terms), tuple(m), label)


def phi_b_terms(n, i):
    if i == 0:
        return [term(-1, phi_b(k)) for k in range(1, n + 1)]
    return [term(1, phi_b(i))]


def phi_b_mode(params, i, m):
    _check_generator(params, i)
    _check_mode(params, m)
    return _build(params, phi_b_terms(params.n, i), m, f"Phi(b{i})")


def _e_terms(params, r):
    n = params.n
    s = r + 1
    terms = [term(1, a(r, s), astar(r, s), astar(r, s))]
    terms += [term(-1, a(s, j), astar(r, j)) for j in range(r + 2, n + 2)]
    terms += [term(1, a(j, r), astar(j, s)) for j in range(1, r)]
    for j in range(r + 2, n + 2):
        terms.append(term(1, a(r, j), astar(r, j), astar(r, s)))
        terms.append(term(-1, a(s, j), astar(s, j), astar(r, s)))
    terms.append(term(1, astar(r, s), phi_b(r)))
    terms.append(term(-1 if params.mutated else 1, kd_astar(r, s)))
    return terms


def rho_E(params, r, m):
    _check_generator(params, r)
    _check_mode(params, m)
    if r == 0:
        terms = [term(-1, a(1, params.n + 1))]
    else:
        terms = _e_terms(params, r)
    return _build(params, terms, m, f"E{r}")


def _f0_terms(n):
    terms = []
    # block A: -a_{rj} · a* along 1 = q_1 < … < q_i = j with q_{i-1} <= r · a*_{r,n+1}
    for r in range(1, n + 1):
        for j in range(r + 1, n + 2):
            if j <= n:
                chains = chain_enumerate(n, ChainConstraint(last_equals=j, penultimate_at_most=r))
                paths = [c.edges() for c in chains]
            else:
                chains = chain_enumerate(n, ChainConstraint(last_at_most=r))
                paths = [c.edges(n + 1) for c in chains]
            for path in paths:
                factors = [a(r, j)] + [astar(p, q) for p, q in path] + [astar(r, n + 1)]
                terms.append(term(-1, *factors))
    # block B: -a* along a full chain with q_i <= r · Φ(b_r)
    for r in range(1, n + 1):
        for chain in chain_enumerate(n, ChainConstraint(last_at_most=r)):
            factors = [astar(p, q) for p, q in chain.edges(n + 1)] + [phi_b(r)]
            terms.append(term(-1, *factors))
    # block C: -a* along a chain ending at r · κ·D a*_{r,n+1}
    for r in range(1, n + 1):
        for chain in chain_enumerate(n, ChainConstraint(last_equals=r)):
            factors = [astar(p, q) for p, q in chain.edges()] + [kd_astar(r, n + 1)]
            terms.append(term(-1, *factors))
    return terms


def rho_F(params, r, m):
    _check_generator(params, r)
    _check_mode(params, m)
    if r == 0:
        terms = _f0_terms(params.n)
    else:
        terms = [term(1, a(r, r + 1))]
        terms += [term(-1, a(j, r + 1), astar(j, r)) for j in range(1, r)]
    return _build(params, terms, m, f"F{r}")


def _h_terms(params, r):
    n = params.n
    s = r + 1
    terms = [term(2, a(r, s), astar(r, s))]
    for i in range(1, r):
        terms.append(term(1, a(i, s), astar(i, s)))
        terms.append(term(-1, a(i, r), astar(i, r)))
    for j in range(r + 2, n + 2):
        terms.append(term(1, a(r, j), astar(r, j)))
        terms.append(term(-1, a(s, j), astar(s, j)))
    terms.append(term(1, phi_b(r)))
    return terms


def rho_H(params, r, m):
    _check_generator(params, r)
    _check_mode(params, m)
    if r == 0:
        terms = [t.scaled(-1) for k in range(1, params.n + 1) for t in _h_terms(params, k)]
    else:
        terms = _h_terms(params, r)
    return _build(params, terms, m, f"H{r}")


# ρ(H_0) written out directly rather than as -Σ ρ(H_r):
#   -Σ_{r<=n} a_{r,n+1} a*_{r,n+1} - Σ_{r>=2} a_{1r} a*_{1r} + Φ(b_0)
# Only the verifier builds it, as a cross-check on rho_H.
def h0_display(params, m):
    _check_mode(params, m)
    n = params.n
    terms = [term(-1, a(r, n + 1), astar(r, n + 1)) for r in range(1, n + 1)]
    terms += [term(-1, a(1, r), astar(1, r)) for r in range(2, n + 2)]
    terms += phi_b_terms(n, 0)
    return _build(params, terms, m, "H0-display")


BUILDERS = {"E": rho_E, "F": rho_F, "H": rho_H, "Phi": phi_b_mode}


IMAGE_CACHE_LIMIT = 50_000


# Memoized generator modes for one parameter set, plus a bounded cache of
# operator images op·v. Both caches are filled under one lock; reads are
# lock-free.
class Realization:
    def __init__(self, params):
        self.params = params
        self.ctx = params.context()
        self.cartan = CartanMatrix(params.n)
        self._memo = {}
        self._images = {}
        self._lock = threading.Lock()

    @property
    def n(self):
        return self.params.n

    @property
    def size(self):
        return self.params.size

    def mode(self, kind, r, m):
        if kind not in BUILDERS:
            raise IndexRangeError(f"unknown generator kind {kind!r}")
        key = (kind, r, tuple(m))
        op = self._memo.get(key)
        if op is None:
            built = BUILDERS[kind](self.params, r, m)
            with self._lock:
                op = self._memo.setdefault(key, built)
        return op

    def E(self, r, m):
        return self.mode("E", r, m)

    def F(self, r, m):
        return self.mode("F", r, m)

    def H(self, r, m):
        return self.mode("H", r, m)

    def phi_b(self, i, m):
        return self.mode("Phi", i, m)

    def apply(self, op, v):
        return apply_summable(op, v, self.ctx)

    # op·v, remembered across a sweep; every relation reuses g(m)·v for all partner modes
    def image(self, op, v):
        key = (op, v)
        found = self._images.get(key)
        if found is None:
            found = apply_summable(op, v, self.ctx)
            with self._lock:
                if len(self._images) >= IMAGE_CACHE_LIMIT:
                    self._images.clear()
                found = self._images.setdefault(key, found)
        return found

    def bracket(self, first, second, v):
        first_v = self.image(first, v)
        second_v = self.image(second, v)
        if first_v.is_zero() and second_v.is_zero():
            return FockVector()
        return combine([(self.apply(first, second_v), 1), (self.apply(second, first_v), -1)])

    def dump(self, kind, r, m):
        op = self.mode(kind, r, m)
        return realization_dump(op)


def realization_dump(op):
    return {
        "generator": op.label,
        "mode": list(op.mode),
        "summands": op.summand_count(),
        "terms": op.to_lines(),
    }


# `F0,1,-1` -> ("F", 0, (1, -1)).
def parse_generator(text):
    head, *coords = [part.strip() for part in text.split(",")]
    for kind in ("Phi", "E", "F", "H"):
        if head.startswith(kind) and head[len(kind):].isdigit():
            try:
                return kind, int(head[len(kind):]), tuple(int(c) for c in coords)
            except ValueError:
                break
    raise IndexRangeError(f"cannot read generator mode {text!r}; expected e.g. F0,1,-1")
