# Mode operators on the Fock space and their ordered products.
#
# a_{ij,m} = -x_{ij}(m) and a*_{ij,m} = ∂/∂x_{ij}(-m). A field product such as
# a(z) a*(z) a*(z) has mode-M coefficient Σ_{m1+m2+m3=M} a(m1) a*(m2) a*(m3).
# Against a fixed vector only finitely many summands act nontrivially: the
# derivative modes are pinned by the vector's support, and the single
# multiplication factor takes whatever mode is left over.

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .errors import ContractViolation, IndexRangeError
from .fock import FockVector, combine, x_var, y_var
from .lattice import OrderScheme, add, neg, sub, zero

logger = logging.getLogger(__name__)


# Primitive operators
# -----------------------------

class PrimitiveOp(NamedTuple):
    kind: str
    i: int = 0
    j: int = 0
    mode: tuple = ()
    scalar: Fraction = Fraction(1)


def XMul(i, j, m):
    return PrimitiveOp("XMul", i, j, tuple(m))


def XDer(i, j, m):
    return PrimitiveOp("XDer", i, j, tuple(m))


def YMul(i, k):
    return PrimitiveOp("YMul", i, 0, tuple(k))


def YDer(i, k):
    return PrimitiveOp("YDer", i, 0, tuple(k))


def Scalar(c):
    return PrimitiveOp("Scalar", scalar=Fraction(c))


def apply_primitive(op, v, scheme=None):
    if op.kind == "XMul":
        return v.multiply_var(x_var(op.i, op.j, op.mode), -1)
    if op.kind == "XDer":
        return v.derive(x_var(op.i, op.j, neg(op.mode)))
    if op.kind == "Scalar":
        return v.scale(op.scalar)
    if op.kind in ("YMul", "YDer"):
        scheme = scheme or OrderScheme.uniform(len(op.mode))
        if scheme.sign(op.mode) <= 0:
            raise ContractViolation(f"{op.kind}({op.i}, {op.mode}) needs a positive mode")
        key = y_var(op.i, op.mode)
        return v.multiply_var(key) if op.kind == "YMul" else v.derive(key)
    raise ContractViolation(f"unknown primitive operator {op.kind!r}")


# Mode m of κ·D a*_{ij} as (coefficient, XDer(i, j, s)) pairs, s in m + supp κ.
def kappaD_astar_modes(spec, i, j, m):
    terms = []
    for t in spec.support():
        s = add(m, t)
        coeff = -spec.pairing(s, t)
        if coeff:
            terms.append((coeff, XDer(i, j, s)))
    return sorted(terms, key=lambda pair: pair[1].mode)


# Series factors and product terms
# -----------------------------

A = "A"
ASTAR = "ASTAR"
KD = "KD"
PHI = "PHI"

FLEXIBLE = {A, PHI}


class SeriesFactor(NamedTuple):
    kind: str
    i: int
    j: int = 0

    def commutes_with(self, other):
        # a_{ij} fails to commute only with the derivations in x_{ij}
        if self.kind == A and other.kind in (ASTAR, KD):
            return (self.i, self.j) != (other.i, other.j)
        if other.kind == A and self.kind in (ASTAR, KD):
            return (self.i, self.j) != (other.i, other.j)
        return True

    def to_text(self):
        if self.kind == A:
            return f"a[{self.i},{self.j}]"
        if self.kind == ASTAR:
            return f"a*[{self.i},{self.j}]"
        if self.kind == KD:
            return f"kD.a*[{self.i},{self.j}]"
        return f"Phi(b[{self.i}])"


def a(i, j):
    return SeriesFactor(A, i, j)


def astar(i, j):
    return SeriesFactor(ASTAR, i, j)


def kd_astar(i, j):
    return SeriesFactor(KD, i, j)


def phi_b(r):
    return SeriesFactor(PHI, r)


# coeff · f_1(z) f_2(z) … f_k(z); the rightmost factor acts first.
#
# At most one factor may be flexible (a, or Φ(b) through its y-multiplication),
# and every factor to its left must commute with it.
@dataclass(frozen=True)
class ProductTerm:
    coeff: Fraction
    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeff", Fraction(self.coeff))
        object.__setattr__(self, "factors", tuple(self.factors))
        flexible = [k for k, f in enumerate(self.factors) if f.kind in FLEXIBLE]
        if len(flexible) > 1:
            raise ContractViolation(f"{self.to_text()} has more than one flexible factor")
        if flexible:
            pos = flexible[0]
            for f in self.factors[:pos]:
                if not f.commutes_with(self.factors[pos]):
                    raise ContractViolation(
                        f"{self.to_text()}: {f.to_text()} sits left of "
                        f"{self.factors[pos].to_text()} and does not commute with it"
                    )

    @property
    def flexible(self):
        for f in self.factors:
            if f.kind in FLEXIBLE:
                return f
        return None

    @property
    def finite(self):
        return [f for f in self.factors if f.kind not in FLEXIBLE]

    def check_indices(self, n):
        for f in self.factors:
            if f.kind == PHI:
                if not 1 <= f.i <= n:
                    raise IndexRangeError(f"Φ(b_{f.i}) factor outside 1..{n}")
            elif not 1 <= f.i < f.j <= n + 1:
                raise IndexRangeError(f"{f.to_text()} needs 1 <= i < j <= {n + 1}")
        return self

    def scaled(self, factor):
        return ProductTerm(self.coeff * Fraction(factor), self.factors)

    def to_text(self):
        sign = "+" if self.coeff >= 0 else "-"
        body = " ".join(f.to_text() for f in self.factors) or "1"
        return f"{sign}{abs(self.coeff)} {body}"


def term(coeff, *factors):
    return ProductTerm(Fraction(coeff), factors)


@dataclass(frozen=True)
class SummableOperator:
    terms: tuple
    mode: tuple
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "mode", tuple(self.mode))

    # operators key the image cache, so the hash is computed once
    def __hash__(self):
        cached = self.__dict__.get("_hash")
        if cached is None:
            cached = hash((self.terms, self.mode, self.label))
            object.__setattr__(self, "_hash", cached)
        return cached

    def __add__(self, other):
        if self.mode != other.mode:
            raise ContractViolation(f"cannot add operators of modes {self.mode} and {other.mode}")
        return SummableOperator(self.terms + other.terms, self.mode, self.label)

    def __neg__(self):
        return self.scaled(-1)

    def scaled(self, factor):
        return SummableOperator(tuple(t.scaled(factor) for t in self.terms), self.mode, self.label)

    def relabel(self, label):
        return SummableOperator(self.terms, self.mode, label)

    def summand_count(self):
        return len(self.terms)

    def to_lines(self):
        return [t.to_text() for t in self.terms]


# One series factor at a fixed mode as a standalone operator.
def lift(factor, mode, coeff=1, label=""):
    return SummableOperator((term(coeff, factor),), mode, label)


def identity_operator(size, coeff=1):
    # the empty product only has a mode-0 coefficient
    return SummableOperator((term(coeff),), zero(size), "1")


# Evaluation
# -----------------------------

@dataclass(frozen=True)
class EvalContext:
    n: int
    scheme: OrderScheme
    spec: object
    lambdas: tuple = field(default=())

    def lam(self, i):
        return Fraction(self.lambdas[i]) if i < len(self.lambdas) else Fraction(0)


# Φ(b_i)(k) on v for 1 <= i <= n:
#   θ(-k) Σ (∂_{y_{i-1}(s)} - ∂_{y_i(s)}) c + θ(k) Σ (∂_{y_{i-1}(s)} - 2∂_{y_i(s)} + ∂_{y_{i+1}(s)}) c
#   + θ(-k) y_i(-k) - δ_{k,0} λ_i,   s = k + t, t in supp κ, c = Σ_p k_p κ_{t,p}
# y-indices 0 and n+1 do not exist and contribute nothing.
def apply_phi_b(ctx, i, k, v):
    scheme = ctx.scheme
    sign = scheme.sign(k)
    if sign < 0:
        weights = {i - 1: 1, i: -1}
    elif sign > 0:
        weights = {i - 1: 1, i: -2, i + 1: 1}
    else:
        weights = {}
    support = v.support()
    items = []
    for t in ctx.spec.support() if weights else ():
        s = add(k, t)
        if scheme.sign(s) <= 0:
            continue
        c = ctx.spec.pairing(k, t)
        if not c:
            continue
        for l, weight in weights.items():
            key = y_var(l, s)
            if 1 <= l <= ctx.n and key in support:
                items.append((v.derive(key), weight * c))
    if sign < 0:
        items.append((v.multiply_var(y_var(i, neg(k))), 1))
    elif sign == 0 and ctx.lam(i):
        items.append((v, -ctx.lam(i)))
    return combine(items)


def _apply_flexible(ctx, factor, mode, v):
    if factor.kind == A:
        return v.multiply_var(x_var(factor.i, factor.j, mode), -1)
    return apply_phi_b(ctx, factor.i, mode, v)


def _spread(ctx, factor, used, v):
    # every (mode, image) with factor(mode) v != 0, modes pinned by v's support
    out = []
    if factor.kind == ASTAR:
        for q in v.x_modes(factor.i, factor.j):
            out.append((add(used, neg(q)), v.derive(x_var(factor.i, factor.j, q))))
    elif factor.kind == KD:
        for q in v.x_modes(factor.i, factor.j):
            image = v.derive(x_var(factor.i, factor.j, q))
            for t in ctx.spec.support():
                c = ctx.spec.pairing(q, t)
                if c:
                    out.append((add(used, sub(neg(q), t)), image.scale(c)))
    else:
        raise ContractViolation(f"{factor.to_text()} is not a finite-action factor")
    return out


# Finite factors run right to left, each pinning its mode against the current
# vector; the flexible factor, if any, then takes the residual mode.
def _term_items(pt, mode, v, ctx):
    states = {zero(len(mode)): v}
    for factor in reversed(pt.finite):
        nxt = {}
        for used, w in states.items():
            for new_used, image in _spread(ctx, factor, used, w):
                if image.is_zero():
                    continue
                nxt.setdefault(new_used, []).append((image, 1))
        states = {used: combine(parts) for used, parts in nxt.items()}
        if not states:
            return []
    flexible = pt.flexible
    items = []
    for used, w in states.items():
        if flexible is not None:
            items.append((_apply_flexible(ctx, flexible, sub(mode, used), w), pt.coeff))
        elif used == mode:
            items.append((w, pt.coeff))
    return items


def apply_term(pt, mode, v, ctx):
    return combine(_term_items(pt, mode, v, ctx))


def apply_summable(op, v, ctx):
    if v.is_zero():
        return FockVector()
    items = []
    for pt in op.terms:
        items.extend(_term_items(pt, op.mode, v, ctx))
    return combine(items)


# [first, second] v = first(second v) - second(first v)
def commutator_apply(first, second, v, ctx):
    return combine([
        (apply_summable(first, apply_summable(second, v, ctx), ctx), 1),
        (apply_summable(second, apply_summable(first, v, ctx), ctx), -1),
    ])
