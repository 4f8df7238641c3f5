# Relation suites, evaluated exactly on Fock vectors.
#
# Every check compares two FockVectors built from the same input vector, so
# there are no tolerances. The λ-bracket statements of the realization are
# generating functions of mode brackets: checking the H/E/F relations at every
# mode pair in the box is their exact content, and they are not checked a
# second time in λ-form.

import json
import logging
import random
import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import product
from typing import Optional

from .errors import ConfigError
from .fock import FockVector, SamplingConfig, degree, random_homogeneous_vector, random_vector, x_var, y_var
from .formalcalc import (
    DeltaExpr,
    LambdaPoly,
    LaurentPoly,
    fourier_by_residue,
    fourier_lambda,
    multiply_into_delta,
    residue,
)
from .kappa import central_scalar, kappa_to_records
from .lattice import add, box, neg, unit, zero
from .operators import SummableOperator, a, astar, kd_astar, lift, term
from .realization import Realization, chain_enumerate, h0_display

logger = logging.getLogger(__name__)

SUITES = ("heisenberg", "relations", "serre", "lemmas", "calculus", "grading", "chains", "mutation")
RELATIONS = ("R0ii", "R1", "R2E", "R2F", "R3", "S4i-E", "S4i-F", "S4ii", "S4iii")
MAX_WITNESSES = 20


def resolve_suites(names):
    if isinstance(names, str):
        names = [part.strip() for part in names.split(",") if part.strip()]
    names = list(names) or ["all"]
    if "all" in names:
        return list(SUITES)
    unknown = [name for name in names if name not in SUITES]
    if unknown:
        raise ConfigError(f"unknown suite(s): {', '.join(unknown)}; choose from all, {', '.join(SUITES)}")
    return [name for name in SUITES if name in names]


@dataclass(frozen=True)
class CheckConfig:
    params: object
    radius: int = 1
    vectors: int = 10
    seed: int = 0
    suites: tuple = ("all",)
    instance_limit: Optional[int] = None

    def __post_init__(self):
        if self.radius < 0:
            raise ConfigError("the mode box radius must be nonnegative")
        if self.vectors < 1:
            raise ConfigError("at least one test vector is needed")
        if self.instance_limit is not None and self.instance_limit < 1:
            raise ConfigError("the instance limit must be a positive integer")
        object.__setattr__(self, "suites", tuple(resolve_suites(self.suites)))

    @property
    def size(self):
        return self.params.size

    def modes(self):
        return box(self.size, self.radius)

    def to_dict(self):
        return {
            "params": self.params.to_dict(),
            "kappa": kappa_to_records(self.params.spec),
            "radius": self.radius,
            "vectors": self.vectors,
            "seed": self.seed,
            "suites": list(self.suites),
            "instance_limit": self.instance_limit,
        }


@dataclass
class CheckRecord:
    check_id: str
    instances: int = 0
    comparisons: int = 0
    failure_count: int = 0
    failures: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    # wall clock only goes to the log; reports stay byte-identical
    started: float = field(default_factory=time.perf_counter, repr=False, compare=False)

    @property
    def passed(self):
        return self.failure_count == 0

    def compare(self, inputs, actual, expected, vector=None):
        self.comparisons += 1
        if actual == expected:
            return True
        self.failure_count += 1
        if len(self.failures) < MAX_WITNESSES:
            witness = {
                "inputs": inputs,
                "expected": _text(expected),
                "actual": _text(actual),
            }
            if vector is not None:
                witness["vector"] = vector.to_text()
            self.failures.append(witness)
        logger.debug("%s failed at %s", self.check_id, inputs)
        return False

    def to_dict(self):
        return {
            "id": self.check_id,
            "status": "PASS" if self.passed else "FAIL",
            "instances": self.instances,
            "comparisons": self.comparisons,
            "failure_count": self.failure_count,
            "failures": self.failures,
            "notes": self.notes,
        }


@dataclass
class CheckReport:
    records: list = field(default_factory=list)
    config: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(r.passed for r in self.records)

    @property
    def failures(self):
        return [r for r in self.records if not r.passed]

    def extend(self, other):
        self.records.extend(other.records)
        return self

    def to_dict(self):
        return {
            "status": "PASS" if self.passed else "FAIL",
            "config": self.config,
            "checks": [r.to_dict() for r in self.records],
            "summary": {
                "checks": len(self.records),
                "failed": [r.check_id for r in self.failures],
            },
        }


def _text(value):
    if isinstance(value, FockVector):
        return value.to_text()
    if isinstance(value, Fraction):
        return str(value)
    return repr(value)


def _mode(m):
    return list(m)


# Shared plumbing
# -----------------------------

def _limit(instances, cfg, check_id):
    if cfg.instance_limit is None or len(instances) <= cfg.instance_limit:
        return instances
    rng = random.Random(f"{cfg.seed}:{check_id}")
    picked = sorted(rng.sample(range(len(instances)), cfg.instance_limit))
    return [instances[k] for k in picked]


def _first_positive(cfg):
    for m in cfg.modes():
        if cfg.params.scheme.sign(m) > 0:
            return m
    return unit(cfg.size, 0) if cfg.params.scheme.sign(unit(cfg.size, 0)) > 0 else neg(unit(cfg.size, 0))


def _sampling(cfg, seed):
    p = cfg.params
    return SamplingConfig(n=p.n, size=p.size, scheme=p.scheme, radius=cfg.radius, seed=seed)


# The vacuum, x_{12}(0), y_1(k) for the first positive k, then seeded random vectors.
def sample_vectors(cfg):
    size = cfg.size
    fixed = [
        FockVector.constant(),
        FockVector.variable(x_var(1, 2, zero(size))),
        FockVector.variable(y_var(1, _first_positive(cfg))),
    ]
    vectors = fixed[: cfg.vectors]
    k = 0
    while len(vectors) < cfg.vectors:
        vectors.append(random_vector(_sampling(cfg, cfg.seed * 1000 + k)))
        k += 1
    return vectors


def _sweep(record, instances, vectors, lhs, rhs, describe):
    for inst in instances:
        record.instances += 1
        for k, v in enumerate(vectors):
            inputs = dict(describe(inst), vector=k)
            record.compare(inputs, lhs(inst, v), rhs(inst, v), v)


def _scalar_sum(spec, m, total):
    # Σ_l m_l · (-κ_{-total,l})
    return sum((c * central_scalar(spec, total, l) for l, c in enumerate(m)), Fraction(0))


def _finish(record):
    level = logging.INFO if record.passed else logging.WARNING
    logger.log(
        level,
        "%s: %d instances, %d failures in %.1fs",
        record.check_id,
        record.instances,
        record.failure_count,
        time.perf_counter() - record.started,
    )
    return record


# Heisenberg
# -----------------------------

def check_heisenberg(cfg, realization=None, vectors=None):
    real = realization or Realization(cfg.params)
    vectors = vectors if vectors is not None else sample_vectors(cfg)
    spec = cfg.params.spec
    cartan = real.cartan
    report = CheckReport()

    central = CheckRecord("heisenberg.central")
    for m in cfg.modes():
        central.instances += 1
        central.compare({"m": _mode(m)}, _scalar_sum(spec, m, m), Fraction(0))
    report.records.append(_finish(central))

    record = CheckRecord("heisenberg.bracket")
    indices = range(real.n + 1)
    instances = _limit(list(product(indices, indices, cfg.modes(), cfg.modes())), cfg, record.check_id)
    _sweep(
        record,
        instances,
        vectors,
        lambda inst, v: real.bracket(real.phi_b(inst[0], inst[2]), real.phi_b(inst[1], inst[3]), v),
        lambda inst, v: v.scale(cartan.entry(inst[0], inst[1]) * _scalar_sum(spec, inst[2], add(inst[2], inst[3]))),
        lambda inst: {"i": inst[0], "j": inst[1], "m": _mode(inst[2]), "n": _mode(inst[3])},
    )
    report.records.append(_finish(record))
    return report


# Toroidal relations and Serre relations
# -----------------------------

def _pair_instances(real, cfg):
    indices = range(real.n + 1)
    return list(product(indices, indices, cfg.modes(), cfg.modes()))


def _describe_pair(inst):
    return {"i": inst[0], "j": inst[1], "m": _mode(inst[2]), "n": _mode(inst[3])}


def check_relation(rel, cfg, realization=None, vectors=None):
    real = realization or Realization(cfg.params)
    vectors = vectors if vectors is not None else sample_vectors(cfg)
    spec = cfg.params.spec
    A = real.cartan.entry
    record = CheckRecord(f"relation.{rel}")

    if rel == "R0ii":
        for m in cfg.modes():
            record.instances += 1
            record.compare({"m": _mode(m)}, _scalar_sum(spec, m, m), Fraction(0))
        return _finish(record)

    if rel in ("R1", "R2E", "R2F", "R3"):
        instances = _limit(_pair_instances(real, cfg), cfg, record.check_id)
        if rel == "R1":
            lhs = lambda inst, v: real.bracket(real.H(inst[0], inst[2]), real.H(inst[1], inst[3]), v)
            rhs = lambda inst, v: v.scale(A(inst[0], inst[1]) * _scalar_sum(spec, inst[2], add(inst[2], inst[3])))
        elif rel == "R2E":
            lhs = lambda inst, v: real.bracket(real.H(inst[0], inst[2]), real.E(inst[1], inst[3]), v)
            rhs = lambda inst, v: real.image(real.E(inst[1], add(inst[2], inst[3])), v).scale(A(inst[0], inst[1]))
        elif rel == "R2F":
            lhs = lambda inst, v: real.bracket(real.H(inst[0], inst[2]), real.F(inst[1], inst[3]), v)
            rhs = lambda inst, v: real.image(real.F(inst[1], add(inst[2], inst[3])), v).scale(-A(inst[0], inst[1]))
        else:
            lhs = lambda inst, v: real.bracket(real.E(inst[0], inst[2]), real.F(inst[1], inst[3]), v)
            rhs = lambda inst, v: _r3_rhs(real, spec, inst, v)
        _sweep(record, instances, vectors, lhs, rhs, _describe_pair)
        return _finish(record)

    if rel in ("S4i-E", "S4i-F"):
        gen = real.E if rel == "S4i-E" else real.F
        indices = range(real.n + 1)
        instances = _limit(list(product(indices, cfg.modes(), cfg.modes())), cfg, record.check_id)
        _sweep(
            record,
            instances,
            vectors,
            lambda inst, v: real.bracket(gen(inst[0], inst[1]), gen(inst[0], inst[2]), v),
            lambda inst, v: FockVector(),
            lambda inst: {"i": inst[0], "m": _mode(inst[1]), "n": _mode(inst[2])},
        )
        return _finish(record)

    if rel in ("S4ii", "S4iii"):
        gen = real.E if rel == "S4ii" else real.F
        adjacent = real.cartan.adjacent_pairs()
        orthogonal = real.cartan.orthogonal_pairs()
        modes = cfg.modes()
        instances = [(i, j, m, m2, n) for (i, j) in adjacent for m, m2, n in product(modes, modes, modes)]
        instances += [(i, j, m, None, n) for (i, j) in orthogonal for m, n in product(modes, modes)]
        instances = _limit(instances, cfg, record.check_id)

        def lhs(inst, v):
            i, j, m, m2, n = inst
            if m2 is None:
                return real.bracket(gen(i, m), gen(j, n), v)
            inner = real.bracket(gen(i, m2), gen(j, n), v)
            first = real.apply(gen(i, m), inner)
            # second half of [g_i(m), [g_i(m2), g_j(n)]] v
            bracket_then = real.bracket(gen(i, m2), gen(j, n), real.image(gen(i, m), v))
            return first - bracket_then

        def describe(inst):
            i, j, m, m2, n = inst
            out = {"i": i, "j": j, "m": _mode(m), "n": _mode(n)}
            if m2 is not None:
                out["m2"] = _mode(m2)
            return out

        _sweep(record, instances, vectors, lhs, lambda inst, v: FockVector(), describe)
        if orthogonal:
            record.notes.append(f"{len(orthogonal)} orthogonal pairs checked with a single bracket")
        return _finish(record)

    raise ConfigError(f"unknown relation {rel!r}")


def _r3_rhs(real, spec, inst, v):
    i, j, m, n = inst
    if i != j:
        return FockVector()
    total = add(m, n)
    # 2/A_ii = 1
    return -real.image(real.H(i, total), v) - v.scale(_scalar_sum(spec, m, total))


def check_relations(cfg, realization=None, vectors=None, relations=RELATIONS[:5]):
    real = realization or Realization(cfg.params)
    vectors = vectors if vectors is not None else sample_vectors(cfg)
    report = CheckReport()
    for rel in relations:
        report.records.append(check_relation(rel, cfg, real, vectors))
    return report


# The written-out ρ(H_0) against the negated sum the realization uses.
def check_h0_display(cfg, realization=None, vectors=None):
    real = realization or Realization(cfg.params)
    vectors = vectors if vectors is not None else sample_vectors(cfg)
    record = CheckRecord("realization.H0-display")
    modes = _limit(cfg.modes(), cfg, record.check_id)
    displays = {m: h0_display(cfg.params, m) for m in modes}
    _sweep(
        record,
        modes,
        vectors,
        lambda m, v: real.image(displays[m], v),
        lambda m, v: real.image(real.H(0, m), v),
        lambda m: {"m": _mode(m)},
    )
    if record.passed:
        record.notes.append("written-out ρ(H_0) agrees with -Σ ρ(H_r)")
    else:
        record.notes.append("written-out ρ(H_0) differs from -Σ ρ(H_r); the realization keeps the negated sum")
    return _finish(record)


def check_serre(cfg, realization=None, vectors=None):
    return check_relations(cfg, realization, vectors, relations=RELATIONS[5:])


# Lemma identities at mode level
# -----------------------------

def _op(n, mode, terms):
    for t in terms:
        t.check_indices(n)
    return SummableOperator(tuple(terms), mode)


def _pairs(n):
    return [(i, j) for i in range(1, n + 2) for j in range(i + 1, n + 2)]


# (lhs_first, lhs_second, rhs) operators for the summed items (d)-(i).
def _lemma_sum_item(real, item, r, s, m, n_mode):
    n = real.n
    top = n + 1
    total = add(m, n_mode)
    if item == "d":
        first = [term(1, a(k, s), astar(k, s + 1)) for k in range(1, s)]
        second = [term(1, a(r, j), astar(r, j)) for j in range(r + 2, top + 1)]
        rhs = [term(-1, a(r, r + 1), astar(r, r + 2))] if s == r + 1 and r + 2 <= top else []
    elif item == "e":
        first = [term(1, a(s + 1, k), astar(s, k)) for k in range(s + 2, top + 1)]
        second = [term(1, a(j, r), astar(j, r + 1)) for j in range(1, r)]
        rhs = []
    elif item == "f":
        first = [term(1, a(k, s), astar(k, s + 1)) for k in range(1, s)]
        second = [term(1, a(r + 1, j), astar(r + 1, j)) for j in range(r + 2, top + 1)]
        rhs = []
    elif item == "g":
        first = [term(1, a(s + 1, k), astar(s, k)) for k in range(s + 2, top + 1)]
        second = []
        for j in range(r + 2, top + 1):
            second.append(term(1, a(r, j), astar(r, j)))
            second.append(term(-1, a(r + 1, j), astar(r + 1, j)))
        rhs = []
        if r == s:
            rhs += [term(-2, a(r + 1, j), astar(r, j)) for j in range(r + 2, top + 1)]
        if r == s + 1:
            rhs += [term(1, a(r, j), astar(r - 1, j)) for j in range(r + 2, top + 1)]
        if s == r + 1:
            rhs += [term(1, a(r + 2, j), astar(r + 1, j)) for j in range(r + 3, top + 1)]
    elif item == "h":
        first = [term(1, astar(s, s + 1))]
        second = [term(1, a(j, r), astar(j, r + 1)) for j in range(1, r)]
        rhs = [term(-1, astar(r - 1, r + 1))] if r == s + 1 else []
    elif item == "i":
        first = [term(1, astar(s, s + 1))]
        second = [term(1, a(r + 1, j), astar(r, j)) for j in range(r + 2, top + 1)]
        rhs = [term(-1, astar(r, r + 2))] if s == r + 1 and r + 2 <= top else []
    else:
        raise ConfigError(f"unknown lemma item {item!r}")
    return _op(n, m, first), _op(n, n_mode, second), _op(n, total, rhs)


def check_lemmas(cfg, realization=None, vectors=None):
    real = realization or Realization(cfg.params)
    vectors = vectors if vectors is not None else sample_vectors(cfg)
    spec = cfg.params.spec
    n = real.n
    modes = cfg.modes()
    report = CheckReport()
    pair_list = _pairs(n)

    def pair_instances(check_id):
        return _limit(list(product(pair_list, pair_list, modes, modes)), cfg, check_id)

    def describe_pairs(inst):
        (i, j), (k, l), m, nm = inst
        return {"first": [i, j], "second": [k, l], "m": _mode(m), "n": _mode(nm)}

    # (a) [a_ij(m), a*_kl(n)] = δ_ik δ_jl δ_{m+n,0}
    record = CheckRecord("lemma.a")
    _sweep(
        record,
        pair_instances(record.check_id),
        vectors,
        lambda inst, v: real.bracket(lift(a(*inst[0]), inst[2]), lift(astar(*inst[1]), inst[3]), v),
        lambda inst, v: v if inst[0] == inst[1] and add(inst[2], inst[3]) == zero(cfg.size) else FockVector(),
        describe_pairs,
    )
    report.records.append(_finish(record))

    # (b) [(a_ij a*_ij)(m), (a_ij a*_ij)(n)] = 0
    record = CheckRecord("lemma.b")
    instances = _limit(list(product(pair_list, modes, modes)), cfg, record.check_id)
    _sweep(
        record,
        instances,
        vectors,
        lambda inst, v: real.bracket(
            SummableOperator((term(1, a(*inst[0]), astar(*inst[0])),), inst[1]),
            SummableOperator((term(1, a(*inst[0]), astar(*inst[0])),), inst[2]),
            v,
        ),
        lambda inst, v: FockVector(),
        lambda inst: {"pair": list(inst[0]), "m": _mode(inst[1]), "n": _mode(inst[2])},
    )
    report.records.append(_finish(record))

    # (c) [a_ij(m), κ·D a*_kl(n)] = δδ Σ_p m_p κ_{-m-n,p}, and the reversed bracket
    # [κ·D a*_kl(n), a_ij(m)] = δδ Σ_p n_p κ_{-m-n,p}
    record = CheckRecord("lemma.c")
    instances = pair_instances(record.check_id)

    def c_lhs(inst, v):
        (i, j), (k, l), m, nm = inst
        forward = real.bracket(lift(a(i, j), m), lift(kd_astar(k, l), nm), v)
        backward = real.bracket(lift(kd_astar(k, l), nm), lift(a(i, j), m), v)
        return (forward, backward)

    def c_rhs(inst, v):
        (i, j), (k, l), m, nm = inst
        if (i, j) != (k, l):
            return (FockVector(), FockVector())
        t = neg(add(m, nm))
        return (v.scale(spec.pairing(m, t)), v.scale(spec.pairing(nm, t)))

    for inst in instances:
        record.instances += 1
        for k, v in enumerate(vectors):
            actual, expected = c_lhs(inst, v), c_rhs(inst, v)
            inputs = dict(describe_pairs(inst), vector=k)
            record.compare(dict(inputs, order="forward"), actual[0], expected[0], v)
            record.compare(dict(inputs, order="reversed"), actual[1], expected[1], v)
    report.records.append(_finish(record))

    # (d)-(i): sums over j, k of brackets of quadratic fields
    generators = range(1, n + 1)
    for item in ("d", "e", "f", "g", "h", "i"):
        record = CheckRecord(f"lemma.{item}")
        instances = _limit(list(product(generators, generators, modes, modes)), cfg, record.check_id)

        def lhs(inst, v, item=item):
            first, second, _ = _lemma_sum_item(real, item, *inst)
            return real.bracket(first, second, v)

        def rhs(inst, v, item=item):
            _, _, result = _lemma_sum_item(real, item, *inst)
            return real.image(result, v)

        _sweep(
            record,
            instances,
            vectors,
            lhs,
            rhs,
            lambda inst: {"r": inst[0], "s": inst[1], "m": _mode(inst[2]), "n": _mode(inst[3])},
        )
        report.records.append(_finish(record))

    # c1: [(a_pq a*_pq)(m), (a_{j,s+1} a*_{js})(n)] = δ_pj (δ_{q,s} - δ_{q,s+1}) (a_{j,s+1} a*_{js})(m+n)
    record = CheckRecord("lemma.c1")
    targets = [(j, s) for j in range(1, n + 1) for s in range(j + 1, n + 1)]
    instances = _limit(list(product(pair_list, targets, modes, modes)), cfg, record.check_id)

    def c1_lhs(inst, v):
        (p, q), (j, s), m, nm = inst
        number = SummableOperator((term(1, a(p, q), astar(p, q)),), m)
        shift = SummableOperator((term(1, a(j, s + 1), astar(j, s)),), nm)
        return real.bracket(number, shift, v)

    def c1_rhs(inst, v):
        (p, q), (j, s), m, nm = inst
        sign = 0
        if p == j and q == s:
            sign = 1
        elif p == j and q == s + 1:
            sign = -1
        if not sign:
            return FockVector()
        return real.image(SummableOperator((term(sign, a(j, s + 1), astar(j, s)),), add(m, nm)), v)

    _sweep(
        record,
        instances,
        vectors,
        c1_lhs,
        c1_rhs,
        lambda inst: {"number": list(inst[0]), "shift": list(inst[1]), "m": _mode(inst[2]), "n": _mode(inst[3])},
    )
    report.records.append(_finish(record))

    # kdw: [(a_ij a*_ij)(m), κ·D a*_kl(n)] = δδ ((κ·D a*_ij)(m+n) + Σ_u (Σ_p m_p κ_{u,p}) a*_ij(m+n+u))
    record = CheckRecord("lemma.kdw")

    def kdw_lhs(inst, v):
        (i, j), (k, l), m, nm = inst
        number = SummableOperator((term(1, a(i, j), astar(i, j)),), m)
        return real.bracket(number, lift(kd_astar(k, l), nm), v)

    def kdw_rhs(inst, v):
        (i, j), (k, l), m, nm = inst
        if (i, j) != (k, l):
            return FockVector()
        total = add(m, nm)
        result = real.image(lift(kd_astar(i, j), total), v)
        for u in spec.support():
            c = spec.pairing(m, u)
            if c:
                result = result + real.image(lift(astar(i, j), add(total, u), c), v)
        return result

    _sweep(record, pair_instances(record.check_id), vectors, kdw_lhs, kdw_rhs, describe_pairs)
    report.records.append(_finish(record))
    return report


# Formal calculus sweep
# -----------------------------

def _random_w_poly(rng, size):
    terms = {}
    for _ in range(rng.randint(1, 3)):
        wexp = tuple(rng.randint(-2, 2) for _ in range(size))
        terms[(zero(size), wexp)] = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 3))
    return LaurentPoly(size, terms)


def _random_poly(rng, size):
    terms = {}
    for _ in range(rng.randint(1, 3)):
        zexp = tuple(rng.randint(-2, 2) for _ in range(size))
        wexp = tuple(rng.randint(-2, 2) for _ in range(size))
        terms[(zexp, wexp)] = Fraction(rng.choice([-2, -1, 1, 2]))
    return LaurentPoly(size, terms)


def check_calculus(cfg, cases=50):
    report = CheckReport()

    sweep = CheckRecord("calculus.fourier")
    for size in (1, 2):
        for order in product(range(4), repeat=size):
            sweep.instances += 1
            d = DeltaExpr.derivative(size, order)
            expected = LambdaPoly.divided_power(size, order)
            sweep.compare({"order": list(order), "route": "direct"}, fourier_lambda(d), expected)
            sweep.compare({"order": list(order), "route": "residues"}, fourier_by_residue(d), expected)
    report.records.append(_finish(sweep))

    rng = random.Random(f"{cfg.seed}:calculus")
    reductions = CheckRecord("calculus.reductions")
    residues = CheckRecord("calculus.residues")
    confluence = CheckRecord("calculus.confluence")
    for case in range(cases):
        size = rng.randint(1, 2)
        coeff = _random_w_poly(rng, size)
        order = tuple(rng.randint(0, 3) for _ in range(size))
        i = rng.randrange(size)
        e_i = unit(size, i)
        inputs = {"case": case, "order": list(order), "i": i}

        # (z-w) ∂^{(j+1)} δ = ∂^{(j)} δ and (z-w)^{j+1} ∂^{(j)} δ = 0
        reductions.instances += 1
        raised = DeltaExpr.derivative(size, add(order, e_i), coeff)
        reductions.compare(
            dict(inputs, rule="lower"),
            multiply_into_delta(LaurentPoly.z_minus_w(size, e_i), raised),
            DeltaExpr.derivative(size, order, coeff),
        )
        killer = tuple(order[k] + 1 if k == i else 0 for k in range(size))
        reductions.compare(
            dict(inputs, rule="annihilate"),
            multiply_into_delta(LaurentPoly.z_minus_w(size, killer), DeltaExpr.derivative(size, order, coeff)),
            DeltaExpr(size),
        )

        # Res_z ∂^{(j)} δ(z - w) = 0 for j > 0; Res_z δ(z/w) = w; Res_z z^{-1} c(w) = c(w)
        residues.instances += 1
        positive = tuple(j if k != i else max(j, 1) for k, j in enumerate(order))
        got = residue(DeltaExpr.derivative(size, positive, coeff), i, normalized=True)
        residues.compare(dict(inputs, rule="vanish"), got.is_zero(), True)
        literal = residue(DeltaExpr.derivative(size, zero(size), coeff), i)
        expected = coeff * LaurentPoly.w(size, i)
        if size > 1:
            literal = literal.parts.get(zero(size), LaurentPoly(size))
        residues.compare(dict(inputs, rule="delta"), literal, expected)
        shifted = coeff * LaurentPoly.z(size, i, -1)
        residues.compare(dict(inputs, rule="laurent"), residue(shifted, i), coeff)

        # reducing f·g at once or g then f gives the same transform
        confluence.instances += 1
        f, g = _random_poly(rng, size), _random_poly(rng, size)
        d = DeltaExpr.derivative(size, order, coeff)
        confluence.compare(
            inputs,
            fourier_lambda(multiply_into_delta(f * g, d)),
            fourier_lambda(multiply_into_delta(f, multiply_into_delta(g, d))),
        )

    # f(z) δ(z) = f(1) δ(z) in one variable
    unit_rule = CheckRecord("calculus.unit")
    for case in range(cases):
        unit_rule.instances += 1
        f = LaurentPoly(1, {((rng.randint(-3, 3),), (0,)): rng.randint(-3, 3) or 1 for _ in range(3)})
        at_one = sum(f.terms.values(), Fraction(0))
        unit_rule.compare(
            {"case": case},
            multiply_into_delta(f, DeltaExpr.delta(1)).at_unit(),
            DeltaExpr.delta(1).scale(at_one),
        )

    for record in (reductions, residues, confluence, unit_rule):
        report.records.append(_finish(record))
    return report


# Grading
# -----------------------------

def check_grading(cfg, realization=None):
    real = realization or Realization(cfg.params)
    record = CheckRecord("grading")
    if not cfg.params.spec.supported_at_origin_only():
        record.notes.append("skipped: κ is supported away from the origin")
        return CheckReport([_finish(record)])
    size = cfg.size
    vectors = [random_homogeneous_vector(_sampling(cfg, cfg.seed * 1000 + k)) for k in range(cfg.vectors)]
    generators = [(kind, r) for kind in ("E", "F", "H") for r in range(real.n + 1)]
    instances = _limit(list(product(generators, cfg.modes())), cfg, record.check_id)
    for (kind, r), m in instances:
        record.instances += 1
        op = real.mode(kind, r, m)
        for k, v in enumerate(vectors):
            result = real.image(op, v)
            if result.is_zero():
                record.comparisons += 1
                continue
            start = degree(v, size)
            expected = tuple(c - d for c, d in zip(start, m))
            record.compare(
                {"generator": f"{kind}{r}", "m": _mode(m), "vector": k},
                degree(result, size),
                expected,
                v,
            )
    return CheckReport([_finish(record)])


# Chains
# -----------------------------

def _chains_by_bitmask(n):
    out = set()
    for mask in range(1 << (n - 1)):
        picked = tuple(q for q in range(2, n + 1) if mask >> (q - 2) & 1)
        out.add((1,) + picked)
    return out


def check_chains(cfg, sizes=range(2, 7)):
    record = CheckRecord("chains")
    for n in sizes:
        record.instances += 1
        chains = chain_enumerate(n)
        record.compare({"n": n, "what": "count"}, len(chains), 2 ** (n - 1))
        record.compare({"n": n, "what": "set"}, {c.entries for c in chains}, _chains_by_bitmask(n))
    return CheckReport([_finish(record)])


# Mutation guard
# -----------------------------

# Re-run R3 and S4ii against a build whose κ·D term in ρ(E_r) has the wrong sign.
#
# The guard passes when the mutated build is caught. With κ ≡ 0 the κ·D term
# vanishes and the guard is marked insensitive instead.
def mutation_guard(cfg, vectors=None):
    record = CheckRecord("mutation")
    if cfg.params.spec.is_zero():
        record.notes.append("insensitive: κ·D vanishes identically")
        return CheckReport([_finish(record)])
    mutated = replace(cfg, params=replace(cfg.params, mutated=True))
    real = Realization(mutated.params)
    vectors = vectors if vectors is not None else sample_vectors(cfg)

    # R3 only at i = j, without subsampling: the central term lives at m + n = 0
    r3 = CheckRecord("mutation.R3")
    for i in range(real.n + 1):
        for m, nm in product(cfg.modes(), cfg.modes()):
            r3.instances += 1
            for k, v in enumerate(vectors):
                lhs = real.bracket(real.E(i, m), real.F(i, nm), v)
                r3.compare(
                    {"i": i, "j": i, "m": _mode(m), "n": _mode(nm), "vector": k},
                    lhs,
                    _r3_rhs(real, cfg.params.spec, (i, i, m, nm), v),
                    v,
                )
    serre = check_relation("S4ii", mutated, real, vectors)

    caught = r3.failure_count + serre.failure_count
    record.instances = r3.instances + serre.instances
    record.comparisons = r3.comparisons + serre.comparisons
    record.notes.append(f"mutated build failed {r3.failure_count} R3 and {serre.failure_count} S4ii comparisons")
    if not caught:
        record.failure_count = 1
        record.failures.append({"inputs": {"suite": "mutation"}, "expected": "at least one failure", "actual": "0"})
    return CheckReport([_finish(record)])


# Orchestration
# -----------------------------

def run_suites(cfg):
    real = Realization(cfg.params)
    vectors = sample_vectors(cfg)
    report = CheckReport(config=cfg.to_dict())
    for suite in cfg.suites:
        logger.info("running suite %s", suite)
        if suite == "heisenberg":
            report.extend(check_heisenberg(cfg, real, vectors))
        elif suite == "relations":
            report.extend(check_relations(cfg, real, vectors))
            report.records.append(check_h0_display(cfg, real, vectors))
        elif suite == "serre":
            report.extend(check_serre(cfg, real, vectors))
        elif suite == "lemmas":
            report.extend(check_lemmas(cfg, real, vectors))
        elif suite == "calculus":
            report.extend(check_calculus(cfg))
        elif suite == "grading":
            report.extend(check_grading(cfg, real))
        elif suite == "chains":
            report.extend(check_chains(cfg))
        elif suite == "mutation":
            report.extend(mutation_guard(cfg, vectors))
    return report


def report_to_json(report):
    return json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"


def write_report(report, path):
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(report_to_json(report))
