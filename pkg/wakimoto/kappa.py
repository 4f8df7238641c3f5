"""Central cocycle data κ_{m,p}.

A `KappaSpec` is a finitely supported map (m, p) -> Fraction. It is usable
only when, at every support point m, Σ_p m_p κ_{m,p} = 0, and κ_{r,·} is
orthogonal to every m in a decomposition -r = m + n with m, n > 0. The
central element K_{m,l} then acts as multiplication by -κ_{-m,l}.
"""

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction

from sympy import Matrix

from .errors import DimensionError, IndexRangeError, KappaValidationError
from .lattice import OrderScheme, box, check_size, neg, sub

logger = logging.getLogger(__name__)


def parse_rational(raw):
    try:
        return Fraction(str(raw).strip())
    except (TypeError, ValueError, ZeroDivisionError):
        raise KappaValidationError(f"not a rational number: {raw!r}")


def rational_to_str(value):
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class KappaSpec:
    size: int
    entries: tuple = ()
    rows: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        collected = {}
        for (m, p), value in self.entries:
            m = check_size(tuple(m), self.size)
            if not 0 <= p < self.size:
                raise IndexRangeError(f"κ index p={p} outside 0..{self.size - 1}")
            value = Fraction(value)
            collected[(m, p)] = collected.get((m, p), 0) + value
        entries = tuple(sorted((key, v) for key, v in collected.items() if v))
        object.__setattr__(self, "entries", entries)
        rows = {}
        for (m, p), value in entries:
            row = rows.setdefault(m, [Fraction(0)] * self.size)
            row[p] = value
        object.__setattr__(self, "rows", {m: tuple(row) for m, row in rows.items()})

    @classmethod
    def from_mapping(cls, size, mapping):
        return cls(size, tuple(((tuple(m), p), v) for (m, p), v in mapping.items()))

    @classmethod
    def zero(cls, size):
        return cls(size)

    def value(self, m, p):
        if not 0 <= p < self.size:
            raise IndexRangeError(f"κ index p={p} outside 0..{self.size - 1}")
        row = self.rows.get(tuple(m))
        return row[p] if row else Fraction(0)

    def row(self, m):
        return self.rows.get(tuple(m), (Fraction(0),) * self.size)

    def support(self):
        return sorted(self.rows)

    def is_zero(self):
        return not self.rows

    def supported_at_origin_only(self):
        return all(not any(m) for m in self.rows)

    def pairing(self, m, t):
        """Σ_p m_p κ_{t,p}."""
        return sum((c * v for c, v in zip(m, self.row(t))), Fraction(0))

    def restricted(self, modes):
        keep = {tuple(m) for m in modes}
        return KappaSpec(self.size, tuple(e for e in self.entries if e[0][0] in keep))

    def negated(self):
        return KappaSpec(self.size, tuple((key, -v) for key, v in self.entries))


def central_scalar(spec, m, l):
    """Action of K_{m,l}: multiplication by -κ_{-m,l}."""
    check_size(tuple(m), spec.size)
    return -spec.value(neg(m), l)


@dataclass
class KappaReport:
    violations: list = field(default_factory=list)
    methods: dict = field(default_factory=dict)

    @property
    def passed(self):
        return not self.violations

    def to_dict(self):
        return {
            "status": "PASS" if self.passed else "FAIL",
            "methods": dict(sorted(self.methods.items())),
            "violations": self.violations,
        }


def _mode_text(m):
    return ",".join(str(c) for c in m)


def decompositions(r, scheme, radius):
    """Pairs (m, n) with m + n = -r, m > 0, n > 0 and m in the radius box."""
    target = neg(r)
    pairs = []
    for m in box(scheme.size, radius):
        n = sub(target, m)
        if scheme.sign(m) > 0 and scheme.sign(n) > 0:
            pairs.append((m, n))
    return pairs


def validate_kappa(spec, scheme, radius):
    if spec.size != scheme.size:
        raise DimensionError(f"κ has {spec.size} coordinates, the order scheme {scheme.size}")
    report = KappaReport()
    for r in spec.support():
        total = spec.pairing(r, r)
        if total:
            report.violations.append({
                "condition": "eqn1",
                "m": list(r),
                "value": rational_to_str(total),
            })

        pairs = decompositions(r, scheme, radius)
        if not pairs:
            report.methods[_mode_text(r)] = "vacuous"
            continue
        rank = Matrix([list(m) for m, _ in pairs]).rank()
        method = "span" if rank == spec.size else "box"
        report.methods[_mode_text(r)] = method
        # with a spanning set a nonzero row always pairs nonzero with some m
        for m, n in pairs:
            value = spec.pairing(m, r)
            if value:
                report.violations.append({
                    "condition": "eqn2",
                    "method": method,
                    "r": list(r),
                    "m": list(m),
                    "n": list(n),
                    "value": rational_to_str(value),
                })
    if report.passed:
        logger.info("κ with %d support points is valid", len(spec.rows))
    else:
        logger.warning("κ fails validation with %d violations", len(report.violations))
    return report


def require_valid(spec, scheme, radius):
    report = validate_kappa(spec, scheme, radius)
    if not report.passed:
        raise KappaValidationError("κ does not satisfy the cocycle conditions", report=report)
    return spec


# Built-in families
# -----------------------------

def point_at_zero(values):
    values = [parse_rational(v) for v in values]
    size = len(values)
    origin = (0,) * size
    return KappaSpec(size, tuple(((origin, p), v) for p, v in enumerate(values)))


def positive_cone(size, rows, scheme=None):
    scheme = scheme or OrderScheme.uniform(size)
    entries = []
    for m, values in rows.items():
        m = check_size(tuple(m), size)
        if len(values) != size:
            raise DimensionError(f"κ row at {m} has {len(values)} values, expected {size}")
        if scheme.sign(m) <= 0:
            raise KappaValidationError(f"positive-cone support point {m} is not positive")
        values = [parse_rational(v) for v in values]
        if sum(c * v for c, v in zip(m, values)):
            raise KappaValidationError(f"κ row at {m} violates Σ_p m_p κ_(m,p) = 0")
        entries.extend(((m, p), v) for p, v in enumerate(values))
    return KappaSpec(size, tuple(entries))


def builtin_family(name, params, size, scheme=None):
    if name == "point-at-zero":
        if len(params) != size:
            raise DimensionError(f"point-at-zero needs {size} values, got {len(params)}")
        return point_at_zero(params)
    if name == "positive-cone":
        return positive_cone(size, params, scheme)
    raise KappaValidationError(f"unknown κ family {name!r}")


def _int_list(raw):
    return tuple(int(part) for part in raw.split(","))


def parse_builtin(text, size, scheme=None):
    """Parse `point-at-zero:c0,c1` or `positive-cone:m0,m1=v0,v1;...`."""
    name, _, raw = text.partition(":")
    try:
        if name == "point-at-zero":
            params = [part for part in raw.split(",") if part.strip()]
        elif name == "positive-cone":
            params = {}
            for record in filter(None, raw.split(";")):
                mode, _, values = record.partition("=")
                params[_int_list(mode)] = values.split(",")
        else:
            raise KappaValidationError(f"unknown κ family {name!r}")
    except ValueError:
        raise KappaValidationError(f"malformed κ family parameters: {raw!r}")
    return builtin_family(name, params, size, scheme)


# κ files
# -----------------------------

def kappa_to_records(spec):
    return [
        {"m": list(m), "p": p, "value": rational_to_str(v)}
        for (m, p), v in spec.entries
    ]


def kappa_from_records(records, size):
    if not isinstance(records, list):
        raise KappaValidationError("a κ file must hold a JSON list of records")
    entries = []
    for record in records:
        if not isinstance(record, dict) or {"m", "p", "value"} - set(record):
            raise KappaValidationError(f"κ record needs m, p and value: {record!r}")
        try:
            key = (tuple(int(c) for c in record["m"]), int(record["p"]))
        except (TypeError, ValueError):
            raise KappaValidationError(f"κ record needs an integer list m and an integer p: {record!r}")
        entries.append((key, parse_rational(record["value"])))
    return KappaSpec(size, tuple(entries))


def load_kappa(path, size):
    try:
        with open(path, encoding="utf-8") as handle:
            records = json.load(handle)
    except json.JSONDecodeError as exc:
        raise KappaValidationError(f"{path} is not valid JSON: {exc}")
    except UnicodeDecodeError:
        raise KappaValidationError(f"{path} is not UTF-8 text")
    return kappa_from_records(records, size)


def save_kappa(spec, path):
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(kappa_to_records(spec), handle, indent=2, sort_keys=True)
        handle.write("\n")


def resolve_kappa(source, size, scheme=None):
    """`builtin:<family>:<params>` or a path to a κ file."""
    if source.startswith("builtin:"):
        return parse_builtin(source[len("builtin:"):], size, scheme)
    return load_kappa(source, size)
