from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from wakimoto.errors import ContractViolation, IndexRangeError
from wakimoto.fock import FockVector, SamplingConfig, random_vector, x_var, y_var
from wakimoto.formalcalc import LaurentPoly
from wakimoto.kappa import KappaSpec
from wakimoto.lattice import OrderScheme, add, box, neg
from wakimoto.operators import (
    EvalContext,
    SummableOperator,
    XDer,
    XMul,
    YDer,
    YMul,
    Scalar,
    a,
    apply_primitive,
    apply_summable,
    astar,
    commutator_apply,
    identity_operator,
    kappaD_astar_modes,
    kd_astar,
    lift,
    phi_b,
    term,
)


@pytest.fixture
def ctx(scheme, kappa_origin):
    return EvalContext(2, scheme, kappa_origin, (Fraction(-3), Fraction(1), Fraction(2)))


def x12(m):
    return FockVector.variable(x_var(1, 2, m))


def test_primitive_examples():
    v = x12((0, 0))
    assert apply_primitive(XMul(1, 2, (1, 0)), FockVector.constant()) == x12((1, 0)).scale(-1)
    assert apply_primitive(XDer(1, 2, (0, 0)), v) == FockVector.constant()
    assert apply_primitive(XDer(1, 2, (-1, 0)), x12((1, 0))) == FockVector.constant()
    assert apply_primitive(Scalar("1/2"), v) == v.scale(Fraction(1, 2))
    y = FockVector.variable(y_var(1, (0, 1)))
    assert apply_primitive(YMul(1, (0, 1)), FockVector.constant()) == y
    assert apply_primitive(YDer(1, (0, 1)), y) == FockVector.constant()


def test_y_operators_need_a_positive_mode():
    with pytest.raises(ContractViolation):
        apply_primitive(YDer(1, (0, 0)), FockVector.constant())
    with pytest.raises(ContractViolation):
        apply_primitive(YMul(1, (-1, 0)), FockVector.constant())


def test_number_operator_moves_the_mode(ctx):
    q = (1, -1)
    for m in box(2, 1):
        op = SummableOperator((term(1, a(1, 2), astar(1, 2)),), m)
        assert apply_summable(op, x12(q), ctx) == x12(add(m, q)).scale(-1)


def test_two_derivations_fix_the_total_mode(ctx):
    v = FockVector.from_monomial([(x_var(1, 2, (1, 0)), 1), (x_var(1, 3, (0, 1)), 1)])
    for m in box(2, 1):
        op = SummableOperator((term(1, astar(1, 2), astar(1, 3)),), m)
        expected = FockVector.constant() if m == (-1, -1) else FockVector()
        assert apply_summable(op, v, ctx) == expected


def test_pure_derivations_annihilate_the_vacuum(ctx):
    op = SummableOperator((term(1, astar(1, 2)), term(1, kd_astar(1, 3))), (0, 0))
    assert apply_summable(op, FockVector.constant(), ctx).is_zero()


def test_identity_operator(ctx):
    v = x12((1, 0))
    assert apply_summable(identity_operator(2), v, ctx) == v
    assert apply_summable(identity_operator(2, coeff=3), v, ctx) == v.scale(3)


def test_commutator_of_a_and_astar(ctx):
    v = x12((0, 0))
    assert commutator_apply(lift(a(1, 2), (1, 0)), lift(astar(1, 2), (-1, 0)), v, ctx) == v
    assert commutator_apply(lift(a(1, 2), (1, 0)), lift(astar(1, 2), (0, 0)), v, ctx).is_zero()
    same = lift(a(1, 2), (1, 0))
    assert commutator_apply(same, same, v, ctx).is_zero()


def test_contract_checked_at_construction():
    with pytest.raises(ContractViolation):
        term(1, a(1, 2), a(1, 3))
    with pytest.raises(ContractViolation):
        term(1, astar(1, 2), a(1, 2))
    with pytest.raises(ContractViolation):
        term(1, a(1, 2), phi_b(1))
    # a derivation in another variable may sit to the left
    term(1, astar(1, 3), a(1, 2))


def test_index_ranges():
    with pytest.raises(IndexRangeError):
        term(1, a(2, 2)).check_indices(2)
    with pytest.raises(IndexRangeError):
        term(1, phi_b(3)).check_indices(2)
    with pytest.raises(ContractViolation):
        lift(a(1, 2), (0, 0)) + lift(a(1, 2), (1, 0))


def test_term_text():
    assert term(-2, a(1, 2), astar(1, 3), kd_astar(1, 2)).to_text() == "-2 a[1,2] a*[1,3] kD.a*[1,2]"
    assert term(1, phi_b(2)).to_text() == "+1 Phi(b[2])"


def test_kappa_d_modes_examples(kappa_origin):
    assert kappaD_astar_modes(kappa_origin, 1, 2, (1, 0)) == [(Fraction(-1), XDer(1, 2, (1, 0)))]
    assert kappaD_astar_modes(kappa_origin, 1, 2, (0, 0)) == []
    cone = KappaSpec.from_mapping(2, {((1, 1), 0): 1, ((1, 1), 1): -1})
    assert kappaD_astar_modes(cone, 1, 2, (0, 0)) == []


def kd_modes_by_series(spec, m, window):
    """Mode m of κ(w)·D a*(w), read off from Laurent polynomials in one set of variables."""
    size = spec.size
    out = {}
    for s in window:
        series_term = LaurentPoly.monomial(size, zexp=neg(s))
        for t in spec.support():
            for p in range(size):
                kp = spec.value(t, p)
                if not kp:
                    continue
                image = LaurentPoly.monomial(size, zexp=t, coeff=kp) * series_term.euler(p)
                c = image.coefficient(neg(m))
                if c:
                    out[s] = out.get(s, 0) + c
    return {s: c for s, c in out.items() if c}


@pytest.mark.parametrize("m", [(0, 0), (1, 0), (-1, 2), (2, -1)])
def test_kappa_d_modes_match_series(m):
    spec = KappaSpec.from_mapping(2, {
        ((0, 0), 0): 2, ((0, 0), 1): -1,
        ((1, 1), 0): 1, ((1, 1), 1): -1,
        ((2, 0), 1): 3,
    })
    window = box(2, 4)
    expected = kd_modes_by_series(spec, m, window)
    got = {op.mode: c for c, op in kappaD_astar_modes(spec, 1, 2, m)}
    assert got == expected


def test_kappa_d_action_on_a_variable(ctx):
    v = x12((1, 0))
    # only t = 0 contributes: mode -q - 0 with coefficient Σ q_p κ_{0,p} = 1
    assert apply_summable(lift(kd_astar(1, 2), (-1, 0)), v, ctx) == FockVector.constant()
    assert apply_summable(lift(kd_astar(1, 2), (0, 0)), v, ctx).is_zero()


def test_phi_b_examples(ctx):
    vacuum = FockVector.constant()
    assert apply_summable(lift(phi_b(1), (0, 0)), vacuum, ctx) == vacuum.scale(-1)
    assert apply_summable(lift(phi_b(2), (0, -1)), vacuum, ctx) == FockVector.variable(y_var(2, (0, 1)))
    y = FockVector.variable(y_var(1, (1, 0)))
    # -2 Σ_p m_p κ_{0,p} with m = (1, 0)
    assert apply_summable(lift(phi_b(1), (1, 0)), y, ctx) == vacuum.scale(-2)
    assert apply_summable(lift(phi_b(2), (1, 0)), y, ctx) == vacuum


def sampled(seed):
    return random_vector(SamplingConfig(n=2, size=2, scheme=OrderScheme.uniform(2), seed=seed))


OPERATORS = [
    SummableOperator((term(1, a(1, 2), astar(1, 2), astar(1, 3)), term(-1, astar(2, 3), phi_b(2))), (1, 0)),
    SummableOperator((term(2, kd_astar(1, 3)), term(1, a(1, 3))), (0, -1)),
    SummableOperator((term(-1, astar(1, 2), astar(2, 3), phi_b(1)),), (0, 0)),
]


@settings(max_examples=30)
@given(st.integers(0, 5000), st.integers(0, 5000), st.sampled_from(OPERATORS), st.fractions(-3, 3, max_denominator=3))
def test_application_is_linear(seed_u, seed_v, op, c):
    ctx = EvalContext(2, OrderScheme.uniform(2), KappaSpec.from_mapping(2, {((0, 0), 0): 1, ((0, 0), 1): -1}), ())
    u, v = sampled(seed_u), sampled(seed_v)
    assert apply_summable(op, u + v.scale(c), ctx) == apply_summable(op, u, ctx) + apply_summable(op, v, ctx).scale(c)
