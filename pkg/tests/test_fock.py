from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from wakimoto.errors import ContractViolation, DimensionError, IndexRangeError
from wakimoto.fock import (
    FockVector,
    SamplingConfig,
    check_key,
    combine,
    degree,
    random_homogeneous_vector,
    random_vector,
    x_var,
    y_var,
)
from wakimoto.lattice import OrderScheme

SCHEME = OrderScheme.uniform(2)


def sampled(seed, **kwargs):
    return random_vector(SamplingConfig(n=2, size=2, scheme=SCHEME, seed=seed, **kwargs))


vectors = st.integers(0, 10_000).map(sampled)
scalars = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def test_degree_examples():
    x = FockVector.variable(x_var(1, 2, (3, -1)))
    y = FockVector.variable(y_var(1, (2, 0)), power=2)
    assert degree(x, 2) == (-3, 1)
    assert degree(y, 2) == (4, 0)
    assert degree(FockVector.constant(), 2) == (0, 0)
    assert degree(x + y, 2) is None
    assert degree(FockVector(), 2) is None


def test_text_form_is_sorted_and_stable():
    v = FockVector.variable(x_var(1, 2, (0, 0)), coeff=Fraction(-1, 2)) + FockVector.constant(3)
    assert v.to_text() == "3*1 + -1/2*x[1,2](0,0)"
    assert FockVector().to_text() == "0"


def test_derive_and_multiply():
    key = x_var(1, 3, (1, 0))
    v = FockVector.variable(key, power=3, coeff=2)
    assert v.derive(key) == FockVector.variable(key, power=2, coeff=6)
    assert v.derive(x_var(1, 2, (1, 0))).is_zero()
    assert FockVector.constant().multiply_var(key, -1) == FockVector.variable(key, coeff=-1)


def test_support_lists_modes_per_variable():
    v = FockVector.from_monomial([(x_var(1, 2, (1, 0)), 1), (x_var(1, 2, (0, 0)), 2), (y_var(2, (0, 1)), 1)])
    assert v.x_modes(1, 2) == [(0, 0), (1, 0)]
    assert v.x_modes(2, 3) == []
    assert v.y_modes(2) == [(0, 1)]


def test_check_key_contracts():
    check_key(x_var(1, 3, (0, 0)), 2, SCHEME)
    with pytest.raises(IndexRangeError):
        check_key(x_var(2, 2, (0, 0)), 2, SCHEME)
    with pytest.raises(IndexRangeError):
        check_key(y_var(3, (1, 0)), 2, SCHEME)
    with pytest.raises(ContractViolation):
        check_key(y_var(1, (0, 0)), 2, SCHEME)
    with pytest.raises(DimensionError):
        check_key(x_var(1, 2, (0,)), 2, SCHEME)


def test_random_vector_is_deterministic():
    assert sampled(42) == sampled(42)
    assert sampled(42).to_text() == sampled(42).to_text()


def test_random_vector_stays_in_box():
    for seed in range(25):
        v = sampled(seed, radius=1)
        assert not v.is_zero()
        for key in v.support():
            assert all(-1 <= c <= 1 for c in key.mode)
            check_key(key, 2, SCHEME)


def test_single_mode_box_gives_x_variables_at_zero():
    v = sampled(7, modes=((0, 0),), max_monomials=1)
    assert len(v.terms) == 1
    for key in v.support():
        assert key.kind == "x"
        assert key.mode == (0, 0)


def test_empty_box_is_rejected():
    with pytest.raises(DimensionError):
        sampled(0, modes=())


def test_homogeneous_vectors_have_a_degree():
    for seed in range(25):
        v = random_homogeneous_vector(SamplingConfig(n=2, size=2, scheme=SCHEME, seed=seed))
        assert degree(v, 2) is not None


@given(vectors, vectors, vectors)
def test_addition_is_associative_and_commutative(u, v, w):
    assert (u + v) + w == u + (v + w)
    assert u + v == v + u


@given(vectors, scalars, scalars)
def test_scaling_distributes(v, a, b):
    assert v.scale(a + b) == v.scale(a) + v.scale(b)
    assert v.scale(a).scale(b) == v.scale(a * b)


@given(vectors)
def test_additive_inverse(v):
    assert (v - v).is_zero()
    assert v + (-v) == FockVector()
    assert v.scale(0).is_zero()


@given(vectors, vectors, scalars, scalars)
def test_combine_matches_scaled_sums(u, v, a, b):
    assert combine([(u, a), (v, b)]) == u.scale(a) + v.scale(b)
    assert combine([(u, 1), (u, -1)]).is_zero()
    assert combine([]) == FockVector()


def test_equal_vectors_hash_alike():
    u = sampled(7)
    v = FockVector(dict(u.terms))
    assert u == v
    assert hash(u) == hash(v)
    assert {u: 1}[v] == 1
