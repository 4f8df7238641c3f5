import pytest
from hypothesis import given, strategies as st

from wakimoto.errors import DimensionError
from wakimoto.lattice import OrderScheme, add, box, neg, order_sign, positive_part, theta, unit, zero

modes = st.tuples(st.integers(-6, 6), st.integers(-6, 6))
weights = st.sampled_from([OrderScheme.uniform(2), OrderScheme.ramp(2), OrderScheme(("1/2", "3"))])


def test_sign_examples():
    scheme = OrderScheme.uniform(2)
    assert order_sign((0, 0), scheme) == 0
    assert order_sign((2, -1), scheme) == 1
    # weighted sum ties break on the first nonzero coordinate
    assert order_sign((1, -1), scheme) == 1
    assert order_sign((-1, 1), scheme) == -1


def test_ramp_weights_change_the_order():
    # 2·1 + (-1)·2 = 0, so the tie break decides
    assert order_sign((2, -1), OrderScheme.ramp(2)) == 1
    assert order_sign((1, -1), OrderScheme.ramp(2)) == -1


def test_theta_is_indicator_of_positive_cone():
    scheme = OrderScheme.uniform(2)
    assert theta((0, 0), scheme) == 0
    assert theta((0, 1), scheme) == 1
    assert theta((0, -1), scheme) == 0


def test_box_is_lexicographic():
    assert box(1, 1) == [(-1,), (0,), (1,)]
    assert len(box(2, 1)) == 9
    assert box(2, 1)[0] == (-1, -1)
    assert box(2, 0) == [(0, 0)]


def test_positive_part_excludes_zero():
    scheme = OrderScheme.uniform(1)
    assert positive_part(box(1, 2), scheme) == [(1,), (2,)]


def test_wrong_length_is_rejected():
    with pytest.raises(DimensionError):
        OrderScheme.uniform(2).sign((1, 0, 0))
    with pytest.raises(DimensionError):
        OrderScheme(())


def test_unit_and_zero():
    assert unit(3, 1) == (0, 1, 0)
    assert zero(2) == (0, 0)


@given(weights, modes)
def test_sign_is_antisymmetric(scheme, m):
    assert scheme.sign(neg(m)) == -scheme.sign(m)


@given(weights, modes)
def test_only_zero_has_sign_zero(scheme, m):
    assert (scheme.sign(m) == 0) == (m == (0, 0))


@given(weights, modes, modes)
def test_positive_cone_is_closed_under_addition(scheme, m, n):
    if scheme.sign(m) > 0 and scheme.sign(n) > 0:
        assert scheme.sign(add(m, n)) > 0


@given(weights, modes)
def test_exactly_one_of_theta_m_and_theta_minus_m_for_nonzero(scheme, m):
    if m != (0, 0):
        assert theta(m, scheme) + theta(neg(m), scheme) == 1
