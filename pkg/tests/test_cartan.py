import pytest

from wakimoto.cartan import CartanMatrix, cartan_entry
from wakimoto.errors import IndexRangeError


def test_entries_for_n_2():
    cartan = CartanMatrix(2)
    assert cartan.entry(0, 0) == 2
    assert cartan.entry(0, 2) == -1
    assert cartan.entry(2, 0) == -1
    assert cartan.entry(1, 2) == -1


def test_non_adjacent_entries_vanish():
    assert cartan_entry(4, 1, 3) == 0
    assert cartan_entry(4, 0, 2) == 0
    assert cartan_entry(4, 4, 0) == -1


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_symmetric_with_zero_row_sums(n):
    cartan = CartanMatrix(n)
    for i in range(n + 1):
        assert sum(cartan.entry(i, j) for j in range(n + 1)) == 0
        for j in range(n + 1):
            assert cartan.entry(i, j) == cartan.entry(j, i)


def test_pairs_cover_off_diagonal():
    cartan = CartanMatrix(3)
    adjacent = set(cartan.adjacent_pairs())
    orthogonal = set(cartan.orthogonal_pairs())
    assert (0, 1) in adjacent and (3, 0) in adjacent
    assert orthogonal == {(0, 2), (2, 0), (1, 3), (3, 1)}
    assert len(adjacent) + len(orthogonal) == 4 * 3


def test_n_2_has_no_orthogonal_pairs():
    assert CartanMatrix(2).orthogonal_pairs() == []


def test_rejects_small_rank_and_bad_indices():
    with pytest.raises(IndexRangeError):
        CartanMatrix(1)
    with pytest.raises(IndexRangeError):
        CartanMatrix(2).entry(3, 0)


@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_finite_block_is_a_second_difference(n):
    # -A_ij = δ_{j,i-1} - 2δ_ij + δ_{j,i+1} on 1..n
    cartan = CartanMatrix(n)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            delta = int(j == i - 1) - 2 * int(j == i) + int(j == i + 1)
            assert -cartan.entry(i, j) == delta
