import pytest

from strictfhs.cdm import CDM, build_homogeneous_cdm, verify_cdm
from strictfhs.errors import PreconditionViolated


def test_w5_t3_rows():
    D = build_homogeneous_cdm(5, 3)
    assert D.entries == tuple(tuple(i * j % 5 for j in range(5)) for i in (1, 2, 3))
    assert verify_cdm(D)


def test_single_row():
    D = build_homogeneous_cdm(7, 1)
    assert D.entries == (tuple(range(7)),)
    assert verify_cdm(D)


def test_w9_t2():
    assert verify_cdm(build_homogeneous_cdm(9, 2))


def test_w25_t3():
    assert verify_cdm(build_homogeneous_cdm(25, 3))


def test_equal_rows_rejected():
    row = tuple(range(5))
    assert not verify_cdm(CDM(5, 2, (row, row)))


def test_non_permutation_row_rejected():
    assert not verify_cdm(CDM(3, 1, ((0, 0, 1),)))


def test_w1_is_degenerate_but_valid():
    assert verify_cdm(build_homogeneous_cdm(1, 4))


@pytest.mark.parametrize("w,t", [(4, 1), (9, 3), (15, 3), (0, 1)])
def test_preconditions(w, t):
    with pytest.raises(PreconditionViolated):
        build_homogeneous_cdm(w, t)
