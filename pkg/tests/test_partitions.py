from hypothesis import given, settings
from hypothesis import strategies as st

from kdonaldson.partitions import (YoungDiagram, YoungTuple, arm_leg, enumerate_tuples, partition_count,
                                   partitions, tuple_count)


def test_small_enumerations():
    assert [tuple(Y.columns for Y in t.diagrams) for t in enumerate_tuples(2, 0)] == [((), ())]
    one = enumerate_tuples(2, 1)
    assert [tuple(Y.columns for Y in t.diagrams) for t in one] == [((1,), ()), ((), (1,))]
    assert len(enumerate_tuples(2, 2)) == 5


def test_arm_leg_examples():
    Y = YoungDiagram((2, 1))
    assert arm_leg(Y, Y, (1, 1)) == (1, 1, 0, 0)
    empty = YoungDiagram(())
    a, l, _, _ = arm_leg(empty, empty, (1, 1))
    assert (a, l) == (-1, -1)
    assert arm_leg(Y, empty, (3, 5))[2:] == (4, 2)


def test_columns_must_decrease():
    import pytest
    with pytest.raises(ValueError):
        YoungDiagram((1, 2))


def brute_partition_count(n):
    # coefficient of x^n in prod_k 1/(1 - x^k), by direct series multiplication
    c = [1] + [0] * n
    for k in range(1, n + 1):
        for m in range(k, n + 1):
            c[m] += c[m - k]
    return c[n]


@given(st.integers(0, 30))
@settings(max_examples=100)
def test_partition_counts(n):
    parts = list(partitions(n))
    assert len(parts) == len(set(parts)) == partition_count(n) == brute_partition_count(n)


@given(st.integers(1, 3), st.integers(0, 6))
@settings(max_examples=100, deadline=None)
def test_tuple_counts_match_generating_function(r, n):
    tuples = enumerate_tuples(r, n)
    keys = {tuple(Y.columns for Y in t.diagrams) for t in tuples}
    assert len(keys) == len(tuples) == tuple_count(r, n)
    assert all(t.total_size == n for t in tuples)


@given(st.lists(st.integers(1, 6), max_size=6))
@settings(max_examples=100)
def test_transpose_involution(cols):
    Y = YoungDiagram(tuple(sorted(cols, reverse=True)))
    assert Y.transpose().transpose() == Y
    assert Y.transpose().size == Y.size
    for s in Y.cells():
        i, j = s
        # arm and leg swap under transposition
        assert Y.arm(s) == Y.transpose().leg((j, i))


def test_canonical_order_is_stable():
    a = [tuple(Y.columns for Y in t.diagrams) for t in enumerate_tuples(2, 3)]
    b = [tuple(Y.columns for Y in t.diagrams) for t in enumerate_tuples(2, 3)]
    assert a == b and YoungTuple(()).total_size == 0
