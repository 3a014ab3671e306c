import pytest
from hypothesis import given, strategies as st

from xwitness.exceptions import InvalidBipartitionError
from xwitness.multiindex import (
    MultiIndex,
    PartySet,
    bar,
    canonical_rep,
    complement_position,
    diamond,
    enumerate_b0,
    enumerate_bipartitions,
    flip_on,
    parse_position,
    position_string,
)

ns = st.integers(1, 8)


def test_partyset_basics():
    S = PartySet.of(4, [1, 3])
    assert S.members == (1, 3)
    assert 3 in S and 2 not in S
    assert len(S) == 2
    assert str(S) == "{1,3}"
    assert S.complement().members == (2, 4)
    assert not S.is_trivial
    assert PartySet.full(4).is_trivial and PartySet.empty(4).is_trivial
    # party 1 is the most significant bit of a dense position
    assert PartySet.of(3, [1]).dense_mask == 0b100
    assert PartySet.of(3, [3]).dense_mask == 0b001


@pytest.mark.parametrize("bad", [[0], [5], [-1]])
def test_partyset_rejects_out_of_range(bad):
    with pytest.raises(ValueError):
        PartySet.of(4, bad)


def test_multiindex_string_round_trip():
    i = MultiIndex.from_string("0110")
    assert str(i) == "0110"
    assert i.bit(2) == 1 and i.bit(4) == 0
    assert i.position == 0b0110
    assert MultiIndex.from_position(4, 6) == i


def test_diamond_requires_disjoint_supports():
    a = MultiIndex.from_string("1", PartySet.of(3, [1]))
    b = MultiIndex.from_string("01", PartySet.of(3, [2, 3]))
    assert str(diamond(a, b)) == "101"
    with pytest.raises(InvalidBipartitionError):
        diamond(a, MultiIndex.from_string("0", PartySet.of(3, [1])))


def test_bar_and_canonical_rep():
    i = MultiIndex.from_string("101")
    assert str(bar(i)) == "010"
    rep, flipped = canonical_rep(i)
    assert str(rep) == "010" and flipped
    rep, flipped = canonical_rep(MultiIndex.from_string("011"))
    assert str(rep) == "011" and not flipped


def test_enumerations():
    assert [str(i) for i in enumerate_b0(3)] == ["000", "001", "010", "011"]
    splits = enumerate_bipartitions(3)
    assert len(splits) == 3
    for S, T in splits:
        assert 1 in T and 1 not in S and not S.is_trivial
    assert len(enumerate_bipartitions(5)) == 15


def test_position_helpers():
    assert position_string(3, 5) == "101"
    assert parse_position("101", 3) == 5
    assert complement_position(3, 5) == 2
    with pytest.raises(ValueError):
        parse_position("12", 2)


def test_ordering_is_lexicographic():
    labels = ["000", "001", "010", "011", "100"]
    idx = [MultiIndex.from_string(x) for x in reversed(labels)]
    assert [str(i) for i in sorted(idx)] == labels


@given(n=ns, data=st.data())
def test_restrict_diamond_round_trip(n, data):
    p = data.draw(st.integers(0, (1 << n) - 1))
    S = PartySet(n, data.draw(st.integers(0, (1 << n) - 1)))
    i = MultiIndex.from_position(n, p)
    assert diamond(i.restrict(S), i.restrict(S.complement())) == i


@given(n=ns, data=st.data())
def test_flip_on_composes_as_xor(n, data):
    top = (1 << n) - 1
    i = MultiIndex.from_position(n, data.draw(st.integers(0, top)))
    A = PartySet(n, data.draw(st.integers(0, top)))
    B = PartySet(n, data.draw(st.integers(0, top)))
    assert flip_on(flip_on(i, A), B) == flip_on(i, PartySet(n, A.mask ^ B.mask))
    assert flip_on(flip_on(i, A), A) == i
    assert flip_on(i, PartySet.full(n)) == bar(i)
