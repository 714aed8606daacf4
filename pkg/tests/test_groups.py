"""Tests for finite groups."""

import itertools

import pytest

from extlin.core.errors import GroupLawError
from extlin.core.groups import (
    cyclic,
    describe,
    direct_product,
    from_table,
    generated_subgroup,
    klein_four,
    left_cosets,
    sign_character,
    subgroup,
    subgroups,
    symmetric,
    trivial_group,
)


class TestConstruction:
    """Tests for table validation."""

    def test_cyclic(self):
        g = cyclic(5)
        assert g.order == 5
        assert g.unit == 0
        assert g.inv(2) == 3

    def test_symmetric_is_not_abelian(self):
        s3 = symmetric(3)
        assert s3.order == 6
        assert not s3.is_abelian()
        assert s3.unit == (0, 1, 2)

    def test_direct_product(self):
        g = direct_product(cyclic(2), symmetric(3))
        assert g.order == 12
        assert g.name == "Z2xS3"
        assert g.mul((1, (1, 0, 2)), (1, (1, 0, 2))) == (0, (0, 1, 2))

    def test_klein_four(self):
        v = klein_four()
        assert v.is_abelian()
        assert all(v.mul(a, a) == v.unit for a in v.elements)

    def test_from_table(self):
        g = from_table(["e", "a"], [["e", "a"], ["a", "e"]], name="C2")
        assert g.unit == "e"
        assert g.inv("a") == "a"

    def test_missing_product(self):
        with pytest.raises(GroupLawError) as info:
            from_table([0, 1], [[0, 1], [1, 7]])
        assert info.value.location == ("table", 1, 1)

    def test_associativity_failure(self):
        with pytest.raises(GroupLawError) as info:
            from_table([0, 1, 2], [[0, 1, 2], [1, 2, 0], [2, 0, 0]])
        assert info.value.location[0] == "table"
        assert "Associativity" in info.value.message

    def test_no_unit(self):
        with pytest.raises(GroupLawError):
            from_table([0, 1], [[1, 1], [1, 1]])

    def test_empty_group_rejected(self):
        with pytest.raises(GroupLawError):
            from_table([], [])

    def test_trivial_group(self):
        assert trivial_group().order == 1


class TestSubgroups:
    """Tests for subgroup enumeration and cosets."""

    @pytest.mark.parametrize(
        "group,count",
        [(symmetric(3), 6), (cyclic(4), 3), (klein_four(), 5), (cyclic(1), 1)],
    )
    def test_subgroup_count(self, group, count):
        assert len(subgroups(group)) == count

    def test_generated_subgroup(self):
        assert generated_subgroup(cyclic(6), [2]) == (0, 2, 4)

    def test_subgroup_is_group(self):
        s3 = symmetric(3)
        h = subgroup(s3, generated_subgroup(s3, [(1, 2, 0)]))
        assert h.order == 3
        assert h.is_abelian()

    def test_left_cosets_partition(self):
        s3 = symmetric(3)
        h = generated_subgroup(s3, [(1, 0, 2)])
        cosets = left_cosets(s3, h)
        assert len(cosets) == 3
        assert sorted(itertools.chain.from_iterable(cosets)) == sorted(s3.elements)


class TestSignCharacter:
    """Tests for sign_character."""

    def test_is_multiplicative_on_s3(self):
        s3 = symmetric(3)
        sign = sign_character(s3)
        for a, b in itertools.product(s3.elements, repeat=2):
            assert sign[s3.mul(a, b)] == sign[a] * sign[b]

    def test_transposition_is_odd(self):
        assert sign_character(symmetric(3))[(1, 0, 2)] == -1

    def test_even_cyclic(self):
        assert sign_character(cyclic(4)) == {0: 1, 1: -1, 2: 1, 3: -1}

    def test_odd_cyclic_is_trivial(self):
        assert set(sign_character(cyclic(3)).values()) == {1}


def test_describe():
    assert describe(cyclic(3)) == {"name": "Z3", "order": 3, "abelian": True}
