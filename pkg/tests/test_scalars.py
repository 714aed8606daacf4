"""Tests for exact scalars."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from extlin.core.errors import FieldDivisionError, ScalarParseError, VariantMismatchError
from extlin.core.scalars import (
    I,
    FieldRegistry,
    Gaussian,
    GaussianField,
    RationalField,
    ScalarField,
    add,
    conj,
    format_scalar,
    inv,
    mul,
    parse,
)

rationals = st.fractions(max_denominator=50).filter(lambda q: abs(q.numerator) < 1000)
gaussians = st.builds(Gaussian, rationals, rationals)


class TestParse:
    """Tests for the scalar text grammar."""

    def test_integer(self):
        assert parse("3") == Fraction(3)

    def test_fraction_with_sign(self):
        assert parse("-7/21") == Fraction(-1, 3)

    def test_gaussian(self):
        assert parse("-1/2+2/3i") == Gaussian(Fraction(-1, 2), Fraction(2, 3))

    def test_whitespace_is_skipped(self):
        assert parse(" 1 - 2 i ") == Gaussian(1, -2)

    def test_unicode_minus(self):
        assert parse("−1") == Fraction(-1)

    def test_zero_denominator_offset(self):
        with pytest.raises(ScalarParseError) as info:
            parse("1/0")
        assert info.value.offset == 2

    def test_missing_digits_offset(self):
        with pytest.raises(ScalarParseError) as info:
            parse("abc")
        assert info.value.offset == 0

    def test_offset_counts_utf8_bytes(self):
        with pytest.raises(ScalarParseError) as info:
            parse("−x")
        assert info.value.offset == 3

    def test_missing_i(self):
        with pytest.raises(ScalarParseError) as info:
            parse("1+2")
        assert info.value.offset == 3
        assert info.value.text == "1+2"

    def test_parse_error_is_value_error(self):
        with pytest.raises(ValueError):
            parse("")


class TestFormat:
    """Tests for canonical scalar text."""

    def test_integer(self):
        assert format_scalar(Fraction(4, 2)) == "2"

    def test_fraction(self):
        assert format_scalar(Fraction(-3, 6)) == "-1/2"

    def test_gaussian_negative_imaginary(self):
        assert format_scalar(Gaussian(1, -2)) == "1-2i"

    def test_gaussian_zero_real(self):
        assert format_scalar(Gaussian(0, Fraction(4, 5))) == "0+4/5i"

    @given(gaussians)
    def test_text_is_read_back(self, z):
        assert parse(format_scalar(z)) == z


class TestStrictArithmetic:
    """Tests for the variant-checked operations."""

    def test_mixing_variants_is_refused(self):
        with pytest.raises(VariantMismatchError):
            add(Fraction(1), I)
        with pytest.raises(VariantMismatchError):
            mul(I, Fraction(2))

    def test_inverse_of_zero(self):
        with pytest.raises(FieldDivisionError):
            inv(Fraction(0))
        with pytest.raises(FieldDivisionError):
            inv(Gaussian(0, 0))

    def test_inverse_of_i(self):
        assert inv(I) == Gaussian(0, -1)

    def test_conjugation(self):
        assert conj(Gaussian(1, 2)) == Gaussian(1, -2)
        assert conj(Fraction(5)) == Fraction(5)

    def test_unit_amplitudes(self):
        z = Gaussian(Fraction(3, 5), Fraction(4, 5))
        assert z.norm() == 1

    def test_promoted_gaussian_equals_rational(self):
        assert Gaussian(2, 0) == Fraction(2)
        assert hash(Gaussian(2, 0)) == hash(Fraction(2))


class TestFieldAxioms:
    """Property tests for the field laws."""

    @given(gaussians, gaussians, gaussians)
    def test_distributivity(self, a, b, c):
        assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))

    @given(gaussians, gaussians)
    def test_commutativity(self, a, b):
        assert mul(a, b) == mul(b, a)

    @given(gaussians.filter(bool))
    def test_inverse(self, a):
        assert mul(a, inv(a)) == Gaussian(1, 0)

    @given(rationals.filter(bool))
    def test_rational_inverse(self, q):
        assert mul(q, inv(q)) == 1

    @given(gaussians, gaussians)
    def test_conjugation_is_multiplicative(self, a, b):
        assert conj(mul(a, b)) == mul(conj(a), conj(b))


class TestFieldRegistry:
    """Tests for FieldRegistry."""

    def test_default_fields(self):
        registry = FieldRegistry()
        assert registry.has("Q")
        assert registry.has("Q(i)")
        assert not registry.has("F2")

    def test_field_of(self):
        registry = FieldRegistry()
        assert registry.field_of(Fraction(1, 2)).name == "Q"
        assert registry.field_of(I).name == "Q(i)"

    def test_protocol(self):
        assert isinstance(RationalField(), ScalarField)
        assert isinstance(GaussianField(), ScalarField)

    def test_embed(self):
        assert GaussianField().embed(Fraction(2)) == Gaussian(2, 0)
        with pytest.raises(VariantMismatchError):
            RationalField().embed(I)
