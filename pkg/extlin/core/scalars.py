"""Exact scalars for the ground field.

Two fields are supported: the rationals, whose elements are plain
``fractions.Fraction`` values, and the Gaussian rationals ``Q(i)``, whose
elements are :class:`Gaussian`. The strict API (:func:`add`, :func:`mul`,
:func:`inv`, :func:`conj`) refuses to mix the two variants; the arithmetic
operators on :class:`Gaussian` promote rationals along ``Q ⊂ Q(i)`` so that
matrix code can start from ``Fraction(0)`` and ``Fraction(1)``.

Example usage:
    from extlin.core.scalars import parse, format_scalar, FieldRegistry

    z = parse("-1/2+2/3i")
    format_scalar(z)            # "-1/2+2/3i"

    registry = FieldRegistry()
    registry.get("Q(i)").one    # Gaussian(1, 0)
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Protocol, Union, runtime_checkable

from .errors import FieldDivisionError, ScalarParseError, VariantMismatchError

Rational = Fraction


@dataclass(frozen=True, slots=True)
class Gaussian:
    """An element ``re + im·i`` of the Gaussian rationals."""

    re: Fraction
    im: Fraction

    def __post_init__(self):
        # Accept ints for convenience; store canonical Fractions.
        if not isinstance(self.re, Fraction):
            object.__setattr__(self, "re", Fraction(self.re))
        if not isinstance(self.im, Fraction):
            object.__setattr__(self, "im", Fraction(self.im))

    @staticmethod
    def _lift(other) -> Optional["Gaussian"]:
        if isinstance(other, Gaussian):
            return other
        if isinstance(other, (int, Fraction)):
            return Gaussian(Fraction(other), Fraction(0))
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Gaussian(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return Gaussian(-self.re, -self.im)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Gaussian(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Gaussian(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        """Return ``|z|^2``."""
        return self.re * self.re + self.im * self.im

    def conjugate(self) -> "Gaussian":
        return Gaussian(self.re, -self.im)

    def inverse(self) -> "Gaussian":
        n = self.norm()
        if n == 0:
            raise FieldDivisionError("Cannot invert the zero element")
        return Gaussian(self.re / n, -self.im / n)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other) -> bool:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self) -> int:
        # Agrees with hash(Fraction) on the real line so promoted values compare cleanly.
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        return f"Gaussian({format_rational(self.re)}, {format_rational(self.im)})"


FieldElement = Union[Fraction, Gaussian]

ZERO = Fraction(0)
ONE = Fraction(1)
I = Gaussian(Fraction(0), Fraction(1))


def _variant(a: FieldElement) -> str:
    if isinstance(a, Gaussian):
        return "gaussian"
    if isinstance(a, (Fraction, int)):
        return "rational"
    raise VariantMismatchError(f"Not a field element: {a!r}")


def _same_variant(a: FieldElement, b: FieldElement) -> None:
    va, vb = _variant(a), _variant(b)
    if va != vb:
        raise VariantMismatchError(
            f"Cannot combine {va} {format_scalar(a)} with {vb} {format_scalar(b)}"
        )


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    """Exact sum of two scalars of the same variant."""
    _same_variant(a, b)
    return a + b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    """Exact product of two scalars of the same variant."""
    _same_variant(a, b)
    return a * b


def inv(a: FieldElement) -> FieldElement:
    """Multiplicative inverse; raises FieldDivisionError on zero."""
    if isinstance(a, Gaussian):
        return a.inverse()
    if a == 0:
        raise FieldDivisionError("Cannot invert the zero element")
    return 1 / Fraction(a)


def conj(a: FieldElement) -> FieldElement:
    """Complex conjugation; the identity on rationals."""
    if isinstance(a, Gaussian):
        return a.conjugate()
    _variant(a)
    return a


def neg(a: FieldElement) -> FieldElement:
    return -a


# =============================================================================
# Text form
# =============================================================================


def format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_scalar(a: FieldElement) -> str:
    """Canonical text: ``p``, ``p/q`` or ``a+bi`` / ``a-bi`` for Gaussians."""
    if isinstance(a, Gaussian):
        sign = "-" if a.im < 0 else "+"
        return f"{format_rational(a.re)}{sign}{format_rational(abs(a.im))}i"
    return format_rational(Fraction(a))


_MINUS_SIGNS = ("-", "−")


class _ScalarScanner:
    """Recursive-descent reader for ``±p/q`` and ``±p/q ± r/s i``."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def fail(self, message: str):
        offset = len(self.text[: self.pos].encode("utf-8"))
        raise ScalarParseError(message, self.text, offset)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def sign(self, required: bool) -> int:
        ch = self.peek()
        if ch == "+":
            self.pos += 1
            return 1
        if ch in _MINUS_SIGNS:
            self.pos += 1
            return -1
        if required:
            self.fail("expected '+' or '-'")
        return 1

    def integer(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.fail("expected digits")
        return int(self.text[start:self.pos])

    def rational(self) -> Fraction:
        numerator = self.integer()
        if self.peek() == "/":
            self.pos += 1
            denominator = self.integer()
            if denominator == 0:
                self.pos -= 1
                self.fail("zero denominator")
            return Fraction(numerator, denominator)
        return Fraction(numerator)

    def scalar(self) -> FieldElement:
        real = self.sign(required=False) * self.rational()
        if self.peek() == "":
            return real
        imag = self.sign(required=True) * self.rational()
        if self.peek() != "i":
            self.fail("expected 'i'")
        self.pos += 1
        if self.peek() != "":
            self.fail("unexpected trailing input")
        return Gaussian(real, imag)


def parse(text: str) -> FieldElement:
    """Parse scalar text; raises ScalarParseError with a byte offset."""
    return _ScalarScanner(text).scalar()


# =============================================================================
# Field handlers
# =============================================================================


@runtime_checkable
class ScalarField(Protocol):
    """Protocol for a ground field the engine can compute over.

    Attributes:
        name: Registry key (e.g. "Q", "Q(i)")
        zero: Additive unit
        one: Multiplicative unit
    """

    name: str
    zero: FieldElement
    one: FieldElement

    def contains(self, value: FieldElement) -> bool:
        """Whether ``value`` is an element of this field's variant."""
        ...

    def embed(self, value: FieldElement) -> FieldElement:
        """Coerce an element of a subfield into this field."""
        ...


class RationalField:
    """The rationals, represented by ``Fraction``."""

    name = "Q"
    zero = Fraction(0)
    one = Fraction(1)

    def contains(self, value: FieldElement) -> bool:
        return isinstance(value, (Fraction, int)) and not isinstance(value, bool)

    def embed(self, value: FieldElement) -> FieldElement:
        if not self.contains(value):
            raise VariantMismatchError(f"{format_scalar(value)} is not rational")
        return Fraction(value)


class GaussianField:
    """The Gaussian rationals ``Q(i)`` with conjugation."""

    name = "Q(i)"
    zero = Gaussian(Fraction(0), Fraction(0))
    one = Gaussian(Fraction(1), Fraction(0))

    def contains(self, value: FieldElement) -> bool:
        return isinstance(value, Gaussian)

    def embed(self, value: FieldElement) -> FieldElement:
        if isinstance(value, Gaussian):
            return value
        return Gaussian(Fraction(value), Fraction(0))


class FieldRegistry:
    """Registry of ground fields by name."""

    def __init__(self):
        self._fields: Dict[str, ScalarField] = {}
        self.register(RationalField())
        self.register(GaussianField())

    def register(self, field: ScalarField):
        self._fields[field.name] = field

    def get(self, name: str) -> Optional[ScalarField]:
        return self._fields.get(name)

    def has(self, name: str) -> bool:
        return name in self._fields

    def field_of(self, value: FieldElement) -> ScalarField:
        """The smallest registered field containing ``value``."""
        for field in self._fields.values():
            if field.contains(value):
                return field
        raise VariantMismatchError(f"No registered field contains {value!r}")
