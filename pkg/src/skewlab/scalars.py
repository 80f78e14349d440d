"""Exact scalar arithmetic: rationals, Gaussian rationals, prime fields.

Every scalar is kept in a canonical form so == is decidable equality:
Fraction reduces itself, prime-field values live in [0, p), Gaussian
rationals are pairs of reduced Fractions.  Floats never appear.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

from .errors import BadLiteral, RingMismatch


class PrimeFieldElement:
    """Residue mod p with field arithmetic; p must be prime."""

    __slots__ = ("p", "v")

    def __init__(self, p: int, v: int) -> None:
        self.p = p
        self.v = v % p

    def _coerce(self, other) -> "PrimeFieldElement":
        if isinstance(other, PrimeFieldElement):
            if other.p != self.p:
                raise RingMismatch(f"cannot mix F_{self.p} with F_{other.p}")
            return other
        if isinstance(other, int):
            return PrimeFieldElement(self.p, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return PrimeFieldElement(self.p, self.v + o.v)

    __radd__ = __add__

    def __neg__(self):
        return PrimeFieldElement(self.p, -self.v)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return PrimeFieldElement(self.p, self.v - o.v)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return PrimeFieldElement(self.p, o.v - self.v)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return PrimeFieldElement(self.p, self.v * o.v)

    __rmul__ = __mul__

    def inverse(self) -> "PrimeFieldElement":
        if self.v == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.p}")
        return PrimeFieldElement(self.p, pow(self.v, self.p - 2, self.p))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def __eq__(self, other):
        if isinstance(other, int):
            return self.v == other % self.p
        return (
            isinstance(other, PrimeFieldElement)
            and other.p == self.p
            and other.v == self.v
        )

    def __hash__(self):
        return hash(("Fp", self.p, self.v))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return str(self.v)


class GaussianRational:
    """a + b*i with rational a, b."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0) -> None:
        self.re = Fraction(re)
        self.im = Fraction(im)

    def _coerce(self, other) -> "GaussianRational":
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def inverse(self) -> "GaussianRational":
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("0 has no inverse in Q(i)")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash(("Qi", self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __repr__(self):
        return render_scalar(self)


Scalar = Union[Fraction, GaussianRational, PrimeFieldElement]


class ScalarField:
    """Descriptor for the exact fields scalars are drawn from."""

    def __init__(self, name: str, char: int, dim_over_prime: int) -> None:
        self.name = name
        self.char = char
        self.dim_over_prime = dim_over_prime

    def zero(self) -> Scalar:
        return self.from_int(0)

    def one(self) -> Scalar:
        return self.from_int(1)

    def from_int(self, n: int) -> Scalar:
        raise NotImplementedError

    def coerce(self, v) -> Scalar:
        raise NotImplementedError

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return isinstance(other, ScalarField) and other.name == self.name

    def __hash__(self):
        return hash(self.name)


class _RationalField(ScalarField):
    def __init__(self):
        super().__init__("Q", 0, 1)

    def from_int(self, n: int) -> Fraction:
        return Fraction(n)

    def coerce(self, v) -> Fraction:
        if isinstance(v, Fraction):
            return v
        if isinstance(v, int):
            return Fraction(v)
        if isinstance(v, GaussianRational) and v.im == 0:
            return v.re
        raise RingMismatch(f"{v!r} is not a rational scalar")


class _GaussianField(ScalarField):
    def __init__(self):
        super().__init__("Q(i)", 0, 2)

    def from_int(self, n: int) -> GaussianRational:
        return GaussianRational(n, 0)

    def coerce(self, v) -> GaussianRational:
        if isinstance(v, GaussianRational):
            return v
        if isinstance(v, (int, Fraction)):
            return GaussianRational(v, 0)
        raise RingMismatch(f"{v!r} is not a Gaussian rational")


class PrimeField(ScalarField):
    def __init__(self, p: int) -> None:
        if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
            raise BadLiteral(f"{p} is not prime")
        super().__init__(f"F_{p}", p, 1)
        self.p = p

    def from_int(self, n: int) -> PrimeFieldElement:
        return PrimeFieldElement(self.p, n)

    def coerce(self, v) -> PrimeFieldElement:
        if isinstance(v, PrimeFieldElement):
            if v.p != self.p:
                raise RingMismatch(f"F_{v.p} value in F_{self.p} context")
            return v
        if isinstance(v, int):
            return PrimeFieldElement(self.p, v)
        if isinstance(v, Fraction):
            if v.denominator % self.p == 0:
                raise RingMismatch(f"{v} has no image in F_{self.p}")
            return PrimeFieldElement(
                self.p, v.numerator * pow(v.denominator, self.p - 2, self.p)
            )
        raise RingMismatch(f"{v!r} is not an F_{self.p} scalar")


QQ = _RationalField()
QI = _GaussianField()

_prime_fields: dict[int, PrimeField] = {}


def GF(p: int) -> PrimeField:
    if p not in _prime_fields:
        _prime_fields[p] = PrimeField(p)
    return _prime_fields[p]


def field_by_name(name: str) -> ScalarField:
    if name in ("Q", "QQ"):
        return QQ
    if name in ("Q(i)", "Qi", "QI"):
        return QI
    if name.startswith("F_"):
        return GF(int(name[2:]))
    if name.startswith("F") and name[1:].isdigit():
        return GF(int(name[1:]))
    raise BadLiteral(f"unknown field {name!r}")


def is_dyadic(q: Fraction) -> bool:
    """True iff q = n / 2^k, the Z[1/2] membership test."""
    d = q.denominator
    return d & (d - 1) == 0


def is_integer(q: Fraction) -> bool:
    return q.denominator == 1


def render_scalar(s: Scalar) -> str:
    if isinstance(s, Fraction):
        return str(s)
    if isinstance(s, PrimeFieldElement):
        return str(s.v)
    if isinstance(s, GaussianRational):
        if not s:
            return "0"
        parts = []
        if s.re != 0:
            parts.append(str(s.re))
        if s.im != 0:
            if s.im == 1:
                im = "i"
            elif s.im == -1:
                im = "-i"
            else:
                im = f"{s.im}i"
            if parts and not im.startswith("-"):
                parts.append("+" + im)
            else:
                parts.append(im)
        return "".join(parts)
    raise RingMismatch(f"not a scalar: {s!r}")
