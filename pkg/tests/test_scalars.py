"""Exact scalar arithmetic: rationals, prime fields, Q(i)."""

import random

import pytest

from skewlab.scalars import (
    GF,
    QI,
    QQ,
    Fraction,
    GaussianRational,
    PrimeFieldElement,
    field_by_name,
    is_dyadic,
)
from skewlab.errors import BadLiteral


def test_prime_field_arithmetic():
    F5 = GF(5)
    a = F5.from_int(3)
    b = F5.from_int(4)
    assert a + b == F5.from_int(2)
    assert a * b == F5.from_int(2)
    assert -a == F5.from_int(2)
    assert a - b == F5.from_int(4)
    assert (a / b) * b == a


def test_prime_field_inverse_and_fermat():
    F7 = GF(7)
    for v in range(1, 7):
        e = F7.from_int(v)
        assert e * e.inverse() == F7.one()
        # Fermat: v^6 = 1 mod 7
        p = F7.one()
        for _ in range(6):
            p = p * e
        assert p == F7.one()


def test_prime_field_zero_inverse_raises():
    with pytest.raises(ZeroDivisionError):
        GF(3).zero().inverse()


def test_prime_field_int_coercion():
    F5 = GF(5)
    assert F5.from_int(3) + 4 == F5.from_int(2)
    assert 2 * F5.from_int(4) == F5.from_int(3)
    assert F5.from_int(12) == F5.from_int(2)


def test_prime_fields_do_not_mix():
    from skewlab.errors import RingMismatch

    with pytest.raises(RingMismatch):
        GF(3).from_int(1) + GF(5).from_int(1)


def test_gaussian_arithmetic():
    i = GaussianRational(0, 1)
    assert i * i == GaussianRational(-1, 0)
    z = GaussianRational(Fraction(1, 2), Fraction(3, 2))
    w = GaussianRational(2, -1)
    assert z + w == GaussianRational(Fraction(5, 2), Fraction(1, 2))
    assert z * w == GaussianRational(Fraction(5, 2), Fraction(5, 2))


def test_gaussian_inverse_and_conjugate():
    rng = random.Random(3)
    for _ in range(25):
        z = GaussianRational(
            Fraction(rng.randint(-9, 9), rng.randint(1, 9)),
            Fraction(rng.randint(-9, 9), rng.randint(1, 9)),
        )
        if not z:
            continue
        assert z * z.inverse() == GaussianRational(1, 0)
        # z * conj(z) is the rational norm
        n = z * z.conjugate()
        assert n.im == 0 and n.re > 0


def test_field_by_name():
    assert field_by_name("Q") is QQ
    assert field_by_name("Q(i)") is QI
    assert field_by_name("F2").char == 2
    assert field_by_name("F_7").char == 7
    with pytest.raises(BadLiteral):
        field_by_name("R")


def test_field_coerce():
    assert QQ.coerce(3) == Fraction(3)
    assert QI.coerce(Fraction(1, 2)) == GaussianRational(Fraction(1, 2), 0)
    F3 = GF(3)
    assert F3.coerce(5) == F3.from_int(2)


def test_is_dyadic():
    assert is_dyadic(Fraction(3, 8))
    assert is_dyadic(Fraction(7))
    assert is_dyadic(Fraction(-1, 2))
    assert not is_dyadic(Fraction(1, 3))
    assert not is_dyadic(Fraction(5, 6))
