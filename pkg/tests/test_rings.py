"""The coefficient ring catalog: arithmetic, membership, centers."""

import random

import pytest

from skewlab.errors import (
    ClosureViolation,
    NotCentral,
    NotRegular,
    RingMismatch,
    Unsupported,
    UnsupportedKind,
)
from skewlab.rings import (
    ConstraintDomain,
    FieldRing,
    LocalizedRing,
    MatrixRing,
    MatrixSubring,
    PolynomialRing,
    ProductRing,
    example_constrained_ring,
    field_ring,
    membership,
)
from skewlab.scalars import GF, QQ, Fraction, GaussianRational


def _ring_laws(ring, rng, n=25):
    """Sampled associativity, distributivity, and unit laws."""
    for _ in range(n):
        a, b, c = (ring.sample(rng) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert (a + b) * c == a * c + b * c
        assert a + ring.zero() == a
        assert a * ring.one() == a
        assert ring.one() * a == a
        assert a - a == ring.zero()


@pytest.mark.parametrize(
    "make",
    [
        lambda: field_ring("Q"),
        lambda: field_ring("Q(i)"),
        lambda: field_ring("F5"),
        lambda: PolynomialRing(QQ, ["y1", "y2"]),
        lambda: PolynomialRing(GF(2), ["t"], truncate=4),
        lambda: MatrixRing(field_ring("Q"), 2),
        lambda: ProductRing([field_ring("Q"), field_ring("Q")]),
        lambda: example_constrained_ring(),
        lambda: LocalizedRing(example_constrained_ring(), example_constrained_ring().from_int(2)),
    ],
    ids=[
        "Q", "Qi", "F5", "poly", "truncated", "M2", "QxQ", "constrained", "localized",
    ],
)
def test_ring_laws_sampled(make):
    ring = make()
    _ring_laws(ring, random.Random(5))


def test_field_ring_inverse():
    Q = field_ring("Q")
    a = Q.element(Fraction(3, 7))
    assert Q.inverse(a) * a == Q.one()
    assert Q.inverse(Q.zero()) is None


def test_poly_ring_basics():
    P = PolynomialRing(QQ, ["y1", "y2"])
    y1, y2 = P.var("y1"), P.var("y2")
    f = (y1 + y2) ** 2
    assert f == y1 * y1 + 2 * y1 * y2 + y2 * y2
    assert P.total_degree(f) == 2
    assert P.degree_in(f, 0) == 2
    assert P.coefficient_of_power(f, 0, 1) == 2 * y2
    assert P.render(P.zero()) == "0"


def test_truncated_poly():
    T = PolynomialRing(GF(2), ["t"], truncate=4)
    t = T.var("t")
    assert t ** 4 == T.zero()
    assert t ** 3 != T.zero()
    assert (T.one() + t) * (T.one() + t) == T.one() + t * t  # char 2
    # 1 + t is a unit: (1+t)(1+t+t^2+t^3) = 1 + t^4 = 1
    inv = T.inverse(T.one() + t)
    assert inv is not None and inv * (T.one() + t) == T.one()
    assert T.inverse(t) is None


def test_truncation_needs_univariate():
    with pytest.raises(UnsupportedKind):
        PolynomialRing(QQ, ["a", "b"], truncate=3)


def test_matrix_ring_det_and_inverse():
    M2 = MatrixRing(field_ring("Q"), 2)
    a = M2.element([(Fraction(1), Fraction(2)), (Fraction(3), Fraction(5))])
    ainv = M2.inverse(a)
    assert ainv is not None and a * ainv == M2.one() and ainv * a == M2.one()
    sing = M2.element([(Fraction(1), Fraction(2)), (Fraction(2), Fraction(4))])
    assert M2.inverse(sing) is None
    assert not M2.is_regular(sing)


def test_matrix_center_is_scalars():
    M2 = MatrixRing(field_ring("Q"), 2)
    elems, _ = M2.center()
    assert len(elems) == 1
    assert elems[0] == M2.one()


def test_product_ring_components():
    Pr = ProductRing([field_ring("Q"), field_ring("Q(i)")])
    assert Pr.size() == 2
    e0 = Pr.idempotent(0)
    e1 = Pr.idempotent(1)
    assert e0 + e1 == Pr.one()
    assert e0 * e1 == Pr.zero()
    Pr.verify_idempotents()
    a = Pr.embed(0, field_ring("Q").from_int(3))
    assert Pr.support(a) == [0]


def test_product_mixed_characteristic_rejected():
    with pytest.raises(UnsupportedKind):
        ProductRing([field_ring("Q"), field_ring("F5")])


def test_constraint_domain_lattice():
    zq = ConstraintDomain.parse("Z+xQ[x]")
    xq = ConstraintDomain.parse("xQ[x]")
    assert zq.product(xq).label() == "xQ[x]"
    assert zq.contains_domain(zq.product(zq))


def test_constrained_ring_membership():
    R = example_constrained_ring()
    amb = R.ambient
    x = R.poly.var("x")
    assert membership(amb.unit(0, 1), R)  # E12 allowed
    assert not membership(amb.unit(1, 0), R)  # E21 constant in the xQ[x] corner
    assert membership(amb.unit(1, 0, scale=x), R)  # x E21 allowed
    half = amb.unit(0, 0, scale=Fraction(1, 2))
    assert not membership(half, R)  # constants must be integers


def test_closure_violation_detected():
    # allowing constants in the lower-left corner breaks closure
    with pytest.raises(ClosureViolation):
        MatrixSubring(2, [["Z", "Z"], ["Z", "Z+xQ[x]"]])


def test_constrained_ring_arithmetic_stays_inside():
    R = example_constrained_ring()
    rng = random.Random(9)
    for _ in range(30):
        a, b = R.sample(rng), R.sample(rng)
        assert membership(R.to_ambient(a * b), R)
        assert membership(R.to_ambient(a + b), R)


def test_localized_ring_reduction():
    R = example_constrained_ring()
    L = LocalizedRing(R, R.from_int(2))
    two = L.embed(R.from_int(2))
    # 2/2 reduces to 1
    assert two * L.element((R.one(), 1)) == L.one()
    assert L.render(L.one())


def test_localized_inverse_of_embedded_u_power():
    R = example_constrained_ring()
    L = LocalizedRing(R, R.from_int(2))
    four = L.embed(R.from_int(4))
    inv = L.inverse(four)
    assert inv is not None and inv * four == L.one()


def test_localized_non_unit_is_honest():
    R = example_constrained_ring()
    L = LocalizedRing(R, R.from_int(2))
    e12 = L.embed(R.from_ambient(R.ambient.unit(0, 1)))
    with pytest.raises(Unsupported):
        L.inverse(e12)


def test_localization_guards():
    R = example_constrained_ring()
    x_e21 = R.from_ambient(R.ambient.unit(1, 0, scale=R.poly.var("x")))
    with pytest.raises(NotCentral):
        LocalizedRing(R, x_e21)
    Pr = ProductRing([field_ring("Q"), field_ring("Q")])
    e0 = Pr.idempotent(0)  # central zero divisor
    with pytest.raises(NotRegular):
        LocalizedRing(Pr, e0)


def test_gaussian_field_ring_center_and_basis():
    Qi = field_ring("Q(i)")
    elems, _ = Qi.center()
    basis = Qi.basis()
    assert len(basis) == 2
    v = Qi.to_vector(Qi.element(GaussianRational(Fraction(1, 2), 3)))
    assert v == [Fraction(1, 2), Fraction(3)]
    assert Qi.from_vector(v) == Qi.element(GaussianRational(Fraction(1, 2), 3))


def test_elements_of_different_rings_do_not_mix():
    Q = field_ring("Q")
    P = PolynomialRing(QQ, ["y1"])
    with pytest.raises(RingMismatch):
        Q.one() + P.one()


def test_render_is_deterministic():
    P = PolynomialRing(QQ, ["y1", "y2"])
    f = P.var("y2") * 3 - P.var("y1") ** 2
    assert P.render(f) == P.render(P.var("y2") * 3 - P.var("y1") ** 2)
    M2 = MatrixRing(field_ring("Q"), 2)
    assert M2.render(M2.unit(0, 1)) == "[[0, 1], [0, 0]]"
