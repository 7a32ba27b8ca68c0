import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from merolib.exactalg import (
    ArityError,
    CoordinateRing,
    Fq,
    LaurentPoly,
    PoleError,
    brute_force_points,
    count_points,
    enumerate_points,
    evaluate,
    parse_poly,
    poly_op,
)
from merolib.caps import CapExceeded

from .strategies import laurent, polys, small_primes

V = ("x", "y")
x = LaurentPoly.var("x", V)
y = LaurentPoly.var("y", V)


def test_poly_op_examples():
    assert poly_op(x + y, x - y, "add") == 2 * x
    assert poly_op(x, x ** -1, "mul") == 1
    assert poly_op(1 + x * y, 1 - x * y, "mul") == 1 - x**2 * y**2
    with pytest.raises(ValueError):
        poly_op(x, y, "div")


def test_arity_mismatch():
    with pytest.raises(ArityError):
        x + LaurentPoly.var("z", ("z",))


def test_parse_and_print():
    f = parse_poly("x^2*y - 3*x + 1/2", V)
    assert f == x**2 * y - 3 * x + Fraction(1, 2)
    assert str(parse_poly("1 + x*y")) == "x*y + 1"
    assert parse_poly("x^-1", ("x",)) * LaurentPoly.var("x", ("x",)) == 1
    with pytest.raises(ValueError):
        parse_poly("x + z", V)


def test_negative_monomial_power():
    assert (x**2 * y) ** -1 == LaurentPoly.monomial((-2, -1), V)
    assert (x / y) * y == x
    with pytest.raises(ValueError):
        (x + y) ** -1


def test_evaluate_examples():
    assert evaluate(1 + x * y, [1, 2], 7) == 3
    with pytest.raises(PoleError):
        evaluate(LaurentPoly.var("x", ("x",)) ** -1, [0])
    assert evaluate(parse_poly("x^2+1"), [2], 5) == 0
    assert evaluate(x ** -1, [Fraction(2), 1]) == Fraction(1, 2)


def test_fq_arithmetic():
    a = Fq(3, 7)
    assert a * a.inverse() == 1
    assert a ** 6 == 1
    assert (a - 5) == Fq(5, 7)
    with pytest.raises(ZeroDivisionError):
        Fq(0, 7).inverse()


def test_hopf_points():
    ring = CoordinateRing.hopf()
    assert count_points(ring, 3) == 7
    assert enumerate_points(ring, 2) == [(0, 0), (0, 1), (1, 0)]
    assert count_points(ring, 5) == 21


def test_unit_ideal_has_no_points():
    ring = CoordinateRing(V, ("1",))
    assert count_points(ring, 5) == 0


def test_enumeration_cap():
    ring = CoordinateRing(("a", "b", "c"))
    with pytest.raises(CapExceeded):
        enumerate_points(ring, 11, cap=100)


def test_ring_roundtrip():
    ring = CoordinateRing(V, ("x^2 - y",), ("1 + x*y",))
    assert CoordinateRing.from_dict(ring.to_dict()) == ring


@given(laurent(), laurent(), laurent())
def test_ring_axioms(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert (f + g) + h == f + (g + h)
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == 0


@given(laurent(), laurent(), st.tuples(st.integers(1, 6), st.integers(1, 6)), st.sampled_from([7, 11, 13]))
def test_evaluation_is_a_homomorphism(f, g, pt, q):
    assert evaluate(f * g, pt, q) == evaluate(f, pt, q) * evaluate(g, pt, q) % q
    assert evaluate(f + g, pt, q) == (evaluate(f, pt, q) + evaluate(g, pt, q)) % q


@given(polys(max_terms=3), small_primes)
def test_vectorized_count_matches_scalar_loop(f, q):
    f = f * math.lcm(*[c.denominator for c in f.terms.values()], 1)  # integral model
    ring = CoordinateRing(V, (f,), ("1 + x*y",))
    assert enumerate_points(ring, q) == brute_force_points(ring, q)


@given(laurent())
def test_parse_roundtrip(f):
    assert parse_poly(str(f).replace("^", "**"), V) == f
