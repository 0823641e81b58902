from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chernweil.gca import (AlgebraSignature, DegreeError, Element, ExpressionTooLarge, GeneratorDecl,
                           SignatureError, format_element, include, normalize, substitute, term_limit)
from helpers import random_element, random_homogeneous, random_signature


@pytest.fixture
def sig():
    return AlgebraSignature.from_grades([("x", 0), ("t", 1), ("p", 2)]).doubled()


def test_odd_generators_anticommute_and_square_to_zero(sig):
    t, dx = sig.gens("t", "dx")
    assert t * dx == -(dx * t)
    assert t * t == 0
    assert dx * dx == 0


def test_even_generators_commute(sig):
    x, p, dt = sig.gens("x", "p", "dt")
    assert x * p == p * x
    assert p * dt == dt * p
    assert dt * dt != 0  # dt has total degree 2


def test_total_degree_drives_signs(sig):
    # weight 1, form degree 1: even overall
    assert sig.decl("dt").degree == 2 and not sig.decl("dt").odd
    assert sig.decl("dp").odd


def test_normalize_sign():
    s = AlgebraSignature.from_grades([("a", 1), ("b", 1), ("c", 1)])
    assert normalize(s, ["c", "b", "a"])[0] == -1
    assert normalize(s, ["b", "c", "a"])[0] == 1
    assert normalize(s, ["a", "b", "a"])[0] == 0


def test_negative_weight_rejected():
    with pytest.raises(DegreeError):
        GeneratorDecl("x", -1)


def test_duplicate_generator_rejected():
    with pytest.raises(SignatureError):
        AlgebraSignature.from_grades([("x", 0), ("x", 1)])


def test_doubled_layout(sig):
    assert sig.names == ("x", "t", "p", "dx", "dt", "dp")
    assert sig.is_weil_type
    assert sig.partner("t") == sig.index("dt")
    assert sig.decl("dp").weight == 2


def test_format_is_canonical(sig):
    x, t, dt = sig.gens("x", "t", "dt")
    w = dt + t * x.scale(Fraction(-1, 2)) + 3
    assert format_element(w) == "3 - 1/2*x*t + dt"
    assert str(x * x * x) == "x^3"


def test_degree_and_weight_queries(sig):
    x, t, p = sig.gens("x", "t", "p")
    assert (x * t).degree() == 1
    assert (t + p).degree() is None
    assert (t * p).weight() == 3
    assert sig.zero().degree() is None


def test_substitute_is_multiplicative(sig):
    x, t, p = sig.gens("x", "t", "p")
    images = {"x": x + 1, "t": t * x, "p": p + t * t}
    w = x * x * t + p
    lhs = substitute(w, images)
    assert lhs == (x + 1) * (x + 1) * (t * x) + p


def test_substitute_checks_degrees(sig):
    x, t = sig.gens("x", "t")
    with pytest.raises(DegreeError):
        substitute(t, {"t": x})


def test_include_by_name():
    small = AlgebraSignature.from_grades([("t", 1)])
    big = small.doubled()
    assert include(small.gen("t"), big) == big.gen("t")


def test_term_limit():
    s = AlgebraSignature.from_grades([("x", 0), ("y", 0)])
    x, y = s.gens("x", "y")
    with term_limit(10), pytest.raises(ExpressionTooLarge):
        (x + y) ** 12
    assert len((x + y) ** 12) == 13


def test_mixed_signature_arithmetic_rejected(sig):
    other = AlgebraSignature.from_grades([("x", 0)])
    with pytest.raises(SignatureError):
        sig.gen("x") + other.gen("x")


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_ring_axioms(seed):
    rng = random.Random(seed)
    s = random_signature(rng).doubled()
    a, b, c = (random_element(rng, s) for _ in range(3))
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_graded_commutativity(seed):
    rng = random.Random(seed)
    s = random_signature(rng).doubled()
    a, b = random_homogeneous(rng, s), random_homogeneous(rng, s)
    sign = -1 if a.degree() * b.degree() % 2 else 1
    assert a * b == (b * a).scale(sign)


def test_element_equality_with_scalars(sig):
    assert sig.const(2) == 2
    assert sig.zero() == 0
    assert Element(sig, {}) == 0
