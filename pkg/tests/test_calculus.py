from __future__ import annotations

import random
import pytest

from chernweil.calculus import (Derivation, NotClosedError, commutator, contraction, euler_contraction,
                                euler_field, lie_derivative, partial_left, partial_right, poincare_primitive,
                                shift_differential)
from chernweil.gca import AlgebraSignature, DegreeError, SignatureError
from helpers import random_derivation, random_element, random_homogeneous, random_weil_signature


@pytest.fixture
def W():
    return AlgebraSignature.from_grades([("x", 0), ("t", 1), ("p", 2)]).doubled()


def test_shift_differential_on_generators(W):
    d = shift_differential(W)
    assert d(W.gen("x")) == W.gen("dx")
    assert d(W.gen("dx")) == 0
    assert d.degree == 1


def test_leibniz_sign_example(W):
    d = shift_differential(W)
    t, x = W.gens("t", "x")
    # d(t x) = dt x - t dx
    assert d(t * x) == W.gen("dt") * x - t * W.gen("dx")


def test_contraction_and_euler(W):
    eps = euler_field(W)
    ie = euler_contraction(W)
    assert ie(W.gen("dp")) == W.gen("p").scale(2)
    assert ie(W.gen("dx")) == 0
    assert eps(W.gen("t")) == W.gen("t")
    v = Derivation(W, 1, {"x": W.gen("t"), "t": W.gen("p")})
    iv = contraction(v)
    assert iv(W.gen("dx")) == W.gen("t")
    assert iv.degree == 0


def test_contraction_rejects_non_vector_fields(W):
    v = Derivation(W, 1, {"x": W.gen("dx")})
    with pytest.raises(SignatureError):
        contraction(v)


def test_partial_derivatives(W):
    x, t, p = W.gens("x", "t", "p")
    f = t * p * x * x
    assert partial_left(W, "x")(f) == (t * p * x).scale(2)
    assert partial_left(W, "t")(f) == p * x * x
    # right and left derivatives differ by (-1)^(|t| (|f| + |t|)); here |f| = 3
    assert partial_right(f, "t") == p * x * x
    g = t * W.gen("dt") * W.gen("dx")  # |g| = 4, so the sign is (-1)^(1 * 5)
    assert partial_right(g, "t") == partial_left(W, "t")(g).scale(-1)
    assert partial_right(g, "t") == -(W.gen("dt") * W.gen("dx"))
    with pytest.raises(SignatureError):
        partial_left(W, "dt")


def test_right_derivative_sign_for_odd_pairs():
    s = AlgebraSignature.from_grades([("a", 1), ("b", 1)])
    a, b = s.gens("a", "b")
    assert partial_left(s, "b")(a * b) == -a
    assert partial_right(a * b, "b") == a


def test_derivation_degree_check(W):
    with pytest.raises(DegreeError):
        Derivation(W, 1, {"x": W.gen("x")})


def test_commutator_of_d_with_itself_vanishes(W):
    d = shift_differential(W)
    assert commutator(d, d).is_zero


def test_cartan_identity_l_eps_is_weight(W):
    L = lie_derivative(euler_field(W))
    x, t, p = W.gens("x", "t", "p")
    w = t * W.gen("dp") + p * t * x
    assert L(w) == w.scale(3)
    assert L(p * x) == (p * x).scale(2)


def test_poincare_primitive(W):
    d = shift_differential(W)
    omega = W.gen("dt") * W.gen("dt") + W.gen("dx") * W.gen("dp")
    lam = poincare_primitive(omega)
    assert d(lam) == omega
    with pytest.raises(NotClosedError):
        poincare_primitive(W.gen("t") * W.gen("dt"))
    with pytest.raises(DegreeError):
        poincare_primitive(W.gen("dx"))


@pytest.mark.parametrize("seed", range(40))
def test_random_leibniz(seed):
    rng = random.Random(seed)
    s = random_weil_signature(rng)
    D = random_derivation(rng, s)
    a = random_homogeneous(rng, s)
    b = random_element(rng, s)
    sign = -1 if (D.degree * a.degree()) % 2 else 1
    assert D(a * b) == D(a) * b + (a * D(b)).scale(sign)


@pytest.mark.parametrize("seed", range(40))
def test_random_commutator_is_derivation(seed):
    rng = random.Random(1000 + seed)
    s = random_weil_signature(rng)
    D1, D2 = random_derivation(rng, s), random_derivation(rng, s)
    C = commutator(D1, D2)
    w = random_element(rng, s)
    sign = -1 if (D1.degree * D2.degree) % 2 else 1
    assert C(w) == D1(D2(w)) - D2(D1(w)).scale(sign)


@pytest.mark.parametrize("seed", range(30))
def test_random_poincare(seed):
    rng = random.Random(2000 + seed)
    s = random_weil_signature(rng)
    d = shift_differential(s)
    w = d(random_element(rng, s, weight=rng.randint(1, 4)))
    if not w:
        return
    assert d(poincare_primitive(w)) == w
