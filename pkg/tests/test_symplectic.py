from __future__ import annotations

import random
from fractions import Fraction

import pytest

from chernweil.gca import AlgebraSignature
from chernweil.models import builtin_models, line_model, poisson_model, so3_model
from chernweil.symplectic import (ModelError, NonDarbouxError, SymplecticModel, bracket_with_hamiltonian,
                                  chern_simons_element, complete_pairing, cs_local_forms, hamiltonian,
                                  hamiltonian_identities, hamiltonian_local, koszul_pair_sign, poisson_bracket,
                                  rational_inverse, validate, verify_transgression)
from chernweil.weil import CEAlgebra, project_ce
from helpers import random_homogeneous, random_lie_model, random_poisson_model


def test_koszul_pair_sign():
    # omega_ba = (-1)^((|a| + 1)(|b| + 1)) omega_ab
    assert koszul_pair_sign(1, 1) == 1
    assert koszul_pair_sign(0, 1) == 1
    assert koszul_pair_sign(0, 2) == -1
    assert koszul_pair_sign(2, 2) == -1


def test_complete_pairing_applies_sign():
    sig = AlgebraSignature.from_grades([("x", 0), ("d", 1)])
    ce = CEAlgebra.from_images("c", sig, {})
    assert complete_pairing(ce, {("x", "d"): 1}) == {("x", "d"): 1, ("d", "x"): 1}
    sig2 = AlgebraSignature.from_grades([("x", 0), ("p", 2)])
    ce2 = CEAlgebra.from_images("c2", sig2, {})
    assert complete_pairing(ce2, {("x", "p"): 1}) == {("x", "p"): 1, ("p", "x"): -1}


def test_complete_pairing_rejects_conflicts_and_non_constants():
    sig = AlgebraSignature.from_grades([("x", 0), ("d", 1)])
    ce = CEAlgebra.from_images("c", sig, {})
    with pytest.raises(ModelError):
        complete_pairing(ce, {("x", "d"): 1, ("d", "x"): -1})
    with pytest.raises(NonDarbouxError):
        complete_pairing(ce, {("x", "d"): sig.gen("x")})


def test_even_line_has_no_symplectic_form():
    sig = AlgebraSignature.from_grades([("c", 2)])
    ce = CEAlgebra.from_images("b2", sig, {})
    with pytest.raises(ModelError):
        complete_pairing(ce, {("c", "c"): 1})


def test_rational_inverse():
    M = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(1)]]
    assert rational_inverse(M) == [[1, -1], [-1, 2]]
    assert rational_inverse([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]) is None


def test_nonpositive_grade_rejected():
    ce = so3_model().ce
    with pytest.raises(ModelError):
        SymplecticModel.build(ce, 0, {})


def test_validation_failures_are_named():
    ce = so3_model().ce
    bad = SymplecticModel.build(ce, 2, {("t1", "t1"): 1, ("t2", "t2"): 2, ("t3", "t3"): 1})
    names = {c.name for c in validate(bad).failures()}
    assert "invariant: L_v omega = 0" in names
    wrong_grade = SymplecticModel.build(ce, 3, {("t1", "t1"): 1, ("t2", "t2"): 1, ("t3", "t3"): 1})
    assert "grade condition w(a) + w(b) = n" in {c.name for c in validate(wrong_grade).failures()}
    degenerate = SymplecticModel.build(ce, 2, {("t1", "t1"): 1, ("t2", "t2"): 1})
    assert "nondegenerate" in {c.name for c in validate(degenerate).failures()}
    with pytest.raises(ModelError):
        hamiltonian(bad)


def test_so3_hamiltonian_and_cs():
    m = so3_model()
    W = m.weil
    s = W.signature
    t1, t2, t3 = s.gens("t1", "t2", "t3")
    assert hamiltonian(m) == -(m.ce.signature.gen("t1") * m.ce.signature.gen("t2") * m.ce.signature.gen("t3"))
    cs = chern_simons_element(m)
    expected = (t1 * s.gen("dt1") + t2 * s.gen("dt2") + t3 * s.gen("dt3") - t1 * t2 * t3).scale(Fraction(1, 2))
    assert cs == expected


@pytest.mark.parametrize("name", sorted(builtin_models()))
def test_builtin_pipeline(name):
    m = builtin_models()[name]
    assert validate(m).ok
    pi = hamiltonian(m)
    assert pi == hamiltonian_local(m)
    cs = chern_simons_element(m)
    assert verify_transgression(m.weil, cs, m.omega, pi.scale(Fraction(1, m.n)))
    with_d, with_dw = cs_local_forms(m)
    assert with_d == cs == with_dw
    assert hamiltonian_identities(m, pi).ok


@pytest.mark.parametrize("seed", range(15))
def test_random_models_transgress(seed):
    rng = random.Random(seed)
    m = random_lie_model(rng) if seed % 2 else random_poisson_model(rng)
    pi = hamiltonian(m)
    assert verify_transgression(m.weil, chern_simons_element(m), m.omega, pi.scale(Fraction(1, m.n))).ok
    assert hamiltonian_identities(m, pi).ok


def test_transgression_detects_wrong_data():
    m = so3_model()
    cs = chern_simons_element(m)
    rep = verify_transgression(m.weil, cs.scale(2), m.omega, hamiltonian(m).scale(Fraction(1, 2)))
    assert not rep.d_w_cs_equals_inv and not rep.projection_equals_mu


def test_projection_of_cs():
    m = so3_model()
    assert project_ce(m.weil, chern_simons_element(m)) == hamiltonian(m).scale(Fraction(1, 2))


def test_poisson_bracket_of_coordinates():
    m = poisson_model(2, {(0, 1): 1})
    s = m.ce.signature
    x1, d1 = s.gens("x1", "del1")
    # omega^{-1} pairs x1 with del1
    assert poisson_bracket(m, x1, d1) != 0
    assert poisson_bracket(m, x1, s.gen("x2")) == 0


@pytest.mark.parametrize("seed", range(20))
def test_bracket_lowers_grade_by_n(seed):
    rng = random.Random(seed)
    m = random_lie_model(rng) if seed % 2 else random_poisson_model(rng)
    s = m.ce.signature
    f, g = random_homogeneous(rng, s), random_homogeneous(rng, s)
    b = poisson_bracket(m, f, g)
    if b and f.weight() is not None and g.weight() is not None:
        assert b.weight() == f.weight() + g.weight() - m.n


def test_bracket_with_hamiltonian_lists_every_coordinate():
    m = so3_model()
    out = bracket_with_hamiltonian(m)
    assert set(out) == set(m.coordinates)
    for a, (br, v) in out.items():
        assert v == m.v(a)
        assert br.degree() in (None, v.degree())


def test_line_model_pi_is_zero():
    for k in range(3):
        m = line_model(k)
        assert not hamiltonian(m)
        assert m.n == 4 * k + 2
