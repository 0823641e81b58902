"""Exact graded-commutative dg-algebras, Weil algebras and the AKSZ/Chern-Simons correspondence."""

from __future__ import annotations

from .aksz import FieldConfiguration, aksz_action, evaluate, stokes_check
from .calculus import Derivation, commutator, contraction, euler_field, lie_derivative, shift_differential
from .forms import FieldForm, Scalar, Worldvolume
from .gca import AlgebraSignature, Element, GeneratorDecl, format_element
from .models import builtin_models, courant_model, lie_algebra_model, line_model, load_spec, parse_spec, poisson_model
from .symplectic import SymplecticModel, chern_simons_element, hamiltonian, validate
from .weil import CEAlgebra, WeilAlgebra, build_weil

__all__ = [
    "AlgebraSignature", "CEAlgebra", "Derivation", "Element", "FieldConfiguration", "FieldForm",
    "GeneratorDecl", "Scalar", "SymplecticModel", "WeilAlgebra", "Worldvolume", "aksz_action",
    "build_weil", "builtin_models", "chern_simons_element", "commutator", "contraction", "courant_model",
    "euler_field", "evaluate", "format_element", "hamiltonian", "lie_algebra_model", "lie_derivative",
    "line_model", "load_spec", "parse_spec", "poisson_model", "shift_differential", "stokes_check",
    "validate",
]
