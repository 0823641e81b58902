"""Sigma-model fields as dg-morphisms ``W(P) -> Omega(Sigma)`` and the AKSZ action."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .forms import FieldForm, Scalar, Worldvolume
from .gca import DegreeError, Element
from .symplectic import SymplecticModel, chern_simons_element, hamiltonian


class DimensionError(ValueError):
    pass


class FieldConfiguration:
    """Assignment ``x^a -> A^a`` of a form of degree ``|x^a|`` to every coordinate.

    Shifted generators go to the curvatures ``F^a = d A^a - A(v^a)``, which
    makes the assignment a chain map.
    """

    def __init__(self, wv: Worldvolume, model: SymplecticModel, images: Mapping[str, FieldForm]):
        self.wv = wv
        self.model = model
        sig = model.ce.signature
        imgs = {}
        for name, form in images.items():
            g = sig.decl(name)
            if form.wv != wv:
                raise ValueError(f"image of {name} lives on another worldvolume")
            if form and form.degree() != g.degree:
                raise DegreeError(f"A[{name}] must be a {g.degree}-form, got degrees {sorted(form.degrees())}")
            imgs[name] = form
        for g in sig:
            imgs.setdefault(g.name, FieldForm.zero(wv))
        self.images = imgs
        self._cache: dict = {}
        self._curv: dict[str, FieldForm] = {}

    def __getitem__(self, name: str) -> FieldForm:
        return self.images[name]

    def curvature(self) -> dict[str, FieldForm]:
        return {g.name: self._curvature(g.name) for g in self.model.ce.signature}

    def _curvature(self, name: str) -> FieldForm:
        if name not in self._curv:
            self._curv[name] = self.images[name].d() - evaluate(self, self.model.v(name))
        return self._curv[name]

    def is_flat(self) -> bool:
        return not any(self.curvature().values())

    def generator_image(self, W_name: str) -> FieldForm:
        sig = self.model.weil.signature
        g = sig.decl(W_name)
        if g.shifted:
            return self._curvature(g.partner)
        return self.images[W_name]


def evaluate(A: FieldConfiguration, w: Element) -> FieldForm:
    """Image of a CE or Weil element under the field."""
    sig = w.signature
    wv = A.wv
    out = FieldForm.zero(wv)
    for m, c in w.terms.items():
        key = (sig, m)
        val = A._cache.get(key)
        if val is None:
            val = FieldForm.const(wv, 1)
            for i, e in m:
                img = A.generator_image(sig.generators[i].name)
                for _ in range(e):
                    val = val * img
                if not val:
                    break
            A._cache[key] = val
        if val:
            out = out + val.scale(c)
    return out


def curvature(A: FieldConfiguration) -> dict[str, FieldForm]:
    return A.curvature()


def is_flat(A: FieldConfiguration) -> bool:
    return A.is_flat()


def kinetic_form(A: FieldConfiguration) -> FieldForm:
    """``1/2 omega_ab A^a dA^b``."""
    out = FieldForm.zero(A.wv)
    for (a, b), q in A.model.pairing.items():
        out = out + (A[a] * A[b].d()).scale(q / 2)
    return out


def lagrangian_form(A: FieldConfiguration, pi: Element | None = None) -> FieldForm:
    pi = hamiltonian(A.model) if pi is None else pi
    return kinetic_form(A) - evaluate(A, pi)


@dataclass
class ActionReport:
    value_cs: Scalar
    value_lagrangian: Scalar
    kinetic: Scalar
    potential: Scalar
    worldvolume: Worldvolume
    closed: bool

    @property
    def difference(self) -> Scalar:
        return self.value_cs - self.value_lagrangian

    @property
    def ok(self) -> bool:
        """Equality is only claimed on closed worldvolumes."""
        return not self.closed or not self.difference

    def breakdown(self) -> dict[str, Scalar]:
        return {"cs": self.value_cs, "lagrangian": self.value_lagrangian, "kinetic": self.kinetic,
                "potential": self.potential, "difference": self.difference}


def _require_dim(A: FieldConfiguration, dim: int) -> None:
    if A.wv.dim != dim:
        raise DimensionError(f"{A.model.name} has grade {A.model.n}: expected a {dim}-dimensional "
                             f"worldvolume, got {A.wv.dim}")


def aksz_action(A: FieldConfiguration, cs: Element | None = None, pi: Element | None = None) -> ActionReport:
    """Integrate ``cs(A)`` and ``1/2 omega_ab A^a dA^b - A(pi)``.

    The kinetic and potential pieces are reported separately so other
    relative factors can be formed by the caller.
    """
    model = A.model
    _require_dim(A, model.n + 1)
    cs = chern_simons_element(model) if cs is None else cs
    pi = hamiltonian(model) if pi is None else pi
    value_cs = evaluate(A, cs).integrate()
    kin = kinetic_form(A).integrate()
    pot = evaluate(A, pi).integrate()
    return ActionReport(value_cs, kin - pot, kin, pot, A.wv, A.wv.closed)


def integration_by_parts_terms(A: FieldConfiguration) -> tuple[Scalar, Scalar]:
    """``int w(x^a) omega_ab A^a dA^b`` and ``n/2 int omega_ab A^a dA^b``; equal on closed worldvolumes."""
    weighted = FieldForm.zero(A.wv)
    plain = FieldForm.zero(A.wv)
    for (a, b), q in A.model.pairing.items():
        term = A[a] * A[b].d()
        weighted = weighted + term.scale(q * A.model.weight(a))
        plain = plain + term.scale(q)
    return weighted.integrate(), plain.integrate() * Fraction(A.model.n, 2)


@dataclass
class StokesReport:
    boundary_cs: Scalar
    boundary_lagrangian: Scalar
    bulk: Scalar
    top: Scalar
    bottom: Scalar

    @property
    def ok(self) -> bool:
        return self.boundary_cs == self.bulk and self.boundary_lagrangian == self.bulk


def stokes_check(A: FieldConfiguration) -> StokesReport:
    """Compare ``int_{dN} cs(A)`` with ``int_N omega(F_A)`` on a cylinder ``N``.

    With the interval at factor position ``p`` the boundary is
    ``(-1)^p ({t=1} - {t=0})``.
    """
    wv = A.wv
    model = A.model
    _require_dim(A, model.n + 2)
    intervals = [i for i, f in enumerate(wv.factors) if f.kind == "interval"]
    if len(intervals) != 1:
        raise DimensionError("stokes check needs exactly one interval factor")
    p = intervals[0]
    t = wv.factors[p].name
    sign = -1 if p % 2 else 1
    cs_form = evaluate(A, chern_simons_element(model))
    lag_form = lagrangian_form(A)
    top = cs_form.restrict(t, 1).integrate()
    bottom = cs_form.restrict(t, 0).integrate()
    lag = (lag_form.restrict(t, 1).integrate() - lag_form.restrict(t, 0).integrate()) * sign
    bulk = evaluate(A, model.omega).integrate()
    return StokesReport((top - bottom) * sign, lag, bulk, top, bottom)


# random configurations


def random_form(wv: Worldvolume, degree: int, rng: random.Random, *, axes: list[int] | None = None,
                order: list[int] | None = None, max_freq: int = 1, max_power: int = 2, terms: int = 4,
                coeffs=(-2, -1, 1, 2, Fraction(1, 2))) -> FieldForm:
    """A sparse trig/polynomial form of the given degree whose coefficients depend only on ``axes``.

    Differentials are windows ``order[o:o + degree]`` of an axis ordering;
    offsets that are multiples of ``degree`` are preferred so that the
    terms of different components tend to wedge to a nonzero top form.
    """
    axes = list(range(wv.dim)) if axes is None else axes
    order = list(range(wv.dim)) if order is None else order
    out = FieldForm.zero(wv)
    if degree > wv.dim:
        return out
    tiling = list(range(0, wv.dim - degree + 1, degree or 1))
    modes = [("cos", 0)] + [(kind, k) for k in range(1, max_freq + 1) for kind in ("cos", "sin")]
    for _ in range(terms):
        off = rng.choice(tiling) if rng.random() < 0.7 else rng.randint(0, wv.dim - degree)
        diffs = sorted(order[off:off + degree])
        f = FieldForm.const(wv, rng.choice(coeffs))
        for ax in axes:
            fac = wv.factors[ax]
            if fac.kind == "interval":
                f = f * FieldForm.mode(wv, fac.name, "pow", rng.randint(0, max_power))
            else:
                kind, k = rng.choice(modes)
                f = f * FieldForm.mode(wv, fac.name, kind, k)
        for ax in diffs:
            f = f * FieldForm.differential(wv, wv.factors[ax].name)
        out = out + f
    return out


def random_field(model: SymplecticModel, wv: Worldvolume, rng: random.Random, *,
                 active_axes: int | None = None, **kw) -> FieldConfiguration:
    """Random field whose coefficients depend on at most ``active_axes`` coordinates (plus the interval).

    Few active axes keep high-dimensional integrands small; by default 1 to 3
    are drawn per field.
    """
    if active_axes is None:
        active_axes = rng.randint(1, 3)
    order = list(range(wv.dim))
    rng.shuffle(order)
    axes = set(order[-min(active_axes, wv.dim):])
    axes |= {i for i, f in enumerate(wv.factors) if f.kind == "interval"}
    images = {g.name: random_form(wv, g.degree, rng, axes=sorted(axes), order=order, **kw)
              for g in model.ce.signature}
    return FieldConfiguration(wv, model, images)
