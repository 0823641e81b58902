"""Floating-point cross-check of the exact integrals.

Everything here is deliberately independent of the exact form arithmetic:
field images are sampled on a tensor grid, exterior derivatives are taken
spectrally on circles and through a Legendre interpolant on intervals, and
wedge products and the Weil-algebra evaluation are redone on arrays.
Circles use the trapezoid rule (exact for trigonometric polynomials of low
enough frequency), intervals use Gauss-Legendre nodes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import legendre

from .aksz import FieldConfiguration, _require_dim
from .forms import CONST_MODE, FieldForm
from .gca import Element
from .symplectic import chern_simons_element, hamiltonian


@dataclass(frozen=True)
class Axis:
    kind: str
    nodes: np.ndarray
    weights: np.ndarray
    diff: np.ndarray | None = None  # differentiation matrix on intervals


def circle_axis(m: int) -> Axis:
    if m % 2 == 0:
        m += 1  # odd sizes avoid the ambiguous Nyquist mode
    nodes = np.arange(m) / m
    return Axis("circle", nodes, np.full(m, 1.0 / m))


def interval_axis(m: int) -> Axis:
    x, w = legendre.leggauss(m)
    vander = legendre.legvander(x, m - 1)
    dvander = np.stack([legendre.legval(x, legendre.legder(np.eye(m)[j])) for j in range(m)], axis=1)
    # t = (x + 1) / 2, so d/dt = 2 d/dx
    diff = 2.0 * dvander @ np.linalg.inv(vander)
    return Axis("interval", (x + 1) / 2, w / 2, diff)


class Grid:
    def __init__(self, axes: list[Axis]):
        self.axes = axes
        self.shape = tuple(len(a.nodes) for a in axes)

    def derivative(self, values: np.ndarray, ax: int) -> np.ndarray:
        a = self.axes[ax]
        if a.kind == "circle":
            m = len(a.nodes)
            k = np.fft.fftfreq(m, d=1.0 / m)
            shape = [1] * values.ndim
            shape[ax] = m
            spec = np.fft.fft(values, axis=ax) * (2j * np.pi * k).reshape(shape)
            return np.fft.ifft(spec, axis=ax).real
        return np.moveaxis(np.tensordot(a.diff, values, axes=([1], [ax])), 0, ax)

    def integrate(self, values: np.ndarray) -> float:
        out = values
        for a in reversed(self.axes):
            out = out @ a.weights
        return float(out)


class NumForm:
    """``{differentials: samples}`` with differentials a sorted tuple of axes."""

    def __init__(self, grid: Grid, comps: dict | None = None):
        self.grid = grid
        self.comps = comps or {}

    def __add__(self, other: "NumForm") -> "NumForm":
        out = dict(self.comps)
        for k, v in other.comps.items():
            out[k] = out[k] + v if k in out else v
        return NumForm(self.grid, out)

    def scale(self, c: float) -> "NumForm":
        return NumForm(self.grid, {k: c * v for k, v in self.comps.items()})

    def __sub__(self, other: "NumForm") -> "NumForm":
        return self + other.scale(-1.0)

    def __mul__(self, other: "NumForm") -> "NumForm":
        out: dict = {}
        for d1, v1 in self.comps.items():
            for d2, v2 in other.comps.items():
                if set(d1) & set(d2):
                    continue
                merged = d1 + d2
                # parity of the sorting permutation
                inv = sum(1 for i in range(len(merged)) for j in range(i + 1, len(merged)) if merged[i] > merged[j])
                key = tuple(sorted(merged))
                val = v1 * v2 if inv % 2 == 0 else -(v1 * v2)
                out[key] = out[key] + val if key in out else val
        return NumForm(self.grid, out)

    def d(self) -> "NumForm":
        out: dict = {}
        for diffs, v in self.comps.items():
            for ax in range(len(self.grid.axes)):
                if ax in diffs:
                    continue
                dv = self.grid.derivative(v, ax)
                if sum(1 for j in diffs if j < ax) % 2:
                    dv = -dv
                key = tuple(sorted(diffs + (ax,)))
                out[key] = out[key] + dv if key in out else dv
        return NumForm(self.grid, out)

    def integrate(self) -> float:
        top = tuple(range(len(self.grid.axes)))
        v = self.comps.get(top)
        return 0.0 if v is None else self.grid.integrate(v)


def sample(form: FieldForm, grid: Grid) -> NumForm:
    """Point values of an exact form on the grid (reads only its term data)."""
    comps: dict = {}
    dim = len(grid.axes)
    for (modes, diffs), c in form.terms.items():
        vals = np.full(grid.shape, float(c))
        for ax, (a, m) in enumerate(zip(grid.axes, modes)):
            if a.kind == "interval":
                line = a.nodes ** m
            elif m == CONST_MODE:
                continue
            else:
                kind, k = m
                line = (np.cos if kind == "c" else np.sin)(2 * np.pi * k * a.nodes)
            shape = [1] * dim
            shape[ax] = len(a.nodes)
            vals = vals * line.reshape(shape)
        comps[diffs] = comps[diffs] + vals if diffs in comps else vals
    return NumForm(grid, comps)


def _product_length(model, *elements: Element) -> int:
    """Largest number of field components multiplied together in the images of ``elements``.

    A shifted generator maps to ``dA - A(v)`` and so counts as many factors
    as the longest monomial of ``v``.
    """
    v_len = max((sum(e for _, e in m) for a in model.coordinates for m in model.v(a).terms), default=1)
    best = 1
    for w in elements:
        sig = w.signature
        for m in w.terms:
            best = max(best, sum(e * (max(v_len, 1) if sig.generators[i].shifted else 1) for i, e in m))
    return best


def grid_for(A: FieldConfiguration, product_length: int) -> Grid:
    """Grid resolving products of ``product_length`` field components and their derivatives."""
    axes = []
    for ax, f in enumerate(A.wv.factors):
        top = max((img.max_frequency(ax) for img in A.images.values()), default=0)
        if f.kind == "circle":
            # integrand frequencies stay below top * product_length
            axes.append(circle_axis(max(2 * top + 1, top * product_length + 1, 3)))
        else:
            # interpolate each field exactly and integrate the product exactly
            axes.append(interval_axis(max(top + 1, (top * product_length) // 2 + 1, 2)))
    return Grid(axes)


class NumericField:
    def __init__(self, A: FieldConfiguration, grid: Grid):
        self.A = A
        self.grid = grid
        self.images = {k: sample(v, grid) for k, v in A.images.items()}
        self._curv: dict[str, NumForm] = {}

    def curvature(self, name: str) -> NumForm:
        if name not in self._curv:
            self._curv[name] = self.images[name].d() - self.evaluate(self.A.model.v(name))
        return self._curv[name]

    def generator(self, sig, i: int) -> NumForm:
        g = sig.generators[i]
        if g.shifted:
            return self.curvature(g.partner)
        return self.images[g.name]

    def evaluate(self, w: Element) -> NumForm:
        sig = w.signature
        out = NumForm(self.grid)
        for m, c in w.terms.items():
            val = NumForm(self.grid, {(): np.ones(self.grid.shape)})
            for i, e in m:
                img = self.generator(sig, i)
                for _ in range(e):
                    val = val * img
            out = out + val.scale(float(c))
        return out

    def kinetic(self) -> NumForm:
        out = NumForm(self.grid)
        for (a, b), q in self.A.model.pairing.items():
            out = out + (self.images[a] * self.images[b].d()).scale(float(q) / 2)
        return out


@dataclass
class FloatActionReport:
    value_cs: float
    value_lagrangian: float
    kinetic: float
    potential: float
    grid_shape: tuple[int, ...]


def float_action(A: FieldConfiguration) -> FloatActionReport:
    model = A.model
    _require_dim(A, model.n + 1)
    cs = chern_simons_element(model)
    pi = hamiltonian(model)
    grid = grid_for(A, _product_length(model, cs, pi) + 1)
    num = NumericField(A, grid)
    kin = num.kinetic().integrate()
    pot = num.evaluate(pi).integrate()
    return FloatActionReport(num.evaluate(cs).integrate(), kin - pot, kin, pot, grid.shape)


def float_bulk(A: FieldConfiguration) -> float:
    """``int_N omega(F_A)`` on a cylinder, numerically."""
    model = A.model
    _require_dim(A, model.n + 2)
    grid = grid_for(A, _product_length(model, model.omega) + 1)
    return NumericField(A, grid).evaluate(model.omega).integrate()


def agrees(exact: float, approx: float, rel: float = 1e-9, scale: float = 1.0) -> bool:
    """``|exact - approx| <= rel * max(|exact|, scale)``; ``scale`` matters only near zero."""
    return abs(exact - approx) <= rel * max(abs(exact), scale)
