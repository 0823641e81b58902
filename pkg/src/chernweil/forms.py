"""Exact differential forms on products of circles and intervals.

Circle coordinates run over [0, 1) and carry Fourier modes
``cos(2 pi k u)``/``sin(2 pi k u)``; interval coordinates run over [0, 1]
and carry monomials ``t^m``.  Differentiating a Fourier mode produces the
factor ``2 pi``, kept symbolic as ``TAU``: coefficients live in Q[TAU].
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


class Scalar:
    """Polynomial in the symbol ``TAU = 2 pi`` with rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict[int, Fraction] | None = None):
        self.coeffs = {k: Fraction(v) for k, v in (coeffs or {}).items() if v}

    @classmethod
    def of(cls, value) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        return cls({0: Fraction(value)})

    @classmethod
    def tau(cls, power: int = 1) -> "Scalar":
        return cls({power: Fraction(1)})

    def __add__(self, other):
        other = Scalar.of(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return Scalar(out)

    __radd__ = __add__

    def __neg__(self):
        return Scalar({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-Scalar.of(other))

    def __rsub__(self, other):
        return Scalar.of(other) - self

    def __mul__(self, other):
        other = Scalar.of(other)
        out: dict[int, Fraction] = {}
        for k1, v1 in self.coeffs.items():
            for k2, v2 in other.coeffs.items():
                out[k1 + k2] = out.get(k1 + k2, 0) + v1 * v2
        return Scalar(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Scalar.of(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __bool__(self):
        return bool(self.coeffs)

    def __float__(self):
        return float(sum(float(v) * (2 * math.pi) ** k for k, v in self.coeffs.items()))

    def __repr__(self):
        return f"Scalar({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in sorted(self.coeffs, reverse=True):
            c = self.coeffs[k]
            sign = "-" if c < 0 else "+"
            a = abs(c)
            sym = "" if k == 0 else ("2π" if k == 1 else f"(2π)^{k}")
            if not sym:
                body = str(a)
            elif a == 1:
                body = sym
            else:
                body = f"{a}*{sym}"
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    _TERM = re.compile(r"^(?:(\d+(?:/\d+)?)(?:\*)?)?(2π|\(2π\)\^(\d+))?$")

    @classmethod
    def parse(cls, text: str) -> "Scalar":
        """Inverse of ``str``."""
        text = text.strip().replace(" ", "")
        if text == "0":
            return cls()
        if text[0] not in "+-":
            text = "+" + text
        out = cls()
        for sign, body in re.findall(r"([+-])([^+-]+)", text):
            m = cls._TERM.match(body)
            if not m or not (m.group(1) or m.group(2)):
                raise ValueError(f"cannot parse scalar term {body!r}")
            c = Fraction(m.group(1)) if m.group(1) else Fraction(1)
            k = 0 if not m.group(2) else (int(m.group(3)) if m.group(3) else 1)
            out = out + cls({k: c if sign == "+" else -c})
        return out


@dataclass(frozen=True)
class Factor:
    kind: str  # "circle" or "interval"
    name: str

    def __str__(self):
        return f"{self.kind}({self.name})"


@dataclass(frozen=True)
class Worldvolume:
    factors: tuple[Factor, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        names = [f.name for f in self.factors]
        if not names:
            raise ValueError("worldvolume needs at least one factor")
        if len(set(names)) != len(names):
            raise ValueError("worldvolume coordinate names must be unique")
        for f in self.factors:
            if f.kind not in ("circle", "interval"):
                raise ValueError(f"unknown factor kind {f.kind!r}")

    @classmethod
    def torus(cls, names: Sequence[str] | int) -> "Worldvolume":
        if isinstance(names, int):
            names = [f"u{i + 1}" for i in range(names)]
        return cls(tuple(Factor("circle", n) for n in names))

    @classmethod
    def cylinder(cls, names: Sequence[str] | int, interval: str = "t") -> "Worldvolume":
        """``[0, 1] x T^n`` with the interval first."""
        return cls((Factor("interval", interval),) + cls.torus(names).factors)

    @property
    def dim(self) -> int:
        return len(self.factors)

    @property
    def closed(self) -> bool:
        return all(f.kind == "circle" for f in self.factors)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.factors)

    def axis(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"no coordinate {name!r} on {self}") from None

    def drop(self, axis: int) -> "Worldvolume":
        return Worldvolume(self.factors[:axis] + self.factors[axis + 1:])

    def __str__(self):
        return " * ".join(str(f) for f in self.factors)


# a circle mode is (kind, k) with kind "c" (k >= 0) or "s" (k >= 1); an interval mode is an int power
CONST_MODE = ("c", 0)


def _mode_product(kind: str, a, b) -> list[tuple[Fraction, object]]:
    if kind == "interval":
        return [(Fraction(1), a + b)]
    (ka, fa), (kb, fb) = a, b
    half = Fraction(1, 2)
    if fa == 0 and ka == "c":
        return [(Fraction(1), b)]
    if fb == 0 and kb == "c":
        return [(Fraction(1), a)]
    out: list[tuple[Fraction, object]] = []
    diff, total = fa - fb, fa + fb
    if ka == "c" and kb == "c":
        out = [(half, ("c", abs(diff))), (half, ("c", total))]
    elif ka == "s" and kb == "s":
        out = [(half, ("c", abs(diff))), (-half, ("c", total))]
    else:
        # sin(a) cos(b) = (sin(a + b) + sin(a - b)) / 2
        s, c = (fa, fb) if ka == "s" else (fb, fa)
        d = s - c
        out = [(half, ("s", total))]
        if d > 0:
            out.append((half, ("s", d)))
        elif d < 0:
            out.append((-half, ("s", -d)))
    return out


def _merge_sign(d1: tuple[int, ...], d2: tuple[int, ...]) -> int:
    """Sign of sorting the concatenation of two sorted, disjoint index tuples."""
    inv = 0
    for a in d1:
        for b in d2:
            if a > b:
                inv += 1
    return -1 if inv % 2 else 1


class FieldForm:
    """Exact differential form: ``{(modes, differentials): Scalar}``."""

    __slots__ = ("wv", "terms")

    def __init__(self, wv: Worldvolume, terms: dict | None = None):
        self.wv = wv
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    # constructors

    def _const_modes(self):
        return tuple(CONST_MODE if f.kind == "circle" else 0 for f in self.wv.factors)

    @classmethod
    def zero(cls, wv: Worldvolume) -> "FieldForm":
        return cls(wv)

    @classmethod
    def const(cls, wv: Worldvolume, value) -> "FieldForm":
        f = cls(wv)
        return cls(wv, {(f._const_modes(), ()): Scalar.of(value)})

    @classmethod
    def mode(cls, wv: Worldvolume, coord: str, kind: str, k: int) -> "FieldForm":
        """``cos(2 pi k u)`` (kind "cos"), ``sin(2 pi k u)`` (kind "sin") or ``t^k`` (kind "pow")."""
        ax = wv.axis(coord)
        fk = wv.factors[ax].kind
        modes = list(cls(wv)._const_modes())
        if kind == "pow":
            if fk != "interval":
                raise ValueError(f"{coord} is a circle coordinate; only sin/cos modes are periodic")
            modes[ax] = k
        elif kind in ("cos", "sin"):
            if fk != "circle":
                raise ValueError(f"{coord} is an interval coordinate; use powers of it")
            if k < 0:
                raise ValueError("frequency must be nonnegative")
            if kind == "sin" and k == 0:
                return cls(wv)
            modes[ax] = ("c" if kind == "cos" else "s", k)
        else:
            raise ValueError(kind)
        return cls(wv, {(tuple(modes), ()): Scalar.of(1)})

    @classmethod
    def differential(cls, wv: Worldvolume, coord: str) -> "FieldForm":
        f = cls(wv)
        return cls(wv, {(f._const_modes(), (wv.axis(coord),)): Scalar.of(1)})

    # arithmetic

    def _check(self, other: "FieldForm"):
        if other.wv != self.wv:
            raise ValueError("forms live on different worldvolumes")

    def _coerce(self, other):
        if isinstance(other, FieldForm):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, Scalar)):
            return FieldForm.const(self.wv, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return FieldForm(self.wv, out)

    __radd__ = __add__

    def __neg__(self):
        return FieldForm(self.wv, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s) -> "FieldForm":
        s = Scalar.of(s)
        return FieldForm(self.wv, {k: v * s for k, v in self.terms.items()})

    def __mul__(self, other):
        """Wedge product."""
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        kinds = [f.kind for f in self.wv.factors]
        out: dict = {}
        for (m1, d1), c1 in self.terms.items():
            for (m2, d2), c2 in other.terms.items():
                if set(d1) & set(d2):
                    continue
                sign = _merge_sign(d1, d2)
                diffs = tuple(sorted(d1 + d2))
                expanded = [(Fraction(sign), ())]
                for kind, a, b in zip(kinds, m1, m2):
                    prods = _mode_product(kind, a, b)
                    expanded = [(q * p, modes + (m,)) for q, modes in expanded for p, m in prods]
                c = c1 * c2
                for q, modes in expanded:
                    key = (modes, diffs)
                    val = c * q
                    out[key] = out[key] + val if key in out else val
        return FieldForm(self.wv, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        return NotImplemented

    wedge = __mul__

    def __eq__(self, other):
        if not isinstance(other, FieldForm):
            return NotImplemented
        return self.wv == other.wv and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    # calculus

    def degrees(self) -> set[int]:
        return {len(d) for _, d in self.terms}

    def degree(self) -> int | None:
        d = self.degrees()
        return d.pop() if len(d) == 1 else None

    def d(self) -> "FieldForm":
        out: dict = {}
        for (modes, diffs), c in self.terms.items():
            for ax, (f, m) in enumerate(zip(self.wv.factors, modes)):
                if ax in diffs:
                    continue
                if f.kind == "interval":
                    if m == 0:
                        continue
                    new_mode, coef = m - 1, Scalar.of(m)
                else:
                    kind, k = m
                    if k == 0:
                        continue
                    if kind == "c":
                        new_mode, coef = ("s", k), Scalar({1: -k})
                    else:
                        new_mode, coef = ("c", k), Scalar({1: k})
                sign = -1 if sum(1 for j in diffs if j < ax) % 2 else 1
                key = (modes[:ax] + (new_mode,) + modes[ax + 1:], tuple(sorted(diffs + (ax,))))
                val = c * coef * sign
                out[key] = out[key] + val if key in out else val
        return FieldForm(self.wv, out)

    def integrate(self) -> Scalar:
        """Integral over the worldvolume in its factor orientation."""
        top = tuple(range(self.wv.dim))
        total = Scalar()
        for (modes, diffs), c in self.terms.items():
            if diffs != top:
                raise ValueError(f"cannot integrate a {len(diffs)}-form over a {self.wv.dim}-dimensional worldvolume")
            weight = Fraction(1)
            for f, m in zip(self.wv.factors, modes):
                if f.kind == "interval":
                    weight /= m + 1
                elif m != CONST_MODE:
                    weight = Fraction(0)
                    break
            if weight:
                total = total + c * weight
        return total

    def restrict(self, coord: str, value: int) -> "FieldForm":
        """Pull back along the inclusion ``{coord = value}`` (value 0 or 1) of an interval coordinate."""
        ax = self.wv.axis(coord)
        if self.wv.factors[ax].kind != "interval" or value not in (0, 1):
            raise ValueError("can only restrict an interval coordinate to an endpoint")
        wv = self.wv.drop(ax)
        out: dict = {}
        for (modes, diffs), c in self.terms.items():
            if ax in diffs:
                continue
            if value == 0 and modes[ax] != 0:
                continue
            key = (modes[:ax] + modes[ax + 1:], tuple(j - 1 if j > ax else j for j in diffs))
            out[key] = out[key] + c if key in out else c
        return FieldForm(wv, out)

    def max_frequency(self, axis: int) -> int:
        f = self.wv.factors[axis]
        best = 0
        for (modes, _), _c in self.terms.items():
            m = modes[axis]
            best = max(best, m if f.kind == "interval" else m[1])
        return best

    def __repr__(self):
        return f"FieldForm({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (modes, diffs), c in sorted(self.terms.items(), key=lambda kv: (kv[0][1], str(kv[0][0]))):
            fac = []
            for f, m in zip(self.wv.factors, modes):
                if f.kind == "interval":
                    if m:
                        fac.append(f.name if m == 1 else f"{f.name}^{m}")
                elif m != CONST_MODE:
                    kind, k = m
                    arg = f.name if k == 1 else f"{k} {f.name}"
                    fac.append(f"{'cos' if kind == 'c' else 'sin'}({arg})")
            fac += [f"d{self.wv.factors[j].name}" for j in diffs]
            coef = str(c)
            body = "*".join(fac)
            if not body:
                parts.append(f"({coef})" if " " in coef else coef)
            elif coef == "1":
                parts.append(body)
            else:
                parts.append(f"({coef})*{body}")
        return " + ".join(parts)

