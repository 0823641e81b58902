"""Graded derivations and Cartan calculus on free graded-commutative algebras."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .gca import (
    AlgebraSignature,
    DegreeError,
    Element,
    SignatureError,
    monomial_degree,
)


class NotClosedError(ValueError):
    pass


class Derivation:
    """A graded derivation given by its images on generators.

    Generators without an entry in ``images`` are sent to zero.  The action
    on products is the signed Leibniz rule
    ``D(ab) = D(a) b + (-1)^(deg D * |a|) a D(b)``.
    """

    def __init__(self, signature: AlgebraSignature, degree: int, images: Mapping[str | int, Element],
                 label: str = "D", check: bool = True):
        self.signature = signature
        self.degree = degree
        self.label = label
        imgs: dict[int, Element] = {}
        for k, v in images.items():
            i = signature.index(k)
            if v.signature != signature:
                raise SignatureError(f"{label}: image of {signature.generators[i].name!r} in another signature")
            if not v:
                continue
            if check:
                want = signature.generators[i].degree + degree
                if v.degree() != want:
                    raise DegreeError(
                        f"{label}: image of {signature.generators[i].name!r} has degree {v.degree()}, expected {want}")
            imgs[i] = v
        self.images = imgs
        self._cache: dict = {}

    def image(self, key: str | int) -> Element:
        return self.images.get(self.signature.index(key), self.signature.zero())

    def __call__(self, w: Element) -> Element:
        return apply(self, w)

    def __eq__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        return (self.signature == other.signature and self.degree == other.degree
                and self.images == other.images)

    def __hash__(self):
        return hash((self.degree, frozenset(self.images.items())))

    @property
    def is_zero(self) -> bool:
        return not self.images

    def __add__(self, other: "Derivation") -> "Derivation":
        _same(self, other)
        if self.degree != other.degree and not (self.is_zero or other.is_zero):
            raise DegreeError("sum of derivations of different degree")
        deg = other.degree if self.is_zero else self.degree
        keys = set(self.images) | set(other.images)
        return Derivation(self.signature, deg, {k: self.image(k) + other.image(k) for k in keys},
                          label=f"({self.label} + {other.label})", check=False)

    def scaled(self, q) -> "Derivation":
        return Derivation(self.signature, self.degree, {k: v.scale(q) for k, v in self.images.items()},
                          label=f"{q}*{self.label}", check=False)

    def __repr__(self):
        names = self.signature.names
        body = ", ".join(f"{names[i]} -> {v}" for i, v in sorted(self.images.items()))
        return f"Derivation<{self.label}, deg {self.degree}>({body})"


def _same(a: Derivation, b: Derivation) -> None:
    if a.signature != b.signature:
        raise SignatureError(f"{a.label} and {b.label} act on different signatures")


def apply(D: Derivation, w: Element) -> Element:
    if w.signature != D.signature:
        raise SignatureError(f"{D.label} applied to an element of another signature")
    result = D.signature.zero()
    for m, c in w.terms.items():
        dm = D._cache.get(m)
        if dm is None:
            dm = D._cache[m] = _apply_monomial(D, m)
        if dm:
            result = result + dm.scale(c)
    return result


def _apply_monomial(D: Derivation, m) -> Element:
    sig = D.signature
    out = sig.zero()
    for j, (i, e) in enumerate(m):
        img = D.images.get(i)
        if img is None:
            continue
        prefix = m[:j]
        rest = ((i, e - 1),) if e > 1 else ()
        suffix = rest + m[j + 1:]
        sign = -1 if (D.degree * monomial_degree(sig, prefix)) % 2 else 1
        # even generators commute with everything, so D(g^e) = e g^(e-1) D(g)
        left = Element(sig, {prefix: sign * e})
        right = Element(sig, {suffix: 1})
        out = out + left * img * right
    return out


def compose(D1: Derivation, D2: Derivation, w: Element) -> Element:
    return D1(D2(w))


def commutator(D1: Derivation, D2: Derivation) -> Derivation:
    """Graded commutator ``[D1, D2] = D1 D2 - (-1)^(deg1 deg2) D2 D1``."""
    _same(D1, D2)
    sig = D1.signature
    sign = -1 if (D1.degree * D2.degree) % 2 else 1
    images = {}
    for i in range(len(sig)):
        g = sig.gen(i)
        images[i] = D1(D2(g)) - D2(D1(g)).scale(sign)
    return Derivation(sig, D1.degree + D2.degree, images, label=f"[{D1.label}, {D2.label}]")


def _require_weil(sig: AlgebraSignature) -> None:
    if not sig.is_weil_type:
        raise SignatureError("operation needs a signature where every generator has a shifted partner")


def shift_differential(sig: AlgebraSignature) -> Derivation:
    """The de Rham differential: ``x -> dx``, ``dx -> 0``."""
    _require_weil(sig)
    images = {i: sig.gen(sig.partner(i)) for i in sig.unshifted()}
    return Derivation(sig, 1, images, label="d")


def _unshifted_only(sig: AlgebraSignature, w: Element) -> bool:
    return all(not sig.generators[i].shifted for i in w.generators_used())


def contraction(v: Derivation) -> Derivation:
    """``iota_v``: kills coordinates, sends ``dx`` to ``v(x)``."""
    sig = v.signature
    _require_weil(sig)
    for i, img in v.images.items():
        if sig.generators[i].shifted:
            raise SignatureError(f"{v.label} is not a vector field: it acts on {sig.generators[i].name!r}")
        if not _unshifted_only(sig, img):
            raise SignatureError(f"{v.label} is not a vector field: image of {sig.generators[i].name!r} "
                                 "involves shifted generators")
    images = {sig.partner(i): img for i, img in v.images.items()}
    return Derivation(sig, v.degree - 1, images, label=f"iota_{v.label}")


def euler_field(sig: AlgebraSignature) -> Derivation:
    """``eps = sum weight(x) x d/dx`` on the coordinates."""
    _require_weil(sig)
    images = {i: sig.gen(i).scale(sig.generators[i].weight)
              for i in sig.unshifted() if sig.generators[i].weight}
    return Derivation(sig, 0, images, label="eps")


def euler_contraction(sig: AlgebraSignature) -> Derivation:
    return contraction(euler_field(sig))


def lie_derivative(v: Derivation) -> Derivation:
    """``L_v = [iota_v, d]``."""
    L = commutator(contraction(v), shift_differential(v.signature))
    L.label = f"L_{v.label}"
    return L


def partial_left(sig: AlgebraSignature, g: str | int) -> Derivation:
    i = sig.index(g)
    if sig.generators[i].shifted:
        raise SignatureError(f"partial derivative along shifted generator {sig.generators[i].name!r}")
    return Derivation(sig, -sig.generators[i].degree, {i: sig.one()},
                      label=f"del/del{sig.generators[i].name}", check=False)


def partial_right(f: Element, g: str | int) -> Element:
    """Right derivative, via the sign relation to the left one.

    Requires ``f`` homogeneous (or zero).
    """
    sig = f.signature
    i = sig.index(g)
    dg = sig.generators[i].degree
    out = sig.zero()
    left = partial_left(sig, i)
    # sign depends on the degree of each homogeneous piece
    by_deg: dict[int, dict] = {}
    for m, c in f.terms.items():
        by_deg.setdefault(monomial_degree(sig, m), {})[m] = c
    for d, terms in by_deg.items():
        piece = left(Element(sig, terms))
        out = out + (piece.scale(-1) if (dg * (d + dg)) % 2 else piece)
    return out


def poincare_primitive(w: Element, n: int | None = None) -> Element:
    """Primitive ``(1/n) iota_eps w`` of a closed element of positive weight ``n``."""
    sig = w.signature
    d = shift_differential(sig)
    if not w:
        return w
    weight = w.weight()
    if weight is None:
        raise DegreeError("element is not of homogeneous weight")
    if n is None:
        n = weight
    if n != weight:
        raise DegreeError(f"element has weight {weight}, not {n}")
    if n <= 0:
        raise DegreeError("primitive formula needs positive weight")
    if d(w):
        raise NotClosedError("element is not d-closed")
    lam = euler_contraction(sig)(w).scale(Fraction(1, n))
    if d(lam) != w:  # pragma: no cover - would be a defect in the calculus
        raise AssertionError("poincare primitive failed to reproduce its input")
    return lam
