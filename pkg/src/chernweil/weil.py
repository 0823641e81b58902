"""Chevalley-Eilenberg algebras, their Weil algebras and invariant polynomials."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .calculus import Derivation, commutator, lie_derivative, shift_differential
from .gca import AlgebraSignature, Element, SignatureError, format_monomial, include, substitute


class NotNilpotentError(ValueError):
    """The differential does not square to zero; ``witness`` maps generators to ``d^2(x)``."""

    def __init__(self, message: str, witness: dict[str, Element]):
        super().__init__(message)
        self.witness = witness


def square_defects(D: Derivation) -> dict[str, Element]:
    sig = D.signature
    out = {}
    for i, g in enumerate(sig.generators):
        dd = D(D(sig.gen(i)))
        if dd:
            out[g.name] = dd
    return out


@dataclass
class CEAlgebra:
    """Free graded-commutative algebra on unshifted generators with a degree +1 differential."""

    name: str
    signature: AlgebraSignature
    d_ce: Derivation

    def __post_init__(self):
        if any(g.shifted for g in self.signature):
            raise SignatureError("CE algebra generators must be unshifted")
        if self.d_ce.signature != self.signature or self.d_ce.degree != 1:
            raise SignatureError("CE differential must be a degree +1 derivation of the CE signature")

    @classmethod
    def from_images(cls, name: str, signature: AlgebraSignature, images: Mapping[str, Element],
                    check: bool = True) -> "CEAlgebra":
        ce = cls(name, signature, Derivation(signature, 1, images, label="d_CE"))
        if check:
            ce.check()
        return ce

    def defects(self) -> dict[str, Element]:
        return square_defects(self.d_ce)

    def check(self) -> None:
        bad = self.defects()
        if bad:
            first = next(iter(bad))
            raise NotNilpotentError(f"{self.name}: d_CE^2 != 0, e.g. d^2({first}) = {bad[first]}", bad)

    def image(self, name: str) -> Element:
        return self.d_ce.image(name)


@dataclass
class WeilAlgebra:
    ce: CEAlgebra
    signature: AlgebraSignature
    d_w: Derivation
    d: Derivation = field(repr=False)
    v: Derivation = field(repr=False)

    def include(self, w: Element) -> Element:
        """Embed a CE element (or a Weil element) into the Weil signature."""
        return include(w, self.signature)

    def shifted(self, name: str) -> Element:
        return self.signature.gen(self.signature.partner(name))

    def differential_table(self) -> list[tuple[str, Element]]:
        return [(g.name, self.d_w.image(g.name)) for g in self.signature]


def build_weil(ce: CEAlgebra, check: bool = True) -> WeilAlgebra:
    """``d_W x = d_CE x + dx`` and ``d_W dx = -d(d_CE x)``; checked against ``d + L_v``."""
    if check:
        ce.check()
    sig = ce.signature.doubled()
    d = shift_differential(sig)
    v = Derivation(sig, 1, {g.name: include(ce.image(g.name), sig) for g in ce.signature}, label="v")
    images = {}
    for g in ce.signature:
        vx = v.image(g.name)
        images[g.name] = vx + d(sig.gen(g.name))
        images[sig.partner(g.name)] = -d(vx)
    d_w = Derivation(sig, 1, images, label="d_W")
    W = WeilAlgebra(ce, sig, d_w, d, v)
    if check:
        cartan = d + lie_derivative(v)
        if cartan != d_w:
            raise AssertionError("generator form of d_W disagrees with d + L_v")
        bad = square_defects(d_w)
        if bad:
            raise NotNilpotentError(f"{ce.name}: d_W^2 != 0", bad)
    return W


def project_ce(W: WeilAlgebra, w: Element) -> Element:
    """``i*``: shifted generators to zero, result in the CE signature."""
    ce_sig = W.ce.signature
    images = {}
    for g in W.signature:
        images[g.name] = ce_sig.zero() if g.shifted else ce_sig.gen(g.name)
    return substitute(W.include(w), images, target=ce_sig)


@dataclass
class HorizontalityReport:
    horizontal: bool
    offending: list[str]

    def __bool__(self):
        return self.horizontal


def is_horizontal(W: WeilAlgebra, w: Element) -> HorizontalityReport:
    """True iff every monomial is a product of shifted generators only."""
    sig = W.signature
    bad = []
    for m, _ in W.include(w).sorted_terms():
        if any(not sig.generators[i].shifted for i, _ in m):
            bad.append(format_monomial(sig, m))
    return HorizontalityReport(not bad, bad)


@dataclass
class InvariantPolynomialReport:
    closed: bool
    horizontal: bool
    d_w_image: Element
    offending: list[str]

    def __bool__(self):
        return self.closed and self.horizontal


def is_invariant_polynomial(W: WeilAlgebra, w: Element) -> InvariantPolynomialReport:
    w = W.include(w)
    dw = W.d_w(w)
    h = is_horizontal(W, w)
    return InvariantPolynomialReport(not dw, h.horizontal, dw, h.offending)


def cartan_consistent(W: WeilAlgebra) -> bool:
    return W.d + lie_derivative(W.v) == W.d_w


def graded_commutator_square(D: Derivation) -> Derivation:
    """``[D, D]``; for odd ``D`` this is ``2 D^2``."""
    return commutator(D, D)
