"""Free graded-commutative algebras over the rationals.

Generators carry a weight (the grade, i.e. the Euler eigenvalue) and a form
degree (0 for a coordinate ``x``, 1 for its shifted partner ``dx``).  Koszul
signs are governed by the total degree ``weight + form_degree``.

Monomials are tuples of ``(generator_index, exponent)`` pairs sorted by
generator declaration order; elements are sparse maps from monomials to
nonzero :class:`fractions.Fraction` coefficients.
"""

from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

Rational = Union[int, Fraction]
Monomial = tuple  # tuple[tuple[int, int], ...]

UNIT: Monomial = ()


class SignatureError(ValueError):
    """Unknown generator, or operands living in different signatures."""


class DegreeError(ValueError):
    pass


class ExpressionTooLarge(RuntimeError):
    pass


_term_limit: contextvars.ContextVar[int | None] = contextvars.ContextVar("term_limit", default=None)


@contextlib.contextmanager
def term_limit(limit: int | None):
    """Abort any arithmetic producing an element with more than ``limit`` terms."""
    token = _term_limit.set(limit)
    try:
        yield
    finally:
        _term_limit.reset(token)


@dataclass(frozen=True)
class GeneratorDecl:
    name: str
    weight: int
    form_degree: int = 0
    partner: str | None = None

    def __post_init__(self):
        if self.weight < 0:
            raise DegreeError(f"generator {self.name!r}: negative weight {self.weight}")
        if self.form_degree not in (0, 1):
            raise DegreeError(f"generator {self.name!r}: form degree must be 0 or 1")

    @property
    def shifted(self) -> bool:
        return self.form_degree == 1

    @property
    def degree(self) -> int:
        return self.weight + self.form_degree

    @property
    def odd(self) -> bool:
        return self.degree % 2 == 1


@dataclass(frozen=True)
class AlgebraSignature:
    generators: tuple[GeneratorDecl, ...]
    _index: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)
    _mul_cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        for i, g in enumerate(self.generators):
            if g.name in self._index:
                raise SignatureError(f"duplicate generator {g.name!r}")
            self._index[g.name] = i

    @classmethod
    def from_grades(cls, grades: Iterable[tuple[str, int]]) -> "AlgebraSignature":
        return cls(tuple(GeneratorDecl(name, w) for name, w in grades))

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self) -> Iterator[GeneratorDecl]:
        return iter(self.generators)

    def __contains__(self, name: str) -> bool:
        return name in self._index

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    def index(self, key: str | int) -> int:
        if isinstance(key, int):
            if 0 <= key < len(self.generators):
                return key
            raise SignatureError(f"generator index {key} out of range")
        try:
            return self._index[key]
        except KeyError:
            raise SignatureError(f"unknown generator {key!r}") from None

    def decl(self, key: str | int) -> GeneratorDecl:
        return self.generators[self.index(key)]

    # element constructors

    def zero(self) -> "Element":
        return Element(self, {})

    def one(self) -> "Element":
        return Element(self, {UNIT: Fraction(1)})

    def const(self, q: Rational) -> "Element":
        return Element(self, {UNIT: Fraction(q)} if q else {})

    def gen(self, key: str | int) -> "Element":
        return Element(self, {((self.index(key), 1),): Fraction(1)})

    def gens(self, *keys: str) -> tuple["Element", ...]:
        return tuple(self.gen(k) for k in keys)

    # Weil-type structure

    @property
    def is_weil_type(self) -> bool:
        """Every unshifted generator has a shifted partner and vice versa."""
        for g in self.generators:
            if g.partner is None or g.partner not in self._index:
                return False
            p = self.decl(g.partner)
            if p.shifted == g.shifted or p.partner != g.name or p.weight != g.weight:
                return False
        return True

    def partner(self, key: str | int) -> int:
        g = self.decl(key)
        if g.partner is None:
            raise SignatureError(f"generator {g.name!r} has no shifted partner")
        return self.index(g.partner)

    def unshifted(self) -> tuple[int, ...]:
        return tuple(i for i, g in enumerate(self.generators) if not g.shifted)

    def shifted(self) -> tuple[int, ...]:
        return tuple(i for i, g in enumerate(self.generators) if g.shifted)

    def doubled(self, prefix: str = "d") -> "AlgebraSignature":
        """Signature of the de Rham complex: each ``x`` gains a partner ``dx``.

        The original generators keep their indices, the shifted ones follow
        in the same order.
        """
        if any(g.shifted for g in self.generators):
            raise SignatureError("signature already contains shifted generators")
        base = [GeneratorDecl(g.name, g.weight, 0, prefix + g.name) for g in self.generators]
        shifted = [GeneratorDecl(prefix + g.name, g.weight, 1, g.name) for g in self.generators]
        return AlgebraSignature(tuple(base + shifted))


def _check_limit(terms: dict) -> None:
    limit = _term_limit.get()
    if limit is not None and len(terms) > limit:
        raise ExpressionTooLarge(f"expression grew to {len(terms)} terms (limit {limit})")


def normalize(sig: AlgebraSignature, factors: Sequence[str | int]) -> tuple[int, Monomial]:
    """Sort a word of generators into normal form.

    Returns ``(sign, monomial)``; sign is 0 when an odd generator repeats.
    """
    idx = [sig.index(f) for f in factors]
    odd = [sig.generators[i].odd for i in idx]
    sign = 1
    # insertion sort, counting odd-odd transpositions
    for j in range(1, len(idx)):
        k = j
        while k > 0 and idx[k - 1] > idx[k]:
            if odd[k - 1] and odd[k]:
                sign = -sign
            idx[k - 1], idx[k] = idx[k], idx[k - 1]
            odd[k - 1], odd[k] = odd[k], odd[k - 1]
            k -= 1
    mono: list[list[int]] = []
    for i in idx:
        if mono and mono[-1][0] == i:
            if sig.generators[i].odd:
                return 0, UNIT
            mono[-1][1] += 1
        else:
            mono.append([i, 1])
    return sign, tuple((i, e) for i, e in mono)


def monomial_product(sig: AlgebraSignature, m1: Monomial, m2: Monomial) -> tuple[int, Monomial]:
    key = (m1, m2)
    cached = sig._mul_cache.get(key)
    if cached is not None:
        return cached
    gens = sig.generators
    sign = 1
    odd1 = [i for i, _ in m1 if gens[i].odd]
    for j, _ in m2:
        if gens[j].odd:
            # passes every odd factor of m1 with a larger index
            for i in odd1:
                if i == j:
                    sig._mul_cache[key] = (0, UNIT)
                    return 0, UNIT
                if i > j:
                    sign = -sign
    merged = dict(m1)
    for j, e in m2:
        merged[j] = merged.get(j, 0) + e
    result = (sign, tuple(sorted(merged.items())))
    sig._mul_cache[key] = result
    return result


def monomial_degree(sig: AlgebraSignature, m: Monomial) -> int:
    return sum(sig.generators[i].degree * e for i, e in m)


def monomial_weight(sig: AlgebraSignature, m: Monomial) -> int:
    return sum(sig.generators[i].weight * e for i, e in m)


class Element:
    """A finite rational combination of normal-form monomials."""

    __slots__ = ("signature", "terms", "_hash")

    def __init__(self, signature: AlgebraSignature, terms: Mapping[Monomial, Rational] | None = None):
        self.signature = signature
        clean = {}
        for m, c in (terms or {}).items():
            if c:
                clean[m] = c if isinstance(c, Fraction) else Fraction(c)
        self.terms = clean
        self._hash = None

    @classmethod
    def monomial(cls, sig: AlgebraSignature, factors: Sequence[str | int], coeff: Rational = 1) -> "Element":
        sign, m = normalize(sig, factors)
        return cls(sig, {m: sign * Fraction(coeff)} if sign else {})

    # arithmetic

    def _coerce(self, other) -> "Element":
        if isinstance(other, Element):
            if other.signature is not self.signature and other.signature != self.signature:
                raise SignatureError("operands belong to different signatures")
            return other
        if isinstance(other, (int, Fraction)):
            return self.signature.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m, 0) + c
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        _check_limit(terms)
        return Element(self.signature, terms)

    __radd__ = __add__

    def __neg__(self):
        return Element(self.signature, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def scale(self, q: Rational) -> "Element":
        q = Fraction(q)
        if not q:
            return self.signature.zero()
        return Element(self.signature, {m: q * c for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        sig = self.signature
        terms: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                sign, m = monomial_product(sig, m1, m2)
                if not sign:
                    continue
                s = terms.get(m, 0) + sign * c1 * c2
                if s:
                    terms[m] = s
                else:
                    del terms[m]
        _check_limit(terms)
        return Element(sig, terms)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, q):
        if isinstance(q, (int, Fraction)):
            return self.scale(Fraction(1) / Fraction(q))
        return NotImplemented

    def __pow__(self, k: int):
        result = self.signature.one()
        for _ in range(k):
            result = result * self
        return result

    # comparison

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.signature.const(other)
        if not isinstance(other, Element):
            return NotImplemented
        return self.signature == other.signature and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.sorted_terms())

    # queries

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        sig = self.signature
        return sorted(self.terms.items(), key=lambda mc: (_mono_key(sig, mc[0])))

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(m, Fraction(0))

    def constant(self) -> Fraction:
        return self.coefficient(UNIT)

    def degrees(self) -> set[int]:
        return {monomial_degree(self.signature, m) for m in self.terms}

    def weights(self) -> set[int]:
        return {monomial_weight(self.signature, m) for m in self.terms}

    def degree(self) -> int | None:
        """Total degree, or ``None`` for zero and for mixed-degree elements."""
        d = self.degrees()
        return d.pop() if len(d) == 1 else None

    def weight(self) -> int | None:
        w = self.weights()
        return w.pop() if len(w) == 1 else None

    @property
    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def generators_used(self) -> set[int]:
        return {i for m in self.terms for i, _ in m}

    def __repr__(self):
        return f"Element({format_element(self)})"

    def __str__(self):
        return format_element(self)


def _mono_key(sig: AlgebraSignature, m: Monomial):
    return (monomial_degree(sig, m), tuple((i, -e) for i, e in m))


def format_monomial(sig: AlgebraSignature, m: Monomial, names: Sequence[str] | None = None) -> str:
    names = names or sig.names
    parts = [names[i] if e == 1 else f"{names[i]}^{e}" for i, e in m]
    return "*".join(parts)


def format_element(w: Element, names: Sequence[str] | None = None) -> str:
    """Render in the algebroid-file grammar, e.g. ``-1/2*t2*t3 + dt1``."""
    if not w.terms:
        return "0"
    out = []
    for m, c in w.sorted_terms():
        sign = "-" if c < 0 else "+"
        a = abs(c)
        body = format_monomial(w.signature, m, names)
        if not body:
            text = str(a)
        elif a == 1:
            text = body
        else:
            text = f"{a}*{body}"
        out.append((sign, text))
    first_sign, first = out[0]
    s = ("-" if first_sign == "-" else "") + first
    for sign, text in out[1:]:
        s += f" {sign} {text}"
    return s


def substitute(w: Element, images: Mapping[str | int, Element], *, target: AlgebraSignature | None = None,
               check: bool = True) -> Element:
    """Apply the algebra morphism determined by ``images`` on generators.

    Every generator occurring in ``w`` needs an image.  With ``check`` the
    image of each generator must be zero or homogeneous of the generator's
    total degree.
    """
    sig = w.signature
    imgs: dict[int, Element] = {sig.index(k): v for k, v in images.items()}
    if target is None:
        target = next(iter(imgs.values())).signature if imgs else sig
    for i, img in imgs.items():
        if img.signature != target:
            raise SignatureError(f"image of {sig.generators[i].name!r} lives in another signature")
        if check and img:
            d = img.degree()
            if d != sig.generators[i].degree:
                raise DegreeError(
                    f"image of {sig.generators[i].name!r} has degree {d}, expected {sig.generators[i].degree}")
    result = target.zero()
    powers: dict[tuple[int, int], Element] = {}
    for m, c in w.terms.items():
        term = target.const(c)
        for i, e in m:
            if i not in imgs:
                raise SignatureError(f"no image for generator {sig.generators[i].name!r}")
            p = powers.get((i, e))
            if p is None:
                p = powers[(i, e)] = imgs[i] ** e
            term = term * p
            if not term:
                break
        result = result + term
    return result


def include(w: Element, target: AlgebraSignature) -> Element:
    """Re-home ``w`` into ``target`` by generator name (no signs involved)."""
    if w.signature == target:
        return w
    src = w.signature
    remap = [target.index(g.name) for g in src.generators]
    terms = {}
    for m, c in w.terms.items():
        sign, nm = normalize(target, [remap[i] for i, e in m for _ in range(e)])
        if sign:
            terms[nm] = terms.get(nm, 0) + sign * c
    return Element(target, terms)
