"""Algebroid files and built-in model families.

Algebroid file grammar (line oriented, ``#`` starts a comment)::

    algebroid NAME
    generator IDENT grade NAT
    d IDENT = EXPR                 # omitted generators have zero differential
    symplectic grade NAT           # optional block
    pair IDENT IDENT = RATIONAL    # unlisted pairs are zero

Pairs are completed with the graded symmetry sign.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Mapping

from . import lang
from .calculus import partial_left
from .gca import AlgebraSignature, Element, format_element
from .symplectic import ModelError, SymplecticModel, koszul_pair_sign, rational_inverse, require_valid
from .weil import CEAlgebra

KEYWORDS = {"algebroid", "generator", "grade", "d", "symplectic", "pair"}
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Diagnostic:
    line: int
    col: int
    kind: str
    message: str

    def __str__(self):
        return f"{self.line}:{self.col}: {self.kind}: {self.message}"


class SpecError(ValueError):
    """Every problem found while reading a spec, each with a line and column."""

    def __init__(self, diagnostics: list[Diagnostic], source: str = "<algebroid>"):
        self.diagnostics = diagnostics
        self.source = source
        super().__init__("\n".join(f"{source}:{d}" for d in diagnostics))

    @property
    def kinds(self) -> set[str]:
        return {d.kind for d in self.diagnostics}


@dataclass
class AlgebroidSpec:
    name: str
    signature: AlgebraSignature
    differentials: dict[str, Element]
    symplectic_grade: int | None = None
    pairs: dict[tuple[str, str], Fraction] = field(default_factory=dict)
    locations: dict[str, int] = field(default_factory=dict, compare=False)

    def ce(self, check: bool = True) -> CEAlgebra:
        return CEAlgebra.from_images(self.name, self.signature, self.differentials, check=check)

    def model(self, check: bool = True) -> SymplecticModel:
        if self.symplectic_grade is None:
            raise ModelError(f"{self.name}: no symplectic block")
        model = SymplecticModel.build(self.ce(check=check), self.symplectic_grade, self.pairs, name=self.name)
        if check:
            require_valid(model)
        return model


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return line if i < 0 else line[:i]


def parse_spec(text: str, source: str = "<algebroid>") -> AlgebroidSpec:
    """Parse spec text, raising :class:`SpecError` with every diagnostic found."""
    diags: list[Diagnostic] = []
    name = None
    gens: list[tuple[str, int]] = []
    gen_lines: dict[str, int] = {}
    gen_cols: dict[str, int] = {}
    diff_lines: list[tuple[int, str, int, str, int]] = []  # line, gen, gen col, expr text, expr col
    sympl: int | None = None
    pair_lines: list[tuple[int, str, int, str, int, str, int]] = []

    def err(ln, col, kind, msg):
        diags.append(Diagnostic(ln, col, kind, msg))

    for ln, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        words = [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]
        head, hcol = words[0]
        if name is None and head != "algebroid":
            err(ln, hcol, "syntax", "file must start with 'algebroid NAME'")
            name = ""
        if head == "algebroid":
            if name:
                err(ln, hcol, "syntax", "duplicate 'algebroid' header")
            elif len(words) != 2 or not _IDENT.match(words[1][0]):
                err(ln, hcol, "syntax", "expected 'algebroid NAME'")
                name = ""
            else:
                name = words[1][0]
        elif head == "generator":
            if len(words) != 4 or words[2][0] != "grade":
                err(ln, hcol, "syntax", "expected 'generator IDENT grade NAT'")
                continue
            (gname, gcol), _, (g, gradecol) = words[1:]
            if not _IDENT.match(gname) or gname in KEYWORDS:
                err(ln, gcol, "syntax", f"invalid generator name {gname!r}")
                continue
            if re.fullmatch(r"-\d+", g):
                err(ln, gradecol, "invalid-grade", f"grade {g} is negative; only N-graded generators are allowed")
                continue
            if not re.fullmatch(r"\d+", g):
                err(ln, gradecol, "invalid-grade", f"grade must be a natural number, got {g!r}")
                continue
            if gname in gen_lines:
                err(ln, gcol, "duplicate-generator",
                    f"generator {gname!r} already declared on line {gen_lines[gname]}")
                continue
            gen_lines[gname] = ln
            gen_cols[gname] = gcol
            gens.append((gname, int(g)))
        elif head == "d":
            m = re.match(r"\s*d\s+([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.*)$", line)
            if not m:
                err(ln, hcol, "syntax", "expected 'd IDENT = EXPR'")
                continue
            diff_lines.append((ln, m.group(1), m.start(1) + 1, m.group(2), m.start(2)))
        elif head == "symplectic":
            if len(words) != 3 or words[1][0] != "grade" or not re.fullmatch(r"\d+", words[2][0]):
                err(ln, hcol, "syntax", "expected 'symplectic grade NAT'")
                continue
            if sympl is not None:
                err(ln, hcol, "syntax", "duplicate symplectic block")
                continue
            sympl = int(words[2][0])
            if sympl == 0:
                err(ln, words[2][1], "invalid-grade", "symplectic grade must be positive")
        elif head == "pair":
            m = re.match(r"\s*pair\s+([A-Za-z_]\w*)\s+([A-Za-z_]\w*)\s*=\s*(.*)$", line)
            if not m:
                err(ln, hcol, "syntax", "expected 'pair IDENT IDENT = RATIONAL'")
                continue
            if sympl is None:
                err(ln, hcol, "syntax", "'pair' outside a 'symplectic grade' block")
                continue
            pair_lines.append((ln, m.group(1), m.start(1) + 1, m.group(2), m.start(2) + 1,
                               m.group(3), m.start(3)))
        else:
            err(ln, hcol, "syntax", f"unknown statement {head!r}")

    if name is None:
        err(1, 1, "syntax", "empty file")
    for gname, _ in gens:
        if "d" + gname in gen_lines:
            err(gen_lines["d" + gname], gen_cols["d" + gname], "duplicate-generator",
                f"generator {'d' + gname!r} collides with the shifted partner of {gname!r}")
    gens = [(g, w) for g, w in gens if not any(g == "d" + h for h, _ in gens)]
    try:
        sig = AlgebraSignature.from_grades(gens)
    except ValueError as e:  # pragma: no cover - duplicates are filtered above
        raise SpecError([Diagnostic(1, 1, "syntax", str(e))], source)

    def element_of(node) -> Element:
        return lang.evaluate(node, const=sig.const, var=lambda v: sig.gen(v.name))

    differentials: dict[str, Element] = {}
    for ln, gname, gcol, etext, ecol in diff_lines:
        if gname not in sig:
            err(ln, gcol, "unknown-identifier", f"differential of undeclared generator {gname!r}")
            continue
        if gname in differentials:
            err(ln, gcol, "syntax", f"second differential for {gname!r}")
            continue
        try:
            node = lang.parse_expr(etext, offset=ecol)
        except lang.ExprError as e:
            err(ln, e.col, e.kind, str(e))
            continue
        unknown = [v for v in lang.variables(node) if v.name not in sig]
        for v in unknown:
            err(ln, v.col, "unknown-identifier", f"undeclared generator {v.name!r}")
        if unknown:
            continue
        value = element_of(node)
        want = sig.decl(gname).degree + 1
        if value and value.degree() != want:
            err(ln, ecol + 1, "degree-mismatch",
                f"d {gname} must be homogeneous of degree {want}, got degrees {sorted(value.degrees())}")
            continue
        differentials[gname] = value

    pairs: dict[tuple[str, str], Fraction] = {}
    for ln, a, acol, b, bcol, qtext, qcol in pair_lines:
        bad = False
        for g, col in ((a, acol), (b, bcol)):
            if g not in sig:
                err(ln, col, "unknown-identifier", f"undeclared generator {g!r}")
                bad = True
        try:
            node = lang.parse_expr(qtext, offset=qcol)
        except lang.ExprError as e:
            err(ln, e.col, e.kind, str(e))
            continue
        if lang.variables(node):
            err(ln, qcol + 1, "non-rational-literal",
                "pairing entries must be rational constants (global Darboux chart)")
            continue
        if bad:
            continue
        q = lang.evaluate(node, const=lambda x: x, var=None)
        sign = koszul_pair_sign(sig.decl(a).degree, sig.decl(b).degree)
        for key, val in (((a, b), q), ((b, a), sign * q)):
            if key in pairs and pairs[key] != val:
                err(ln, acol, "symmetry", f"pair ({a}, {b}) contradicts graded symmetry or an earlier entry")
                break
            pairs[key] = val

    if diags:
        raise SpecError(sorted(diags, key=lambda d: (d.line, d.col)), source)
    return AlgebroidSpec(name, sig, differentials, sympl, {k: v for k, v in pairs.items() if v},
                         dict(gen_lines))


def load_spec(path: str | Path) -> AlgebroidSpec:
    path = Path(path)
    return parse_spec(path.read_text(encoding="utf-8"), source=str(path))


def spec_text(obj: AlgebroidSpec | SymplecticModel | CEAlgebra) -> str:
    """Serialize to spec text; parsing the result gives back an equal spec."""
    if isinstance(obj, SymplecticModel):
        name, sig, diffs = obj.name, obj.ce.signature, obj.ce.d_ce
        grade, pairs = obj.n, obj.pairing
        images = {g.name: diffs.image(g.name) for g in sig}
    elif isinstance(obj, CEAlgebra):
        name, sig = obj.name, obj.signature
        images = {g.name: obj.image(g.name) for g in sig}
        grade, pairs = None, {}
    else:
        name, sig, images = obj.name, obj.signature, obj.differentials
        grade, pairs = obj.symplectic_grade, obj.pairs
    lines = [f"algebroid {name}"]
    lines += [f"generator {g.name} grade {g.weight}" for g in sig]
    for g in sig:
        img = images.get(g.name)
        if img:
            lines.append(f"d {g.name} = {format_element(img)}")
    if grade is not None:
        lines.append(f"symplectic grade {grade}")
        order = {n: i for i, n in enumerate(sig.names)}
        for (a, b), q in sorted(pairs.items(), key=lambda kv: (order[kv[0][0]], order[kv[0][1]])):
            if order[a] <= order[b]:
                lines.append(f"pair {a} {b} = {q}")
    return "\n".join(lines) + "\n"


def spec_of(model: SymplecticModel) -> AlgebroidSpec:
    sig = model.ce.signature
    return AlgebroidSpec(model.name, sig, {g.name: model.v(g.name) for g in sig if model.v(g.name)},
                         model.n, dict(model.pairing))


# built-in families


def _poly(sig: AlgebraSignature, value) -> Element:
    """Coerce a rational, an expression string or an Element into ``sig``."""
    if isinstance(value, Element):
        return value
    if isinstance(value, (int, Fraction)):
        return sig.const(value)
    node = lang.parse_expr(str(value))
    return lang.evaluate(node, const=sig.const, var=lambda v: sig.gen(v.name))


def lie_algebra_model(structure: Mapping[tuple[int, int, int], object], pairing: Mapping[tuple[int, int], object],
                      dim: int | None = None, name: str = "lie", prefix: str = "t",
                      check: bool = True) -> SymplecticModel:
    """Delooped Lie algebra with ``d t^a = -1/2 C^a_bc t^b t^c`` and ``omega = 1/2 P_ab dt^a dt^b``.

    ``structure[(a, b, c)]`` is ``C^a_bc`` with 0-based indices and must be
    antisymmetric in ``b, c``.
    """
    C = {k: Fraction(v) for k, v in structure.items() if v}
    if dim is None:
        dim = 1 + max([i for k in C for i in k] + [i for k in pairing for i in k] + [0])
    for (a, b, c), q in C.items():
        if C.get((a, c, b), 0) != -q:
            raise ModelError(f"structure constants not antisymmetric in lower indices at C^{a}_{b}{c}")
    sig = AlgebraSignature.from_grades((f"{prefix}{i + 1}", 1) for i in range(dim))
    t = [sig.gen(i) for i in range(dim)]
    images = {}
    for a in range(dim):
        img = sig.zero()
        for b, c in itertools.product(range(dim), repeat=2):
            q = C.get((a, b, c))
            if q:
                img = img + (t[b] * t[c]).scale(-q / 2)
        images[sig.names[a]] = img
    ce = CEAlgebra.from_images(name, sig, images, check=check)
    entries = {(sig.names[a], sig.names[b]): Fraction(q) for (a, b), q in pairing.items() if q}
    for (a, b), q in entries.items():
        if entries.get((b, a), q) != q:
            raise ModelError("Lie algebra pairing must be symmetric")
    model = SymplecticModel.build(ce, 2, entries, name=name)
    if check:
        require_valid(model)
    return model


def levi_civita(a: int, b: int, c: int) -> int:
    if len({a, b, c}) < 3:
        return 0
    return 1 if (a, b, c) in ((0, 1, 2), (1, 2, 0), (2, 0, 1)) else -1


def so3_model(pairing: Mapping[tuple[int, int], object] | None = None) -> SymplecticModel:
    C = {(a, b, c): levi_civita(a, b, c) for a, b, c in itertools.product(range(3), repeat=3)}
    P = pairing if pairing is not None else {(a, a): 1 for a in range(3)}
    return lie_algebra_model(C, P, dim=3, name="so3")


def poisson_model(dim: int, tensor: Mapping[tuple[int, int], object], name: str = "poisson",
                  check: bool = True) -> SymplecticModel:
    """Poisson Lie algebroid on ``R^dim`` with coordinates ``x1..`` (grade 0), ``del1..`` (grade 1).

    ``tensor[(i, j)]`` is ``pi^ij`` (0-based), a polynomial in the ``x``'s given
    as a rational, an expression string or an Element; missing ``(j, i)``
    entries are filled in by antisymmetry.
    """
    grades = [(f"x{i + 1}", 0) for i in range(dim)] + [(f"del{i + 1}", 1) for i in range(dim)]
    sig = AlgebraSignature.from_grades(grades)
    P: dict[tuple[int, int], Element] = {}
    for (i, j), val in tensor.items():
        e = _poly(sig, val)
        if any(sig.generators[k].weight for k in e.generators_used()):
            raise ModelError(f"pi^{i + 1}{j + 1} must only involve the base coordinates")
        for key, v in (((i, j), e), ((j, i), -e)):
            if key in P and P[key] != v:
                raise ModelError(f"Poisson tensor is not antisymmetric at ({i + 1}, {j + 1})")
            P[key] = v
    zero = sig.zero()
    x = [sig.gen(f"x{i + 1}") for i in range(dim)]
    dl = [sig.gen(f"del{i + 1}") for i in range(dim)]
    images = {}
    for i in range(dim):
        images[f"x{i + 1}"] = sum((-P.get((i, j), zero) * dl[j] for j in range(dim)), zero)
        img = zero
        for j, k in itertools.product(range(dim), repeat=2):
            pjk = P.get((j, k))
            if pjk:
                img = img - (partial_left(sig, i)(pjk) * dl[j] * dl[k]).scale(Fraction(1, 2))
        images[f"del{i + 1}"] = img
    ce = CEAlgebra.from_images(name, sig, images, check=check)
    entries = {(f"x{i + 1}", f"del{i + 1}"): 1 for i in range(dim)}
    model = SymplecticModel.build(ce, 1, entries, name=name)
    if check:
        require_valid(model)
    return model


def courant_model(metric: list[list[object]], anchor: Mapping[tuple[int, int], object] | None = None,
                  flux: Mapping[tuple[int, int, int], object] | None = None, base_dim: int = 0,
                  name: str = "courant", check: bool = True) -> SymplecticModel:
    """Courant Lie 2-algebroid in Darboux coordinates ``q`` (0), ``xi`` (1), ``p`` (2).

    ``metric`` is the constant ``g_ab``, ``anchor[(i, a)] = P^i_a(q)`` and
    ``flux[(a, b, c)] = T_abc(q)`` (totally antisymmetric; the antisymmetric
    completion of the given entries is used).
    """
    anchor = anchor or {}
    flux = flux or {}
    r = len(metric)
    g = [[Fraction(x) for x in row] for row in metric]
    ginv = rational_inverse(g)
    if ginv is None:
        raise ModelError(f"{name}: fiber metric g is degenerate")
    if any(g[a][b] != g[b][a] for a in range(r) for b in range(r)):
        raise ModelError(f"{name}: fiber metric g must be symmetric")
    grades = ([(f"q{i + 1}", 0) for i in range(base_dim)] + [(f"xi{a + 1}", 1) for a in range(r)]
              + [(f"p{i + 1}", 2) for i in range(base_dim)])
    sig = AlgebraSignature.from_grades(grades)
    zero = sig.zero()
    q = [sig.gen(f"q{i + 1}") for i in range(base_dim)]
    xi = [sig.gen(f"xi{a + 1}") for a in range(r)]
    p = [sig.gen(f"p{i + 1}") for i in range(base_dim)]

    P = {k: _poly(sig, v) for k, v in anchor.items()}
    T: dict[tuple[int, int, int], Element] = {}
    for (a, b, c), val in flux.items():
        e = _poly(sig, val)
        for perm in itertools.permutations(range(3)):
            idx = tuple((a, b, c)[k] for k in perm)
            sgn = _perm_sign(perm)
            v = e if sgn > 0 else -e
            if len(set(idx)) < 3:
                if e:
                    raise ModelError(f"{name}: flux T must be totally antisymmetric")
                continue
            if idx in T and T[idx] != v:
                raise ModelError(f"{name}: flux entries inconsistent at {idx}")
            T[idx] = v
    images = {}
    for i in range(base_dim):
        images[f"q{i + 1}"] = sum((P.get((i, a), zero) * xi[a] for a in range(r)), zero)
    for a in range(r):
        img = zero
        for b in range(r):
            if not ginv[a][b]:
                continue
            inner = sum((P.get((i, b), zero) * p[i] for i in range(base_dim)), zero)
            for c, d in itertools.product(range(r), repeat=2):
                t = T.get((b, c, d))
                if t:
                    inner = inner - (t * xi[c] * xi[d]).scale(Fraction(1, 2))
            img = img + inner.scale(ginv[a][b])
        images[f"xi{a + 1}"] = img
    for i in range(base_dim):
        di = partial_left(sig, f"q{i + 1}")
        img = zero
        for (j, a), Pja in P.items():
            img = img - di(Pja) * xi[a] * p[j]
        for (a, b, c), t in T.items():
            img = img + (di(t) * xi[a] * xi[b] * xi[c]).scale(Fraction(1, 6))
        images[f"p{i + 1}"] = img
    ce = CEAlgebra.from_images(name, sig, images, check=check)
    entries: dict[tuple[str, str], Fraction] = {}
    for i in range(base_dim):
        entries[(f"p{i + 1}", f"q{i + 1}")] = Fraction(1)
    for a in range(r):
        for b in range(a, r):
            if g[a][b]:
                entries[(f"xi{a + 1}", f"xi{b + 1}")] = g[a][b]
    model = SymplecticModel.build(ce, 2, entries, name=name)
    if check:
        require_valid(model)
    return model


def _perm_sign(perm) -> int:
    sign = 1
    p = list(perm)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                sign = -sign
    return sign


def delooped_line_model(degree: int, name: str | None = None) -> SymplecticModel:
    """``b^degree R`` with ``omega = dc dc``; only odd degrees carry a nonzero binary invariant."""
    if degree <= 0:
        raise ModelError("line Lie algebra degree must be positive")
    if degree % 2 == 0:
        raise ModelError(f"b^{degree}R has only the 0 binary invariant polynomial; no symplectic structure")
    sig = AlgebraSignature.from_grades([("c", degree)])
    ce = CEAlgebra.from_images(name or f"line{degree}", sig, {})
    model = SymplecticModel.build(ce, 2 * degree, {("c", "c"): 2}, name=name or f"line{degree}")
    require_valid(model)
    return model


def line_model(k: int) -> SymplecticModel:
    """Higher abelian Chern-Simons data in dimension ``4k + 3``: ``c`` of weight ``2k + 1``, ``n = 4k + 2``."""
    if k < 0:
        raise ModelError("k must be a natural number")
    return delooped_line_model(2 * k + 1, name=f"line_k{k}")


def builtin_models() -> dict[str, SymplecticModel]:
    """One representative of each family, as used by the acceptance suite."""
    return {
        "so3": so3_model(),
        "poisson_const": poisson_model(2, {(0, 1): 1}, name="poisson_const"),
        "poisson_linear": poisson_model(3, {(0, 1): "x3", (1, 2): "x1", (2, 0): "x2"}, name="poisson_linear"),
        "courant_point": courant_model([[1, 0, 0], [0, 1, 0], [0, 0, 1]],
                                       flux={(0, 1, 2): 1}, name="courant_point"),
        "courant_exact": exact_courant_model(),
        "line_k0": line_model(0),
        "line_k1": line_model(1),
        "line_k2": line_model(2),
    }


def exact_courant_model(flux: object = "q1", name: str = "courant_exact") -> SymplecticModel:
    """``TM + T*M`` over ``R^3`` twisted by the 3-form ``h(q) dq1 dq2 dq3``.

    ``xi1..3`` pair with vectors, ``xi4..6`` with covectors; ``g`` is the
    canonical split-signature pairing and the anchor is the projection to TM.
    """
    g = [[0] * 6 for _ in range(6)]
    for i in range(3):
        g[i][i + 3] = g[i + 3][i] = 1
    anchor = {(i, i): 1 for i in range(3)}
    return courant_model(g, anchor, {(0, 1, 2): flux}, base_dim=3, name=name)
