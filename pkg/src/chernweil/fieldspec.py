"""Field files: a worldvolume and the images ``A[x]`` of the model's coordinates.

Grammar (line oriented, ``#`` starts a comment)::

    worldvolume = circle(u) * circle(v) * interval(t)
    A[GEN] = EXPR

``EXPR`` is the polynomial grammar of algebroid files over the atoms
``sin(K u)``/``cos(K u)`` (``K`` full turns, ``u`` a circle coordinate),
``t`` for an interval coordinate and ``du`` for coordinate differentials.
Generators without a line map to zero.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from . import lang
from .aksz import FieldConfiguration
from .forms import Factor, FieldForm, Worldvolume
from .models import Diagnostic, SpecError
from .symplectic import SymplecticModel

FUNCTIONS = ("sin", "cos")
_FACTOR = re.compile(r"\s*(circle|interval)\s*\(\s*([A-Za-z_]\w*)\s*\)\s*")


@dataclass
class FieldSpec:
    worldvolume: Worldvolume
    images: dict[str, FieldForm]
    locations: dict[str, int]

    def configuration(self, model: SymplecticModel, source: str = "<field>") -> FieldConfiguration:
        """Bind to a model, reporting unknown generators and wrong form degrees as diagnostics."""
        sig = model.ce.signature
        diags = []
        for name, form in self.images.items():
            ln = self.locations.get(name, 1)
            if name not in sig:
                diags.append(Diagnostic(ln, 1, "unknown-identifier",
                                        f"{model.name} has no generator {name!r}"))
            elif form and form.degree() != sig.decl(name).degree:
                diags.append(Diagnostic(ln, 1, "degree-mismatch",
                                        f"A[{name}] must be a {sig.decl(name).degree}-form, "
                                        f"got degrees {sorted(form.degrees())}"))
        if diags:
            raise SpecError(diags, source)
        return FieldConfiguration(self.worldvolume, model, self.images)


def _parse_worldvolume(body: str, col0: int, ln: int, diags: list[Diagnostic]) -> Worldvolume | None:
    factors = []
    pos = 0
    for chunk in body.split("*"):
        m = _FACTOR.fullmatch(chunk)
        if not m:
            diags.append(Diagnostic(ln, col0 + pos + 1, "syntax",
                                    "expected 'circle(NAME)' or 'interval(NAME)' factors joined by '*'"))
            return None
        factors.append(Factor(m.group(1), m.group(2)))
        pos += len(chunk) + 1
    try:
        return Worldvolume(tuple(factors))
    except ValueError as e:
        diags.append(Diagnostic(ln, col0 + 1, "syntax", str(e)))
        return None


def _form_of(node, wv: Worldvolume, ln: int, diags: list[Diagnostic]) -> FieldForm | None:
    names = set(wv.names)
    bad = []

    def var(v: lang.Var) -> FieldForm:
        if v.name in names:
            if wv.factors[wv.axis(v.name)].kind == "circle":
                bad.append(Diagnostic(ln, v.col, "syntax",
                                      f"{v.name} is a circle coordinate; use sin(K {v.name}) or cos(K {v.name})"))
                return FieldForm.zero(wv)
            return FieldForm.mode(wv, v.name, "pow", 1)
        if v.name.startswith("d") and v.name[1:] in names:
            return FieldForm.differential(wv, v.name[1:])
        bad.append(Diagnostic(ln, v.col, "unknown-identifier", f"unknown coordinate or differential {v.name!r}"))
        return FieldForm.zero(wv)

    def call(c: lang.Call) -> FieldForm:
        if c.arg not in names or wv.factors[wv.axis(c.arg)].kind != "circle":
            bad.append(Diagnostic(ln, c.col, "unknown-identifier", f"{c.func} needs a circle coordinate, got {c.arg!r}"))
            return FieldForm.zero(wv)
        return FieldForm.mode(wv, c.arg, c.func, c.freq)

    value = lang.evaluate(node, const=lambda q: FieldForm.const(wv, q), var=var, call=call)
    diags.extend(bad)
    return None if bad else value


def parse_fields(text: str, source: str = "<field>") -> FieldSpec:
    diags: list[Diagnostic] = []
    wv: Worldvolume | None = None
    seen_wv = False
    pending: list[tuple[int, str, int, str, int]] = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = re.match(r"\s*worldvolume\s*=\s*(.*)$", line)
        if m:
            if seen_wv:
                diags.append(Diagnostic(ln, 1, "syntax", "duplicate worldvolume line"))
                continue
            seen_wv = True
            wv = _parse_worldvolume(m.group(1), m.start(1), ln, diags)
            continue
        m = re.match(r"\s*A\s*\[\s*([A-Za-z_]\w*)\s*\]\s*=\s*(.*)$", line)
        if m:
            pending.append((ln, m.group(1), m.start(1) + 1, m.group(2), m.start(2)))
            continue
        col = len(line) - len(line.lstrip()) + 1
        diags.append(Diagnostic(ln, col, "syntax", "expected 'worldvolume = ...' or 'A[GEN] = EXPR'"))
    if wv is None:
        if not seen_wv:
            diags.append(Diagnostic(1, 1, "syntax", "missing 'worldvolume = ...' line"))
        raise SpecError(diags, source)
    images: dict[str, FieldForm] = {}
    locations: dict[str, int] = {}
    for ln, gen, gcol, etext, ecol in pending:
        if gen in images:
            diags.append(Diagnostic(ln, gcol, "duplicate-generator", f"A[{gen}] already given on line {locations[gen]}"))
            continue
        try:
            node = lang.parse_expr(etext, offset=ecol, functions=FUNCTIONS)
        except lang.ExprError as e:
            diags.append(Diagnostic(ln, e.col, e.kind, str(e)))
            continue
        form = _form_of(node, wv, ln, diags)
        if form is None:
            continue
        if form and form.degree() is None:
            diags.append(Diagnostic(ln, ecol + 1, "degree-mismatch",
                                    f"A[{gen}] mixes form degrees {sorted(form.degrees())}"))
            continue
        images[gen] = form
        locations[gen] = ln
    if diags:
        raise SpecError(diags, source)
    return FieldSpec(wv, images, locations)


def load_fields(path: str | Path) -> FieldSpec:
    path = Path(path)
    return parse_fields(path.read_text(encoding="utf-8"), str(path))


def fields_text(wv: Worldvolume, images: dict[str, FieldForm]) -> str:
    """Serialize a configuration in the field-file grammar."""
    lines = ["worldvolume = " + " * ".join(f"{f.kind}({f.name})" for f in wv.factors)]
    for name, form in images.items():
        if form:
            lines.append(f"A[{name}] = {form_text(form)}")
    return "\n".join(lines) + "\n"


def form_text(form: FieldForm) -> str:
    """Field-file expression for a form with rational coefficients."""
    wv = form.wv
    parts = []
    for (modes, diffs), c in sorted(form.terms.items(), key=lambda kv: (kv[0][1], repr(kv[0][0]))):
        if set(c.coeffs) - {0}:
            raise ValueError("only rational coefficients can be written to a field file")
        q = c.coeffs[0]
        fac = []
        for f, m in zip(wv.factors, modes):
            if f.kind == "interval":
                if m:
                    fac.append(f.name if m == 1 else f"{f.name}^{m}")
            elif m[1]:
                kind, k = m
                fac.append(f"{'cos' if kind == 'c' else 'sin'}({'' if k == 1 else f'{k} '}{f.name})")
        fac += [f"d{wv.factors[j].name}" for j in diffs]
        sign = "-" if q < 0 else "+"
        body = "*".join(([str(abs(q))] if abs(q) != 1 or not fac else []) + fac)
        parts.append((sign, body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out
