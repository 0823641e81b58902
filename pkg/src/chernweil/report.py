"""Command reports and their renderings.

The structured rendering is a line-oriented text format::

    report 1
    command: derive
    model: so3
    status: pass
    checks:
      - pass | d_CE^2 = 0
      - fail | closed: d omega = 0 | d omega = ...
    elements:
      - omega = 1/2*dt1^2 + ...
    scalars:
      - value_cs = -2π
    end

Sections may be empty.  Each list item is ``- `` followed by the payload.
Check items are ``STATUS | NAME`` or ``STATUS | NAME | DETAIL``, split on
the first two ``" | "`` separators (names never contain one).  Element and
scalar items are ``LABEL = VALUE``, split on the first ``" = "``.  Newlines
inside values are replaced by ``"; "``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .gca import Element, format_element

STATUSES = ("pass", "fail", "skip")
FORMAT_VERSION = "1"


@dataclass
class CheckResult:
    name: str
    status: str
    detail: str = ""


@dataclass
class Report:
    command: str
    model: str
    checks: list[CheckResult] = field(default_factory=list)
    elements: list[tuple[str, str]] = field(default_factory=list)
    scalars: list[tuple[str, str]] = field(default_factory=list)
    # LaTeX renderings keyed by element label, filled in by the producer
    latex: dict[str, str] = field(default_factory=dict, compare=False)

    def check(self, name: str, ok: bool | None, detail: str = "") -> None:
        status = "skip" if ok is None else ("pass" if ok else "fail")
        self.checks.append(CheckResult(name, status, _one_line(detail)))

    def element(self, label: str, w: Element) -> None:
        self.elements.append((label, format_element(w)))
        self.latex[label] = latex_element(w)

    def scalar(self, label: str, value) -> None:
        self.scalars.append((label, _one_line(str(value))))

    @property
    def ok(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1


def _one_line(text: str) -> str:
    return "; ".join(part.strip() for part in str(text).splitlines() if part.strip())


def render_plain(r: Report) -> str:
    lines = [f"{r.command}: {r.model}"]
    if r.elements:
        width = max(len(k) for k, _ in r.elements)
        lines += [f"  {k.ljust(width)} = {v}" for k, v in r.elements]
    if r.scalars:
        width = max(len(k) for k, _ in r.scalars)
        lines += [f"  {k.ljust(width)} = {v}" for k, v in r.scalars]
    for c in r.checks:
        tail = f"  ({c.detail})" if c.detail else ""
        lines.append(f"  [{c.status.upper()}] {c.name}{tail}")
    lines.append("OK" if r.ok else "FAILED")
    return "\n".join(lines) + "\n"


def render_structured(r: Report) -> str:
    lines = [f"report {FORMAT_VERSION}", f"command: {r.command}", f"model: {r.model}",
             f"status: {'pass' if r.ok else 'fail'}", "checks:"]
    lines += [f"  - {c.status} | {c.name}" + (f" | {c.detail}" if c.detail else "") for c in r.checks]
    lines.append("elements:")
    lines += [f"  - {k} = {v}" for k, v in r.elements]
    lines.append("scalars:")
    lines += [f"  - {k} = {v}" for k, v in r.scalars]
    lines.append("end")
    return "\n".join(lines) + "\n"


class StructuredFormatError(ValueError):
    pass


def parse_structured(text: str) -> Report:
    lines = text.splitlines()
    if not lines or lines[0].strip() != f"report {FORMAT_VERSION}":
        raise StructuredFormatError(f"expected header 'report {FORMAT_VERSION}'")
    header: dict[str, str] = {}
    report = None
    section = None
    ended = False
    for ln, line in enumerate(lines[1:], start=2):
        if ended:
            if line.strip():
                raise StructuredFormatError(f"line {ln}: content after 'end'")
            continue
        if line == "end":
            ended = True
            continue
        m = re.fullmatch(r"(command|model|status): (.*)", line)
        if m:
            header[m.group(1)] = m.group(2)
            continue
        if line in ("checks:", "elements:", "scalars:"):
            section = line[:-1]
            if report is None:
                if "command" not in header or "model" not in header:
                    raise StructuredFormatError(f"line {ln}: section before command/model")
                report = Report(header["command"], header["model"])
            continue
        if not line.startswith("  - ") or section is None:
            raise StructuredFormatError(f"line {ln}: unexpected {line!r}")
        item = line[4:]
        if section == "checks":
            parts = item.split(" | ", 2)
            if len(parts) < 2:
                raise StructuredFormatError(f"line {ln}: expected 'STATUS | NAME [| DETAIL]'")
            status, name, detail = (parts + [""])[:3]
            if status not in STATUSES:
                raise StructuredFormatError(f"line {ln}: bad status {status!r}")
            report.checks.append(CheckResult(name, status, detail))
        else:
            if " = " not in item:
                raise StructuredFormatError(f"line {ln}: expected 'LABEL = VALUE'")
            k, v = item.split(" = ", 1)
            getattr(report, section).append((k, v))
    if not ended:
        raise StructuredFormatError("missing 'end'")
    if report is None:
        raise StructuredFormatError("missing sections")
    if header.get("status") != ("pass" if report.ok else "fail"):
        raise StructuredFormatError("status line disagrees with the checks")
    return report


# LaTeX

_LATEX_NAMES = [
    (re.compile(r"del(\d+)\Z"), r"\partial_{{{0}}}"),
    (re.compile(r"xi(\d+)\Z"), r"\xi^{{{0}}}"),
    (re.compile(r"p(\d+)\Z"), r"p_{{{0}}}"),
    (re.compile(r"([tqx])(\d+)\Z"), r"{0}^{{{1}}}"),
]


def latex_name(name: str, shifted: bool = False) -> str:
    if shifted:
        return r"\mathbf{d}" + latex_name(name[1:]) if name.startswith("d") else name
    for pat, tmpl in _LATEX_NAMES:
        m = pat.match(name)
        if m:
            return tmpl.format(*m.groups())
    return name


def _latex_coeff(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return rf"\frac{{{q.numerator}}}{{{q.denominator}}}"


def latex_element(w: Element) -> str:
    """Canonical term order; shifted generators render as ``\\mathbf{d}x``."""
    if not w.terms:
        return "0"
    sig = w.signature
    out = []
    for m, c in w.sorted_terms():
        factors = []
        for i, e in m:
            g = sig.generators[i]
            name = latex_name(g.name, g.shifted)
            if e > 1:
                name = f"({name})^{{{e}}}" if g.shifted or "^" in name else f"{name}^{{{e}}}"
            factors.append(name)
        a = abs(c)
        body = " ".join(factors)
        text = body if a == 1 and body else (f"{_latex_coeff(a)} {body}".strip())
        out.append(("-" if c < 0 else "+", text))
    s = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, text in out[1:]:
        s += f" {sign} {text}"
    return s


def render_latex(r: Report) -> str:
    lines = [f"% {r.command}: {r.model}", r"\begin{align*}"]
    rows = [rf"  \text{{{_latex_text(k)}}} &= {r.latex.get(k, v)}" for k, v in r.elements]
    rows += [rf"  \text{{{_latex_text(k)}}} &= {_latex_scalar(v)}" for k, v in r.scalars]
    lines.append(" \\\\\n".join(rows))
    lines.append(r"\end{align*}")
    for c in r.checks:
        lines.append(f"% [{c.status}] {c.name}" + (f": {c.detail}" if c.detail else ""))
    return "\n".join(lines) + "\n"


def _latex_text(label: str) -> str:
    return label.replace("_", r"\_").replace("^", r"\^{}")


def _latex_scalar(text: str) -> str:
    return text.replace("2π", r"2\pi").replace("*", " ")


RENDERERS = {"plain": render_plain, "latex": render_latex, "structured": render_structured}
