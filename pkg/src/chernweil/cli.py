"""``chernweil`` command line: check, derive, action, stokes.

Exit status is 0 when every check passes, 1 when a check fails and 2 when
an input cannot be read or parsed.
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction

from .aksz import DimensionError, FieldConfiguration, aksz_action, random_field, stokes_check
from .fieldspec import load_fields
from .forms import Worldvolume
from .gca import ExpressionTooLarge, term_limit
from .models import AlgebroidSpec, SpecError, load_spec
from .report import RENDERERS, Report
from .symplectic import (ModelError, SymplecticModel, chern_simons_element, cs_local_forms, hamiltonian,
                         hamiltonian_identities, validate, verify_transgression)
from .weil import build_weil


class InputError(Exception):
    """Unreadable or malformed input; maps to exit status 2."""


def _read_spec(path: str) -> AlgebroidSpec:
    try:
        return load_spec(path)
    except OSError as e:
        raise InputError(f"{path}: {e.strerror or e}") from e
    except SpecError as e:
        raise InputError(str(e)) from e


def _model_checks(spec: AlgebroidSpec, report: Report) -> SymplecticModel | None:
    """Run the algebraic checks, returning the model only if everything passed."""
    ce = spec.ce(check=False)
    defects = ce.defects()
    report.check("d_CE^2 = 0", not defects, "; ".join(f"d^2({k}) = {v}" for k, v in defects.items()))
    if defects:
        report.check("d_W^2 = 0", None, "needs d_CE^2 = 0")
    else:
        W = build_weil(ce, check=False)
        bad = [g.name for g in W.signature if W.d_w(W.d_w(W.signature.gen(g.name)))]
        report.check("d_W^2 = 0", not bad, ", ".join(bad))
    if spec.symplectic_grade is None:
        report.check("symplectic structure", None, "no symplectic block")
        return None
    try:
        model = SymplecticModel.build(ce, spec.symplectic_grade, spec.pairs, name=spec.name)
    except ModelError as e:
        report.check("symplectic structure", False, str(e))
        return None
    validation = validate(model)
    for c in validation.checks:
        if c.name != "d_CE^2 = 0":
            skipped = not c.ok and c.detail.startswith("skipped")
            report.check(c.name, None if skipped else c.ok, c.detail)
    if not validation.ok:
        return None
    pi = hamiltonian(model)
    ids = hamiltonian_identities(model, pi)
    report.check("d pi = iota_v omega", ids.d_pi_equals_iota_v_omega)
    report.check("d_CE pi = 0", ids.d_ce_pi_zero)
    bad = [a for a, ok in ids.coordinate_identity.items() if not ok]
    report.check("omega_ab v^b = dpi/dx^a", not bad, ", ".join(bad))
    cs = chern_simons_element(model)
    tr = verify_transgression(model.weil, cs, model.omega, pi.scale(Fraction(1, model.n)))
    report.check("d_W cs = omega", tr.d_w_cs_equals_inv, "" if tr.d_w_cs_equals_inv else f"d_W cs = {tr.d_w_cs}")
    report.check("i* cs = pi/n", tr.projection_equals_mu, "" if tr.projection_equals_mu else f"i* cs = {tr.projection}")
    return model


def cmd_check(args) -> Report:
    spec = _read_spec(args.spec)
    report = Report("check", spec.name)
    _model_checks(spec, report)
    return report


def cmd_derive(args) -> Report:
    spec = _read_spec(args.spec)
    report = Report("derive", spec.name)
    model = _model_checks(spec, report)
    if model is None:
        return report
    W = model.weil
    pi = hamiltonian(model)
    cs = chern_simons_element(model)
    with_d, with_dw = cs_local_forms(model)
    report.check("cs agrees with its chart formula in d", with_d == cs)
    report.check("cs agrees with its chart formula in d_W", with_dw == cs)
    report.element("omega", model.omega)
    report.element("pi", pi)
    report.element("cs", cs)
    for g in W.signature:
        report.element(f"d_W {g.name}", W.d_w(W.signature.gen(g.name)))
    return report


def _field(args, model: SymplecticModel) -> FieldConfiguration:
    try:
        fs = load_fields(args.field)
    except OSError as e:
        raise InputError(f"{args.field}: {e.strerror or e}") from e
    except SpecError as e:
        raise InputError(str(e)) from e
    try:
        return fs.configuration(model, source=args.field)
    except SpecError as e:
        raise InputError(str(e)) from e


def _fields(args, model: SymplecticModel, dim: int, cylinder: bool) -> list[tuple[str, FieldConfiguration]]:
    if args.field is not None:
        return [("", _field(args, model))]
    if not args.random:
        raise InputError("give a field file or --random N")
    rng = random.Random(args.seed)
    wv = Worldvolume.cylinder(dim - 1) if cylinder else Worldvolume.torus(dim)
    return [(f"[{i}] ", random_field(model, wv, rng)) for i in range(args.random)]


def cmd_action(args) -> Report:
    spec = _read_spec(args.spec)
    report = Report("action", spec.name)
    model = _model_checks(spec, report)
    if model is None:
        return report
    for tag, A in _fields(args, model, model.n + 1, cylinder=False):
        try:
            r = aksz_action(A)
        except DimensionError as e:
            raise InputError(str(e)) from e
        for k, v in r.breakdown().items():
            report.scalar(f"{tag}{k}", v)
        if r.closed:
            report.check(f"{tag}int cs(A) = S_AKSZ(A)", not r.difference, f"difference {r.difference}")
        else:
            report.check(f"{tag}int cs(A) = S_AKSZ(A)", None, "open worldvolume: difference reported only")
        if args.float_check:
            from .quadrature import agrees, float_action
            f = float_action(A)
            scale = max(abs(f.kinetic), abs(f.potential), 1.0)
            ok = agrees(float(r.value_cs), f.value_cs, scale=scale) and \
                agrees(float(r.value_lagrangian), f.value_lagrangian, scale=scale)
            report.scalar(f"{tag}quadrature cs", f"{f.value_cs:.15g}")
            report.scalar(f"{tag}quadrature lagrangian", f"{f.value_lagrangian:.15g}")
            report.check(f"{tag}quadrature agrees to 1e-9", ok)
    return report


def cmd_stokes(args) -> Report:
    spec = _read_spec(args.spec)
    report = Report("stokes", spec.name)
    model = _model_checks(spec, report)
    if model is None:
        return report
    for tag, A in _fields(args, model, model.n + 2, cylinder=True):
        try:
            s = stokes_check(A)
        except DimensionError as e:
            raise InputError(str(e)) from e
        report.scalar(f"{tag}boundary cs", s.boundary_cs)
        report.scalar(f"{tag}boundary lagrangian", s.boundary_lagrangian)
        report.scalar(f"{tag}bulk omega(F)", s.bulk)
        report.check(f"{tag}int_dN cs(A) = int_N omega(F_A)", s.boundary_cs == s.bulk,
                     f"{s.boundary_cs} vs {s.bulk}")
        report.check(f"{tag}int_dN L(A) = int_N omega(F_A)", s.boundary_lagrangian == s.bulk,
                     f"{s.boundary_lagrangian} vs {s.bulk}")
        if args.float_check:
            from .quadrature import agrees, float_bulk
            val = float_bulk(A)
            report.scalar(f"{tag}quadrature bulk", f"{val:.15g}")
            report.check(f"{tag}quadrature agrees to 1e-9", agrees(float(s.bulk), val))
    return report


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=sorted(RENDERERS), default="plain")
    common.add_argument("--max-terms", type=int, default=None, metavar="N",
                        help="abort when an algebra element grows beyond N terms")
    p = argparse.ArgumentParser(prog="chernweil", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="parse an algebroid file and validate the model")
    c.add_argument("spec", metavar="ALGEBROID")
    c.set_defaults(func=cmd_check)

    d = sub.add_parser("derive", parents=[common], help="print omega, pi, cs and the d_W table")
    d.add_argument("spec", metavar="ALGEBROID")
    d.set_defaults(func=cmd_derive)

    for name, func, what in (("action", cmd_action, "compare int cs(A) with the AKSZ action on a torus"),
                             ("stokes", cmd_stokes, "compare boundary and bulk integrals on a cylinder")):
        a = sub.add_parser(name, parents=[common], help=what)
        a.add_argument("spec", metavar="ALGEBROID")
        a.add_argument("field", nargs="?", metavar="FIELD", help="field file (.fld)")
        a.add_argument("--random", type=int, default=0, metavar="N", help="use N random fields instead of a file")
        a.add_argument("--seed", type=int, default=0)
        a.add_argument("--float-check", action="store_true", help="cross-check with floating-point quadrature")
        a.set_defaults(func=func)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with term_limit(args.max_terms):
            report = args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ExpressionTooLarge as e:
        report = Report(args.command, getattr(args, "spec", ""))
        report.check("expression size", False, str(e))
    sys.stdout.write(RENDERERS[args.format](report))
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
