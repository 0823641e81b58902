"""Symplectic Lie n-algebroids: validation, Poisson bracket, Hamiltonian cocycle,
Chern-Simons element and transgression checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .calculus import contraction, euler_contraction, lie_derivative, partial_left, partial_right
from .gca import Element, SignatureError
from .weil import CEAlgebra, NotNilpotentError, WeilAlgebra, build_weil, is_horizontal, project_ce


class ModelError(ValueError):
    pass


class NonDarbouxError(ModelError):
    """Raised for non-constant pairings: the action formula assumes a global Darboux chart."""


def koszul_pair_sign(deg_a: int, deg_b: int) -> int:
    """Sign relating ``omega_ab`` and ``omega_ba`` for coordinates of the given total degrees."""
    return -1 if ((1 + deg_a) * (1 + deg_b)) % 2 else 1


def complete_pairing(ce: CEAlgebra, entries: Mapping[tuple[str, str], object]) -> dict[tuple[str, str], Fraction]:
    sig = ce.signature
    full: dict[tuple[str, str], Fraction] = {}
    for (a, b), q in entries.items():
        if isinstance(q, Element):
            if q.degree() not in (None, 0) or q.generators_used():
                raise NonDarbouxError(
                    f"pairing entry ({a}, {b}) is not constant; only global Darboux charts are supported")
            q = q.constant()
        if not isinstance(q, (int, Fraction)):
            raise ModelError(f"pairing entry ({a}, {b}) must be rational, got {q!r}")
        q = Fraction(q)
        sig.index(a), sig.index(b)
        sign = koszul_pair_sign(sig.decl(a).degree, sig.decl(b).degree)
        for key, val in (((a, b), q), ((b, a), sign * q)):
            if key in full and full[key] != val:
                raise ModelError(f"pairing entries ({a}, {b}) and ({b}, {a}) violate graded symmetry")
            full[key] = val
    return {k: v for k, v in full.items() if v}


def rational_inverse(matrix: list[list[Fraction]]) -> list[list[Fraction]] | None:
    """Gauss-Jordan inverse over the rationals; ``None`` when singular."""
    n = len(matrix)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col]), None)
        if pivot is None:
            return None
        a[col], a[pivot] = a[pivot], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


@dataclass
class SymplecticModel:
    name: str
    ce: CEAlgebra
    n: int
    pairing: dict[tuple[str, str], Fraction]
    weil: WeilAlgebra = field(repr=False)
    omega: Element = field(repr=False)

    @classmethod
    def build(cls, ce: CEAlgebra, n: int, entries: Mapping[tuple[str, str], object],
              name: str | None = None, complete: bool = True) -> "SymplecticModel":
        if n <= 0:
            raise ModelError(f"symplectic grade must be positive, got {n}")
        if complete:
            pairing = complete_pairing(ce, entries)
        else:
            pairing = {k: Fraction(v) for k, v in entries.items() if v}
        W = build_weil(ce, check=False)
        sig = W.signature
        omega = sig.zero()
        for (a, b), q in pairing.items():
            omega = omega + (W.shifted(a) * W.shifted(b)).scale(q / 2)
        return cls(name or ce.name, ce, n, pairing, W, omega)

    @property
    def coordinates(self) -> tuple[str, ...]:
        return self.ce.signature.names

    def matrix(self) -> list[list[Fraction]]:
        names = self.coordinates
        return [[self.pairing.get((a, b), Fraction(0)) for b in names] for a in names]

    def inverse(self) -> dict[tuple[str, str], Fraction]:
        inv = rational_inverse(self.matrix())
        if inv is None:
            raise ModelError(f"{self.name}: pairing is degenerate")
        names = self.coordinates
        return {(a, b): inv[i][j] for i, a in enumerate(names) for j, b in enumerate(names) if inv[i][j]}

    def weight(self, name: str) -> int:
        return self.ce.signature.decl(name).weight

    def v(self, name: str) -> Element:
        return self.ce.image(name)


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class ValidationReport:
    model: str
    checks: list[Check]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def __bool__(self):
        return self.ok

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]


def validate(model: SymplecticModel) -> ValidationReport:
    checks = []
    checks.append(Check("positive grade", model.n > 0, f"n = {model.n}"))
    defects = model.ce.defects()
    checks.append(Check("d_CE^2 = 0", not defects,
                        "; ".join(f"d^2({k}) = {v}" for k, v in defects.items())))
    sig = model.ce.signature
    bad_grade = [(a, b) for (a, b) in model.pairing if model.weight(a) + model.weight(b) != model.n]
    checks.append(Check("grade condition w(a) + w(b) = n", not bad_grade,
                        ", ".join(f"({a}, {b})" for a, b in bad_grade)))
    bad_sym = []
    for (a, b), q in model.pairing.items():
        sign = koszul_pair_sign(sig.decl(a).degree, sig.decl(b).degree)
        if model.pairing.get((b, a), 0) != sign * q:
            bad_sym.append((a, b))
    checks.append(Check("graded symmetry", not bad_sym, ", ".join(f"({a}, {b})" for a, b in bad_sym)))
    invertible = rational_inverse(model.matrix()) is not None
    checks.append(Check("nondegenerate", invertible and bool(model.coordinates), ""))
    W = model.weil
    d_omega = W.d(model.omega)
    checks.append(Check("closed: d omega = 0", not d_omega, str(d_omega) if d_omega else ""))
    if not defects:
        lv_omega = lie_derivative(W.v)(model.omega)
        checks.append(Check("invariant: L_v omega = 0", not lv_omega, str(lv_omega) if lv_omega else ""))
        dw_omega = W.d_w(model.omega)
        checks.append(Check("d_W omega = 0", not dw_omega, str(dw_omega) if dw_omega else ""))
    else:
        checks.append(Check("invariant: L_v omega = 0", False, "skipped: d_CE^2 != 0"))
    h = is_horizontal(W, model.omega)
    checks.append(Check("horizontal", h.horizontal, ", ".join(h.offending)))
    return ValidationReport(model.name, checks)


def require_valid(model: SymplecticModel) -> None:
    report = validate(model)
    if not report.ok:
        bad = report.failures()[0]
        if bad.name == "d_CE^2 = 0":
            raise NotNilpotentError(f"{model.name}: d_CE^2 != 0 ({bad.detail})", model.ce.defects())
        raise ModelError(f"{model.name}: {bad.name} fails {bad.detail}".rstrip())


def poisson_bracket(model: SymplecticModel, f: Element, g: Element) -> Element:
    """``{f, g} = (f <-d/dx^a) omega^ab (d/dx^b g)`` on the CE algebra."""
    sig = model.ce.signature
    for w in (f, g):
        if w.signature != sig:
            raise SignatureError("Poisson bracket takes elements of the CE algebra")
    inv = model.inverse()
    out = sig.zero()
    for (a, b), q in inv.items():
        fa = partial_right(f, a)
        if not fa:
            continue
        gb = partial_left(sig, b)(g)
        if gb:
            out = out + (fa * gb).scale(q)
    return out


def hamiltonian(model: SymplecticModel) -> Element:
    """``pi = iota_eps iota_v omega / (n + 1)`` as a CE element."""
    require_valid(model)
    W = model.weil
    raw = euler_contraction(W.signature)(contraction(W.v)(model.omega)).scale(Fraction(1, model.n + 1))
    pi = project_ce(W, raw)
    if W.include(pi) != raw:  # pragma: no cover
        raise AssertionError("Hamiltonian has shifted components")
    return pi


def hamiltonian_local(model: SymplecticModel) -> Element:
    """Chart formula ``omega_ab w(x^a) x^a v^b / (n + 1)``."""
    sig = model.ce.signature
    out = sig.zero()
    for (a, b), q in model.pairing.items():
        wa = model.weight(a)
        if wa:
            out = out + (sig.gen(a) * model.v(b)).scale(q * wa)
    return out.scale(Fraction(1, model.n + 1))


def chern_simons_element(model: SymplecticModel) -> Element:
    """``cs = (iota_eps omega + pi) / n``."""
    W = model.weil
    pi = W.include(hamiltonian(model))
    return (euler_contraction(W.signature)(model.omega) + pi).scale(Fraction(1, model.n))


def cs_local_forms(model: SymplecticModel) -> tuple[Element, Element]:
    """The two chart expressions, with ``d`` and with ``d_W`` respectively."""
    W = model.weil
    sig = W.signature
    pi = W.include(hamiltonian_local(model))
    with_d = sig.zero()
    with_dw = sig.zero()
    for (a, b), q in model.pairing.items():
        wa = model.weight(a)
        if not wa:
            continue
        xa = sig.gen(a)
        with_d = with_d + (xa * W.shifted(b)).scale(q * wa)
        with_dw = with_dw + (xa * W.d_w(sig.gen(b))).scale(q * wa)
    n = model.n
    return ((with_d + pi).scale(Fraction(1, n)), (with_dw - pi.scale(n)).scale(Fraction(1, n)))


@dataclass
class TransgressionReport:
    d_w_cs_equals_inv: bool
    projection_equals_mu: bool
    d_w_cs: Element
    projection: Element

    @property
    def ok(self) -> bool:
        return self.d_w_cs_equals_inv and self.projection_equals_mu

    def __bool__(self):
        return self.ok


def verify_transgression(W: WeilAlgebra, cs: Element, inv: Element, mu: Element) -> TransgressionReport:
    """Check ``d_W cs = inv`` and ``i* cs = mu`` for an arbitrary triple."""
    cs = W.include(cs)
    dcs = W.d_w(cs)
    proj = project_ce(W, cs)
    mu = project_ce(W, W.include(mu))
    return TransgressionReport(dcs == W.include(inv), proj == mu, dcs, proj)


@dataclass
class HamiltonianIdentityReport:
    d_pi_equals_iota_v_omega: bool
    d_ce_pi_zero: bool
    coordinate_identity: dict[str, bool]

    @property
    def ok(self) -> bool:
        return self.d_pi_equals_iota_v_omega and self.d_ce_pi_zero and all(self.coordinate_identity.values())


def hamiltonian_identities(model: SymplecticModel, pi: Element | None = None) -> HamiltonianIdentityReport:
    """``d pi = iota_v omega``, ``d_CE pi = 0`` and ``omega_ab v^b = d pi / d x^a`` for each ``a``."""
    W = model.weil
    pi = hamiltonian(model) if pi is None else pi
    piw = W.include(pi)
    d_ok = W.d(piw) == contraction(W.v)(model.omega)
    ce_ok = not model.ce.d_ce(pi)
    sig = model.ce.signature
    coord = {}
    for a in model.coordinates:
        lhs = sig.zero()
        for b in model.coordinates:
            q = model.pairing.get((a, b))
            if q:
                lhs = lhs + model.v(b).scale(q)
        coord[a] = lhs == partial_left(sig, a)(pi)
    return HamiltonianIdentityReport(d_ok, ce_ok, coord)


def bracket_with_hamiltonian(model: SymplecticModel) -> dict[str, tuple[Element, Element]]:
    """Exploratory: ``{pi, x^a}`` next to ``v(x^a)`` for every coordinate (no sign is asserted)."""
    pi = hamiltonian(model)
    sig = model.ce.signature
    return {a: (poisson_bracket(model, pi, sig.gen(a)), model.v(a)) for a in model.coordinates}
