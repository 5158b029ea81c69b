"""Regenerate the golden corpus ``.pde`` files.

Each system is written with tensor indices expanded into explicit components.
Conventions shared by every file:

* coordinates ``x y z t`` with ``t`` last (the time-like direction);
* Minkowski metric diag(+1, +1, +1, -1) in that coordinate order, i.e. the
  mostly-plus signature (-,+,+,+) with time moved to the last slot;
* all field components carry lower indices; raising an index with a diagonal
  metric only flips signs of whole components, which changes no rank.

Run ``python tools/gen_corpus.py`` from the repository root.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from itertools import combinations_with_replacement
from pathlib import Path

COORDS = "xyzt"
ETA = (1, 1, 1, -1)
OUT = Path(__file__).resolve().parents[1] / "src" / "involute" / "corpus"


class Expr:
    """Linear combination of field derivatives with coefficients polynomial in a mass parameter."""

    def __init__(self, terms=None):
        # (field, derivative tuple) -> {power of the mass parameter: coefficient}
        self.terms = defaultdict(lambda: defaultdict(Fraction))
        for key, poly in (terms or {}).items():
            for p, c in poly.items():
                self.terms[key][p] += c

    @classmethod
    def field(cls, name, *derivs, coeff=1, power=0):
        return cls({(name, tuple(sorted(derivs))): {power: Fraction(coeff)}})

    def __add__(self, other):
        out = Expr(self.terms)
        for key, poly in other.terms.items():
            for p, c in poly.items():
                out.terms[key][p] += c
        return out

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c, power=0):
        out = Expr()
        for key, poly in self.terms.items():
            for p, v in poly.items():
                out.terms[key][p + power] += Fraction(c) * v
        return out

    def d(self, *mus):
        out = Expr()
        for (name, derivs), poly in self.terms.items():
            key = (name, tuple(sorted(derivs + mus)))
            for p, v in poly.items():
                out.terms[key][p] += v
        return out


def total(exprs):
    out = Expr()
    for e in exprs:
        out = out + e
    return out


def box(e):
    return total(e.d(a, a).scale(ETA[a]) for a in range(4))


def render(e: Expr, param: str = "m") -> str:
    pieces = []
    for (name, derivs), poly in sorted(e.terms.items(), key=lambda kv: (-len(kv[0][1]), kv[0][1], kv[0][0])):
        for power, c in sorted(poly.items()):
            if c == 0:
                continue
            factors = []
            mag = abs(c)
            if mag != 1:
                factors.append(str(mag))
            factors.extend([param] * power)
            prefix = "*".join(factors)
            deriv = f"d({','.join(COORDS[a] for a in derivs)})" if derivs else ""
            body = deriv + name
            body = f"{prefix}*{body}" if prefix else body
            pieces.append(("-" if c < 0 else "+", body))
    if not pieces:
        raise ValueError("empty equation")
    sign, body = pieces[0]
    text = ("-" if sign == "-" else "") + body
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text + " = 0"


# field accessors ----------------------------------------------------------------

def vec(name):
    return lambda a: Expr.field(f"{name}[{a + 1}]")


def sym(prefix):
    def get(a, b):
        a, b = sorted((a, b))
        return Expr.field(f"{prefix}{COORDS[a]}{COORDS[b]}")
    return get


def antisym(prefix):
    def get(a, b):
        if a == b:
            return Expr()
        if a < b:
            return Expr.field(f"{prefix}{COORDS[a]}{COORDS[b]}")
        return Expr.field(f"{prefix}{COORDS[b]}{COORDS[a]}", coeff=-1)
    return get


def sym_names(prefix):
    return [f"{prefix}{COORDS[a]}{COORDS[b]}" for a, b in combinations_with_replacement(range(4), 2)]


def antisym_names(prefix):
    return [f"{prefix}{COORDS[a]}{COORDS[b]}" for a in range(4) for b in range(a + 1, 4)]


def trace(h):
    return total(h(a, a).scale(ETA[a]) for a in range(4))


def div(v, mu_free=None):
    """Divergence d^a v_a of a vector accessor."""
    return total(v(a).d(a).scale(ETA[a]) for a in range(4))


# operators --------------------------------------------------------------------

def maxwell_op(A, mu):
    return box(A(mu)) - div(A).d(mu)


def ricci_op(g, mu, nu):
    """Minus twice the linearized Ricci tensor."""
    return (
        box(g(mu, nu))
        - total(g(nu, a).d(a, mu).scale(ETA[a]) for a in range(4))
        - total(g(mu, a).d(a, nu).scale(ETA[a]) for a in range(4))
        + trace(g).d(mu, nu)
    )


def fp_op(h, mu, nu, signs=(1, -1, -1, 1, -1, 1)):
    """Massless Fierz-Pauli operator with the six terms weighted by ``signs``."""
    eta_mn = ETA[mu] if mu == nu else 0
    double_div = total(h(a, b).d(a, b).scale(ETA[a] * ETA[b]) for a in range(4) for b in range(4))
    out = box(h(mu, nu)).scale(signs[0])
    out = out + total(h(a, nu).d(a, mu).scale(ETA[a]) for a in range(4)).scale(signs[1])
    out = out + total(h(a, mu).d(a, nu).scale(ETA[a]) for a in range(4)).scale(signs[2])
    if eta_mn:
        out = out + double_div.scale(signs[3] * eta_mn)
        out = out + box(trace(h)).scale(signs[4] * eta_mn)
    out = out + trace(h).d(mu, nu).scale(signs[5])
    return out


def twoform_op(B, mu, nu):
    return (
        box(B(mu, nu))
        + total(B(a, mu).d(a, nu).scale(ETA[a]) for a in range(4))
        - total(B(a, nu).d(a, mu).scale(ETA[a]) for a in range(4))
    )


PAIRS_SYM = list(combinations_with_replacement(range(4), 2))
PAIRS_ANTI = [(a, b) for a in range(4) for b in range(a + 1, 4)]


# systems ----------------------------------------------------------------------

def wave():
    Phi = Expr.field("Phi")
    eq = Phi.d(3, 3) - Phi.d(0, 0) - Phi.d(1, 1) - Phi.d(2, 2)
    return ["Phi"], [], [eq], {}


def maxwell():
    A = vec("A")
    return ["A[4]"], [0, 1], [maxwell_op(A, mu) for mu in range(4)], {}


def proca():
    A = vec("A")
    eqs = [maxwell_op(A, mu) - A(mu).scale(1, power=2) for mu in range(4)]
    return ["A[4]"], [], eqs, {"m": 2}


def proca_stueckelberg():
    A = vec("A")
    pi = Expr.field("pi")
    eqs = [maxwell_op(A, mu) - A(mu).scale(1, power=2) - pi.d(mu).scale(1, power=1) for mu in range(4)]
    eqs.append(div(A).scale(1, power=1) + box(pi))
    return ["A[4]", "pi"], [0, 1], eqs, {"m": 2}


def gr_normal():
    g = sym("g")
    return sym_names("g"), [0, 4], [ricci_op(g, mu, nu) for mu, nu in PAIRS_SYM], {}


def cgr():
    g = sym("g")
    return sym_names("g"), [0, 4], [fp_op(g, mu, nu) for mu, nu in PAIRS_SYM], {}


def fp_massless():
    h = sym("h")
    return sym_names("h"), [0, 4], [fp_op(h, mu, nu) for mu, nu in PAIRS_SYM], {}


def fp_detuned():
    h = sym("h")
    return sym_names("h"), [], [fp_op(h, mu, nu, (1, 1, 1, 1, 1, 1)) for mu, nu in PAIRS_SYM], {}


def _fp_mass(h, mu, nu, trace_sign):
    eta_mn = ETA[mu] if mu == nu else 0
    mass = h(mu, nu)
    if eta_mn:
        mass = mass + trace(h).scale(trace_sign * eta_mn)
    return mass.scale(Fraction(-1, 4), power=2)


def fp_massive():
    h = sym("h")
    eqs = [fp_op(h, mu, nu) + _fp_mass(h, mu, nu, -1) for mu, nu in PAIRS_SYM]
    return sym_names("h"), [], eqs, {"m": 2}


def fp_massive_detuned():
    h = sym("h")
    eqs = [fp_op(h, mu, nu) + _fp_mass(h, mu, nu, +1) for mu, nu in PAIRS_SYM]
    return sym_names("h"), [], eqs, {"m": 2}


def fp_stueckelberg(trace_factor=2):
    h = sym("h")
    A = vec("A")
    Phi = Expr.field("Phi")
    eqs = []
    for mu, nu in PAIRS_SYM:
        eta_mn = ETA[mu] if mu == nu else 0
        inner = h(mu, nu) + A(nu).d(mu) + A(mu).d(nu) + Phi.d(mu, nu).scale(2)
        eq = fp_op(h, mu, nu) + inner.scale(1, power=2)
        if eta_mn:
            tr = trace(h) + div(A).scale(trace_factor) + box(Phi).scale(trace_factor)
            eq = eq - tr.scale(eta_mn, power=2)
        eqs.append(eq)
    for mu in range(4):
        a_part = div(A).d(mu) - box(A(mu))
        h_part = trace(h).d(mu) - total(h(mu, a).d(a).scale(ETA[a]) for a in range(4))
        eqs.append(a_part + h_part)
    double_div = total(h(a, b).d(a, b).scale(ETA[a] * ETA[b]) for a in range(4) for b in range(4))
    eqs.append(double_div - box(trace(h)))
    return sym_names("h") + ["A[4]", "Phi"], [0, 5], eqs, {"m": 2}


def twoform():
    B = antisym("B")
    return antisym_names("B"), [1, 2], [twoform_op(B, mu, nu) for mu, nu in PAIRS_ANTI], {}


def twoform_massive():
    B = antisym("B")
    eqs = [twoform_op(B, mu, nu) - B(mu, nu).scale(9, power=2) for mu, nu in PAIRS_ANTI]
    return antisym_names("B"), [], eqs, {"m": 2}


def twoform_stueckelberg():
    B = antisym("B")
    A = vec("A")
    eqs = [
        twoform_op(B, mu, nu) - B(mu, nu).scale(9, power=2) - (A(nu).d(mu) - A(mu).d(nu)).scale(9, power=1)
        for mu, nu in PAIRS_ANTI
    ]
    for mu in range(4):
        eqs.append(
            box(A(mu)) - div(A).d(mu) - total(B(mu, a).d(a).scale(ETA[a]) for a in range(4)).scale(1, power=1)
        )
    return antisym_names("B") + ["A[4]"], [1, 3], eqs, {"m": 2}


# headers ----------------------------------------------------------------------

COMMON = """\
# Conventions: coordinates x y z t, t is the time-like coordinate and comes last.
# Metric diag(+1,+1,+1,-1) in that order (signature -,+,+,+ with time last).
# All index contractions are expanded into explicit components; fields carry
# lower indices."""

SYSTEMS = {
    "wave": (wave, """\
# Scalar wave equation  d_a d^a Phi = 0  (written with the overall sign flipped).""", {
        "s": "0", "r": "0", "beta": "0 0 0 1", "alpha": "4 3 2 0", "H": "9 6 1", "dof": "1",
    }),
    "maxwell": (maxwell, """\
# Maxwell:  d_a d^a A_mu - d_mu d^a A_a = 0, one equation per mu.
# Gauge law A_mu -> A_mu + d_mu theta: one gauge function entering with one derivative.""", {
        "s": "0", "r": "0", "beta": "0 0 1 3", "alpha": "16 12 7 1", "H": "36 73/3 9/2 1/6",
        "H_bar": "16 12 2", "alpha_bar": "6 6 4 0", "dof": "2",
    }),
    "proca": (proca, """\
# Proca:  d_a d^a A_mu - d_mu d^a A_a - m^2 A_mu = 0.""", {
        "s": "2", "r": "0", "beta": "1 1 2 4", "alpha": "15 11 6 0", "H": "32 20 3", "dof": "3",
    }),
    "proca_stueckelberg": (proca_stueckelberg, """\
# Proca with a Stueckelberg scalar pi:
#   d_a d^a A_mu - d_mu d^a A_a - m^2 A_mu - m d_mu pi = 0
#   m d^a A_a + d_a d^a pi = 0
# Gauge law A -> A + d theta, pi -> pi - m theta.""", {
        "s": "0", "r": "0", "beta": "0 0 1 4", "alpha": "20 15 9 1", "H": "45 91/3 11/2 1/6",
        "H_bar": "25 18 3", "alpha_bar": "10 9 6 0", "dof": "3",
    }),
    "gr_normal": (gr_normal, """\
# Vacuum Einstein equations in Riemannian normal coordinates at a point, where
# the principal part is the linearized Ricci operator (times -2):
#   d_a d^a g_mn - d^a d_m g_na - d^a d_n g_ma + d_m d_n g = 0,  g = g_a^a.
# The symmetric partner term d^a d_n g_ma is required for the equations to be
# symmetric in (m, n); ten equations for m <= n.""", {
        "s": "0", "r": "0", "beta": "0 0 4 6", "alpha": "40 30 16 4", "H": "90 184/3 12 2/3",
        "H_bar": "10 12 2", "alpha_bar": "0 6 4 0", "dof": "2",
    }),
    "cgr": (cgr, """\
# Coincident general relativity at a point where g = eta:
#   d_a d^a g_mn - d^a d_m g_an - d^a d_n g_am + eta_mn d^a d^b g_ab
#   - eta_mn d_a d^a g + d_m d_n g = 0.""", {
        "s": "0", "r": "0", "beta": "0 0 4 6", "alpha": "40 30 16 4", "H": "90 184/3 12 2/3",
        "H_bar": "10 12 2", "alpha_bar": "0 6 4 0", "dof": "2",
    }),
    "fp_massless": (fp_massless, """\
# Massless Fierz-Pauli:
#   d_a d^a h_mn - d^a d_m h_an - d^a d_n h_am + eta_mn d^a d^b h_ab
#   - eta_mn d_a d^a h + d_m d_n h = 0.""", {
        "s": "0", "r": "0", "beta": "0 0 4 6", "alpha": "40 30 16 4", "H": "90 184/3 12 2/3",
        "H_bar": "10 12 2", "alpha_bar": "0 6 4 0", "dof": "2",
    }),
    "fp_detuned": (fp_detuned, """\
# Detuned massless spin-2 operator: all six kinetic terms enter with a plus sign
#   d_a d^a h_mn + d^a d_m h_an + d^a d_n h_am + eta_mn d^a d^b h_ab
#   + eta_mn d_a d^a h + d_m d_n h = 0.""", {
        "s": "0", "r": "0", "beta": "0 0 0 10", "alpha": "40 30 20 0", "H": "90 60 10", "dof": "10",
    }),
    "fp_massive": (fp_massive, """\
# Massive Fierz-Pauli: massless operator E_mn (see fp_massless.pde) plus
#   - (1/4) m^2 (h_mn - eta_mn h) = 0.""", {
        "s": "4", "r": "0", "beta": "8 7 10 10", "alpha": "32 23 10 0", "H": "65 38 5", "dof": "5",
    }),
    "fp_massive_detuned": (fp_massive_detuned, """\
# Detuned massive Fierz-Pauli (wrong relative sign in the mass term):
#   E_mn - (1/4) m^2 (h_mn + eta_mn h) = 0.""", {
        "s": "2", "r": "0", "beta": "4 4 8 10", "alpha": "36 26 12 0", "H": "74 44 6", "dof": "6",
    }),
    "fp_stueckelberg": (fp_stueckelberg, """\
# Massive Fierz-Pauli with Stueckelberg fields A_m and Phi:
#   E_mn + m^2 (h_mn + d_m A_n + d_n A_m + 2 d_m d_n Phi)
#        - m^2 eta_mn (h + 2 d^a A_a + 2 d_a d^a Phi) = 0
#   d^a d_m A_a - d_a d^a A_m + d_m h - d^a h_ma = 0
#   d^a d^b h_ab - d_a d^a h = 0
# The trace carries the factor 2 that makes the first line invariant under
# h -> h + d xi + d xi, A -> A - xi (it is the trace of the bracket before it).""", {
        "s": "0", "r": "0", "beta": "0 0 5 10", "alpha": "60 45 25 5", "H": "135 275/3 35/2 5/6",
        "H_bar": "35 30 5", "alpha_bar": "10 15 10 0", "dof": "5",
    }),
    "2form": (twoform, """\
# Massless 2-form: d^a H_amn = 0 with H = dB, i.e.
#   d_a d^a B_mn + d^a d_n B_am - d^a d_m B_an = 0 for m < n.""", {
        "s": "0", "r": "0", "beta": "0 1 2 3", "alpha": "24 17 10 3", "H": "54 75/2 8 1/2",
        "H_bar": "4 5 1", "alpha_bar": "0 2 2 0", "dof": "1",
    }),
    "2form_massive": (twoform_massive, """\
# Massive 2-form: E^B_mn - 9 m^2 B_mn = 0 with E^B from 2form.pde.""", {
        "s": "2", "r": "0", "beta": "4 5 6 6", "alpha": "20 13 6 0", "H": "39 22 3", "dof": "3",
    }),
    "2form_stueckelberg": (twoform_stueckelberg, """\
# Massive 2-form with a Stueckelberg vector A_m:
#   E^B_mn - 9 m^2 B_mn - 9 m (d_m A_n - d_n A_m) = 0
#   d_a d^a A_m - d_m d^a A_a - m d^a B_ma = 0""", {
        "s": "0", "r": "0", "beta": "0 1 3 6", "alpha": "40 29 17 4", "H": "90 371/6 25/2 2/3",
        "H_bar": "20 17 3", "alpha_bar": "6 8 6 0", "dof": "3",
    }),
}

EXPECT_ORDER = ("s", "r", "beta", "alpha", "H", "H_bar", "alpha_bar", "dof")


def build(name: str) -> str:
    maker, header, expected = SYSTEMS[name]
    fields, gammas, eqs, params = maker()
    lines = [header, COMMON, "#", f"# Expected values, transcribed from the reference output table for {name}:"]
    for key in EXPECT_ORDER:
        if key in expected:
            lines.append(f"#@ {key} = {expected[key]}")
    ident = name if name[0].isalpha() else "twoform" + name[len("2form"):]
    lines.append("")
    lines.append(f"system {ident} {{")
    lines.append("  coordinates x y z t;")
    lines.append(f"  fields {', '.join(fields)};")
    for key, value in params.items():
        lines.append(f"  param {key} = {value};")
    if gammas:
        lines.append(f"  gammas = [{', '.join(str(g) for g in gammas)}];")
    for eq in eqs:
        lines.append(f"  eq: {render(eq)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    for name in SYSTEMS:
        (OUT / f"{name}.pde").write_text(build(name), encoding="utf-8")
        print(f"wrote {name}.pde")


if __name__ == "__main__":
    main()
