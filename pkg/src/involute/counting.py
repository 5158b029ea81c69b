"""Hilbert polynomials, gauge correction, strength and degree-of-freedom counts."""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import factorial
from typing import Any, Iterable, Mapping, Sequence

from .combinatorics import class_size, modified_stirling
from .jets import Characters
from .system import fraction_to_str


class NonIntegralDOFWarning(UserWarning):
    """The degree-of-freedom count came out as a non-integer rational."""


@dataclass(frozen=True)
class Polynomial:
    """Polynomial in the prolongation order r, lowest coefficient first."""

    coefficients: tuple[Fraction, ...] = ()

    def __post_init__(self) -> None:
        coeffs = [Fraction(c) for c in self.coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @classmethod
    def binomial(cls, shift: int, k: int) -> "Polynomial":
        """C(r + shift, k) as a polynomial in r."""
        out = cls((Fraction(1),))
        for i in range(k):
            out = out * cls((Fraction(shift - i), Fraction(1)))
        return out.scale(Fraction(1, factorial(k)))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def coefficient(self, i: int) -> Fraction:
        return self.coefficients[i] if 0 <= i < len(self.coefficients) else Fraction(0)

    def padded(self, length: int) -> tuple[Fraction, ...]:
        return tuple(self.coefficient(i) for i in range(length))

    def __call__(self, r) -> Fraction:
        value = Fraction(0)
        for c in reversed(self.coefficients):
            value = value * r + c
        return value

    def __add__(self, other: "Polynomial") -> "Polynomial":
        size = max(len(self.coefficients), len(other.coefficients))
        return Polynomial(tuple(self.coefficient(i) + other.coefficient(i) for i in range(size)))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + other.scale(-1)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if not self.coefficients or not other.coefficients:
            return Polynomial()
        out = [Fraction(0)] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return Polynomial(tuple(out))

    def scale(self, c) -> "Polynomial":
        return Polynomial(tuple(Fraction(c) * x for x in self.coefficients))

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        parts = []
        for i, c in enumerate(self.coefficients):
            if c == 0:
                continue
            mag = abs(c)
            mag_text = fraction_to_str(mag)
            if i == 0:
                body = mag_text
            else:
                power = "r" if i == 1 else f"r^{i}"
                body = power if mag == 1 else f"{mag_text} {power}"
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


def hilbert(C: Characters, n: int | None = None) -> Polynomial:
    """Sum over classes of alpha^(k) times C(r+k-1, r)."""
    n = C.n if n is None else n
    total = Polynomial()
    for k in range(1, n + 1):
        total = total + Polynomial.binomial(k - 1, k - 1).scale(C.alpha[k - 1])
    return total


def gauge_polynomial(gammas: Sequence[int], n: int, q: int) -> Polynomial:
    """Sum over l of gamma_l times C(q+r+l+n-1, q+r+l)."""
    total = Polynomial()
    for ell, gamma in enumerate(gammas):
        if gamma:
            total = total + Polynomial.binomial(q + ell + n - 1, n - 1).scale(gamma)
    return total


def gauge_corrected_hilbert(H: Polynomial, G: Polynomial) -> Polynomial:
    return H - G


def gauge_corrected_characters(H_bar: Polynomial, n: int, q: int | None = None) -> tuple[Fraction, ...]:
    """Invert the character-to-coefficient map, highest class first."""
    alpha_bar: dict[int, Fraction] = {}
    for k in range(n, 0, -1):
        value = factorial(k - 1) * H_bar.coefficient(k - 1)
        for j in range(k + 1, n + 1):
            value -= Fraction(factorial(k - 1), factorial(j - 1)) * alpha_bar[j] * modified_stirling(j - 1, j - k, 0)
        alpha_bar[k] = value
    return tuple(alpha_bar[k] for k in range(1, n + 1))


def strength_coefficients(
    alpha: Sequence, gammas: Sequence[int], n: int, q: int
) -> tuple[Fraction, Fraction]:
    """Leading and sub-leading coefficients of the strength at large r.

    ``alpha`` are the plain characters; the gauge counts enter explicitly.
    Z1 is the exact limit of r (Z(r) - Z0), valid whether or not Z0 vanishes:
    the alpha^(n) and gauge terms of H and G carry the same r^(n-2) shift as
    the normalising binomial except for the q and l offsets.
    """
    z0 = Fraction(alpha[n - 1]) - sum(gammas)
    if n == 1:
        return z0, Fraction(0)
    z1 = (n - 1) * (
        Fraction(alpha[n - 2]) - q * alpha[n - 1] - sum(ell * gamma for ell, gamma in enumerate(gammas))
    )
    return z0, z1


def dof(C: Characters, gammas: Sequence[int], n: int | None = None, q: int | None = None) -> Fraction:
    """Configuration-space degrees of freedom, Z1 / ((n-1) q)."""
    n = C.n if n is None else n
    q = C.q if q is None else q
    _, z1 = strength_coefficients(C.alpha, gammas, n, q)
    return z1 / ((n - 1) * q)


def dof_closed_form(beta: Sequence[int], m: int, gammas: Sequence[int], q: int) -> Fraction:
    """The same count written with beta^(n-1); equal to ``dof`` for compatible systems."""
    n = len(beta)
    weighted = sum(ell * gamma for ell, gamma in enumerate(gammas))
    return m - sum(gammas) - Fraction(beta[n - 2] + weighted, q)


def free_function_counts(alpha_bar: Sequence, n: int, q: int) -> tuple[Fraction | None, ...]:
    """Counts f_1..f_n of free functions of k coordinates; ``None`` where no formula applies."""
    a = [Fraction(x) for x in alpha_bar]
    out: list[Fraction | None] = [None] * n
    out[n - 1] = a[n - 1]
    if n >= 2:
        out[n - 2] = a[n - 2] - q * a[n - 1]
    if n == 4 and q == 2:
        out[0] = a[0] - 2 * a[1] + a[2]
        out[1] = a[1] - 2 * a[2] + a[3]
    elif n == 4 and q == 1:
        out[0] = a[0] - a[1]
        out[1] = a[1] - a[2]
    return tuple(out)


# reports ----------------------------------------------------------------------


@dataclass(frozen=True)
class Finding:
    name: str
    passed: bool
    detail: str
    informational: bool = False

    def to_dict(self) -> dict[str, Any]:
        return {"name": self.name, "passed": self.passed, "detail": self.detail, "informational": self.informational}


@dataclass(frozen=True)
class AnalysisReport:
    name: str
    n: int
    m: int
    q: int
    r: int
    s: int
    gammas: tuple[int, ...]
    beta: tuple[int, ...]
    alpha: tuple[int, ...]
    H: Polynomial
    G: Polynomial
    H_bar: Polynomial
    alpha_bar: tuple[Fraction, ...]
    Z0: Fraction
    Z1: Fraction
    dof: Fraction
    f: tuple[Fraction | None, ...]
    compatible: bool
    parameter_special: bool = False
    warnings: tuple[str, ...] = ()
    extras: Mapping[str, Any] = field(default_factory=dict, compare=False)

    @property
    def has_gauge(self) -> bool:
        return any(self.gammas)

    def to_dict(self) -> dict[str, Any]:
        out = {
            "name": self.name,
            "n": self.n,
            "m": self.m,
            "q": self.q,
            "r": self.r,
            "s": self.s,
            "gammas": list(self.gammas),
            "beta": list(self.beta),
            "alpha": list(self.alpha),
            "H": _poly_out(self.H, self.n),
            "G": _poly_out(self.G, self.n),
            "H_bar": _poly_out(self.H_bar, self.n),
            "alpha_bar": [fraction_to_str(x) for x in self.alpha_bar],
            "Z0": fraction_to_str(self.Z0),
            "Z1": fraction_to_str(self.Z1),
            "dof": fraction_to_str(self.dof),
            "f": ["n/a" if x is None else fraction_to_str(x) for x in self.f],
            "flags": {"compatible": self.compatible, "parameter_special": self.parameter_special},
            "warnings": list(self.warnings),
        }
        for key, value in self.extras.items():
            out[key] = value
        return out

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "AnalysisReport":
        known = {
            "name", "n", "m", "q", "r", "s", "gammas", "beta", "alpha", "H", "G", "H_bar",
            "alpha_bar", "Z0", "Z1", "dof", "f", "flags", "warnings",
        }
        return cls(
            name=data["name"],
            n=int(data["n"]),
            m=int(data["m"]),
            q=int(data["q"]),
            r=int(data["r"]),
            s=int(data["s"]),
            gammas=tuple(int(g) for g in data["gammas"]),
            beta=tuple(int(b) for b in data["beta"]),
            alpha=tuple(int(a) for a in data["alpha"]),
            H=Polynomial(tuple(Fraction(c) for c in data["H"])),
            G=Polynomial(tuple(Fraction(c) for c in data["G"])),
            H_bar=Polynomial(tuple(Fraction(c) for c in data["H_bar"])),
            alpha_bar=tuple(Fraction(x) for x in data["alpha_bar"]),
            Z0=Fraction(data["Z0"]),
            Z1=Fraction(data["Z1"]),
            dof=Fraction(data["dof"]),
            f=tuple(None if x == "n/a" else Fraction(x) for x in data["f"]),
            compatible=bool(data["flags"]["compatible"]),
            parameter_special=bool(data["flags"]["parameter_special"]),
            warnings=tuple(data.get("warnings", ())),
            extras={k: v for k, v in data.items() if k not in known},
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "AnalysisReport":
        return cls.from_dict(json.loads(text))


def _poly_out(p: Polynomial, n: int) -> list[str]:
    return [fraction_to_str(c) for c in p.padded(n)]


def build_report(
    name: str, m: int, C: Characters, gammas: Sequence[int], r: int, s: int, parameter_special: bool = False
) -> AnalysisReport:
    """Assemble every count that follows from the characters and the gauge data."""
    n, q = C.n, C.q
    gammas = tuple(gammas)
    H = hilbert(C, n)
    G = gauge_polynomial(gammas, n, q)
    H_bar = gauge_corrected_hilbert(H, G)
    alpha_bar = gauge_corrected_characters(H_bar, n, q)
    z0, z1 = strength_coefficients(C.alpha, gammas, n, q)
    count = z1 / ((n - 1) * q)
    notes = []
    if z0 != 0:
        notes.append("not compatible: arbitrary functions of all coordinates survive gauge fixing")
    if count.denominator != 1:
        message = (
            f"degree-of-freedom count {fraction_to_str(count)} is not an integer; "
            "integrality of this count is conjectural and the value is reported unrounded"
        )
        warnings.warn(message, NonIntegralDOFWarning, stacklevel=2)
        notes.append(message)
    return AnalysisReport(
        name=name,
        n=n,
        m=m,
        q=q,
        r=r,
        s=s,
        gammas=gammas,
        beta=C.beta,
        alpha=C.alpha,
        H=H,
        G=G,
        H_bar=H_bar,
        alpha_bar=alpha_bar,
        Z0=z0,
        Z1=z1,
        dof=count,
        f=free_function_counts(alpha_bar, n, q),
        compatible=z0 == 0,
        parameter_special=parameter_special,
        warnings=tuple(notes),
    )


def patterns_check(report: AnalysisReport) -> list[Finding]:
    """Cross-checks that every well-behaved system in the corpus satisfies."""
    n, q, m = report.n, report.q, report.m
    beta, alpha, alpha_bar = report.beta, report.alpha, report.alpha_bar
    gauge = report.has_gauge
    findings = []

    top = alpha_bar[n - 1] if gauge else alpha[n - 1]
    findings.append(
        Finding("top_character_vanishes", top == 0, f"{'gauge-corrected ' if gauge else ''}alpha^({n}) = {top}")
    )
    findings.append(
        Finding("beta_nondecreasing", all(a <= b for a, b in zip(beta, beta[1:])), f"beta = {list(beta)}")
    )
    findings.append(
        Finding("alpha_nonincreasing", all(a >= b for a, b in zip(alpha, alpha[1:])), f"alpha = {list(alpha)}")
    )
    sizes = [class_size(k, n, q, m) for k in range(1, n + 1)]
    sums = [a + b for a, b in zip(alpha, beta)]
    findings.append(Finding("class_sizes", sums == sizes, f"alpha+beta = {sums}, class sizes = {sizes}"))
    h_sub = report.H_bar.coefficient(n - 2)
    from_h = h_sub * factorial(n - 2) / q
    findings.append(
        Finding("dof_from_hilbert", from_h == report.dof, f"h_{n - 2} (n-2)!/q = {fraction_to_str(from_h)}")
    )
    sub = alpha_bar[n - 2] if gauge else Fraction(alpha[n - 2])
    findings.append(
        Finding("dof_from_characters", q * report.dof == sub, f"q*DOF = {fraction_to_str(q * report.dof)}, "
                f"{'gauge-corrected ' if gauge else ''}alpha^({n - 1}) = {fraction_to_str(sub)}")
    )
    diff = beta[n - 1] - beta[n - 2]
    findings.append(
        Finding(
            "dof_from_beta_difference",
            diff == report.dof,
            f"beta^({n}) - beta^({n - 1}) = {diff}",
            informational=True,
        )
    )
    weighted = sum(ell * g for ell, g in enumerate(report.gammas))
    findings.append(
        Finding(
            "gauge_weight_bound",
            weighted <= (q - 1) * beta[n - 2],
            f"sum l*gamma_l = {weighted}, (q-1) beta^({n - 1}) = {(q - 1) * beta[n - 2]}",
            informational=True,
        )
    )
    return findings


def with_flags(report: AnalysisReport, **changes: Any) -> AnalysisReport:
    return replace(report, **changes)


def findings_to_list(findings: Iterable[Finding]) -> list[dict[str, Any]]:
    return [f.to_dict() for f in findings]
