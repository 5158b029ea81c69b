"""Command-line entry point.

Exit codes: 0 success, 1 golden mismatch, 2 input error, 3 completion budget exhausted.
"""

from __future__ import annotations

import sys
import warnings
from fractions import Fraction
from pathlib import Path

import click

from . import corpus as corpus_mod
from .analysis import analyze
from .completion import DEFAULT_MAX_STEPS, BudgetExhaustedError
from .counting import AnalysisReport, NonIntegralDOFWarning
from .parser import ParseError, parse
from .system import fraction_to_str

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3

# added to every parameter for --recheck-param
RECHECK_SHIFT = Fraction(1)


def _parse_overrides(items: tuple[str, ...]) -> dict[str, Fraction]:
    out = {}
    for item in items:
        name, sep, value = item.partition("=")
        if not sep or not name.strip():
            raise click.UsageError(f"--param expects NAME=VALUE, got {item!r}")
        try:
            out[name.strip()] = Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise click.UsageError(f"--param value {value!r} is not a rational number") from None
    return out


def _vec(values) -> str:
    return " ".join(fraction_to_str(Fraction(v)) if v is not None else "n/a" for v in values)


def render(report: AnalysisReport) -> str:
    """Human-readable report laid out like the reference tables."""
    rows = [
        ("system", f"{report.name}  (n={report.n}, m={report.m}, q={report.q})"),
        ("projections s", str(report.s)),
        ("prolongations r", str(report.r)),
        ("beta", _vec(report.beta)),
        ("alpha", _vec(report.alpha)),
        ("H(r)", str(report.H)),
    ]
    if report.has_gauge:
        rows += [
            ("gammas", " ".join(str(g) for g in report.gammas)),
            ("G(r)", str(report.G)),
            ("H_bar(r)", str(report.H_bar)),
            ("alpha_bar", _vec(report.alpha_bar)),
        ]
    rows += [
        ("Z0, Z1", f"{fraction_to_str(report.Z0)}, {fraction_to_str(report.Z1)}"),
        ("f_1..f_n", _vec(report.f)),
        ("constraints", "none (beta^(n-1) = 0)" if report.n > 1 and report.beta[-2] == 0 else "present"),
        ("degrees of freedom", fraction_to_str(report.dof)),
        ("compatible", "yes" if report.compatible else "NO"),
        ("parameter-special", "YES" if report.parameter_special else "no"),
    ]
    width = max(len(label) for label, _ in rows)
    lines = [f"{label.ljust(width)}  {value}" for label, value in rows]
    for note in report.warnings:
        lines.append(f"warning: {note}")
    for finding in report.extras.get("patterns", ()):
        if not finding["passed"]:
            kind = "note" if finding["informational"] else "pattern failed"
            lines.append(f"{kind}: {finding['name']}: {finding['detail']}")
    oracle = report.extras.get("oracle")
    if oracle:
        lines.append(
            f"oracle (r=0..{oracle['orders']}): parametric {' '.join(map(str, oracle['parametric']))}, "
            f"H {' '.join(oracle['hilbert'])}, agrees={oracle['agrees']}, "
            f"solved-form={oracle['solved_form']}, stable={oracle['stable']}"
        )
    trace = report.extras.get("trace")
    if trace:
        lines.append("trace:")
        for step in trace["steps"]:
            if step["action"] == "check":
                d = step["details"]
                lines.append(
                    f"  check   q={step['order_before']} dim R={step['dim_before']} "
                    f"rank S_(q+1)={d['rank_next_symbol']} vs {d['multiplicative']} multiplicative, "
                    f"dim R_(q+1)-dim S_(q+1)={d['projected_dim']}"
                )
            else:
                lines.append(
                    f"  {step['action']:<7} order {step['order_before']}->{step['order_after']} "
                    f"dim {step['dim_before']}->{step['dim_after']}"
                )
    return "\n".join(lines)


def _load(path: str, overrides: dict[str, Fraction]):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        click.echo(f"error: cannot read {path}: {exc.strerror or exc}", err=True)
        sys.exit(EXIT_INPUT)
    try:
        return parse(text, path, overrides), text
    except ParseError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_INPUT)


@click.group()
def main() -> None:
    """Involutive completion and degree-of-freedom counting for linear field equations."""


@main.command("analyze")
@click.argument("path", type=click.Path(dir_okay=False))
@click.option("--json", "as_json", is_flag=True, help="Emit the report as JSON.")
@click.option("--trace", is_flag=True, help="Include the completion trace.")
@click.option("--oracle-orders", type=click.IntRange(min=0), default=None, help="Cross-check H(r) for r=0..R.")
@click.option("--param", "params", multiple=True, metavar="NAME=VALUE", help="Override a declared parameter.")
@click.option("--recheck-param", is_flag=True, help="Rerun with every parameter shifted by one and compare.")
@click.option("--max-steps", type=click.IntRange(min=1), default=DEFAULT_MAX_STEPS, show_default=True)
def analyze_command(path, as_json, trace, oracle_orders, params, recheck_param, max_steps) -> None:
    """Complete the system in PATH and report its counts."""
    overrides = _parse_overrides(params)
    system, text = _load(path, overrides)
    recheck = None
    if recheck_param and system.params:
        shifted = {name: value + RECHECK_SHIFT for name, value in system.params}
        try:
            recheck = parse(text, path, shifted)
        except ParseError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_INPUT)
    try:
        with warnings.catch_warnings():
            # the report carries the same text in its warnings field
            warnings.simplefilter("ignore", NonIntegralDOFWarning)
            report, _ = analyze(system, max_steps, oracle_orders, recheck, with_trace=trace)
    except BudgetExhaustedError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_BUDGET)
    click.echo(report.to_json() if as_json else render(report))
    sys.exit(EXIT_OK)


@main.group("corpus")
def corpus_group() -> None:
    """The bundled reference systems."""


@corpus_group.command("list")
@click.option("--dir", "directory", type=click.Path(file_okay=False, exists=True), default=None)
def corpus_list(directory) -> None:
    for item in corpus_mod.entries(Path(directory) if directory else None):
        click.echo(item.name)


@corpus_group.command("run")
@click.option("--dir", "directory", type=click.Path(file_okay=False, exists=True), default=None)
@click.option("--max-steps", type=click.IntRange(min=1), default=DEFAULT_MAX_STEPS, show_default=True)
def corpus_run(directory, max_steps) -> None:
    """Analyze every entry and compare with its recorded values."""
    items = corpus_mod.entries(Path(directory) if directory else None)
    passed = 0
    code = EXIT_OK
    for item in items:
        try:
            system = parse(item.text(), str(item.path))
            report, _ = analyze(system, max_steps)
        except ParseError as exc:
            click.echo(f"{item.name}: ERROR {exc}", err=True)
            code = max(code, EXIT_INPUT)
            continue
        except BudgetExhaustedError as exc:
            click.echo(f"{item.name}: ERROR {exc}", err=True)
            code = max(code, EXIT_BUDGET)
            continue
        diffs = corpus_mod.compare(report, item.expected)
        if diffs:
            click.echo(f"{item.name}: FAIL")
            for key, want, got in diffs:
                click.echo(f"  {key}: expected {want}, got {got}")
            code = max(code, EXIT_MISMATCH)
        else:
            passed += 1
            click.echo(f"{item.name}: pass")
    click.echo(f"{passed}/{len(items)} pass")
    sys.exit(code)


if __name__ == "__main__":
    main()
