"""End-to-end analysis: complete, count, and optionally cross-check by power series."""

from __future__ import annotations

from dataclasses import replace
from fractions import Fraction
from typing import Any

from .completion import DEFAULT_MAX_STEPS, CompletionTrace, cartan_kuranishi
from .counting import AnalysisReport, build_report, findings_to_list, patterns_check
from .jets import characters
from .series_oracle import classify_layers, layers_stable, solved_form_condition_check
from .system import PDESystem, fraction_to_str


def analyze(
    S: PDESystem,
    max_steps: int = DEFAULT_MAX_STEPS,
    oracle_orders: int | None = None,
    recheck: PDESystem | None = None,
    with_trace: bool = False,
) -> tuple[AnalysisReport, CompletionTrace]:
    """Run the whole pipeline on ``S``.

    ``recheck`` is the same system parsed with different parameter values.
    If any rank or dimension along the completion differs, or the final
    characters do, the report is flagged ``parameter_special``: the chosen
    values sit on a locus where the structure changes.
    """
    trace = cartan_kuranishi(S, max_steps)
    C = characters(trace.result)
    special = False
    if recheck is not None:
        other = cartan_kuranishi(recheck, max_steps)
        other_chars = characters(other.result)
        special = other_chars != C or _rank_profile(other) != _rank_profile(trace)
    report = build_report(S.name, S.m, C, S.gammas, trace.r, trace.s, special)
    extras: dict[str, Any] = {"patterns": findings_to_list(patterns_check(report))}
    if with_trace:
        extras["trace"] = trace.to_dict()
    if oracle_orders is not None:
        extras["oracle"] = oracle_summary(trace.result, report, oracle_orders)
    return replace(report, extras=extras), trace


def oracle_summary(completed: PDESystem, report: AnalysisReport, R: int) -> dict[str, Any]:
    layers = classify_layers(completed, R)
    counted = [layer.parametric for layer in layers]
    predicted = [report.H(r) for r in range(R + 1)]
    solved = solved_form_condition_check(completed, R)
    return {
        "orders": R,
        "parametric": counted,
        "hilbert": [fraction_to_str(Fraction(v)) for v in predicted],
        "agrees": all(Fraction(a) == b for a, b in zip(counted, predicted)),
        "solved_form": solved.passed,
        "stable": layers_stable(completed, R),
    }


def _rank_profile(trace: CompletionTrace) -> list[tuple]:
    return [
        (step.action, step.dim_before, step.dim_after, step.rank_before, step.rank_after) for step in trace.steps
    ]
