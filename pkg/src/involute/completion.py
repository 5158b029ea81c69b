"""Cartan-Kuranishi completion: prolong and project until the system is involutive."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .jets import (
    characters,
    dim_S,
    num_multiplicative,
    project,
    prolong,
    symbol_rank,
)
from .system import PDESystem, dim_R, independent_equation_count

DEFAULT_MAX_STEPS = 32


class BudgetExhaustedError(RuntimeError):
    def __init__(self, max_steps: int):
        super().__init__(f"no involutive completion within budget ({max_steps} steps)")
        self.max_steps = max_steps


@dataclass(frozen=True)
class Step:
    """One transition of the completion loop.

    ``check`` steps record a test on the current system; ``prolong`` and
    ``project`` steps record the change of the working system.
    """

    action: str  # "check" | "prolong" | "project"
    order_before: int
    order_after: int
    dim_before: int
    dim_after: int
    rank_before: int
    rank_after: int
    details: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "action": self.action,
            "order_before": self.order_before,
            "order_after": self.order_after,
            "dim_before": self.dim_before,
            "dim_after": self.dim_after,
            "rank_before": self.rank_before,
            "rank_after": self.rank_after,
            "details": dict(self.details),
        }


@dataclass(frozen=True)
class CompletionTrace:
    steps: tuple[Step, ...]
    r: int
    s: int
    result: PDESystem
    source: PDESystem

    def to_dict(self) -> dict[str, Any]:
        return {"r": self.r, "s": self.s, "steps": [step.to_dict() for step in self.steps]}


@dataclass(frozen=True)
class InvolutionCheck:
    """Everything the loop needs to know about one working system."""

    order: int
    dim_R: int
    rank: int
    multiplicative: int
    rank_next_symbol: int
    dim_R_next: int
    dim_S_next: int

    @property
    def symbol_involutive(self) -> bool:
        return self.multiplicative == self.rank_next_symbol

    @property
    def projected_dim(self) -> int:
        return self.dim_R_next - self.dim_S_next

    @property
    def integrability_conditions(self) -> bool:
        return self.projected_dim < self.dim_R


def inspect(S: PDESystem) -> tuple[InvolutionCheck, PDESystem]:
    """Run the symbol and integrability tests; also return the one-step prolongation."""
    P = prolong(S, 1)
    check = InvolutionCheck(
        order=S.q,
        dim_R=dim_R(S),
        rank=independent_equation_count(S),
        multiplicative=num_multiplicative(characters(S)),
        rank_next_symbol=symbol_rank(P),
        dim_R_next=dim_R(P),
        dim_S_next=dim_S(P),
    )
    return check, P


def cartan_kuranishi(S: PDESystem, max_steps: int = DEFAULT_MAX_STEPS) -> CompletionTrace:
    """Complete ``S`` to an involutive system.

    The symbol test comes first: while it fails the working system is
    prolonged once more (``r`` grows). With an involutive symbol the
    dimension test looks for integrability conditions; when it finds some,
    the working system is replaced by the projection of its prolongation back
    to the same order (``s`` grows) and both tests start over.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be at least 1")
    steps: list[Step] = []
    work = S
    r = s = 0
    for _ in range(max_steps):
        check, P = inspect(work)
        steps.append(
            Step(
                "check",
                check.order,
                check.order,
                check.dim_R,
                check.dim_R,
                check.rank,
                check.rank,
                {
                    "multiplicative": check.multiplicative,
                    "rank_next_symbol": check.rank_next_symbol,
                    "symbol_involutive": check.symbol_involutive,
                    "dim_R_next": check.dim_R_next,
                    "dim_S_next": check.dim_S_next,
                    "projected_dim": check.projected_dim,
                    "integrability_conditions": check.integrability_conditions,
                },
            )
        )
        if not check.symbol_involutive:
            r += 1
            steps.append(
                Step("prolong", check.order, P.q, check.dim_R, dim_R(P), check.rank, independent_equation_count(P))
            )
            work = P
            continue
        if check.integrability_conditions:
            s += 1
            projected = project(P, work.q)
            steps.append(
                Step(
                    "project",
                    P.q,
                    projected.q,
                    check.dim_R,
                    dim_R(projected),
                    check.rank,
                    independent_equation_count(projected),
                    {"new_conditions": check.dim_R - check.projected_dim},
                )
            )
            work = projected
            continue
        return CompletionTrace(tuple(steps), r, s, work, S)
    raise BudgetExhaustedError(max_steps)


def replay_states(trace: CompletionTrace) -> list[PDESystem]:
    """Every working system the loop examined, in order, rebuilt from the recorded actions."""
    work = trace.source
    states = [work]
    for step in trace.steps:
        if step.action == "prolong":
            work = prolong(work, 1)
        elif step.action == "project":
            work = project(prolong(work, 1), step.order_after)
        else:
            continue
        states.append(work)
    return states


def replay_trace(trace: CompletionTrace) -> PDESystem:
    """Rebuild the completed system from the recorded actions."""
    return replay_states(trace)[-1]
