from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import pytest

from involute.analysis import analyze
from involute.completion import CompletionTrace
from involute.corpus import CorpusEntry, entries
from involute.counting import AnalysisReport
from involute.parser import parse, parse_file
from involute.system import PDESystem

CORPUS = {e.name: e for e in entries()}
CORPUS_NAMES = sorted(CORPUS)
MASSIVE = {"proca", "fp_massive", "fp_massive_detuned", "2form_massive"}


@dataclass(frozen=True)
class Run:
    entry: CorpusEntry
    system: PDESystem
    trace: CompletionTrace
    report: AnalysisReport

    @property
    def completed(self) -> PDESystem:
        return self.trace.result


@lru_cache(maxsize=None)
def corpus_run(name: str) -> Run:
    entry = CORPUS[name]
    system = parse_file(entry.path)
    report, trace = analyze(system)
    return Run(entry, system, trace, report)


@pytest.fixture(params=CORPUS_NAMES)
def run(request) -> Run:
    return corpus_run(request.param)


def system_from(text: str) -> PDESystem:
    return parse(text, "<test>")


WAVE = "system wave { coordinates x y z t; fields Phi; eq: d(t,t)Phi - d(x,x)Phi - d(y,y)Phi - d(z,z)Phi = 0; }"
# formally integrable, symbol not involutive
TWO_SECOND_DERIVATIVES = "system pair { coordinates x y; fields Phi; eq: d(x,x)Phi = 0; eq: d(y,y)Phi = 0; }"
