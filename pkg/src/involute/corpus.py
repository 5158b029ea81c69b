"""Bundled example systems and the expected values recorded in their headers.

Each ``.pde`` file may carry lines of the form ``#@ key = value`` holding the
reference results for that system. Lists are whitespace separated; entries may
be rationals written ``p/q``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

from .counting import AnalysisReport

_EXPECT_RE = re.compile(r"^#@\s*(\w+)\s*=\s*(.*?)\s*$", re.M)

INTEGER_LISTS = ("beta", "alpha")
RATIONAL_LISTS = ("H", "H_bar", "alpha_bar")
INTEGERS = ("s", "r")
RATIONALS = ("dof",)


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    path: Path
    expected: Mapping[str, Any]

    def text(self) -> str:
        return self.path.read_text(encoding="utf-8")


def corpus_dir() -> Path:
    return Path(str(resources.files("involute") / "corpus"))


def parse_expectations(text: str) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for key, raw in _EXPECT_RE.findall(text):
        if key in INTEGER_LISTS:
            out[key] = tuple(int(x) for x in raw.split())
        elif key in RATIONAL_LISTS:
            out[key] = tuple(Fraction(x) for x in raw.split())
        elif key in INTEGERS:
            out[key] = int(raw)
        elif key in RATIONALS:
            out[key] = Fraction(raw)
        else:
            out[key] = raw
    return out


def entries(directory: Path | None = None) -> list[CorpusEntry]:
    directory = directory or corpus_dir()
    found = []
    for path in sorted(directory.glob("*.pde")):
        found.append(CorpusEntry(path.stem, path, parse_expectations(path.read_text(encoding="utf-8"))))
    return found


def entry(name: str, directory: Path | None = None) -> CorpusEntry:
    for item in entries(directory):
        if item.name == name:
            return item
    raise KeyError(f"no corpus system named {name!r}")


def _padded(values: tuple, length: int) -> tuple:
    return tuple(values) + (Fraction(0),) * (length - len(values))


def compare(report: AnalysisReport, expected: Mapping[str, Any]) -> list[tuple[str, str, str]]:
    """Field-level differences as ``(field, expected, actual)`` triples."""
    n = report.n
    actual: dict[str, Any] = {
        "s": report.s,
        "r": report.r,
        "beta": report.beta,
        "alpha": report.alpha,
        "H": report.H.padded(n),
        "H_bar": report.H_bar.padded(n),
        "alpha_bar": report.alpha_bar,
        "dof": report.dof,
    }
    diffs = []
    for key, want in expected.items():
        if key not in actual:
            continue
        got = actual[key]
        if key in RATIONAL_LISTS:
            want = _padded(want, n)
        same = (tuple(want) == tuple(got)) if isinstance(want, tuple) else (want == got)
        if not same:
            diffs.append((key, _show(want), _show(got)))
    return diffs


def _show(value: Any) -> str:
    if isinstance(value, tuple):
        return " ".join(_show(v) for v in value)
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    return str(value)
