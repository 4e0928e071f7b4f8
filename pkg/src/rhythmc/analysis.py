"""End-to-end analysis: ingest, pad, build, classify, and score complexity."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .classify import classify, to_grammar
from .entropy import ComplexityReport, EvalParams, complexity
from .rules import extract_rules
from .score import (
    DEFAULT_GRID,
    RhythmSequence,
    ScoreError,
    parse_midi_raw,
    parse_text,
    quantization_error,
    quantize,
)
from .tree import TreeError, build_tree, pad_to_power_of_two

__all__ = [
    "AnalysisConfig",
    "CorpusRow",
    "CSV_COLUMNS",
    "load_score",
    "analyze_sequence",
    "analyze_file",
    "run_corpus",
    "corpus_csv",
]

_EXTENSIONS = {".rtm", ".mid", ".midi"}


@dataclass(frozen=True)
class AnalysisConfig:
    """Per-run settings: grid override, isomorphism depths, output format."""

    grid: Fraction | None = None
    depths: tuple[int, ...] = (0, 1, 2, 3)
    output_format: str = "text"
    params: EvalParams = field(default_factory=EvalParams)

    def __post_init__(self):
        if not self.depths:
            raise ValueError("at least one depth is required")
        if any(d < 0 for d in self.depths):
            raise ValueError("depths must be non-negative")
        if tuple(sorted(self.depths)) != self.depths:
            raise ValueError("depths must be sorted ascending")
        if self.output_format not in ("text", "json", "csv"):
            raise ValueError(f"unknown output format {self.output_format!r}")


def params_from_env(base: EvalParams = EvalParams()) -> EvalParams:
    """Apply the RHYTHMC_EVAL_MMAX override, if set."""
    raw = os.environ.get("RHYTHMC_EVAL_MMAX")
    if not raw:
        return base
    return EvalParams(
        m_max=int(raw),
        epsilon=base.epsilon,
        blowup_bound=base.blowup_bound,
        search_tol=base.search_tol,
    )


def load_score(path: str | Path, grid: Fraction | None = None) -> tuple[RhythmSequence, Fraction]:
    """Read an .rtm or .mid file into a quantized sequence.

    Returns ``(sequence, quantization_error)``; the error is the total
    rounding applied, in whole notes. A ``grid`` argument overrides any
    grid named by the file itself.
    """
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix not in _EXTENSIONS:
        raise ScoreError(f"unsupported file extension {path.suffix!r} for {path}")
    if suffix == ".rtm":
        raw = parse_text(path.read_text(encoding="utf-8"))
    else:
        raw = parse_midi_raw(path.read_bytes(), grid or DEFAULT_GRID)
    target_grid = grid or raw.grid
    error = quantization_error(raw, target_grid)
    return quantize(raw, target_grid), error


def analyze_sequence(
    seq: RhythmSequence,
    depths=(0, 1, 2, 3),
    params: EvalParams = EvalParams(),
    quant_error: Fraction = Fraction(0),
) -> list[ComplexityReport]:
    """Full pipeline for one quantized sequence at each requested depth."""
    padded = pad_to_power_of_two(seq)
    pad_units = int((padded.total - seq.total) / seq.grid)
    tree = build_tree(padded)
    ruleset = extract_rules(tree)
    reports = []
    for depth in depths:
        partition = classify(ruleset, depth)
        grammar = to_grammar(ruleset, partition)
        diagnostics = {
            "pad_units": pad_units,
            "rule_count": len(ruleset.rules),
            "class_count": partition.n,
            "leaf_count": ruleset.null_count,
            "quant_error": f"{quant_error.numerator}/{quant_error.denominator}",
        }
        reports.append(complexity(grammar, params, depth=depth, diagnostics=diagnostics))
    return reports


def analyze_file(path: str | Path, config: AnalysisConfig) -> list[ComplexityReport]:
    seq, quant_error = load_score(path, config.grid)
    return analyze_sequence(seq, config.depths, config.params, quant_error)


CSV_COLUMNS = (
    "file",
    "depth",
    "classes",
    "rules",
    "radius",
    "k0",
    "pad_units",
    "inconclusive_probes",
    "error",
)


@dataclass(frozen=True)
class CorpusRow:
    file: str
    depth: int | None = None
    report: ComplexityReport | None = None
    error: str | None = None

    def csv_values(self) -> tuple[str, ...]:
        if self.error is not None:
            return (self.file, "", "", "", "", "", "", "", self.error)
        d = self.report.diagnostics
        return (
            self.file,
            str(self.depth),
            str(d.get("class_count", "")),
            str(d.get("rule_count", "")),
            repr(self.report.radius),
            repr(self.report.k0),
            str(d.get("pad_units", "")),
            str(d.get("inconclusive_probes", "")),
            "",
        )


def run_corpus(directory: str | Path, config: AnalysisConfig) -> list[CorpusRow]:
    """Analyze every ingestible file under ``directory`` at every depth.

    Per-file failures become error rows instead of aborting the run. Rows
    are ordered by relative path, then depth.
    """
    directory = Path(directory)
    files = sorted(
        (p for p in directory.rglob("*") if p.suffix.lower() in _EXTENSIONS),
        key=lambda p: p.relative_to(directory).as_posix(),
    )
    if not files:
        raise ScoreError(f"no .rtm or .mid files found under {directory}")
    rows: list[CorpusRow] = []
    for path in files:
        rel = path.relative_to(directory).as_posix()
        try:
            reports = analyze_file(path, config)
        except (ScoreError, TreeError, OSError, ValueError) as exc:
            rows.append(CorpusRow(file=rel, error=str(exc)))
            continue
        for report in reports:
            rows.append(CorpusRow(file=rel, depth=report.depth, report=report))
    return rows


def corpus_csv(rows: list[CorpusRow]) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for row in rows:
        lines.append(",".join(_csv_quote(v) for v in row.csv_values()))
    return "\n".join(lines) + "\n"


def _csv_quote(value: str) -> str:
    if any(ch in value for ch in ',"\n'):
        return '"' + value.replace('"', '""') + '"'
    return value
