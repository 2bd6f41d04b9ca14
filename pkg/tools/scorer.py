"""
Puntuación P/R/F0.5 de ediciones hipótesis frente a referencia.
TP y FN cuentan en la categoría de la referencia; FP en la de la hipótesis.
"""

from collections import Counter

from models.exceptions import SourceMismatch
from models.gec_models import (
    CategoryCounts,
    Edit,
    EditList,
    ErrorCategory,
    M2Block,
    ScoreMode,
    ScoreReport,
    f_beta,
)
from tools.error_classifier import classify_edits

__all__ = ["f_beta", "score", "score_corpus", "score_blocks", "render_score_table", "score_records"]


def _category(edit: Edit) -> str:
    return (edit.category or ErrorCategory.OTHER).value


def _bump(table: dict[str, CategoryCounts], category: str, **counts: int) -> None:
    current = table.get(category, CategoryCounts())
    table[category] = current + CategoryCounts(**counts)


def score(hyp: EditList, ref: EditList, mode: ScoreMode = ScoreMode.SPAN_REPLACEMENT) -> ScoreReport:
    if len(hyp.source) != len(ref.source):
        raise SourceMismatch(f"frases de distinta longitud: {len(hyp.source)} vs {len(ref.source)} tokens")

    hyp_edits = classify_edits(hyp.source, hyp.edits)
    ref_edits = classify_edits(ref.source, ref.edits)
    unmatched_hyp = Counter(e.key(mode) for e in hyp_edits)

    per_category: dict[str, CategoryCounts] = {}
    matched_hyp: Counter = Counter()
    for edit in ref_edits:
        key = edit.key(mode)
        if unmatched_hyp[key] > 0:
            unmatched_hyp[key] -= 1
            matched_hyp[key] += 1
            _bump(per_category, _category(edit), tp=1)
        else:
            _bump(per_category, _category(edit), fn=1)

    for edit in hyp_edits:
        key = edit.key(mode)
        if matched_hyp[key] > 0:
            matched_hyp[key] -= 1
            continue
        _bump(per_category, _category(edit), fp=1)

    overall = sum(per_category.values(), CategoryCounts())
    return ScoreReport(overall=overall, per_category=dict(sorted(per_category.items())))


def score_corpus(hyps: list[EditList], refs: list[EditList], mode: ScoreMode = ScoreMode.SPAN_REPLACEMENT) -> ScoreReport:
    if len(hyps) != len(refs):
        raise SourceMismatch(f"número de frases distinto: {len(hyps)} hipótesis vs {len(refs)} referencias")
    return ScoreReport.combine(score(h, r, mode) for h, r in zip(hyps, refs))


def score_blocks(hyp_blocks: list[M2Block], ref_blocks: list[M2Block],
                 mode: ScoreMode = ScoreMode.SPAN_REPLACEMENT, annotator: int = 0) -> ScoreReport:
    """Puntúa dos ficheros M2 frase a frase (anotador indicado)."""
    return score_corpus(
        [b.edit_list(annotator) for b in hyp_blocks],
        [b.edit_list(annotator) for b in ref_blocks],
        mode,
    )


# ─────────────────────────────────────────────
# Salida
# ─────────────────────────────────────────────
def _pct(value: float) -> str:
    return f"{value * 100:.2f}"


def render_score_table(report: ScoreReport) -> str:
    header = f"{'Category':<12}{'P':>8}{'R':>8}{'F0.5':>8}{'TP':>8}{'FP':>8}{'FN':>8}"
    lines = [header]
    rows = list(report.per_category.items()) + [("Overall", report.overall)]
    for name, c in rows:
        lines.append(
            f"{name:<12}{_pct(c.precision):>8}{_pct(c.recall):>8}{_pct(c.f05):>8}{c.tp:>8}{c.fp:>8}{c.fn:>8}"
        )
    return "\n".join(lines)


def score_records(report: ScoreReport) -> list[dict]:
    """Una fila por categoría y la global, para JSON por líneas."""
    rows = list(report.per_category.items()) + [("Overall", report.overall)]
    return [
        {
            "category": name,
            "tp": c.tp,
            "fp": c.fp,
            "fn": c.fn,
            "precision": round(c.precision, 6),
            "recall": round(c.recall, 6),
            "f0.5": round(c.f05, 6),
        }
        for name, c in rows
    ]
