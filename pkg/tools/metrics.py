"""
Métricas de code-switching por enunciado y por corpus.

Convenciones de las fórmulas:
- CMI:        100·(N − u − t_max)/(N − u), u = tokens NEUTRAL
- M-Index:    (1 − Σp²)/((k − 1)·Σp²)
- I-Index:    cambios de idioma / (N − 1) sobre los tokens con idioma
- Burstiness: (σ − μ)/(σ + μ) con σ poblacional de las longitudes de tramo
- CF:         (a·MF + b·SF)/f(LF), MF = CMI/100, SF = I-Index, LF = idiomas/palabras
"""

import math
from collections import Counter
from typing import Iterable, Mapping

import numpy as np

from models.exceptions import EmptyInput
from models.metric_models import (
    CfConfig,
    CfVariant,
    MetricReport,
    MetricVector,
    SpanStats,
    UtteranceMetrics,
)
from models.text_models import LanguageTag, TaggedUtterance
from tools.text_core import detect_language_pair, extract_spans

TABLE_ROWS = [
    ("CMI", "cmi", 2),
    ("M-Index", "m_index", 3),
    ("I-Index", "i_index", 2),
    ("Burstiness", "burstiness", 2),
    ("CF1", "cf1", 2),
    ("CF2", "cf2", 2),
    ("CF3", "cf3", 2),
]


# ─────────────────────────────────────────────
# Métricas por enunciado
# ─────────────────────────────────────────────
def language_histogram(tagged: TaggedUtterance) -> dict[LanguageTag, int]:
    return dict(Counter(tagged.content_tags))


def _cmi_from_counts(total: int, neutral: int, histogram: Mapping) -> float:
    content = total - neutral
    if content <= 0 or not histogram:
        return 0.0
    t_max = max(histogram.values())
    return 100.0 * (content - t_max) / content


def cmi(tagged: TaggedUtterance) -> float:
    histogram = language_histogram(tagged)
    neutral = len(tagged.tags) - sum(histogram.values())
    return _cmi_from_counts(len(tagged.tags), neutral, histogram)


def m_index(histogram: Mapping) -> float:
    counts = [c for c in histogram.values() if c > 0]
    total = sum(counts)
    if total == 0:
        raise EmptyInput("M-Index sobre un histograma vacío")
    k = len(counts)
    if k == 1:
        return 0.0
    sum_sq = sum((c / total) ** 2 for c in counts)
    # el redondeo deja 1.0000000000000002 con k >= 3 uniforme
    return min(1.0, max(0.0, (1.0 - sum_sq) / ((k - 1) * sum_sq)))


def i_index(tagged: TaggedUtterance) -> float:
    content = tagged.content_tags
    if len(content) < 2:
        return 0.0
    switches = sum(1 for a, b in zip(content, content[1:]) if a != b)
    return switches / (len(content) - 1)


def span_stats(lengths: Iterable[int]) -> SpanStats:
    values = np.asarray(list(lengths), dtype=float)
    if values.size == 0:
        raise EmptyInput("no hay tramos de idioma")
    return SpanStats(mean=float(values.mean()), std=float(values.std()))


def burstiness(lengths: Iterable[int]) -> float:
    stats = span_stats(lengths)
    return (stats.std - stats.mean) / (stats.std + stats.mean)


def _cf_denominator(variant: CfVariant, lf: float, words: int) -> float:
    if variant == CfVariant.CF1:
        return lf
    if variant == CfVariant.CF2:
        # W == 1: f = 1 por convención
        if words <= 1:
            return 1.0
        return 0.25 / (words - 1) * (lf - 1) + 1
    return math.atan(lf) / math.pi + 0.75


def complexity_factor(tagged: TaggedUtterance, cfg: CfConfig) -> float:
    words = len(tagged.content_tags)
    if words == 0:
        raise EmptyInput("CF sin tokens con idioma")
    mf = cmi(tagged) / 100.0
    sf = i_index(tagged)
    lf = len(set(tagged.content_tags)) / words
    return (cfg.a * mf + cfg.b * sf) / _cf_denominator(cfg.variant, lf, words)


def complexity_factors(tagged: TaggedUtterance, cfg: CfConfig | None = None) -> tuple[float, float, float]:
    cfg = cfg or CfConfig()
    return tuple(
        complexity_factor(tagged, cfg.model_copy(update={"variant": variant}))
        for variant in (CfVariant.CF1, CfVariant.CF2, CfVariant.CF3)
    )


def utterance_vector(tagged: TaggedUtterance, cfg: CfConfig | None = None) -> MetricVector:
    cf1, cf2, cf3 = complexity_factors(tagged, cfg)
    return MetricVector(
        cmi=cmi(tagged),
        m_index=m_index(language_histogram(tagged)),
        i_index=i_index(tagged),
        burstiness=burstiness(s.length for s in extract_spans(tagged)),
        cf1=cf1,
        cf2=cf2,
        cf3=cf3,
    )


# ─────────────────────────────────────────────
# Informe de corpus
# ─────────────────────────────────────────────
def measure_utterance(tagged: TaggedUtterance, utterance_id: str = "", cfg: CfConfig | None = None) -> UtteranceMetrics:
    return UtteranceMetrics(
        id=utterance_id,
        vector=utterance_vector(tagged, cfg),
        histogram={lang.value: n for lang, n in language_histogram(tagged).items()},
        span_lengths=[s.length for s in extract_spans(tagged)],
        pair=detect_language_pair(tagged).label,
    )


def aggregate(utterances: list[UtteranceMetrics], skipped: int = 0) -> MetricReport:
    """Re-agrega un informe a partir de los vectores guardados."""
    if not utterances:
        raise EmptyInput("corpus sin enunciados con idioma")

    pooled: Counter = Counter()
    for u in utterances:
        pooled.update(u.histogram)
    content = sum(pooled.values())

    def mean_of(field: str) -> float:
        return float(np.mean([getattr(u.vector, field) for u in utterances]))

    all_spans = [length for u in utterances for length in u.span_lengths]
    return MetricReport(
        cmi=_cmi_from_counts(content, 0, pooled),
        m_index=m_index(pooled),
        i_index=mean_of("i_index"),
        burstiness=mean_of("burstiness"),
        cf1=mean_of("cf1"),
        cf2=mean_of("cf2"),
        cf3=mean_of("cf3"),
        cmi_mean=mean_of("cmi"),
        m_index_mean=mean_of("m_index"),
        burstiness_pooled=burstiness(all_spans),
        utterance_count=len(utterances),
        skipped_count=skipped,
        language_histogram=dict(sorted(pooled.items())),
        pair_histogram=dict(sorted(Counter(u.pair for u in utterances).items())),
        utterances=utterances,
    )


def corpus_report(corpus: list[TaggedUtterance], cfg: CfConfig | None = None, ids: list[str] | None = None) -> MetricReport:
    """
    Las siete métricas del corpus. Los enunciados sin tokens con idioma
    se saltan y se cuentan en skipped_count.
    """
    if not corpus:
        raise EmptyInput("corpus vacío")
    ids = ids or [str(i) for i in range(1, len(corpus) + 1)]
    measured = []
    skipped = 0
    for utterance_id, tagged in zip(ids, corpus):
        if not tagged.content_tags:
            skipped += 1
            continue
        measured.append(measure_utterance(tagged, utterance_id, cfg))
    return aggregate(measured, skipped)


def render_metric_table(reports: Mapping[str, MetricReport]) -> str:
    """Tabla de texto: una fila por métrica y una columna por corpus."""
    labels = list(reports)
    width = max([len("Metric")] + [len(label) for label in labels]) + 2
    lines = ["Metric".ljust(12) + "".join(label.rjust(width) for label in labels)]
    for row_label, field, digits in TABLE_ROWS:
        cells = "".join(f"{getattr(reports[label], field):.{digits}f}".rjust(width) for label in labels)
        lines.append(row_label.ljust(12) + cells)
    return "\n".join(lines)
