"""
Generación CSW por árboles sintácticos:
- traducción de un subárbol elegido al azar
- sustitución de un subárbol alineado con la frase paralela (restricción de equivalencia)
"""

import csv
import random
import sys
from pathlib import Path
from typing import Callable, Optional

from models.exceptions import (
    LineCountMismatch,
    MalformedAlignment,
    NoCandidates,
    NoEligibleSubtree,
    TranslatorFailure,
)
from models.generation_models import (
    Alignment,
    GeneratedUtterance,
    GenerationMethod,
    GenerationResult,
    ParseTree,
    Provenance,
    RejectedUtterance,
    SubtreeCandidate,
)
from tools.seeding import derive_seed
from tools.text_core import detect_language_pair, tag_text

Translator = Callable[[list[str]], str]


# ─────────────────────────────────────────────
# Subárboles elegibles
# ─────────────────────────────────────────────
def constituent_spans(tree: ParseTree, include_root: bool = False) -> list[tuple[tuple[int, int], str]]:
    """
    Spans distintos en preorden. Una cadena unaria cuenta una vez con la
    etiqueta más alta.
    """
    seen: dict[tuple[int, int], str] = {}
    for node in tree.subtrees():
        seen.setdefault(node.span, node.label)
    if not include_root:
        seen.pop(tree.span, None)
    return list(seen.items())


def _splice(tokens: list[str], span: tuple[int, int], replacement: list[str]) -> list[str]:
    start, end = span
    return tokens[:start] + replacement + tokens[end:]


def _generated(tokens: list[str], method: GenerationMethod, provenance: Provenance) -> GeneratedUtterance:
    text = " ".join(tokens)
    return GeneratedUtterance(
        text=text,
        method=method,
        pair=detect_language_pair(tag_text(text)).label,
        provenance=provenance,
    )


# ─────────────────────────────────────────────
# Traducción de subárbol
# ─────────────────────────────────────────────
class DictionaryTranslator:
    """Traductor de tabla (TSV origen → destino): frase completa y si no, token a token."""

    def __init__(self, table: dict[str, str]):
        self.table = {k.casefold(): v for k, v in table.items()}

    @classmethod
    def from_file(cls, path: str | Path) -> "DictionaryTranslator":
        table = {}
        with open(path, "r", encoding="utf-8", newline="") as f:
            for row in csv.reader(f, delimiter="\t"):
                if len(row) >= 2 and row[0].strip():
                    table[row[0].strip()] = row[1].strip()
        return cls(table)

    def __call__(self, tokens: list[str]) -> str:
        phrase = " ".join(tokens).casefold()
        if phrase in self.table:
            return self.table[phrase]
        translated = []
        for token in tokens:
            if token.casefold() not in self.table:
                raise TranslatorFailure(f"sin traducción para {token!r}")
            translated.append(self.table[token.casefold()])
        return " ".join(translated)


def translation_switch(tree: ParseTree, translate: Translator, seed: int,
                       source_ids: Optional[list[str]] = None) -> GeneratedUtterance:
    spans = constituent_spans(tree)
    tokens = tree.leaves()
    if not spans:
        raise NoEligibleSubtree(" ".join(tokens))

    rng = random.Random(seed)
    span, _ = rng.choice(spans)
    try:
        translated = translate(tokens[span[0]:span[1]])
    except TranslatorFailure as e:
        raise TranslatorFailure(str(e), span=span) from e
    except Exception as e:
        raise TranslatorFailure(f"el traductor falló: {e}", span=span) from e

    return _generated(
        _splice(tokens, span, translated.split()),
        GenerationMethod.TRANSLATION,
        Provenance(source_ids=source_ids or [], seed=seed, en_span=span),
    )


# ─────────────────────────────────────────────
# Subárboles alineados
# ─────────────────────────────────────────────
def _respects_order(align: Alignment, en_span: tuple[int, int], fl_span: tuple[int, int]) -> bool:
    """Ningún enlace de fuera del par lo cruza."""
    (es, ee), (fs, fe) = en_span, fl_span
    for i, j in align.links:
        if i < es and j >= fs:
            return False
        if i >= ee and j < fe:
            return False
    return True


def is_closed_pair(align: Alignment, en_span: tuple[int, int], fl_span: tuple[int, int]) -> bool:
    """La imagen del tramo EN es exactamente el tramo extranjero y viceversa."""
    return (align.image(*en_span) == set(range(*fl_span))
            and align.preimage(*fl_span) == set(range(*en_span)))


def aligned_subtree_candidates(en_tree: ParseTree, fl_tree: ParseTree, align: Alignment) -> list[SubtreeCandidate]:
    if not align.links:
        return []
    candidates = []
    for en_span, en_label in constituent_spans(en_tree):
        for fl_span, fl_label in constituent_spans(fl_tree):
            if is_closed_pair(align, en_span, fl_span) and _respects_order(align, en_span, fl_span):
                candidates.append(SubtreeCandidate(
                    en_span=en_span, fl_span=fl_span, en_label=en_label, fl_label=fl_label,
                ))
    return candidates


def parallel_switch(en_sentence: list[str], fl_sentence: list[str], candidates: list[SubtreeCandidate],
                    seed: int, source_ids: Optional[list[str]] = None) -> GeneratedUtterance:
    if not candidates:
        raise NoCandidates("no hay subárboles alineados candidatos")
    rng = random.Random(seed)
    chosen = rng.choice(candidates)
    fs, fe = chosen.fl_span
    return _generated(
        _splice(en_sentence, chosen.en_span, fl_sentence[fs:fe]),
        GenerationMethod.PARALLEL,
        Provenance(source_ids=source_ids or [], seed=seed, en_span=chosen.en_span, fl_span=chosen.fl_span),
    )


# ─────────────────────────────────────────────
# Corpus
# ─────────────────────────────────────────────
def _keep_or_reject(result: GenerationResult, utterance: GeneratedUtterance) -> None:
    if detect_language_pair(tag_text(utterance.text)).is_monolingual:
        result.rejects.append(RejectedUtterance(text=utterance.text, reason="monolingual",
                                                provenance=utterance.provenance))
        return
    result.corpus.append(utterance)
    histogram = result.log.pair_histogram
    histogram[utterance.pair] = histogram.get(utterance.pair, 0) + 1


def generate_translation_corpus(trees: list[ParseTree], translate: Translator, seed: int) -> GenerationResult:
    result = GenerationResult()
    for index, tree in enumerate(trees):
        item_seed = derive_seed(seed, index)
        provenance = Provenance(source_ids=[str(index + 1)], seed=item_seed)
        try:
            utterance = translation_switch(tree, translate, item_seed, [str(index + 1)])
        except (NoEligibleSubtree, TranslatorFailure) as e:
            result.rejects.append(RejectedUtterance(text=" ".join(tree.leaves()), reason=str(e),
                                                    provenance=provenance))
            continue
        _keep_or_reject(result, utterance)
    _finish(result, "traducción")
    return result


def generate_parallel_corpus(en_trees: list[ParseTree], fl_trees: list[ParseTree],
                             alignments: list[Alignment], seed: int) -> GenerationResult:
    if not (len(en_trees) == len(fl_trees) == len(alignments)):
        raise LineCountMismatch(
            f"líneas distintas: {len(en_trees)} EN, {len(fl_trees)} extranjeras, {len(alignments)} alineamientos"
        )
    result = GenerationResult()
    for index, (en_tree, fl_tree, align) in enumerate(zip(en_trees, fl_trees, alignments)):
        en_len, fl_len = len(en_tree.leaves()), len(fl_tree.leaves())
        if any(i >= en_len or j >= fl_len for i, j in align.links):
            raise MalformedAlignment(f"enlace fuera de rango ({en_len}×{fl_len} tokens)", line=index + 1)
        item_seed = derive_seed(seed, index)
        candidates = aligned_subtree_candidates(en_tree, fl_tree, align)
        try:
            utterance = parallel_switch(en_tree.leaves(), fl_tree.leaves(), candidates, item_seed, [str(index + 1)])
        except NoCandidates as e:
            result.rejects.append(RejectedUtterance(
                text=" ".join(en_tree.leaves()), reason=str(e),
                provenance=Provenance(source_ids=[str(index + 1)], seed=item_seed),
            ))
            continue
        _keep_or_reject(result, utterance)
    _finish(result, "paralelo")
    return result


def _finish(result: GenerationResult, label: str) -> None:
    result.log.accepted = len(result.corpus)
    result.log.rejected = len(result.rejects)
    result.log.pair_histogram = dict(sorted(result.log.pair_histogram.items()))
    print(f"✅ Generación por {label}: {result.log.accepted} aceptadas, {result.log.rejected} rechazadas",
          file=sys.stderr)
