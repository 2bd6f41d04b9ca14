"""
Inyección de errores por reglas sobre texto CSW.

Solo los tokens EN son sitios elegibles; los tokens en otro idioma no se
tocan nunca. Los errores de un mismo plan se aplican en secuencia sobre el
texto ya corrompido y las ediciones de referencia se recalculan al final
con el alineador.
"""

import random
import sys
from typing import Optional

from config import MAX_INJECTED_ERRORS
from models.exceptions import LineCountMismatch, NoSite
from models.gec_models import (
    CorruptionConfig,
    CorruptionRecord,
    CorruptionStats,
    Edit,
    ErrorPlan,
    ErrorType,
)
from models.text_models import LanguageTag, ScriptClass, TaggedUtterance
from tools.edit_alignment import align_edits
from tools.error_classifier import classify_edits
from tools.inflection import (
    lemma_of,
    load_confusion_sets,
    match_case,
    toggle_number,
    verb_forms,
)
from tools.seeding import derive_seed
from tools.text_core import make_token, tag_surfaces, tokenize

ERROR_TYPES = list(ErrorType)
ENGLISH_SCRIPTS = {ScriptClass.LATIN, ScriptClass.PUNCT, ScriptClass.DIGIT}


# ─────────────────────────────────────────────
# Plan de errores
# ─────────────────────────────────────────────
def sample_error_plan(rng: random.Random, max_errors: int = MAX_INJECTED_ERRORS) -> ErrorPlan:
    """k uniforme en {0..max_errors}; cada tipo uniforme e independiente."""
    k = rng.randint(0, max_errors)
    return ErrorPlan(k=k, types=[rng.choice(ERROR_TYPES) for _ in range(k)])


# ─────────────────────────────────────────────
# Operaciones elementales
# ─────────────────────────────────────────────
class _Draft:
    """Tokens en curso y posiciones ya tocadas por errores anteriores."""

    def __init__(self, tagged: TaggedUtterance, touched: Optional[list[bool]] = None):
        self.tokens = tagged.surfaces
        self.tags = list(tagged.tags)
        self.touched = list(touched) if touched is not None else [False] * len(self.tokens)

    def english(self, i: int) -> bool:
        return 0 <= i < len(self.tokens) and self.tags[i] == LanguageTag.EN

    def free(self, i: int) -> bool:
        return 0 <= i < len(self.tokens) and not self.touched[i]

    def free_or_edge(self, i: int) -> bool:
        return not (0 <= i < len(self.tokens)) or not self.touched[i]

    def substitute(self, i: int, word: str) -> tuple[list[str], Edit, list[bool]]:
        tokens = list(self.tokens)
        original = tokens[i]
        tokens[i] = word
        touched = list(self.touched)
        touched[i] = True
        return tokens, Edit(start=i, end=i + 1, replacement=[original]), touched

    def delete(self, i: int) -> tuple[list[str], Edit, list[bool]]:
        tokens = self.tokens[:i] + self.tokens[i + 1:]
        touched = self.touched[:i] + self.touched[i + 1:]
        for j in (i - 1, i):
            if 0 <= j < len(touched):
                touched[j] = True
        return tokens, Edit(start=i, end=i, replacement=[self.tokens[i]]), touched

    def insert(self, i: int, word: str) -> tuple[list[str], Edit, list[bool]]:
        tokens = self.tokens[:i] + [word] + self.tokens[i:]
        touched = self.touched[:i] + [True] + self.touched[i:]
        return tokens, Edit(start=i, end=i + 1, replacement=[]), touched

    def swap(self, i: int) -> tuple[list[str], Edit, list[bool]]:
        tokens = list(self.tokens)
        tokens[i], tokens[i + 1] = tokens[i + 1], tokens[i]
        touched = list(self.touched)
        touched[i] = touched[i + 1] = True
        return tokens, Edit(start=i, end=i + 2, replacement=[self.tokens[i], self.tokens[i + 1]]), touched


# ─────────────────────────────────────────────
# Reglas por tipo
# ─────────────────────────────────────────────
def _closed_class() -> set[str]:
    sets = load_confusion_sets()
    pronouns = {p for group in sets["pronoun_groups"] for p in group}
    return set(sets["determiners"]) | pronouns | set(sets["prepositions"])


def _sites(draft: _Draft, predicate) -> list[int]:
    return [i for i in range(len(draft.tokens)) if draft.english(i) and draft.free(i) and predicate(i)]


def _noun_number(draft: _Draft, rng: random.Random):
    closed = _closed_class()

    def eligible(i: int) -> bool:
        word = draft.tokens[i]
        if not word.isalpha() or len(word) < 3 or word.lower() in closed or lemma_of(word):
            return False
        if i > 0 and word[0].isupper():
            return False
        toggled = toggle_number(word)
        return toggled is not None and toggled != word

    sites = _sites(draft, eligible)
    if not sites:
        raise NoSite("no hay sustantivos EN elegibles")
    i = rng.choice(sites)
    return draft.substitute(i, toggle_number(draft.tokens[i]))


def _pronoun(draft: _Draft, rng: random.Random):
    groups = {p: group for group in load_confusion_sets()["pronoun_groups"] for p in group}
    sites = _sites(draft, lambda i: draft.tokens[i].lower() in groups)
    if not sites:
        raise NoSite("no hay pronombres EN")
    i = rng.choice(sites)
    word = draft.tokens[i]
    options = [p for p in groups[word.lower()] if p != word.lower()]
    return draft.substitute(i, match_case(word, rng.choice(options)))


def _word_order(draft: _Draft, rng: random.Random):
    def eligible(i: int) -> bool:
        return (draft.english(i + 1) and draft.free(i + 1)
                and draft.tokens[i].casefold() != draft.tokens[i + 1].casefold())

    sites = _sites(draft, eligible)
    if not sites:
        raise NoSite("no hay pares EN adyacentes")
    return draft.swap(rng.choice(sites))


def _closed_set_error(draft: _Draft, rng: random.Random, vocabulary: list[str],
                      site_ok, insert_ok, label: str):
    """Borrar, insertar o sustituir dentro de un conjunto cerrado."""
    in_set = [i for i in range(len(draft.tokens)) if draft.free(i) and site_ok(i)]
    options = {
        "delete": in_set,
        "substitute": in_set,
        "insert": [i for i in range(len(draft.tokens) + 1) if insert_ok(i)],
    }
    available = [op for op in ("delete", "insert", "substitute") if options[op]]
    if not available:
        raise NoSite(f"no hay sitios {label}")
    op = rng.choice(available)
    i = rng.choice(options[op])
    if op == "delete":
        return draft.delete(i)
    if op == "insert":
        return draft.insert(i, rng.choice(vocabulary))
    word = draft.tokens[i]
    replacement = rng.choice([w for w in vocabulary if w != word.lower()])
    return draft.substitute(i, match_case(word, replacement))


def _determiner(draft: _Draft, rng: random.Random):
    articles = load_confusion_sets()["articles"]

    def is_article(i: int) -> bool:
        return 0 <= i < len(draft.tokens) and draft.tokens[i].lower() in articles

    def insert_ok(i: int) -> bool:
        # delante de una palabra EN que no es artículo ni lo lleva delante
        return (draft.english(i) and draft.tokens[i].isalpha() and not is_article(i)
                and not is_article(i - 1) and draft.free(i) and draft.free_or_edge(i - 1))

    def site_ok(i: int) -> bool:
        return draft.english(i) and is_article(i)

    return _closed_set_error(draft, rng, articles, site_ok, insert_ok, "de determinante")


def _punct(draft: _Draft, rng: random.Random):
    marks = load_confusion_sets()["punctuation"]

    def is_mark(i: int) -> bool:
        return 0 <= i < len(draft.tokens) and draft.tokens[i] in marks

    def insert_ok(i: int) -> bool:
        # detrás de un token EN y nunca junto a otra puntuación
        return (draft.english(i - 1) and draft.free(i - 1) and not is_mark(i)
                and draft.free_or_edge(i))

    # la puntuación es NEUTRAL: solo cuenta si va detrás de un token EN
    def site_ok(i: int) -> bool:
        return is_mark(i) and draft.english(i - 1)

    return _closed_set_error(draft, rng, marks, site_ok, insert_ok, "de puntuación")


def _preposition(draft: _Draft, rng: random.Random):
    prepositions = load_confusion_sets()["prepositions"]
    sites = _sites(draft, lambda i: draft.tokens[i].lower() in prepositions)
    if not sites:
        raise NoSite("no hay preposiciones EN")
    i = rng.choice(sites)
    word = draft.tokens[i]
    return draft.substitute(i, match_case(word, rng.choice([p for p in prepositions if p != word.lower()])))


def _verb_form(draft: _Draft, rng: random.Random):
    sites = _sites(draft, lambda i: draft.tokens[i].isalpha() and lemma_of(draft.tokens[i]) is not None)
    if not sites:
        raise NoSite("no hay verbos EN conocidos")
    i = rng.choice(sites)
    word = draft.tokens[i]
    forms = verb_forms(lemma_of(word))
    options = sorted({forms[name] for name in ("base", "third", "past", "ing")} - {word.lower()})
    return draft.substitute(i, match_case(word, rng.choice(options)))


_RULES = {
    ErrorType.NOUN_NUM: _noun_number,
    ErrorType.PRONOUN: _pronoun,
    ErrorType.WORD_ORDER: _word_order,
    ErrorType.DETERMINER: _determiner,
    ErrorType.PUNCT: _punct,
    ErrorType.PREPOSITION: _preposition,
    ErrorType.VERB_FORM: _verb_form,
}


def _apply(tagged: TaggedUtterance, error_type: ErrorType, rng: random.Random,
           touched: Optional[list[bool]] = None) -> tuple[list[str], Edit, list[bool]]:
    return _RULES[error_type](_Draft(tagged, touched), rng)


def apply_error(tagged: TaggedUtterance, error_type: ErrorType, rng: random.Random) -> tuple[list[str], Edit]:
    """
    Aplica un error en un sitio EN elegido al azar.
    Devuelve los tokens corrompidos y la edición corrompido → original.
    """
    tokens, edit, _ = _apply(tagged, error_type, rng)
    return tokens, edit


# ─────────────────────────────────────────────
# Corpus
# ─────────────────────────────────────────────
def touches_foreign_tokens(corrupted: list[str], edits: list[Edit]) -> bool:
    for edit in edits:
        for token in corrupted[edit.start:edit.end] + edit.replacement:
            if make_token(token).script not in ENGLISH_SCRIPTS:
                return True
    return False


def corrupt_utterance(tagged: TaggedUtterance, item_id: str, seed: int,
                      config: CorruptionConfig, stats: CorruptionStats) -> Optional[CorruptionRecord]:
    rng = random.Random(seed)
    plan = sample_error_plan(rng, config.max_errors)
    for error_type in plan.types:
        stats.planned[error_type.value] = stats.planned.get(error_type.value, 0) + 1
    if plan.k == 0:
        stats.dropped_zero_plan += 1
        return None

    original = tagged.surfaces
    current = tagged
    touched = [False] * len(original)
    realized: list[ErrorType] = []
    for error_type in plan.types:
        try:
            tokens, _, touched = _apply(current, error_type, rng, touched)
        except NoSite:
            continue
        realized.append(error_type)
        current = tag_surfaces(tokens, config.pair_hint)

    if not realized:
        stats.dropped_no_site += 1
        return None

    corrupted = current.surfaces
    gold = align_edits(corrupted, original).edits
    if not gold:
        stats.dropped_zero_edit += 1
        return None
    if touches_foreign_tokens(corrupted, gold):
        stats.dropped_immunity += 1
        return None

    for error_type in realized:
        stats.realized[error_type.value] = stats.realized.get(error_type.value, 0) + 1
    return CorruptionRecord(
        id=item_id,
        corrupted=corrupted,
        original=original,
        edits=classify_edits(corrupted, gold),
        types=realized,
        seed=seed,
    )


def corrupt_corpus(corpus: list[TaggedUtterance], seed: int, config: Optional[CorruptionConfig] = None,
                   ids: Optional[list[str]] = None) -> tuple[list[CorruptionRecord], CorruptionStats]:
    """Corrompe cada enunciado con su semilla derivada; conserva el orden de entrada."""
    config = config or CorruptionConfig()
    ids = ids or [str(i) for i in range(1, len(corpus) + 1)]
    stats = CorruptionStats(total=len(corpus))
    records = []
    for index, (item_id, tagged) in enumerate(zip(ids, corpus)):
        record = corrupt_utterance(tagged, item_id, derive_seed(seed, index), config, stats)
        if record is not None:
            records.append(record)
    stats.emitted = len(records)
    stats.planned = dict(sorted(stats.planned.items()))
    stats.realized = dict(sorted(stats.realized.items()))
    print(f"🔧 Corrupción: {stats.emitted}/{stats.total} pares emitidos "
          f"(k=0: {stats.dropped_zero_plan}, sin sitio: {stats.dropped_no_site})", file=sys.stderr)
    return records, stats


def ingest_external_corruptions(corrupted_lines: list[str], original_lines: list[str],
                                ) -> tuple[list[CorruptionRecord], CorruptionStats]:
    """Pares de un corruptor externo: las ediciones salen del alineador."""
    if len(corrupted_lines) != len(original_lines):
        raise LineCountMismatch(
            f"{len(corrupted_lines)} líneas corrompidas frente a {len(original_lines)} originales"
        )
    stats = CorruptionStats(total=len(corrupted_lines))
    records = []
    for number, (bad, good) in enumerate(zip(corrupted_lines, original_lines), start=1):
        corrupted = [t.surface for t in tokenize(bad)]
        original = [t.surface for t in tokenize(good)]
        gold = align_edits(corrupted, original).edits
        if not gold:
            stats.dropped_zero_edit += 1
            continue
        records.append(CorruptionRecord(
            id=str(number),
            corrupted=corrupted,
            original=original,
            edits=classify_edits(corrupted, gold),
            origin="external",
        ))
    stats.emitted = len(records)
    return records, stats


def records_to_m2(records: list[CorruptionRecord]) -> list[tuple[list[str], list[Edit]]]:
    return [(r.corrupted, r.edits) for r in records]

