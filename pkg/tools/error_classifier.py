"""
Clasificador de ediciones por reglas léxicas y de sufijos.
Gana la primera regla que encaja; OTHER es el último recurso.
"""

from collections import Counter

from models.gec_models import Edit, ErrorCategory
from models.text_models import ScriptClass
from tools.inflection import is_known_verb, lemma_of, load_confusion_sets, toggle_number, verb_relation
from tools.text_core import script_of


def _lower(tokens: list[str]) -> list[str]:
    return [t.casefold() for t in tokens]


def _all_in(tokens: list[str], vocabulary: set[str]) -> bool:
    return bool(tokens) and all(t in vocabulary for t in tokens)


def _pronouns() -> set[str]:
    return {p for group in load_confusion_sets()["pronoun_groups"] for p in group}


def _is_punct(token: str) -> bool:
    return script_of(token) == ScriptClass.PUNCT


def classify_edit(edit: Edit, source: list[str]) -> ErrorCategory:
    orig = source[edit.start:edit.end]
    cor = list(edit.replacement)
    both = orig + cor
    lowered = _lower(both)
    sets = load_confusion_sets()

    if orig and cor and "".join(orig).casefold() == "".join(cor).casefold():
        return ErrorCategory.ORTH
    if both and all(_is_punct(t) for t in both):
        return ErrorCategory.PUNCT
    if _all_in(lowered, set(sets["determiners"])):
        return ErrorCategory.DET
    if _all_in(lowered, _pronouns()):
        return ErrorCategory.PRON
    if _all_in(lowered, set(sets["prepositions"])):
        return ErrorCategory.PREP
    if len(orig) >= 2 and Counter(_lower(orig)) == Counter(_lower(cor)):
        return ErrorCategory.WO

    if len(orig) == 1 and len(cor) == 1:
        o, c = orig[0], cor[0]
        relation = verb_relation(o, c)
        toggled = toggle_number(o)
        if toggled is not None and toggled.casefold() == c.casefold():
            previous = source[edit.start - 1].casefold() if edit.start > 0 else ""
            if previous in sets["subject_pronouns"] and relation == "agreement":
                return ErrorCategory.VERB_SVA
            return ErrorCategory.NOUN
        if relation == "agreement":
            return ErrorCategory.VERB_SVA
        if relation == "tense":
            return ErrorCategory.VERB_TENSE
        if relation == "form":
            return ErrorCategory.VERB_FORM
        if is_known_verb(o) and is_known_verb(c) and lemma_of(o) != lemma_of(c):
            return ErrorCategory.VERB

    if both and all(is_known_verb(t) for t in both):
        return ErrorCategory.VERB
    return ErrorCategory.OTHER


def classify_edits(source: list[str], edits: list[Edit]) -> list[Edit]:
    """Devuelve las ediciones con la categoría rellenada (sin tocar las ya clasificadas)."""
    return [
        e if e.category is not None else e.model_copy(update={"category": classify_edit(e, source)})
        for e in edits
    ]
