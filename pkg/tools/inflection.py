"""
Reglas de flexión inglesa (número nominal y formas verbales) con léxicos
de excepciones en data/. Lo usan el corruptor, el clasificador de errores
y el vocabulario de etiquetas del decoder.
"""

import json
from functools import lru_cache
from typing import Optional

from config import DATA_DIR

VOWELS = set("aeiou")
SIBILANT_ENDINGS = ("s", "x", "z", "ch", "sh")
FORM_NAMES = ("base", "third", "past", "ing", "participle")


# ─────────────────────────────────────────────
# Léxicos
# ─────────────────────────────────────────────
@lru_cache(maxsize=None)
def load_inflections() -> dict:
    with open(DATA_DIR / "inflections.json", "r", encoding="utf-8") as f:
        return json.load(f)


@lru_cache(maxsize=None)
def load_confusion_sets() -> dict:
    with open(DATA_DIR / "confusion_sets.json", "r", encoding="utf-8") as f:
        return json.load(f)


@lru_cache(maxsize=None)
def _plural_to_singular() -> dict[str, str]:
    return {plural: singular for singular, plural in load_inflections()["irregular_nouns"].items()}


@lru_cache(maxsize=None)
def _irregular_form_index() -> dict[str, str]:
    """forma → lema para todos los verbos irregulares."""
    index = {}
    for base, forms in load_inflections()["irregular_verbs"].items():
        index.setdefault(base, base)
        for form in forms:
            index.setdefault(form, base)
    be = load_inflections()["be_forms"]
    for form in be["present"] + be["past"] + be["other"]:
        index[form] = "be"
    return index


def match_case(template: str, word: str) -> str:
    """Copia el patrón de mayúsculas de template sobre word."""
    if len(template) > 1 and template.isupper():
        return word.upper()
    if template[:1].isupper():
        return word[:1].upper() + word[1:]
    return word


# ─────────────────────────────────────────────
# Número nominal
# ─────────────────────────────────────────────
def _suffix_s(word: str) -> str:
    if word.endswith(SIBILANT_ENDINGS):
        return word + "es"
    if len(word) > 1 and word.endswith("y") and word[-2] not in VOWELS:
        return word[:-1] + "ies"
    return word + "s"


def pluralize(word: str) -> str:
    lower = word.lower()
    irregular = load_inflections()["irregular_nouns"]
    plural = irregular[lower] if lower in irregular else _suffix_s(lower)
    return match_case(word, plural)


def singularize(word: str) -> Optional[str]:
    """Singular de un plural, o None si la palabra no parece plural."""
    lower = word.lower()
    if lower in load_inflections()["number_invariant"]:
        return None
    if lower in _plural_to_singular():
        return match_case(word, _plural_to_singular()[lower])
    if len(lower) < 3 or not lower.endswith("s") or lower.endswith(("ss", "us", "is")):
        return None
    if lower.endswith("ies") and len(lower) > 4:
        singular = lower[:-3] + "y"
    elif lower.endswith("es") and lower[:-2].endswith(SIBILANT_ENDINGS):
        singular = lower[:-2]
    else:
        singular = lower[:-1]
    return match_case(word, singular)


def toggle_number(word: str) -> Optional[str]:
    """Plural ↔ singular. None para palabras invariables."""
    lower = word.lower()
    if lower in load_inflections()["number_invariant"]:
        return None
    singular = singularize(word)
    if singular is not None:
        return singular
    return pluralize(word)


# ─────────────────────────────────────────────
# Formas verbales
# ─────────────────────────────────────────────
def _regular_past(base: str) -> str:
    if base.endswith("e"):
        return base + "d"
    if len(base) > 1 and base.endswith("y") and base[-2] not in VOWELS:
        return base[:-1] + "ied"
    return base + "ed"


def _regular_ing(base: str) -> str:
    if base.endswith("ie"):
        return base[:-2] + "ying"
    if base.endswith("e") and not base.endswith("ee") and len(base) > 2:
        return base[:-1] + "ing"
    return base + "ing"


def verb_forms(base: str) -> dict[str, str]:
    """base/third/past/ing/participle de un lema (minúsculas)."""
    base = base.lower()
    irregular = load_inflections()["irregular_verbs"]
    if base in irregular:
        third, past, ing, participle = irregular[base]
        return {"base": base, "third": third, "past": past, "ing": ing, "participle": participle}
    past = _regular_past(base)
    return {"base": base, "third": _suffix_s(base), "past": past, "ing": _regular_ing(base), "participle": past}


def _lemma_candidates(word: str) -> list[str]:
    lower = word.lower()
    if lower in _irregular_form_index():
        return [_irregular_form_index()[lower]]
    candidates = [lower]
    if lower.endswith("ing") and len(lower) > 4:
        candidates += [lower[:-3], lower[:-3] + "e", lower[:-4] + "ie"]
    if lower.endswith("ied"):
        candidates.append(lower[:-3] + "y")
    if lower.endswith("ed"):
        candidates += [lower[:-2], lower[:-1]]
    if lower.endswith("ies"):
        candidates.append(lower[:-3] + "y")
    if lower.endswith("es"):
        candidates.append(lower[:-2])
    if lower.endswith("s"):
        candidates.append(lower[:-1])
    return [c for c in candidates if len(c) >= 2]


def form_names(word: str, lemma: str) -> set[str]:
    forms = verb_forms(lemma)
    return {name for name in FORM_NAMES if forms[name] == word.lower()}


@lru_cache(maxsize=4096)
def lemma_of(word: str) -> Optional[str]:
    """Lema de una forma de un verbo conocido (irregular o de la lista de regulares)."""
    lower = word.lower()
    if lower in _irregular_form_index():
        return _irregular_form_index()[lower]
    regular = set(load_inflections()["regular_verbs"])
    for candidate in _lemma_candidates(lower):
        if candidate in regular and form_names(lower, candidate):
            return candidate
    return None


def is_known_verb(word: str) -> bool:
    return lemma_of(word) is not None


def _be_relation(a: str, b: str) -> Optional[str]:
    be = load_inflections()["be_forms"]
    groups = {form: group for group, forms in be.items() for form in forms}
    if a not in groups or b not in groups:
        return None
    ga, gb = groups[a], groups[b]
    if ga == gb and ga in ("present", "past"):
        return "agreement"
    if {ga, gb} == {"present", "past"}:
        return "tense"
    if "past" in (ga, gb) and "been" not in (a, b):
        return "tense"
    return "form"


BE_AGREEMENT = {"is": "are", "are": "is", "was": "were", "were": "was", "am": "is"}


def toggle_agreement(word: str) -> str:
    """Alterna base ↔ -s (go ↔ goes, is ↔ are). Sin verbo conocido, alterna el número."""
    lower = word.lower()
    if lower in BE_AGREEMENT:
        return match_case(word, BE_AGREEMENT[lower])
    lemma = lemma_of(lower)
    if lemma is None:
        for candidate in _lemma_candidates(lower)[1:]:
            if verb_forms(candidate)["third"] == lower:
                lemma = candidate
                break
    if lemma is not None:
        forms = verb_forms(lemma)
        if lower == forms["third"]:
            return match_case(word, forms["base"])
        if lower == forms["base"]:
            return match_case(word, forms["third"])
    return toggle_number(word) or word


def to_verb_form(word: str, name: str) -> str:
    """Reescribe word en la forma indicada (base, third, past, ing)."""
    lemma = lemma_of(word)
    if lemma is None:
        lemma = next((c for c in _lemma_candidates(word)[1:] if form_names(word, c)), word.lower())
    return match_case(word, verb_forms(lemma)[name])


def verb_relation(a: str, b: str) -> Optional[str]:
    """
    Relación entre dos formas del mismo verbo:
    "agreement" (base ↔ -s), "tense" (interviene el pasado), "form" (resto).
    None si no son formas de un mismo lema.
    """
    a, b = a.lower(), b.lower()
    if a == b:
        return None
    if lemma_of(a) == "be" and lemma_of(b) == "be":
        return _be_relation(a, b)
    for lemma in dict.fromkeys(_lemma_candidates(a) + _lemma_candidates(b)):
        names_a, names_b = form_names(a, lemma), form_names(b, lemma)
        if not names_a or not names_b:
            continue
        if ("base" in names_a and "third" in names_b) or ("third" in names_a and "base" in names_b):
            return "agreement"
        if "past" in names_a | names_b:
            return "tense"
        return "form"
    return None
