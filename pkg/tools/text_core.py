"""
Núcleo de texto: tokenización por clase de escritura, etiquetado de idioma,
extracción de tramos y detección del par de idiomas de un enunciado CSW.

Todas las funciones son puras: mismas entradas, mismas salidas.
"""

from collections import Counter
from functools import lru_cache
from typing import Optional

import regex

from models.text_models import (
    LanguagePair,
    LanguageSpan,
    LanguageTag,
    PairDetection,
    ScriptClass,
    TaggedUtterance,
    Token,
    TokenList,
)


# ─────────────────────────────────────────────
# Clases de escritura
# ─────────────────────────────────────────────
# El orden importa: los dígitos árabe-índicos son Script=Arabic pero cuentan como DIGIT
_SCRIPT_PATTERNS = [
    (ScriptClass.DIGIT, regex.compile(r"\p{Nd}")),
    (ScriptClass.HIRAGANA, regex.compile(r"\p{Script=Hiragana}")),
    (ScriptClass.KATAKANA, regex.compile(r"\p{Script=Katakana}")),
    (ScriptClass.HAN, regex.compile(r"\p{Script=Han}")),
    (ScriptClass.HANGUL, regex.compile(r"\p{Script=Hangul}")),
    (ScriptClass.CYRILLIC, regex.compile(r"\p{Script=Cyrillic}")),
    (ScriptClass.THAI, regex.compile(r"\p{Script=Thai}")),
    (ScriptClass.ARABIC, regex.compile(r"\p{Script=Arabic}")),
    (ScriptClass.LATIN, regex.compile(r"\p{Script=Latin}")),
    (ScriptClass.PUNCT, regex.compile(r"[\p{P}\p{S}]")),
]
_MARK = regex.compile(r"\p{M}")

KANA_EXTENDERS = {"ー", "ｰ"}
WORD_CONNECTORS = {"'", "’", "-"}
KANA = {ScriptClass.HIRAGANA, ScriptClass.KATAKANA}

# Escrituras sin espacios: cada racha máxima de la misma clase es un token
NON_SPACED = {ScriptClass.HAN, ScriptClass.HIRAGANA, ScriptClass.KATAKANA,
              ScriptClass.HANGUL, ScriptClass.THAI}

SCRIPT_LANGUAGE = {
    ScriptClass.LATIN: LanguageTag.EN,
    ScriptClass.HIRAGANA: LanguageTag.JA,
    ScriptClass.KATAKANA: LanguageTag.JA,
    ScriptClass.HANGUL: LanguageTag.KO,
    ScriptClass.CYRILLIC: LanguageTag.RU,
    ScriptClass.THAI: LanguageTag.TH,
    ScriptClass.ARABIC: LanguageTag.AR,
    ScriptClass.DIGIT: LanguageTag.NEUTRAL,
    ScriptClass.PUNCT: LanguageTag.NEUTRAL,
    ScriptClass.OTHER: LanguageTag.OTHER_LANG,
}
HAN_HINT_LANGUAGES = {LanguageTag.JA, LanguageTag.ZH, LanguageTag.KO}


@lru_cache(maxsize=65536)
def char_script(ch: str) -> ScriptClass:
    """Clase de escritura de un carácter (sin contexto)."""
    for script, pattern in _SCRIPT_PATTERNS:
        if pattern.match(ch):
            return script
    return ScriptClass.OTHER


def _char_classes(text: str) -> list[Optional[ScriptClass]]:
    """Clase por carácter con el contexto aplicado. None = espacio en blanco."""
    classes: list[Optional[ScriptClass]] = []
    for ch in text:
        prev = classes[-1] if classes else None
        if ch.isspace():
            classes.append(None)
        elif _MARK.match(ch) and prev is not None:
            classes.append(prev)
        elif ch in KANA_EXTENDERS:
            classes.append(prev if prev in KANA else ScriptClass.KATAKANA)
        else:
            classes.append(char_script(ch))

    # apóstrofos y guiones entre dos letras latinas se quedan dentro de la palabra
    for i, ch in enumerate(text):
        if ch in WORD_CONNECTORS and 0 < i < len(text) - 1:
            if classes[i - 1] == ScriptClass.LATIN and classes[i + 1] == ScriptClass.LATIN:
                classes[i] = ScriptClass.LATIN
    return classes


def script_of(surface: str) -> ScriptClass:
    """Clase mayoritaria de una superficie (desempate por primera aparición)."""
    classes = [c for c in _char_classes(surface) if c is not None]
    if not classes:
        return ScriptClass.OTHER
    return Counter(classes).most_common(1)[0][0]


def make_token(surface: str) -> Token:
    return Token(surface=surface, script=script_of(surface))


# ─────────────────────────────────────────────
# Tokenización
# ─────────────────────────────────────────────
def tokenize(text: str) -> list[Token]:
    """
    Divide el texto en rachas máximas de la misma clase de escritura.
    El espacio en blanco se guarda en los tokens, así detokenize() es exacto.
    Un texto solo de blancos da una lista vacía que conserva ese blanco.
    """
    classes = _char_classes(text)
    tokens: list[Token] = []
    leading = ""
    i = 0
    while i < len(text):
        if classes[i] is None:
            j = i
            while j < len(text) and classes[j] is None:
                j += 1
            if tokens:
                last = tokens[-1]
                tokens[-1] = last.model_copy(update={"space_after": last.space_after + text[i:j]})
            else:
                leading = text[i:j]
            i = j
            continue
        j = i + 1
        while j < len(text) and classes[j] == classes[i]:
            j += 1
        tokens.append(Token(surface=text[i:j], script=classes[i]))
        i = j

    if tokens and leading:
        tokens[0] = tokens[0].model_copy(update={"space_before": leading})
        leading = ""
    return TokenList(tokens, leading=leading)


def detokenize(tokens: list[Token]) -> str:
    if not tokens:
        return getattr(tokens, "leading", "")
    return tokens[0].space_before + "".join(t.surface + t.space_after for t in tokens)


def normalize_text(text: str) -> str:
    """Clave de deduplicación: case-fold y espacios colapsados."""
    return " ".join(text.casefold().split())


# ─────────────────────────────────────────────
# Etiquetado de idioma
# ─────────────────────────────────────────────
def parse_pair_hint(hint: Optional[str]) -> Optional[LanguageTag]:
    """Acepta "EN-JA", "ja" o "JA"; devuelve el idioma no inglés."""
    if not hint:
        return None
    parts = [p.strip().upper() for p in hint.replace("_", "-").split("-") if p.strip()]
    others = [p for p in parts if p != "EN"] or parts
    try:
        return LanguageTag(others[-1])
    except ValueError:
        return None


def tag_languages(tokens: list[Token], pair_hint: Optional[str | LanguageTag] = None) -> TaggedUtterance:
    """
    Etiqueta cada token por su escritura. El Han se resuelve por votación:
    cualquier kana en el enunciado → JA, si no ZH, salvo que el hint diga otra cosa.
    """
    hint = pair_hint if isinstance(pair_hint, LanguageTag) else parse_pair_hint(pair_hint)
    if hint in HAN_HINT_LANGUAGES:
        han_language = hint
    elif any(t.script in KANA for t in tokens):
        han_language = LanguageTag.JA
    else:
        han_language = LanguageTag.ZH

    tags = [han_language if t.script == ScriptClass.HAN else SCRIPT_LANGUAGE[t.script] for t in tokens]
    tagged = TaggedUtterance(tokens=list(tokens), tags=tags)
    tagged.spans = extract_spans(tagged)
    return tagged


def tag_text(text: str, pair_hint: Optional[str | LanguageTag] = None) -> TaggedUtterance:
    return tag_languages(tokenize(text), pair_hint)


def tag_surfaces(surfaces: list[str], pair_hint: Optional[str | LanguageTag] = None) -> TaggedUtterance:
    """Re-etiqueta una lista de superficies ya tokenizadas (unidas por espacios)."""
    tokens = [make_token(s).model_copy(update={"space_after": " "}) for s in surfaces]
    if tokens:
        tokens[-1] = tokens[-1].model_copy(update={"space_after": ""})
    return tag_languages(tokens, pair_hint)


def extract_spans(tagged: TaggedUtterance) -> list[LanguageSpan]:
    """Rachas máximas del mismo idioma; NEUTRAL no pertenece a ninguna ni la corta."""
    spans: list[LanguageSpan] = []
    current: Optional[LanguageTag] = None
    start = length = 0
    for i, tag in enumerate(tagged.tags):
        if tag == LanguageTag.NEUTRAL:
            continue
        if tag == current:
            length += 1
            continue
        if current is not None:
            spans.append(LanguageSpan(lang=current, start=start, length=length))
        current, start, length = tag, i, 1
    if current is not None:
        spans.append(LanguageSpan(lang=current, start=start, length=length))
    return spans


def detect_language_pair(tagged: TaggedUtterance) -> PairDetection:
    """
    EN + el idioma no inglés más frecuente (empate → primera aparición).
    Sin EN, los dos idiomas más frecuentes en ese mismo orden.
    Con 3 o más idiomas marca mixed_beyond_pair pero sigue categorizando.
    """
    counts = Counter(tagged.content_tags)
    if len(counts) < 2:
        return PairDetection(pair=None)

    first_seen = {}
    for i, tag in enumerate(tagged.content_tags):
        first_seen.setdefault(tag, i)
    ranked = sorted(counts, key=lambda lang: (-counts[lang], first_seen[lang]))
    if LanguageTag.EN in counts:
        first, second = LanguageTag.EN, next(lang for lang in ranked if lang != LanguageTag.EN)
    else:
        first, second = ranked[0], ranked[1]
    return PairDetection(
        pair=LanguagePair(first=first, second=second),
        mixed_beyond_pair=len(counts) >= 3,
    )


def is_code_switched(tagged: TaggedUtterance) -> bool:
    return not detect_language_pair(tagged).is_monolingual
