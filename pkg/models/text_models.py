"""
Modelos de texto: tokens, etiquetas de idioma y tramos monolingües.
"""

from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


# ─────────────────────────────────────────────
# Enums
# ─────────────────────────────────────────────
class ScriptClass(str, Enum):
    LATIN = "LATIN"
    HIRAGANA = "HIRAGANA"
    KATAKANA = "KATAKANA"
    HAN = "HAN"
    HANGUL = "HANGUL"
    CYRILLIC = "CYRILLIC"
    THAI = "THAI"
    ARABIC = "ARABIC"
    DIGIT = "DIGIT"
    PUNCT = "PUNCT"
    OTHER = "OTHER"


class LanguageTag(str, Enum):
    EN = "EN"
    JA = "JA"
    KO = "KO"
    ZH = "ZH"
    RU = "RU"
    TH = "TH"
    AR = "AR"
    OTHER_LANG = "OTHER_LANG"
    NEUTRAL = "NEUTRAL"


MONOLINGUAL = "MONOLINGUAL"


# ─────────────────────────────────────────────
# Models
# ─────────────────────────────────────────────
class Token(BaseModel):
    """Un token de una sola clase de escritura."""
    model_config = ConfigDict(frozen=True)

    surface: str = Field(min_length=1)
    script: ScriptClass
    space_after: str = ""
    space_before: str = ""    # solo el primer token lleva el espacio inicial


class TokenList(list):
    """Salida de tokenize(). Si no hay tokens, guarda el blanco en leading."""

    def __init__(self, tokens=(), leading: str = ""):
        super().__init__(tokens)
        self.leading = leading


class LanguageSpan(BaseModel):
    """Tramo máximo de tokens del mismo idioma (los NEUTRAL no lo cortan)."""
    model_config = ConfigDict(frozen=True)

    lang: LanguageTag
    start: int = Field(ge=0)
    length: int = Field(ge=1)


class TaggedUtterance(BaseModel):
    """Enunciado con una etiqueta de idioma por token y sus tramos derivados."""
    tokens: list[Token] = Field(default_factory=list)
    tags: list[LanguageTag] = Field(default_factory=list)
    spans: list[LanguageSpan] = Field(default_factory=list)

    @model_validator(mode="after")
    def _same_length(self):
        if len(self.tokens) != len(self.tags):
            raise ValueError("tokens y tags deben tener la misma longitud")
        return self

    @property
    def surfaces(self) -> list[str]:
        return [t.surface for t in self.tokens]

    @property
    def content_tags(self) -> list[LanguageTag]:
        return [tag for tag in self.tags if tag != LanguageTag.NEUTRAL]


class LanguagePair(BaseModel):
    model_config = ConfigDict(frozen=True)

    first: LanguageTag = LanguageTag.EN
    second: LanguageTag

    @property
    def label(self) -> str:
        return f"{self.first.value}-{self.second.value}"


class PairDetection(BaseModel):
    """Resultado de detect_language_pair. pair=None significa MONOLINGUAL."""
    pair: Optional[LanguagePair] = None
    mixed_beyond_pair: bool = False

    @property
    def is_monolingual(self) -> bool:
        return self.pair is None

    @property
    def label(self) -> str:
        return self.pair.label if self.pair else MONOLINGUAL


class RawUtterance(BaseModel):
    """Registro de entrada {id, text, pair_hint}."""
    id: str
    text: str
    pair_hint: Optional[str] = None
