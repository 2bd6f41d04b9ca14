"""
Modelos GEC: ediciones, categorías de error, informes de puntuación
y registros de corrupción sintética.
"""

from enum import Enum
from typing import Iterable, Optional

from pydantic import BaseModel, Field, model_validator


# ─────────────────────────────────────────────
# Enums
# ─────────────────────────────────────────────
class ErrorCategory(str, Enum):
    DET = "DET"
    NOUN = "NOUN"
    ORTH = "ORTH"
    OTHER = "OTHER"
    PREP = "PREP"
    PRON = "PRON"
    PUNCT = "PUNCT"
    VERB = "VERB"
    VERB_FORM = "VERB:FORM"
    VERB_SVA = "VERB:SVA"
    VERB_TENSE = "VERB:TENSE"
    WO = "WO"


class ErrorType(str, Enum):
    """Tipos de error que inyecta el corruptor."""
    NOUN_NUM = "NOUN_NUM"
    PRONOUN = "PRONOUN"
    WORD_ORDER = "WORD_ORDER"
    DETERMINER = "DETERMINER"
    PUNCT = "PUNCT"
    PREPOSITION = "PREPOSITION"
    VERB_FORM = "VERB_FORM"


class ScoreMode(str, Enum):
    SPAN = "span"
    SPAN_REPLACEMENT = "span+replacement"


# ─────────────────────────────────────────────
# Ediciones
# ─────────────────────────────────────────────
class Edit(BaseModel):
    """Sustitución de source[start:end] por replacement (start == end: inserción)."""
    start: int = Field(ge=0)
    end: int = Field(ge=0)
    replacement: list[str] = Field(default_factory=list)
    category: Optional[ErrorCategory] = None

    @model_validator(mode="after")
    def _ordered(self):
        if self.end < self.start:
            raise ValueError("end debe ser >= start")
        return self

    def key(self, mode: ScoreMode = ScoreMode.SPAN_REPLACEMENT) -> tuple:
        if mode == ScoreMode.SPAN:
            return (self.start, self.end)
        return (self.start, self.end, tuple(self.replacement))


class EditList(BaseModel):
    """Ediciones de una frase junto a los tokens de origen."""
    source: list[str] = Field(default_factory=list)
    edits: list[Edit] = Field(default_factory=list)


# ─────────────────────────────────────────────
# Puntuación
# ─────────────────────────────────────────────
def f_beta(p: float, r: float, beta: float = 0.5) -> float:
    if p == 0 and r == 0:
        return 0.0
    b2 = beta * beta
    return (1 + b2) * p * r / (b2 * p + r)


class CategoryCounts(BaseModel):
    tp: int = 0
    fp: int = 0
    fn: int = 0

    @property
    def precision(self) -> float:
        return self.tp / (self.tp + self.fp) if self.tp + self.fp else 0.0

    @property
    def recall(self) -> float:
        return self.tp / (self.tp + self.fn) if self.tp + self.fn else 0.0

    @property
    def f05(self) -> float:
        return f_beta(self.precision, self.recall, 0.5)

    def __add__(self, other: "CategoryCounts") -> "CategoryCounts":
        return CategoryCounts(tp=self.tp + other.tp, fp=self.fp + other.fp, fn=self.fn + other.fn)


class ScoreReport(BaseModel):
    """Recuentos globales y por categoría. Se combina con merge() (fold asociativo)."""
    overall: CategoryCounts = Field(default_factory=CategoryCounts)
    per_category: dict[str, CategoryCounts] = Field(default_factory=dict)

    def merge(self, other: "ScoreReport") -> "ScoreReport":
        categories = dict(self.per_category)
        for name, counts in other.per_category.items():
            categories[name] = categories.get(name, CategoryCounts()) + counts
        return ScoreReport(overall=self.overall + other.overall, per_category=dict(sorted(categories.items())))

    @classmethod
    def combine(cls, reports: Iterable["ScoreReport"]) -> "ScoreReport":
        total = cls()
        for report in reports:
            total = total.merge(report)
        return total


# ─────────────────────────────────────────────
# Corrupción
# ─────────────────────────────────────────────
class ErrorPlan(BaseModel):
    k: int = Field(ge=0, le=4)
    types: list[ErrorType] = Field(default_factory=list)

    @model_validator(mode="after")
    def _arity(self):
        if len(self.types) != self.k:
            raise ValueError("k debe coincidir con el número de tipos")
        return self


class CorruptionRecord(BaseModel):
    """Triple de entrenamiento: corrupted + edits reproduce original."""
    id: str
    corrupted: list[str]
    original: list[str]
    edits: list[Edit] = Field(min_length=1)
    types: list[ErrorType] = Field(default_factory=list)
    seed: Optional[int] = None
    origin: str = "rule"      # rule | external


class CorruptionStats(BaseModel):
    total: int = 0
    emitted: int = 0
    dropped_zero_plan: int = 0
    dropped_no_site: int = 0
    dropped_zero_edit: int = 0
    dropped_immunity: int = 0
    planned: dict[str, int] = Field(default_factory=dict)
    realized: dict[str, int] = Field(default_factory=dict)

    @property
    def dropped(self) -> int:
        return self.total - self.emitted


class M2Block(BaseModel):
    """Bloque M2: frase origen y ediciones por anotador."""
    source: list[str] = Field(default_factory=list)
    annotations: dict[int, list[Edit]] = Field(default_factory=dict)

    def edit_list(self, annotator: int = 0) -> EditList:
        return EditList(source=list(self.source), edits=list(self.annotations.get(annotator, [])))


class CorruptionConfig(BaseModel):
    max_errors: int = Field(default=4, ge=0, le=4)
    pair_hint: Optional[str] = None
