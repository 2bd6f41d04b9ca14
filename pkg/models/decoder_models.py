"""
Modelos del decoder de etiquetas de edición.
"""

from enum import Enum
from typing import Optional

from pydantic import BaseModel, Field, model_validator

from config import ADDITIONAL_CONFIDENCE, MAX_ITERATIONS, MIN_ERROR_PROBABILITY
from models.gec_models import EditList

KEEP = "$KEEP"
START = "$START"


class DetectionLabel(int, Enum):
    CORRECT = 0
    INCORRECT = 1
    CSW = 2


class TagVocab(BaseModel):
    """Etiquetas ordenadas; el índice 0 es $KEEP."""
    tags: list[str] = Field(min_length=1)

    @model_validator(mode="after")
    def _keep_first(self):
        if self.tags[0] != KEEP:
            raise ValueError("la primera etiqueta debe ser $KEEP")
        if len(set(self.tags)) != len(self.tags):
            raise ValueError("etiquetas duplicadas en el vocabulario")
        return self

    def __len__(self) -> int:
        return len(self.tags)


class TagProbMatrix(BaseModel):
    """
    Salida del modelo etiquetador para una frase. Si llega correct_tag_ids,
    correct_probs[i][k] es la probabilidad de la etiqueta correct_tag_ids[i][k].
    """
    tokens: list[str]
    detect_probs: list[list[float]]
    correct_probs: list[list[float]]
    correct_tag_ids: Optional[list[list[int]]] = None


class InferenceParams(BaseModel):
    additional_confidence: float = Field(default=ADDITIONAL_CONFIDENCE, ge=0)
    min_error_probability: float = Field(default=MIN_ERROR_PROBABILITY, ge=0, le=1)
    max_iterations: int = Field(default=MAX_ITERATIONS, ge=1)


class IterationTrace(BaseModel):
    iteration: int
    error_probability: float
    applied: bool
    tags: list[str] = Field(default_factory=list)
    masked: list[int] = Field(default_factory=list)     # tokens CSW forzados a $KEEP
    guarded: list[int] = Field(default_factory=list)    # vecinos cuyo $MERGE_SPACE absorbería un CSW
    tokens: list[str] = Field(default_factory=list)


class DecodeResult(BaseModel):
    tokens: list[str]
    trace: list[IterationTrace] = Field(default_factory=list)

    @property
    def changed(self) -> bool:
        return any(step.applied for step in self.trace)


class DevItem(BaseModel):
    """Frase de validación: matriz, tokens origen y ediciones de referencia."""
    matrix: TagProbMatrix
    reference: EditList


class GridPoint(BaseModel):
    additional_confidence: float
    min_error_probability: float
    tp: int = 0
    fp: int = 0
    fn: int = 0
    precision: float = 0.0
    recall: float = 0.0
    f05: float = 0.0


class GridResult(BaseModel):
    best: InferenceParams
    best_point: GridPoint
    surface: list[GridPoint] = Field(default_factory=list)
