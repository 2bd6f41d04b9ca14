"""
Modelos de las métricas CSW (CMI, M-Index, I-Index, Burstiness, CF1-3).
"""

from enum import Enum

from pydantic import BaseModel, Field

from config import CF_WEIGHT_A, CF_WEIGHT_B


class CfVariant(str, Enum):
    CF1 = "CF1"
    CF2 = "CF2"
    CF3 = "CF3"


class CfConfig(BaseModel):
    """Pesos a, b > 0 y la variante que elige el denominador f(LF)."""
    a: float = Field(default=CF_WEIGHT_A, gt=0)
    b: float = Field(default=CF_WEIGHT_B, gt=0)
    variant: CfVariant = CfVariant.CF1


class SpanStats(BaseModel):
    mean: float = Field(ge=0)
    std: float = Field(ge=0)      # desviación típica poblacional


class MetricVector(BaseModel):
    cmi: float = Field(ge=0, le=100)
    m_index: float = Field(ge=0, le=1)
    i_index: float = Field(ge=0, le=1)
    burstiness: float = Field(ge=-1, le=1)
    cf1: float = Field(ge=0)
    cf2: float = Field(ge=0)
    cf3: float = Field(ge=0)


class UtteranceMetrics(BaseModel):
    """Vector de un enunciado con lo necesario para re-agregar el corpus."""
    id: str = ""
    vector: MetricVector
    histogram: dict[str, int] = Field(default_factory=dict)
    span_lengths: list[int] = Field(default_factory=list)
    pair: str = ""


class MetricReport(BaseModel):
    """
    Informe de corpus con la forma de la tabla de métricas.
    cmi y m_index se calculan sobre el histograma acumulado; el resto es la
    media por enunciado. También se emiten las vistas alternativas.
    """
    cmi: float = 0.0
    m_index: float = 0.0
    i_index: float = 0.0
    burstiness: float = 0.0
    cf1: float = 0.0
    cf2: float = 0.0
    cf3: float = 0.0
    cmi_mean: float = 0.0
    m_index_mean: float = 0.0
    burstiness_pooled: float = 0.0
    utterance_count: int = 0
    skipped_count: int = 0
    language_histogram: dict[str, int] = Field(default_factory=dict)
    pair_histogram: dict[str, int] = Field(default_factory=dict)
    utterances: list[UtteranceMetrics] = Field(default_factory=list)
