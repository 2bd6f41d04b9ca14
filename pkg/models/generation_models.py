"""
Modelos de generación de texto CSW sintético:
árboles sintácticos, alineamientos, lotes de prompt y utterances generadas.
"""

from enum import Enum
from typing import Iterator, Optional

from pydantic import BaseModel, ConfigDict, Field

from config import (
    LLM_BACKOFF_SECONDS,
    LLM_BATCH_SIZE,
    LLM_MAX_IN_FLIGHT,
    LLM_MAX_REQUESTS,
    LLM_RETRY_LIMIT,
)


# ─────────────────────────────────────────────
# Enums
# ─────────────────────────────────────────────
class GenerationMethod(str, Enum):
    LLM = "LLM"
    TRANSLATION = "TRANSLATION"
    PARALLEL = "PARALLEL"


# ─────────────────────────────────────────────
# Árboles y alineamientos
# ─────────────────────────────────────────────
class ParseTree(BaseModel):
    """Constituyente con hijos o con una hoja; [start, end) son índices de token."""
    label: str
    children: list["ParseTree"] = Field(default_factory=list)
    leaf: Optional[str] = None
    start: int = 0
    end: int = 0

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)

    @property
    def is_leaf(self) -> bool:
        return self.leaf is not None

    def leaves(self) -> list[str]:
        if self.is_leaf:
            return [self.leaf]
        return [word for child in self.children for word in child.leaves()]

    def subtrees(self) -> Iterator["ParseTree"]:
        """Recorrido en preorden (incluye la raíz)."""
        yield self
        for child in self.children:
            yield from child.subtrees()

    def find(self, label: str) -> Optional["ParseTree"]:
        return next((t for t in self.subtrees() if t.label == label), None)


class Alignment(BaseModel):
    """Enlaces (i origen, j destino) en formato Pharaoh."""
    model_config = ConfigDict(frozen=True)

    links: frozenset[tuple[int, int]] = frozenset()

    def image(self, start: int, end: int) -> set[int]:
        return {j for i, j in self.links if start <= i < end}

    def preimage(self, start: int, end: int) -> set[int]:
        return {i for i, j in self.links if start <= j < end}


class SubtreeCandidate(BaseModel):
    model_config = ConfigDict(frozen=True)

    en_span: tuple[int, int]
    fl_span: tuple[int, int]
    en_label: str = ""
    fl_label: str = ""


# ─────────────────────────────────────────────
# LLM
# ─────────────────────────────────────────────
class PromptBatch(BaseModel):
    examples: list[str] = Field(min_length=1, max_length=10)
    source_ids: list[str] = Field(default_factory=list)
    index: int = 0
    prompt: str = ""


class GenerationConfig(BaseModel):
    max_requests: int = Field(default=LLM_MAX_REQUESTS, gt=0)
    batch_size: int = Field(default=LLM_BATCH_SIZE, ge=1, le=10)
    retry_limit: int = Field(default=LLM_RETRY_LIMIT, ge=0)
    backoff_seconds: float = Field(default=LLM_BACKOFF_SECONDS, ge=0)
    max_in_flight: int = Field(default=LLM_MAX_IN_FLIGHT, ge=1)
    target_count: Optional[int] = Field(default=None, gt=0)


class TranscriptEntry(BaseModel):
    """Una línea del transcript: petición, respuesta y reintentos."""
    batch_index: int
    source_ids: list[str] = Field(default_factory=list)
    prompt: str
    response: str
    retries: int = 0


# ─────────────────────────────────────────────
# Resultados
# ─────────────────────────────────────────────
class Provenance(BaseModel):
    source_ids: list[str] = Field(default_factory=list)
    seed: Optional[int] = None
    en_span: Optional[tuple[int, int]] = None
    fl_span: Optional[tuple[int, int]] = None
    batch_index: Optional[int] = None
    line_number: Optional[int] = None


class GeneratedUtterance(BaseModel):
    text: str
    method: GenerationMethod
    pair: str                   # calculado por text_core, nunca el solicitado
    provenance: Provenance = Field(default_factory=Provenance)


class RejectedUtterance(BaseModel):
    text: str
    reason: str
    provenance: Provenance = Field(default_factory=Provenance)


class ParsedResponse(BaseModel):
    accepted: list[GeneratedUtterance] = Field(default_factory=list)
    rejects: list[RejectedUtterance] = Field(default_factory=list)
    missing_numbers: list[int] = Field(default_factory=list)


class GenerationLog(BaseModel):
    requests: int = 0
    responses: int = 0
    retries: int = 0
    resumed_batches: int = 0
    accepted: int = 0
    rejected: int = 0
    duplicates: int = 0
    warnings: list[str] = Field(default_factory=list)
    pair_histogram: dict[str, int] = Field(default_factory=dict)


class GenerationResult(BaseModel):
    corpus: list[GeneratedUtterance] = Field(default_factory=list)
    rejects: list[RejectedUtterance] = Field(default_factory=list)
    log: GenerationLog = Field(default_factory=GenerationLog)
