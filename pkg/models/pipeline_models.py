"""
Modelos del pipeline de corpus: registros paralelos, manifiestos de etapa
y etapas ensambladas.
"""

from typing import Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from config import DEFAULT_SPLIT_RATIO
from models.text_models import MONOLINGUAL

RATIO_SEPARATOR = ":"


def parse_ratio(ratio: str) -> tuple[int, int]:
    """ "19:1" → (19, 1). ValueError si no son dos enteros ≥ 0 con suma > 0."""
    parts = ratio.split(RATIO_SEPARATOR)
    if len(parts) != 2 or not all(p.strip().isdigit() for p in parts):
        raise ValueError(f"proporción train:val no válida: {ratio!r}")
    train, val = int(parts[0]), int(parts[1])
    if train + val == 0:
        raise ValueError(f"proporción train:val vacía: {ratio!r}")
    return train, val


# ─────────────────────────────────────────────
# Corpus
# ─────────────────────────────────────────────
class CorpusRecord(BaseModel):
    id: str
    source: str = Field(min_length=1)
    target: str = Field(min_length=1)
    pair: str = MONOLINGUAL
    origin: str = ""


class Corpus(BaseModel):
    id: str
    records: list[CorpusRecord] = Field(default_factory=list)

    @model_validator(mode="after")
    def _unique_ids(self):
        ids = [r.id for r in self.records]
        if len(set(ids)) != len(ids):
            raise ValueError(f"ids de registro repetidos en el corpus {self.id}")
        return self

    def __len__(self) -> int:
        return len(self.records)


# ─────────────────────────────────────────────
# Manifiestos de etapa
# ─────────────────────────────────────────────
class SourceEntry(BaseModel):
    """Aportación de un corpus: count o fraction (ninguno = el corpus entero)."""
    corpus: str
    label: Optional[str] = None
    count: Optional[int] = Field(default=None, ge=0)
    fraction: Optional[float] = Field(default=None, gt=0, le=1)
    seed: int = 0

    @model_validator(mode="after")
    def _one_size(self):
        if self.count is not None and self.fraction is not None:
            raise ValueError(f"{self.corpus}: usa count o fraction, no los dos")
        return self

    @property
    def display_name(self) -> str:
        return self.label or self.corpus


class StageManifest(BaseModel):
    stage: int = Field(ge=1, le=3)
    sources: list[SourceEntry] = Field(min_length=1)
    ratio: str = DEFAULT_SPLIT_RATIO
    shuffle_seed: int = 0

    @field_validator("ratio")
    @classmethod
    def _valid_ratio(cls, value: str) -> str:
        parse_ratio(value)
        return value


class ContributionRow(BaseModel):
    corpus: str
    label: str
    count: int
    percent: float


class AssembledStage(BaseModel):
    manifest: StageManifest
    train: list[CorpusRecord] = Field(default_factory=list)
    val: list[CorpusRecord] = Field(default_factory=list)
    contributions: list[ContributionRow] = Field(default_factory=list)
