"""
Configuración de una ejecución de la CLI.
"""

from typing import Optional

from pydantic import BaseModel, Field, model_validator

from config import (
    LLM_API_KEY_ENV,
    LLM_BASE_URL,
    LLM_MAX_REQUESTS,
    LLM_PROVIDER,
    LLM_RETRY_LIMIT,
)

# Comandos que muestrean o barajan: necesitan semilla explícita
SAMPLING_COMMANDS = frozenset({"gen-llm", "gen-translate", "gen-parallel", "corrupt", "split"})


class LLMSettings(BaseModel):
    provider: str = LLM_PROVIDER
    model: Optional[str] = None
    base_url: str = LLM_BASE_URL
    key_env: str = LLM_API_KEY_ENV      # nombre de la variable, nunca la key
    budget: int = Field(default=LLM_MAX_REQUESTS, gt=0)
    retry_limit: int = Field(default=LLM_RETRY_LIMIT, ge=0)


class RunConfig(BaseModel):
    command: str
    seed: Optional[int] = None
    inputs: list[str] = Field(default_factory=list)
    output: Optional[str] = None
    format: Optional[str] = None
    manifest: Optional[str] = None
    shuffle: bool = False
    llm: LLMSettings = Field(default_factory=LLMSettings)

    @model_validator(mode="after")
    def _seed_for_sampling(self):
        if self.seed is None and (self.command in SAMPLING_COMMANDS or self.shuffle):
            raise ValueError(f"el comando {self.command} necesita --seed")
        return self
