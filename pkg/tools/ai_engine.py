"""
Motor LLM multi-proveedor para la generación de texto CSW.
Soporta OpenAI, Google Gemini (API compatible con OpenAI) y Anthropic Claude.
Cada petición es un único mensaje de usuario con el prompt ya renderizado.
"""

import asyncio
import os
import sys
from pathlib import Path
from typing import Awaitable, Callable, Optional, Protocol

from openai import AsyncOpenAI

from config import (
    ANTHROPIC_API_KEY, ANTHROPIC_MODEL,
    GEMINI_API_KEY, GEMINI_MODEL,
    LLM_API_KEY_ENV,
    LLM_BASE_URL,
    LLM_MAX_TOKENS,
    LLM_PROVIDER,
    LLM_TEMPERATURE,
    OPENAI_API_KEY, OPENAI_MODEL,
)
from models.exceptions import ServiceError, UsageError
from models.generation_models import TranscriptEntry
from tools.record_store import read_models

GEMINI_BASE_URL = "https://generativelanguage.googleapis.com/v1beta/openai/"


class ChatClient(Protocol):
    async def complete(self, prompt: str) -> str: ...


# ─────────────────────────────────────────────
# Inicialización de clientes
# ─────────────────────────────────────────────
def _get_model(provider: str) -> str:
    """Devuelve el nombre del modelo según el proveedor configurado."""
    models = {
        "openai": OPENAI_MODEL,
        "gemini": GEMINI_MODEL,
        "anthropic": ANTHROPIC_MODEL,
    }
    return models.get(provider, OPENAI_MODEL)


def resolve_api_key(provider: str, key_env: str = LLM_API_KEY_ENV) -> str:
    """La key sale siempre del entorno; key_env permite elegir otra variable."""
    if key_env:
        return os.getenv(key_env, "")
    keys = {
        "openai": OPENAI_API_KEY,
        "gemini": GEMINI_API_KEY,
        "anthropic": ANTHROPIC_API_KEY,
    }
    return keys.get(provider, OPENAI_API_KEY)


class LLMClient:
    """Cliente de chat-completion. Lanza la excepción del proveedor si falla."""

    def __init__(
        self,
        provider: str = LLM_PROVIDER,
        model: Optional[str] = None,
        base_url: str = LLM_BASE_URL,
        key_env: str = LLM_API_KEY_ENV,
        temperature: float = LLM_TEMPERATURE,
        max_tokens: int = LLM_MAX_TOKENS,
    ):
        if provider not in ("openai", "gemini", "anthropic"):
            raise UsageError(f"proveedor LLM desconocido: {provider}")
        self.provider = provider
        self.model = model or _get_model(provider)
        self.temperature = temperature
        self.max_tokens = max_tokens
        api_key = resolve_api_key(provider, key_env)
        if not api_key:
            raise UsageError(f"falta la API key de {provider} en el entorno")

        if provider == "anthropic":
            from anthropic import AsyncAnthropic
            self._anthropic = AsyncAnthropic(api_key=api_key)
            self._openai = None
        else:
            url = base_url or (GEMINI_BASE_URL if provider == "gemini" else None)
            self._openai = AsyncOpenAI(api_key=api_key, base_url=url)
            self._anthropic = None

    async def complete(self, prompt: str) -> str:
        messages = [{"role": "user", "content": prompt}]
        if self._anthropic is not None:
            response = await self._anthropic.messages.create(
                model=self.model,
                messages=messages,
                max_tokens=self.max_tokens,
                temperature=self.temperature,
            )
            return response.content[0].text
        response = await self._openai.chat.completions.create(
            model=self.model,
            messages=messages,
            temperature=self.temperature,
            max_tokens=self.max_tokens,
        )
        return response.choices[0].message.content or ""


class ReplayClient:
    """Responde desde un transcript guardado: gen-llm reproducible sin red."""

    def __init__(self, entries: list[TranscriptEntry]):
        self.responses = {entry.prompt: entry.response for entry in entries}

    @classmethod
    def from_file(cls, path: str | Path) -> "ReplayClient":
        return cls(read_models(path, TranscriptEntry))

    async def complete(self, prompt: str) -> str:
        if prompt not in self.responses:
            raise ServiceError("el transcript no contiene respuesta para este prompt")
        return self.responses[prompt]


# ─────────────────────────────────────────────
# Reintentos
# ─────────────────────────────────────────────
async def complete_with_retries(
    client: ChatClient,
    prompt: str,
    retry_limit: int,
    backoff_seconds: float,
    sleep: Callable[[float], Awaitable[None]] = asyncio.sleep,
) -> tuple[str, int]:
    """
    Pide la respuesta con backoff exponencial (backoff · 2^intento).
    Devuelve (texto, reintentos usados); ServiceError al agotar los reintentos.
    """
    for attempt in range(retry_limit + 1):
        try:
            return await client.complete(prompt), attempt
        except ServiceError:
            raise
        except Exception as e:
            if attempt >= retry_limit:
                print(f"❌ Error con el LLM tras {attempt} reintentos: {e}", file=sys.stderr)
                raise ServiceError(f"el LLM falló tras {attempt} reintentos: {e}") from e
            wait = backoff_seconds * (2 ** attempt)
            print(f"⏳ Error del LLM ({e}). Reintentando en {wait:g}s...", file=sys.stderr)
            await sleep(wait)
    raise ServiceError("reintentos agotados")
