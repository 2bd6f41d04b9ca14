"""
Generación CSW con un LLM a partir de ejemplos genuinos.

Flujo:
1. Se muestrean lotes de ≤10 ejemplos CSW genuinos (sin reemplazo dentro del lote)
2. Una petición por lote con el prompt de pocos ejemplos
3. Se parsea la respuesta numerada y se re-etiqueta cada frase
4. Se descartan las monolingües y los duplicados (contra los genuinos y entre sí)

Cada petición completada se añade al transcript; relanzar con el mismo
transcript reanuda sin repetir lotes.
"""

import asyncio
import random
import sys
from collections import Counter
from pathlib import Path
from typing import Awaitable, Callable, Optional

import regex

from config import CSW_PROMPT_TEMPLATE
from models.exceptions import (
    BudgetExhausted,
    EmptyInput,
    ExampleNotCSW,
    ServiceError,
    UnparseableResponse,
)
from models.generation_models import (
    GeneratedUtterance,
    GenerationConfig,
    GenerationMethod,
    GenerationResult,
    ParsedResponse,
    PromptBatch,
    Provenance,
    RejectedUtterance,
    TranscriptEntry,
)
from models.text_models import RawUtterance
from tools.ai_engine import ChatClient, complete_with_retries
from tools.record_store import append_jsonl, read_models
from tools.text_core import detect_language_pair, is_code_switched, normalize_text, tag_text

NUMBERED_LINE = regex.compile(r"^\s*(\d+)\.\s*(.+?)\s*$")


# ─────────────────────────────────────────────
# Prompt
# ─────────────────────────────────────────────
def build_llm_prompt(batch: PromptBatch) -> str:
    for example in batch.examples:
        if not is_code_switched(tag_text(example)):
            raise ExampleNotCSW(f"el ejemplo no mezcla dos idiomas: {example!r}")
    numbered = "\n".join(f"{i}. {example}" for i, example in enumerate(batch.examples, start=1))
    # replace y no format(): los ejemplos pueden traer llaves
    return CSW_PROMPT_TEMPLATE.replace("{count}", str(len(batch.examples))).replace("{examples}", numbered)


# ─────────────────────────────────────────────
# Respuesta
# ─────────────────────────────────────────────
def parse_llm_response(raw: str, expected_count: int, batch_index: Optional[int] = None,
                       source_ids: Optional[list[str]] = None) -> ParsedResponse:
    """
    Extrae las líneas "k. texto" con k en 1..expected_count. Cada frase se
    categoriza por el par detectado, nunca por el pedido.
    """
    found: dict[int, str] = {}
    for line in raw.splitlines():
        match = NUMBERED_LINE.match(line)
        if not match:
            continue
        number = int(match.group(1))
        if 1 <= number <= expected_count and number not in found:
            found[number] = match.group(2)
    if not found:
        raise UnparseableResponse(f"la respuesta no tiene líneas numeradas: {raw[:80]!r}")

    parsed = ParsedResponse(missing_numbers=[k for k in range(1, expected_count + 1) if k not in found])
    for number, text in found.items():
        provenance = Provenance(source_ids=source_ids or [], batch_index=batch_index, line_number=number)
        detection = detect_language_pair(tag_text(text))
        if detection.is_monolingual:
            parsed.rejects.append(RejectedUtterance(text=text, reason="monolingual", provenance=provenance))
            continue
        parsed.accepted.append(GeneratedUtterance(
            text=text,
            method=GenerationMethod.LLM,
            pair=detection.label,
            provenance=provenance,
        ))
    return parsed


# ─────────────────────────────────────────────
# Lotes
# ─────────────────────────────────────────────
def plan_batches(genuine: list[RawUtterance], config: GenerationConfig, seed: int) -> list[PromptBatch]:
    """Todos los lotes del presupuesto, fijados por la semilla antes de pedir nada."""
    rng = random.Random(seed)
    size = min(config.batch_size, len(genuine))
    batches = []
    for index in range(config.max_requests):
        chosen = rng.sample(genuine, size)
        batch = PromptBatch(examples=[u.text for u in chosen], source_ids=[u.id for u in chosen], index=index)
        batch.prompt = build_llm_prompt(batch)
        batches.append(batch)
    return batches


def _load_transcript(path: Optional[str | Path]) -> dict[int, TranscriptEntry]:
    if path is None or not Path(path).exists():
        return {}
    return {entry.batch_index: entry for entry in read_models(path, TranscriptEntry)}


async def generate_llm_corpus(
    genuine: list[RawUtterance],
    client: ChatClient,
    config: Optional[GenerationConfig] = None,
    seed: int = 0,
    transcript_path: Optional[str | Path] = None,
    sleep: Callable[[float], Awaitable[None]] = asyncio.sleep,
) -> GenerationResult:
    config = config or GenerationConfig()
    examples = [u for u in genuine if is_code_switched(tag_text(u.text, u.pair_hint))]
    if not examples:
        raise EmptyInput("no hay ejemplos CSW genuinos para los prompts")
    if len(examples) < len(genuine):
        print(f"⚠️ {len(genuine) - len(examples)} ejemplos monolingües excluidos de los prompts", file=sys.stderr)

    batches = plan_batches(examples, config, seed)
    done = _load_transcript(transcript_path)
    result = GenerationResult()
    seen = {normalize_text(u.text) for u in genuine}
    semaphore = asyncio.Semaphore(config.max_in_flight)
    lock = asyncio.Lock()

    async def request(batch: PromptBatch) -> TranscriptEntry:
        async with semaphore:
            response, retries = await complete_with_retries(
                client, batch.prompt, config.retry_limit, config.backoff_seconds, sleep,
            )
        entry = TranscriptEntry(batch_index=batch.index, source_ids=batch.source_ids,
                                prompt=batch.prompt, response=response, retries=retries)
        if transcript_path is not None:
            async with lock:
                append_jsonl(transcript_path, entry)
        return entry

    def absorb(batch: PromptBatch, entry: TranscriptEntry) -> None:
        try:
            parsed = parse_llm_response(entry.response, len(batch.examples), batch.index, batch.source_ids)
        except UnparseableResponse as e:
            result.log.warnings.append(f"lote {batch.index}: {e}")
            return
        if parsed.missing_numbers:
            result.log.warnings.append(f"lote {batch.index}: faltan los números {parsed.missing_numbers}")
        result.rejects.extend(parsed.rejects)
        for utterance in parsed.accepted:
            key = normalize_text(utterance.text)
            if key in seen:
                result.log.duplicates += 1
                continue
            seen.add(key)
            result.corpus.append(utterance)

    def target_reached() -> bool:
        return config.target_count is not None and len(result.corpus) >= config.target_count

    for wave_start in range(0, len(batches), config.max_in_flight):
        if target_reached():
            break
        wave = batches[wave_start:wave_start + config.max_in_flight]
        pending = [b for b in wave if b.index not in done]
        result.log.resumed_batches += len(wave) - len(pending)
        result.log.requests += len(pending)
        outcomes = await asyncio.gather(*(request(b) for b in pending), return_exceptions=True)
        fresh = dict(zip((b.index for b in pending), outcomes))

        failure = None
        for batch in wave:
            entry = done.get(batch.index) or fresh.get(batch.index)
            if isinstance(entry, BaseException):
                failure = failure or entry
                continue
            if batch.index in fresh:
                result.log.responses += 1
                result.log.retries += entry.retries
            absorb(batch, entry)
        if failure is not None:
            _finish(result)
            if isinstance(failure, ServiceError):
                raise failure
            raise ServiceError(str(failure)) from failure
        print(f"📥 Lotes {wave_start + 1}-{wave_start + len(wave)}: {len(result.corpus)} frases aceptadas",
              file=sys.stderr)

    _finish(result)
    if config.target_count is not None and len(result.corpus) < config.target_count:
        raise BudgetExhausted(
            f"presupuesto de {config.max_requests} peticiones agotado con "
            f"{len(result.corpus)}/{config.target_count} frases",
            corpus=result.corpus,
            log=result.log,
        )
    if config.target_count is not None:
        result.corpus = result.corpus[:config.target_count]
        _finish(result)
    return result


def _finish(result: GenerationResult) -> None:
    result.log.accepted = len(result.corpus)
    result.log.rejected = len(result.rejects)
    result.log.pair_histogram = dict(sorted(Counter(u.pair for u in result.corpus).items()))
