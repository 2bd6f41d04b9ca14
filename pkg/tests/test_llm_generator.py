import asyncio

import pytest

from models.exceptions import BudgetExhausted, EmptyInput, ExampleNotCSW, ServiceError, UnparseableResponse
from models.generation_models import GenerationConfig, PromptBatch
from models.text_models import RawUtterance
from tools.ai_engine import ReplayClient, complete_with_retries
from tools.llm_generator import build_llm_prompt, generate_llm_corpus, parse_llm_response, plan_batches

ONE_SHOT = '1. This animal is called a "犬".\n2. I want to eat 寿司 tonight.'


class StubClient:
    """Devuelve siempre la misma respuesta y cuenta las peticiones."""

    def __init__(self, response: str = ONE_SHOT):
        self.response = response
        self.prompts: list[str] = []

    async def complete(self, prompt: str) -> str:
        self.prompts.append(prompt)
        return self.response


class FlakyClient(StubClient):
    def __init__(self, failures: int):
        super().__init__()
        self.failures = failures

    async def complete(self, prompt: str) -> str:
        if self.failures > 0:
            self.failures -= 1
            raise RuntimeError("503 Service Unavailable")
        return await super().complete(prompt)


class Sleeper:
    def __init__(self):
        self.waits: list[float] = []

    async def __call__(self, seconds: float) -> None:
        self.waits.append(seconds)


def genuine(fixtures_dir) -> list[RawUtterance]:
    lines = (fixtures_dir / "genuine_csw.txt").read_text(encoding="utf-8").splitlines()
    return [RawUtterance(id=str(i), text=t) for i, t in enumerate(lines, start=1)]


def config(**overrides) -> GenerationConfig:
    values = {"max_requests": 3, "batch_size": 2, "retry_limit": 2, "backoff_seconds": 15, "max_in_flight": 2}
    values.update(overrides)
    return GenerationConfig(**values)


# ─────────────────────────────────────────────
# Prompt
# ─────────────────────────────────────────────
def test_prompt_matches_golden_file(fixtures_dir):
    examples = [u.text for u in genuine(fixtures_dir)]
    expected = (fixtures_dir / "llm_prompt_10.txt").read_text(encoding="utf-8")
    assert build_llm_prompt(PromptBatch(examples=examples)) == expected


def test_prompt_rejects_monolingual_example():
    with pytest.raises(ExampleNotCSW):
        build_llm_prompt(PromptBatch(examples=["I like ラーメン", "plain English only"]))


def test_prompt_keeps_braces_in_examples():
    prompt = build_llm_prompt(PromptBatch(examples=["I wrote {x} in ノート"]))
    assert "1. I wrote {x} in ノート" in prompt


def test_batches_are_fixed_by_seed(fixtures_dir):
    first = plan_batches(genuine(fixtures_dir), config(), seed=4)
    second = plan_batches(genuine(fixtures_dir), config(), seed=4)
    assert [b.source_ids for b in first] == [b.source_ids for b in second]
    assert len(first) == 3
    assert all(len(set(b.source_ids)) == 2 for b in first)


# ─────────────────────────────────────────────
# Respuesta
# ─────────────────────────────────────────────
def test_parse_response_relabels_and_rejects():
    raw = "Sure!\n1. I bought 新しい shoes\n2. Only English here\n7. out of range 日本"
    parsed = parse_llm_response(raw, expected_count=3, batch_index=0)
    assert [u.text for u in parsed.accepted] == ["I bought 新しい shoes"]
    assert parsed.accepted[0].pair == "EN-JA"
    assert parsed.accepted[0].provenance.line_number == 1
    assert [r.reason for r in parsed.rejects] == ["monolingual"]
    assert parsed.missing_numbers == [3]


def test_unparseable_response():
    with pytest.raises(UnparseableResponse):
        parse_llm_response("I cannot help with that.", expected_count=2)


# ─────────────────────────────────────────────
# Reintentos
# ─────────────────────────────────────────────
def test_retries_with_exponential_backoff():
    sleeper = Sleeper()
    text, retries = asyncio.run(complete_with_retries(FlakyClient(failures=2), "p", 3, 15, sleeper))
    assert text == ONE_SHOT
    assert retries == 2
    assert sleeper.waits == [15, 30]


def test_retries_exhausted():
    sleeper = Sleeper()
    with pytest.raises(ServiceError):
        asyncio.run(complete_with_retries(FlakyClient(failures=5), "p", 2, 1, sleeper))
    assert sleeper.waits == [1, 2]


# ─────────────────────────────────────────────
# Corpus
# ─────────────────────────────────────────────
def test_stub_round_trip_deduplicates(fixtures_dir):
    client = StubClient()
    result = asyncio.run(generate_llm_corpus(genuine(fixtures_dir), client, config(), seed=1, sleep=Sleeper()))
    assert len(client.prompts) == 3
    assert [u.text for u in result.corpus] == ['This animal is called a "犬".', "I want to eat 寿司 tonight."]
    assert result.log.duplicates == 4
    assert result.log.requests == result.log.responses == 3


def test_generated_text_duplicating_genuine_is_dropped(fixtures_dir):
    client = StubClient(response='1. This food is called "ラーメン".')
    result = asyncio.run(generate_llm_corpus(genuine(fixtures_dir), client, config(), seed=1, sleep=Sleeper()))
    assert result.corpus == []
    assert result.log.duplicates == 3


def test_resume_from_transcript(fixtures_dir, tmp_path):
    transcript = tmp_path / "transcript.jsonl"
    first = asyncio.run(generate_llm_corpus(genuine(fixtures_dir), StubClient(), config(), seed=2,
                                            transcript_path=transcript, sleep=Sleeper()))
    silent = StubClient()
    resumed = asyncio.run(generate_llm_corpus(genuine(fixtures_dir), silent, config(), seed=2,
                                              transcript_path=transcript, sleep=Sleeper()))
    assert silent.prompts == []
    assert resumed.log.resumed_batches == 3
    assert [u.text for u in resumed.corpus] == [u.text for u in first.corpus]


def test_replay_client_reproduces_a_run(fixtures_dir, tmp_path):
    transcript = tmp_path / "transcript.jsonl"
    live = asyncio.run(generate_llm_corpus(genuine(fixtures_dir), StubClient(), config(), seed=9,
                                           transcript_path=transcript, sleep=Sleeper()))
    replayed = asyncio.run(generate_llm_corpus(genuine(fixtures_dir), ReplayClient.from_file(transcript),
                                               config(), seed=9, sleep=Sleeper()))
    assert replayed.model_dump() == live.model_dump()


def test_budget_exhausted_keeps_partial_corpus(fixtures_dir):
    with pytest.raises(BudgetExhausted) as excinfo:
        asyncio.run(generate_llm_corpus(genuine(fixtures_dir), StubClient(), config(target_count=5),
                                        seed=3, sleep=Sleeper()))
    assert len(excinfo.value.corpus) == 2
    assert excinfo.value.log.requests == 3


def test_target_count_stops_early(fixtures_dir):
    client = StubClient()
    result = asyncio.run(generate_llm_corpus(genuine(fixtures_dir), client, config(target_count=1, max_in_flight=1),
                                             seed=3, sleep=Sleeper()))
    assert len(result.corpus) == 1
    assert len(client.prompts) == 1


def test_failed_batch_raises_service_error(fixtures_dir):
    with pytest.raises(ServiceError):
        asyncio.run(generate_llm_corpus(genuine(fixtures_dir), FlakyClient(failures=100), config(retry_limit=1),
                                        seed=0, sleep=Sleeper()))


def test_no_code_switched_examples():
    monolingual = [RawUtterance(id="1", text="Only English here")]
    with pytest.raises(EmptyInput):
        asyncio.run(generate_llm_corpus(monolingual, StubClient(), config(), seed=0))
