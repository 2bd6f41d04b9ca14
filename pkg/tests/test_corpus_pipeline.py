import json

import pytest
from pydantic import ValidationError

from config import MANIFEST_DIR
from models.exceptions import LineCountMismatch, MissingCorpus, OverSample, ParseError
from models.pipeline_models import Corpus, CorpusRecord, SourceEntry, StageManifest, parse_ratio
from models.text_models import MONOLINGUAL
from tools.corpus_pipeline import (
    assemble_stage,
    dedup,
    ingest,
    load_manifest,
    plan_contributions,
    render_contribution_table,
    sample_size,
    sample_subset,
    split,
)

STAGE2_PERCENT = [80.54, 5.61, 4.43, 2.20, 5.73, 1.48]
STAGE3_PERCENT = [67.23, 17.80, 9.80, 5.17]


def make_corpus(name: str, size: int) -> Corpus:
    records = [CorpusRecord(id=str(i), source=f"{name} sentence {i}", target=f"{name} sentence {i} .")
               for i in range(size)]
    return Corpus(id=name, records=records)


def corpus_sizes() -> dict[str, int]:
    with open(MANIFEST_DIR / "corpus_sizes.json", "r", encoding="utf-8") as f:
        return json.load(f)


# ─────────────────────────────────────────────
# Ingesta
# ─────────────────────────────────────────────
def test_ingest_parallel_lines(write_file):
    source = write_file("src.txt", "He go  home .\n\nI like ラーメン\n")
    target = write_file("tgt.txt", "He goes home .\n\nI like ラーメン\n")
    corpus = ingest(source, "lines", target_path=target, corpus_id="toy")
    assert [(r.id, r.source, r.target) for r in corpus.records] == [
        ("1", "He go home .", "He goes home ."),
        ("3", "I like ラーメン", "I like ラーメン"),
    ]
    assert [r.pair for r in corpus.records] == [MONOLINGUAL, "EN-JA"]
    assert {r.origin for r in corpus.records} == {"toy"}


def test_ingest_lines_without_target_copies_source(write_file):
    corpus = ingest(write_file("genuine.txt", "I like ラーメン\n"), "lines")
    assert corpus.id == "genuine"
    assert corpus.records[0].target == corpus.records[0].source


def test_ingest_line_count_mismatch(write_file):
    with pytest.raises(LineCountMismatch):
        ingest(write_file("a.txt", "one\ntwo\n"), "lines", target_path=write_file("b.txt", "one\n"))


def test_ingest_m2_applies_first_annotator(write_file):
    path = write_file("dev.m2", (
        "S He go home .\n"
        "A 1 2|||R:VERB:SVA|||goes|||REQUIRED|||-NONE-|||0\n"
        "\n"
        "S Fine .\n"
        "A -1 -1|||noop|||-NONE-|||REQUIRED|||-NONE-|||0\n"
    ))
    corpus = ingest(path, "m2")
    assert [(r.source, r.target) for r in corpus.records] == [("He go home .", "He goes home ."), ("Fine .", "Fine .")]


def test_ingest_records_fills_origin(write_file):
    lines = [
        {"id": "a", "source": "x y", "target": "x z"},
        {"id": "b", "source": "p", "target": "q", "origin": "elsewhere"},
    ]
    path = write_file("recs.jsonl", "\n".join(json.dumps(line) for line in lines) + "\n")
    corpus = ingest(path, "records", corpus_id="mine")
    assert [r.origin for r in corpus.records] == ["mine", "elsewhere"]


def test_ingest_rejects_duplicate_ids_and_unknown_format(write_file):
    path = write_file("dup.jsonl", '{"id": "1", "source": "a", "target": "a"}\n'
                                   '{"id": "1", "source": "b", "target": "b"}\n')
    with pytest.raises(ParseError):
        ingest(path, "records")
    with pytest.raises(ParseError):
        ingest(path, "csv")


# ─────────────────────────────────────────────
# Deduplicación
# ─────────────────────────────────────────────
def test_dedup_ignores_case_and_spacing():
    genuine = Corpus(id="genuine", records=[
        CorpusRecord(id="1", source="I like ラーメン", target="I like ラーメン ."),
        CorpusRecord(id="2", source="Keep me 日本", target="Keep me 日本"),
    ])
    test_set = Corpus(id="test", records=[CorpusRecord(id="t", source="i  LIKE ラーメン", target="I like ラーメン .")])
    kept, removed = dedup(genuine, test_set)
    assert removed == 1
    assert [r.id for r in kept.records] == ["2"]


# ─────────────────────────────────────────────
# Partición y muestreo
# ─────────────────────────────────────────────
def test_split_nineteen_to_one():
    records = make_corpus("c", 20).records
    train, val = split(records, "19:1", seed=0)
    assert (len(train), len(val)) == (19, 1)
    assert sorted(r.id for r in train + val) == sorted(r.id for r in records)
    assert split(records, "19:1", seed=0) == (train, val)


def test_split_of_one_record_leaves_val_empty():
    train, val = split(make_corpus("c", 1).records, "19:1", seed=0)
    assert (len(train), len(val)) == (1, 0)


def test_split_bad_ratio():
    with pytest.raises(ParseError):
        split([], "19-1", seed=0)
    assert parse_ratio("9:1") == (9, 1)
    with pytest.raises(ValueError):
        parse_ratio("0:0")


@pytest.mark.parametrize("size, count, fraction, expected", [
    (5875, None, 0.9, 5287),
    (100, None, 0.29, 29),
    (10, 4, None, 4),
    (10, None, None, 10),
    (10, 0, None, 0),
])
def test_sample_size(size, count, fraction, expected):
    assert sample_size(size, count, fraction) == expected


def test_over_sample():
    with pytest.raises(OverSample):
        sample_size(10, count=11)


def test_sample_subset_is_seeded():
    corpus = make_corpus("c", 50)
    first = sample_subset(corpus, count=10, seed=3)
    assert first == sample_subset(corpus, count=10, seed=3)
    assert len({r.id for r in first.records}) == 10


# ─────────────────────────────────────────────
# Manifiestos y etapas
# ─────────────────────────────────────────────
def test_source_entry_takes_count_or_fraction():
    with pytest.raises(ValidationError):
        SourceEntry(corpus="x", count=10, fraction=0.5)
    with pytest.raises(ValidationError):
        StageManifest(stage=2, sources=[SourceEntry(corpus="x")], ratio="nineteen")


def test_load_manifest_errors(write_file):
    with pytest.raises(ParseError):
        load_manifest(write_file("broken.json", "{not json"))
    with pytest.raises(ParseError):
        load_manifest(write_file("empty.json", '{"stage": 2, "sources": []}'))


@pytest.mark.parametrize("stage, expected", [
    (2, STAGE2_PERCENT),
    (3, STAGE3_PERCENT),
])
def test_contribution_percentages_at_full_size(stage, expected):
    rows = plan_contributions(load_manifest(MANIFEST_DIR / f"stage{stage}.json"), corpus_sizes())
    assert [r.percent for r in rows] == pytest.approx(expected, abs=0.01)


def test_stage_totals_at_full_size():
    stage3 = plan_contributions(load_manifest(MANIFEST_DIR / "stage3.json"), corpus_sizes())
    assert sum(r.count for r in stage3) == 102047
    stage1 = plan_contributions(load_manifest(MANIFEST_DIR / "stage1.json"), corpus_sizes())
    assert stage1[1].percent == pytest.approx(5.65, abs=0.01)


def test_plan_requires_every_corpus():
    with pytest.raises(MissingCorpus):
        plan_contributions(load_manifest(MANIFEST_DIR / "stage2.json"), {"lang8": 10})


def test_assemble_stage_two_at_desk_scale():
    names = ["lang8", "wi_locness", "nucle", "fce", "pie_csw", "rev_gector_csw"]
    sizes = [986, 69, 54, 27, 70, 18]
    corpora = {name: make_corpus(name, size) for name, size in zip(names, sizes)}
    manifest = StageManifest(stage=2, shuffle_seed=5, sources=[SourceEntry(corpus=n, seed=i)
                                                               for i, n in enumerate(names)])
    stage = assemble_stage(manifest, corpora)
    assert [r.count for r in stage.contributions] == sizes
    assert [r.percent for r in stage.contributions] == pytest.approx(STAGE2_PERCENT, abs=0.2)
    assert len(stage.train) + len(stage.val) == sum(sizes)
    assert len(stage.val) == sum(sizes) // 20


def test_assemble_stage_three_at_desk_scale():
    corpora = {
        "wi_locness": make_corpus("wi_locness", 69),
        "rev_gector_csw": make_corpus("rev_gector_csw", 18),
        "pie_csw": make_corpus("pie_csw", 70),
        "genuine_csw": make_corpus("genuine_csw", 6),
    }
    manifest = StageManifest(stage=3, sources=[
        SourceEntry(corpus="wi_locness"),
        SourceEntry(corpus="rev_gector_csw"),
        SourceEntry(corpus="pie_csw", count=10),
        SourceEntry(corpus="genuine_csw", count=5),
    ])
    stage = assemble_stage(manifest, corpora)
    assert [r.count for r in stage.contributions] == [69, 18, 10, 5]
    assert [r.percent for r in stage.contributions] == pytest.approx(STAGE3_PERCENT, abs=0.5)

    again = assemble_stage(manifest, corpora)
    assert again.train == stage.train and again.val == stage.val


def test_assemble_missing_corpus():
    manifest = StageManifest(stage=1, sources=[SourceEntry(corpus="absent")])
    with pytest.raises(MissingCorpus):
        assemble_stage(manifest, {})


def test_render_contribution_table():
    rows = plan_contributions(load_manifest(MANIFEST_DIR / "stage3.json"), corpus_sizes())
    lines = render_contribution_table(rows).splitlines()
    assert lines[1].split()[-2:] == ["68,608", "67.23"]
    assert lines[-1].split() == ["Total", "102,047"]
