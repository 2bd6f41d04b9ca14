import pytest

from models.exceptions import ParseError, SourceMismatch
from models.gec_models import CategoryCounts, Edit, EditList, ErrorCategory, ScoreMode, ScoreReport, f_beta
from tools.error_classifier import classify_edit
from tools.m2_format import parse_m2, parse_category, render_block, write_m2, read_m2
from tools.scorer import render_score_table, score, score_blocks, score_corpus, score_records


def edit_list(source: str, *edits: tuple[int, int, str]) -> EditList:
    return EditList(
        source=source.split(),
        edits=[Edit(start=s, end=e, replacement=r.split()) for s, e, r in edits],
    )


# ─────────────────────────────────────────────
# F0.5
# ─────────────────────────────────────────────
@pytest.mark.parametrize("tp, fp, fn, expected", [
    (432, 80, 205, 80.45),
    (1, 286, 284, 0.35),
])
def test_f05_from_counts(tp, fp, fn, expected):
    assert CategoryCounts(tp=tp, fp=fp, fn=fn).f05 * 100 == pytest.approx(expected, abs=5e-3)


def test_f05_from_precision_and_recall():
    assert f_beta(0.7114, 0.2708) * 100 == pytest.approx(53.67, abs=5e-3)
    assert f_beta(0.0, 0.0) == 0.0


def test_empty_counts_score_zero():
    counts = CategoryCounts()
    assert (counts.precision, counts.recall, counts.f05) == (0.0, 0.0, 0.0)


# ─────────────────────────────────────────────
# score
# ─────────────────────────────────────────────
def test_identical_edits_score_perfectly():
    ref = edit_list("He go to the school", (1, 2, "goes"), (3, 4, ""))
    report = score(ref, ref)
    assert (report.overall.tp, report.overall.fp, report.overall.fn) == (2, 0, 0)
    assert report.overall.f05 == pytest.approx(1.0)


def test_tp_and_fn_use_reference_category_fp_uses_hypothesis():
    ref = edit_list("He go to school", (1, 2, "goes"))
    hyp = edit_list("He go to school", (1, 2, "goes"), (2, 3, "at"))
    report = score(hyp, ref)
    assert report.per_category["VERB:SVA"].tp == 1
    assert report.per_category["PREP"].fp == 1
    assert report.overall.precision == pytest.approx(0.5)
    assert report.overall.recall == pytest.approx(1.0)


def test_span_mode_ignores_replacement():
    ref = edit_list("He go home", (1, 2, "goes"))
    hyp = edit_list("He go home", (1, 2, "went"))
    strict = score(hyp, ref)
    loose = score(hyp, ref, ScoreMode.SPAN)
    assert (strict.overall.tp, strict.overall.fp, strict.overall.fn) == (0, 1, 1)
    assert (loose.overall.tp, loose.overall.fp, loose.overall.fn) == (1, 0, 0)


def test_source_length_mismatch():
    with pytest.raises(SourceMismatch):
        score(edit_list("a b c"), edit_list("a b"))
    with pytest.raises(SourceMismatch):
        score_corpus([edit_list("a")], [])


def test_corpus_score_is_a_fold_of_sentence_scores():
    pairs = [
        (edit_list("He go home", (1, 2, "goes")), edit_list("He go home", (1, 2, "goes"))),
        (edit_list("I have dog", (2, 2, "a")), edit_list("I have dog", (2, 2, "the"))),
        (edit_list("We are happy"), edit_list("We are happy", (2, 3, "glad"))),
    ]
    reports = [score(h, r) for h, r in pairs]
    left = reports[0].merge(reports[1]).merge(reports[2])
    right = reports[0].merge(reports[1].merge(reports[2]))
    assert left == right == score_corpus([h for h, _ in pairs], [r for _, r in pairs])
    assert (left.overall.tp, left.overall.fp, left.overall.fn) == (1, 1, 2)


def test_render_score_table_and_records():
    report = ScoreReport(
        overall=CategoryCounts(tp=432, fp=80, fn=205),
        per_category={"DET": CategoryCounts(tp=432, fp=80, fn=205)},
    )
    lines = render_score_table(report).splitlines()
    assert lines[1].split() == ["DET", "84.38", "67.82", "80.45", "432", "80", "205"]
    assert lines[-1].startswith("Overall")
    rows = score_records(report)
    assert rows[-1]["category"] == "Overall"
    assert rows[0]["f0.5"] == pytest.approx(0.8045, abs=1e-4)


# ─────────────────────────────────────────────
# Clasificador
# ─────────────────────────────────────────────
@pytest.mark.parametrize("source, start, end, replacement, category", [
    ("He go home", 1, 2, "goes", ErrorCategory.VERB_SVA),
    ("He like cats", 1, 2, "likes", ErrorCategory.VERB_SVA),
    ("I have dog", 2, 3, "dogs", ErrorCategory.NOUN),
    ("I saw a cat", 2, 3, "the", ErrorCategory.DET),
    ("I live on Tokyo", 2, 3, "in", ErrorCategory.PREP),
    ("I saw he", 2, 3, "him", ErrorCategory.PRON),
    ("Stop , now", 1, 2, ".", ErrorCategory.PUNCT),
    ("the cat", 0, 1, "The", ErrorCategory.ORTH),
    ("I like very ramen much", 2, 4, "ramen very", ErrorCategory.WO),
    ("Yesterday I go home", 2, 3, "went", ErrorCategory.VERB_TENSE),
    ("I am go home", 2, 3, "going", ErrorCategory.VERB_FORM),
    ("I like ramen", 2, 3, "sushi", ErrorCategory.OTHER),
])
def test_classify_edit(source, start, end, replacement, category):
    edit = Edit(start=start, end=end, replacement=replacement.split())
    assert classify_edit(edit, source.split()) == category


# ─────────────────────────────────────────────
# Formato M2
# ─────────────────────────────────────────────
M2_TEXT = """S He go to the school .
A 1 2|||R:VERB:SVA|||goes|||REQUIRED|||-NONE-|||0
A 3 4|||U:DET|||-NONE-|||REQUIRED|||-NONE-|||0
A 1 2|||R:VERB:TENSE|||went|||REQUIRED|||-NONE-|||1

S Nothing wrong here .
A -1 -1|||noop|||-NONE-|||REQUIRED|||-NONE-|||0
"""


def test_parse_m2_blocks_and_annotators():
    blocks = parse_m2(M2_TEXT.splitlines())
    assert len(blocks) == 2
    first = blocks[0]
    assert first.source == "He go to the school .".split()
    assert [(e.start, e.end, e.replacement, e.category) for e in first.annotations[0]] == [
        (1, 2, ["goes"], ErrorCategory.VERB_SVA),
        (3, 4, [], ErrorCategory.DET),
    ]
    assert first.edit_list(1).edits[0].replacement == ["went"]
    assert blocks[1].annotations == {0: []}


def test_render_block_matches_input_lines():
    block = parse_m2(M2_TEXT.splitlines())[0]
    assert render_block(block.source, block.annotations[0]) == M2_TEXT.splitlines()[:3]
    assert render_block(["ok", "."], []) == ["S ok .", "A -1 -1|||noop|||-NONE-|||REQUIRED|||-NONE-|||0"]


def test_write_then_read_m2(tmp_path):
    path = tmp_path / "out.m2"
    block = parse_m2(M2_TEXT.splitlines())[0]
    assert write_m2(path, [(block.source, block.annotations[0])]) == 1
    assert read_m2(path)[0].annotations[0] == block.annotations[0]


def test_parse_category_strips_operation_prefix():
    assert parse_category("R:VERB:SVA") == ErrorCategory.VERB_SVA
    assert parse_category("M:PUNCT") == ErrorCategory.PUNCT
    assert parse_category("R:SPELL") == ErrorCategory.OTHER


@pytest.mark.parametrize("text, line", [
    ("A 1 2|||R:DET|||the|||REQUIRED|||-NONE-|||0", 1),
    ("S a b\nA 5 6|||R:DET|||the|||REQUIRED|||-NONE-|||0", 2),
    ("S a b\nA x 1|||R:DET|||the|||REQUIRED|||-NONE-|||0", 2),
    ("S a b\nA 0 1|||R:DET", 2),
    ("S a b\n\nwhat is this", 3),
])
def test_malformed_m2_reports_line(text, line):
    with pytest.raises(ParseError) as excinfo:
        parse_m2(text.splitlines())
    assert excinfo.value.line == line


def test_score_blocks_with_identical_files():
    blocks = parse_m2(M2_TEXT.splitlines())
    report = score_blocks(blocks, blocks)
    assert report.overall.f05 == pytest.approx(1.0)
    assert score_blocks(blocks, blocks, annotator=1).overall.tp == 1
