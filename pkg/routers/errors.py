"""
Router de errores gramaticales: inyección sintética, extracción de
ediciones en M2 y puntuación P/R/F0.5.
"""

import argparse
import sys

from models.exceptions import LineCountMismatch, UsageError
from models.gec_models import CorruptionConfig, CorruptionRecord, EditList, ScoreMode
from models.run_models import RunConfig
from tools.corruptor import corrupt_corpus, ingest_external_corruptions, records_to_m2
from tools.edit_alignment import align_edits
from tools.error_classifier import classify_edits
from tools.m2_format import read_m2, write_m2
from tools.record_store import read_lines, read_models, read_utterances, write_jsonl, write_lines
from tools.run_config import resolve_format, shuffled
from tools.scorer import render_score_table, score_blocks, score_records
from tools.text_core import tag_text, tokenize


def register(subparsers, common: argparse.ArgumentParser) -> None:
    corrupt = subparsers.add_parser("corrupt", parents=[common],
                                    help="Inyecta errores en la parte inglesa de cada frase")
    corrupt.add_argument("inputs", nargs="?", default=None, help="Frases correctas (stdin si se omite)")
    corrupt.add_argument("--input-format", choices=["lines", "records"], default="lines")
    corrupt.add_argument("--pair-hint", default=None)
    corrupt.add_argument("--max-errors", type=int, default=None, help="Máximo de errores por frase (0-4)")
    corrupt.add_argument("--external", default=None,
                         help="Frases ya corrompidas por otro sistema, alineadas con la entrada")
    corrupt.add_argument("--stats", default=None, help="JSON con los contadores de corrupción")
    corrupt.set_defaults(handler=handle_corrupt)

    extract = subparsers.add_parser("extract-edits", parents=[common],
                                    help="Extrae y clasifica las ediciones origen → destino")
    extract.add_argument("inputs", nargs="+", metavar="FILE",
                         help="ORIGEN DESTINO (texto) o un JSONL de corrupt")
    extract.add_argument("--input-format", choices=["lines", "records"], default="lines")
    extract.set_defaults(handler=handle_extract_edits)

    score = subparsers.add_parser("score", parents=[common], help="Puntúa un M2 hipótesis contra uno de referencia")
    score.add_argument("inputs", nargs=2, metavar=("HYP_M2", "REF_M2"))
    score.add_argument("--mode", choices=[m.value for m in ScoreMode], default=ScoreMode.SPAN_REPLACEMENT.value)
    score.add_argument("--annotator", type=int, default=0)
    score.set_defaults(handler=handle_score)


def handle_corrupt(args: argparse.Namespace, run: RunConfig) -> None:
    fmt = resolve_format(run, ("records", "m2"), "records")
    utterances = read_utterances(args.inputs, args.input_format, args.pair_hint)

    if args.external:
        records, stats = ingest_external_corruptions(read_lines(args.external), [u.text for u in utterances])
    else:
        config = CorruptionConfig(pair_hint=args.pair_hint)
        if args.max_errors is not None:
            config = CorruptionConfig(max_errors=args.max_errors, pair_hint=args.pair_hint)
        tagged = [tag_text(u.text, u.pair_hint) for u in utterances]
        records, stats = corrupt_corpus(tagged, run.seed, config, [u.id for u in utterances])

    records = shuffled(records, run)
    if fmt == "records":
        write_jsonl(run.output, records)
    else:
        write_m2(run.output, records_to_m2(records))
    if args.stats:
        write_jsonl(args.stats, [stats])
    print(f"📤 {stats.emitted} pares de entrenamiento ({stats.dropped} descartados)", file=sys.stderr)


def handle_extract_edits(args: argparse.Namespace, run: RunConfig) -> None:
    fmt = resolve_format(run, ("m2", "records"), "m2")
    if args.input_format == "records":
        if len(args.inputs) != 1:
            raise UsageError("extract-edits con --input-format records espera un único fichero")
        records = read_models(args.inputs[0], CorruptionRecord)
        edit_lists = [EditList(source=r.corrupted, edits=r.edits) for r in records]
    else:
        if len(args.inputs) != 2:
            raise UsageError("extract-edits espera ORIGEN y DESTINO")
        sources, targets = read_lines(args.inputs[0]), read_lines(args.inputs[1])
        if len(sources) != len(targets):
            raise LineCountMismatch(f"{len(sources)} líneas origen pero {len(targets)} destino")
        edit_lists = []
        for source_line, target_line in zip(sources, targets):
            source = [t.surface for t in tokenize(source_line)]
            target = [t.surface for t in tokenize(target_line)]
            edit_lists.append(EditList(source=source, edits=classify_edits(source, align_edits(source, target).edits)))

    if fmt == "m2":
        write_m2(run.output, ((e.source, e.edits) for e in edit_lists))
    else:
        write_jsonl(run.output, edit_lists)
    print(f"📤 {sum(len(e.edits) for e in edit_lists)} ediciones en {len(edit_lists)} frases", file=sys.stderr)


def handle_score(args: argparse.Namespace, run: RunConfig) -> None:
    fmt = resolve_format(run, ("table", "json"), "table")
    hyp_path, ref_path = args.inputs
    report = score_blocks(read_m2(hyp_path), read_m2(ref_path), ScoreMode(args.mode), args.annotator)
    if fmt == "table":
        write_lines(run.output, [render_score_table(report)])
    else:
        write_jsonl(run.output, score_records(report))
