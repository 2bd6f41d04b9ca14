"""
Router de texto: etiquetado de idioma y métricas CSW.
"""

import argparse
import sys

from models.metric_models import CfConfig
from models.run_models import RunConfig
from tools.metrics import corpus_report, render_metric_table
from tools.record_store import read_utterances, write_jsonl, write_lines
from tools.run_config import resolve_format, shuffled
from tools.text_core import detect_language_pair, tag_text


def register(subparsers, common: argparse.ArgumentParser) -> None:
    tag = subparsers.add_parser("tag", parents=[common], help="Tokeniza y etiqueta el idioma de cada token")
    tag.add_argument("inputs", nargs="?", default=None, help="Fichero de entrada (stdin si se omite)")
    tag.add_argument("--pair-hint", default=None, help='Par esperado, p. ej. "EN-JA"')
    tag.set_defaults(handler=handle_tag)

    metrics = subparsers.add_parser("metrics", parents=[common], help="Métricas CSW de uno o varios corpus")
    metrics.add_argument("inputs", nargs="+", help="Un corpus por columna del informe")
    metrics.add_argument("--labels", default=None, help="Nombres de columna separados por comas")
    metrics.add_argument("--input-format", choices=["lines", "records"], default="lines")
    metrics.add_argument("--pair-hint", default=None)
    metrics.add_argument("--cf-a", type=float, default=None, help="Peso a de los CF")
    metrics.add_argument("--cf-b", type=float, default=None, help="Peso b de los CF")
    metrics.set_defaults(handler=handle_metrics)


def handle_tag(args: argparse.Namespace, run: RunConfig) -> None:
    fmt = resolve_format(run, ("lines", "records"), "lines")
    utterances = read_utterances(args.inputs, fmt, args.pair_hint)
    rows = []
    for utterance in utterances:
        tagged = tag_text(utterance.text, utterance.pair_hint)
        rows.append({
            "id": utterance.id,
            "tokens": tagged.surfaces,
            "tags": [t.value for t in tagged.tags],
            "pair": detect_language_pair(tagged).label,
        })
    written = write_jsonl(run.output, shuffled(rows, run))
    print(f"✅ {written} enunciados etiquetados", file=sys.stderr)


def handle_metrics(args: argparse.Namespace, run: RunConfig) -> None:
    fmt = resolve_format(run, ("table", "json"), "table")
    labels = [label.strip() for label in args.labels.split(",")] if args.labels else list(args.inputs)
    if len(labels) != len(args.inputs):
        labels = list(args.inputs)
        print("⚠️ --labels no coincide con el número de corpus; se usan los nombres de fichero", file=sys.stderr)

    cf_weights = {k: v for k, v in {"a": args.cf_a, "b": args.cf_b}.items() if v is not None}
    cfg = CfConfig(**cf_weights)
    reports = {}
    for label, path in zip(labels, args.inputs):
        utterances = read_utterances(path, args.input_format, args.pair_hint)
        tagged = [tag_text(u.text, u.pair_hint) for u in utterances]
        reports[label] = corpus_report(tagged, cfg, [u.id for u in utterances])
        if reports[label].skipped_count:
            print(f"⚠️ {label}: {reports[label].skipped_count} enunciados sin tokens con idioma", file=sys.stderr)

    if fmt == "table":
        write_lines(run.output, [render_metric_table(reports)])
    else:
        write_jsonl(run.output, [
            {"corpus": label, **report.model_dump(exclude={"utterances"})} for label, report in reports.items()
        ])
