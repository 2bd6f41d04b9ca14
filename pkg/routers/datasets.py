"""
Router de datasets: deduplicación, partición train/val y ensamblado de las
etapas de entrenamiento a partir de un manifiesto.
"""

import argparse
import json
import sys
from pathlib import Path

from config import DEFAULT_SPLIT_RATIO
from models.exceptions import UsageError
from models.run_models import RunConfig
from tools.corpus_pipeline import (
    INGEST_FORMATS,
    assemble_stage,
    dedup,
    ingest,
    load_manifest,
    plan_contributions,
    render_contribution_table,
    split,
)
from tools.record_store import write_jsonl, write_lines
from tools.run_config import resolve_format, shuffled


def register(subparsers, common: argparse.ArgumentParser) -> None:
    assemble = subparsers.add_parser("assemble", parents=[common], help="Ensambla una etapa según su manifiesto")
    assemble.add_argument("inputs", nargs="*", metavar="CORPUS=PATH", help="Corpus del manifiesto")
    assemble.add_argument("--sizes", default=None,
                          help="JSON {corpus: tamaño}: solo calcula la tabla de aportaciones")
    assemble.set_defaults(handler=handle_assemble)

    dedup_cmd = subparsers.add_parser("dedup", parents=[common], help="Quita pares ya presentes en otro corpus")
    dedup_cmd.add_argument("inputs", nargs=2, metavar=("PRIMARY", "AGAINST"))
    dedup_cmd.set_defaults(handler=handle_dedup)

    split_cmd = subparsers.add_parser("split", parents=[common], help="Parte un corpus en train y val")
    split_cmd.add_argument("inputs", metavar="CORPUS")
    split_cmd.add_argument("--target", default=None, help="Fichero destino paralelo (formato lines)")
    split_cmd.add_argument("--ratio", default=None, help="Proporción train:val (19:1 por defecto)")
    split_cmd.set_defaults(handler=handle_split)


def _input_format(run: RunConfig) -> str:
    return resolve_format(run, INGEST_FORMATS, "records")


def _output_dir(run: RunConfig) -> Path:
    if not run.output:
        raise UsageError(f"{run.command} necesita --output DIRECTORIO")
    path = Path(run.output)
    path.mkdir(parents=True, exist_ok=True)
    return path


def handle_assemble(args: argparse.Namespace, run: RunConfig) -> None:
    if not run.manifest:
        raise UsageError("assemble necesita --manifest")
    manifest = load_manifest(run.manifest)

    if args.sizes:
        with open(args.sizes, "r", encoding="utf-8") as f:
            sizes = {k: int(v) for k, v in json.load(f).items()}
        write_lines(run.output, [render_contribution_table(plan_contributions(manifest, sizes))])
        return

    fmt = _input_format(run)
    corpora = {}
    for item in args.inputs:
        name, sep, path = item.partition("=")
        if not sep or not name or not path:
            raise UsageError(f"corpus mal indicado: {item!r} (usa NOMBRE=RUTA)")
        corpora[name] = ingest(path, fmt, corpus_id=name)

    stage = assemble_stage(manifest, corpora)
    out = _output_dir(run)
    write_jsonl(out / "train.jsonl", stage.train)
    write_jsonl(out / "val.jsonl", stage.val)
    write_jsonl(out / "contributions.jsonl", stage.contributions)
    print(render_contribution_table(stage.contributions), file=sys.stderr)


def handle_dedup(args: argparse.Namespace, run: RunConfig) -> None:
    fmt = _input_format(run)
    primary_path, against_path = args.inputs
    corpus, removed = dedup(ingest(primary_path, fmt), ingest(against_path, fmt))
    write_jsonl(run.output, shuffled(corpus.records, run))
    print(f"📤 {len(corpus)} registros tras quitar {removed} duplicados", file=sys.stderr)


def handle_split(args: argparse.Namespace, run: RunConfig) -> None:
    fmt = _input_format(run) if run.format else ("lines" if args.target else "records")
    corpus = ingest(args.inputs, fmt, target_path=args.target)
    train, val = split(corpus.records, args.ratio or DEFAULT_SPLIT_RATIO, run.seed)
    out = _output_dir(run)
    write_jsonl(out / "train.jsonl", train)
    write_jsonl(out / "val.jsonl", val)
    print(f"📤 {len(train)} train, {len(val)} val", file=sys.stderr)
