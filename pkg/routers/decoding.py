"""
Router del decoder: aplica etiquetas de edición desde matrices de
probabilidad y ajusta los parámetros de inferencia por rejilla.
"""

import argparse
import sys

from models.decoder_models import InferenceParams
from models.run_models import RunConfig
from tools.decoder import (
    decode_corpus,
    default_grid,
    default_vocab,
    dev_items,
    grid_search,
    grid_values,
    read_matrices,
    read_vocab,
)
from tools.m2_format import read_m2
from tools.record_store import write_jsonl, write_lines
from tools.run_config import resolve_format, shuffled


def register(subparsers, common: argparse.ArgumentParser) -> None:
    decode = subparsers.add_parser("decode", parents=[common], help="Corrige frases a partir de matrices de etiquetas")
    decode.add_argument("inputs", nargs="?", default=None, help="Matrices JSONL (stdin si se omite)")
    decode.add_argument("--vocab", default=None, help="Vocabulario de etiquetas, una por línea")
    decode.add_argument("--additional-confidence", type=float, default=None)
    decode.add_argument("--min-error-probability", type=float, default=None)
    decode.add_argument("--trace", default=None, help="JSONL con la traza por iteración")
    decode.set_defaults(handler=handle_decode)

    grid = subparsers.add_parser("grid-search", parents=[common],
                                 help="Busca additional_confidence y min_error_probability por F0.5")
    grid.add_argument("inputs", nargs=2, metavar=("MATRICES", "REF_M2"))
    grid.add_argument("--vocab", default=None)
    grid.add_argument("--confidence-max", type=float, default=None)
    grid.add_argument("--error-probability-max", type=float, default=None)
    grid.add_argument("--step", type=float, default=None)
    grid.add_argument("--surface", default=None, help="JSONL con F0.5 de cada punto de la rejilla")
    grid.set_defaults(handler=handle_grid_search)


def handle_decode(args: argparse.Namespace, run: RunConfig) -> None:
    fmt = resolve_format(run, ("lines", "records"), "lines")
    vocab = read_vocab(args.vocab) if args.vocab else default_vocab()
    overrides = {
        "additional_confidence": args.additional_confidence,
        "min_error_probability": args.min_error_probability,
    }
    params = InferenceParams(**{k: v for k, v in overrides.items() if v is not None})
    results = decode_corpus(read_matrices(args.inputs), vocab, params)

    if args.trace:
        write_jsonl(args.trace, [
            {"index": index, **step.model_dump()}
            for index, result in enumerate(results, start=1)
            for step in result.trace
        ])
    results = shuffled(results, run)
    if fmt == "lines":
        write_lines(run.output, [" ".join(r.tokens) for r in results])
    else:
        write_jsonl(run.output, results)


def handle_grid_search(args: argparse.Namespace, run: RunConfig) -> None:
    matrices_path, reference_path = args.inputs
    vocab = read_vocab(args.vocab) if args.vocab else default_vocab()
    references = [block.edit_list(0) for block in read_m2(reference_path)]
    dev = dev_items(read_matrices(matrices_path), references)

    confidence_values, error_values = default_grid()
    if args.step is not None or args.confidence_max is not None or args.error_probability_max is not None:
        step_args = {"step": args.step} if args.step is not None else {}
        confidence_values = grid_values(args.confidence_max if args.confidence_max is not None
                                        else confidence_values[-1], **step_args)
        error_values = grid_values(args.error_probability_max if args.error_probability_max is not None
                                   else error_values[-1], **step_args)

    result = grid_search(dev, vocab, confidence_values, error_values)
    if args.surface:
        write_jsonl(args.surface, result.surface)
    best = result.best
    write_lines(run.output, [
        f"additional_confidence={best.additional_confidence:g} "
        f"min_error_probability={best.min_error_probability:g}"
    ])
    point = result.best_point
    print(f"✅ P={point.precision * 100:.2f} R={point.recall * 100:.2f} F0.5={point.f05 * 100:.2f}",
          file=sys.stderr)
