"""
Router de generación de texto CSW sintético.
Tres métodos: LLM con pocos ejemplos, traducción de subárbol y
sustitución de subárbol alineado con la frase paralela.
"""

import argparse
import asyncio
import sys
from typing import Optional

from models.exceptions import BudgetExhausted
from models.generation_models import GenerationConfig, GenerationResult
from models.run_models import RunConfig
from tools.ai_engine import LLMClient, ReplayClient
from tools.code_switcher import DictionaryTranslator, generate_parallel_corpus, generate_translation_corpus
from tools.llm_generator import generate_llm_corpus
from tools.parse_tree import read_alignments, read_trees
from tools.record_store import read_utterances, write_jsonl, write_lines
from tools.run_config import resolve_format, shuffled


def register(subparsers, common: argparse.ArgumentParser) -> None:
    llm = subparsers.add_parser("gen-llm", parents=[common], help="Genera frases CSW con un LLM")
    llm.add_argument("inputs", nargs="?", default=None, help="Frases CSW genuinas (stdin si se omite)")
    llm.add_argument("--input-format", choices=["lines", "records"], default="lines")
    llm.add_argument("--pair-hint", default=None)
    llm.add_argument("--target-count", type=int, default=None, help="Para al llegar a N frases aceptadas")
    llm.add_argument("--transcript", default=None, help="Transcript JSONL; relanzar con él reanuda")
    llm.add_argument("--replay", default=None, help="Responde desde un transcript guardado, sin red")
    llm.add_argument("--provider", default=None, choices=["openai", "gemini", "anthropic"])
    llm.add_argument("--model", default=None)
    llm.add_argument("--base-url", default=None)
    llm.add_argument("--key-env", default=None, help="Variable de entorno con la API key")
    llm.add_argument("--budget", type=int, default=None, help="Máximo de peticiones")
    llm.add_argument("--retry-limit", type=int, default=None)
    llm.add_argument("--backoff", type=float, default=None, help="Segundos base del backoff exponencial")
    llm.add_argument("--batch-size", type=int, default=None, help="Ejemplos por prompt (1-10)")
    llm.add_argument("--max-in-flight", type=int, default=None)
    _result_flags(llm)
    llm.set_defaults(handler=handle_gen_llm)

    translate = subparsers.add_parser("gen-translate", parents=[common],
                                      help="Traduce un subárbol al azar de cada árbol EN")
    translate.add_argument("inputs", help="Árboles PTB, uno por línea")
    translate.add_argument("--dictionary", required=True, help="Tabla TSV origen → destino")
    _result_flags(translate)
    translate.set_defaults(handler=handle_gen_translate)

    parallel = subparsers.add_parser("gen-parallel", parents=[common],
                                     help="Sustituye un subárbol alineado por su equivalente extranjero")
    parallel.add_argument("inputs", nargs=3, metavar=("EN_TREES", "FL_TREES", "ALIGNMENTS"))
    _result_flags(parallel)
    parallel.set_defaults(handler=handle_gen_parallel)


def _result_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--rejects", default=None, help="JSONL con las frases rechazadas")
    parser.add_argument("--log", default=None, help="JSON con el log de generación")


def _write_result(result: GenerationResult, run: RunConfig, rejects: Optional[str], log: Optional[str]) -> None:
    fmt = resolve_format(run, ("records", "lines"), "records")
    corpus = shuffled(result.corpus, run)
    if fmt == "records":
        write_jsonl(run.output, corpus)
    else:
        write_lines(run.output, [u.text for u in corpus])
    if rejects:
        write_jsonl(rejects, result.rejects)
    if log:
        write_jsonl(log, [result.log])
    for warning in result.log.warnings:
        print(f"⚠️ {warning}", file=sys.stderr)
    print(f"📤 {result.log.accepted} frases generadas, {result.log.rejected} rechazadas "
          f"(pares: {result.log.pair_histogram})", file=sys.stderr)


def handle_gen_llm(args: argparse.Namespace, run: RunConfig) -> None:
    genuine = read_utterances(args.inputs, args.input_format, args.pair_hint)
    options = {
        "batch_size": args.batch_size,
        "backoff_seconds": args.backoff,
        "max_in_flight": args.max_in_flight,
        "target_count": args.target_count,
    }
    config = GenerationConfig(
        max_requests=run.llm.budget,
        retry_limit=run.llm.retry_limit,
        **{k: v for k, v in options.items() if v is not None},
    )
    if args.replay:
        client = ReplayClient.from_file(args.replay)
    else:
        client = LLMClient(
            provider=run.llm.provider,
            model=run.llm.model,
            base_url=run.llm.base_url,
            key_env=run.llm.key_env,
        )

    try:
        result = asyncio.run(generate_llm_corpus(genuine, client, config, run.seed, args.transcript))
    except BudgetExhausted as e:
        # el corpus parcial se escribe igualmente antes de salir con error
        partial = GenerationResult(corpus=e.corpus, log=e.log) if e.log else GenerationResult(corpus=e.corpus)
        _write_result(partial, run, args.rejects, args.log)
        raise
    _write_result(result, run, args.rejects, args.log)


def handle_gen_translate(args: argparse.Namespace, run: RunConfig) -> None:
    trees = read_trees(args.inputs)
    translator = DictionaryTranslator.from_file(args.dictionary)
    _write_result(generate_translation_corpus(trees, translator, run.seed), run, args.rejects, args.log)


def handle_gen_parallel(args: argparse.Namespace, run: RunConfig) -> None:
    en_path, fl_path, align_path = args.inputs
    result = generate_parallel_corpus(read_trees(en_path), read_trees(fl_path), read_alignments(align_path), run.seed)
    _write_result(result, run, args.rejects, args.log)
