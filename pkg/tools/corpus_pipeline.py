"""
Pipeline de corpus para el entrenamiento por etapas:
ingesta, deduplicación, muestreo, partición train/val y ensamblado de
cada etapa a partir de su manifiesto.
"""

import json
import random
import sys
from pathlib import Path
from typing import Optional

from pydantic import ValidationError

from models.exceptions import LineCountMismatch, MissingCorpus, OverSample, ParseError
from models.pipeline_models import (
    AssembledStage,
    ContributionRow,
    Corpus,
    CorpusRecord,
    SourceEntry,
    StageManifest,
    parse_ratio,
)
from tools.edit_alignment import apply_edits
from tools.m2_format import read_m2
from tools.record_store import read_lines, read_models
from tools.text_core import detect_language_pair, normalize_text, tag_text

INGEST_FORMATS = ("lines", "records", "m2")


def _collapse(text: str) -> str:
    return " ".join(text.split())


def _record(record_id: str, source: str, target: str, origin: str) -> CorpusRecord:
    return CorpusRecord(
        id=record_id,
        source=source,
        target=target,
        pair=detect_language_pair(tag_text(source)).label,
        origin=origin,
    )


# ─────────────────────────────────────────────
# Ingesta
# ─────────────────────────────────────────────
def ingest(path: str | Path | None, fmt: str = "lines", target_path: Optional[str | Path] = None,
           corpus_id: Optional[str] = None) -> Corpus:
    """
    Lee un corpus paralelo:
    - lines: fichero origen y fichero destino alineados por línea (sin destino, target = source)
    - records: JSON por líneas {id, source, target, pair, origin}
    - m2: bloques M2; el destino sale de aplicar las ediciones del anotador 0
    """
    corpus_id = corpus_id or (Path(path).stem if path not in (None, "-") else "stdin")
    if fmt == "records":
        records = [
            r if r.origin else r.model_copy(update={"origin": corpus_id})
            for r in read_models(path, CorpusRecord)
        ]
    elif fmt == "m2":
        records = []
        for index, block in enumerate(read_m2(path), start=1):
            if not block.source:
                continue
            target = apply_edits(block.source, block.edit_list(0).edits)
            if not target:
                print(f"⚠️ Bloque M2 {index}: la corrección deja la frase vacía, se omite", file=sys.stderr)
                continue
            records.append(_record(str(index), " ".join(block.source), " ".join(target), corpus_id))
    elif fmt == "lines":
        sources = read_lines(path)
        targets = read_lines(target_path) if target_path is not None else sources
        if len(sources) != len(targets):
            raise LineCountMismatch(f"{len(sources)} líneas origen pero {len(targets)} destino")
        records = []
        skipped = 0
        for number, (source, target) in enumerate(zip(sources, targets), start=1):
            source, target = _collapse(source), _collapse(target)
            if not source or not target:
                skipped += 1
                continue
            records.append(_record(str(number), source, target, corpus_id))
        if skipped:
            print(f"⚠️ {skipped} líneas vacías omitidas en {corpus_id}", file=sys.stderr)
    else:
        raise ParseError(f"formato de corpus no soportado: {fmt} (usa {', '.join(INGEST_FORMATS)})")

    try:
        corpus = Corpus(id=corpus_id, records=records)
    except ValidationError as e:
        raise ParseError(f"corpus {corpus_id}: {e.errors()[0]['msg']}") from e
    print(f"📥 {corpus_id}: {len(corpus)} registros", file=sys.stderr)
    return corpus


# ─────────────────────────────────────────────
# Deduplicación
# ─────────────────────────────────────────────
def dedup_key(record: CorpusRecord) -> tuple[str, str]:
    return normalize_text(record.source), normalize_text(record.target)


def dedup(primary: Corpus, against: Corpus) -> tuple[Corpus, int]:
    """Quita de primary los pares (source, target) que ya están en against."""
    seen = {dedup_key(r) for r in against.records}
    kept = [r for r in primary.records if dedup_key(r) not in seen]
    removed = len(primary.records) - len(kept)
    if removed:
        print(f"🔧 {primary.id}: {removed} duplicados de {against.id} eliminados", file=sys.stderr)
    return Corpus(id=primary.id, records=kept), removed


# ─────────────────────────────────────────────
# Partición y muestreo
# ─────────────────────────────────────────────
def split(records: list[CorpusRecord], ratio: str, seed: int) -> tuple[list[CorpusRecord], list[CorpusRecord]]:
    """Baraja con la semilla y separa val = ⌊n·val/(train+val)⌋; el resto va a train."""
    try:
        train_parts, val_parts = parse_ratio(ratio)
    except ValueError as e:
        raise ParseError(str(e)) from e
    shuffled = list(records)
    random.Random(seed).shuffle(shuffled)
    val_size = len(shuffled) * val_parts // (train_parts + val_parts)
    if val_size == 0 and val_parts > 0:
        print(f"⚠️ Partición {ratio} de {len(shuffled)} registros: validación vacía", file=sys.stderr)
    cut = len(shuffled) - val_size
    return shuffled[:cut], shuffled[cut:]


def sample_size(size: int, count: Optional[int] = None, fraction: Optional[float] = None) -> int:
    if count is not None:
        if count > size:
            raise OverSample(f"se piden {count} registros de un corpus de {size}")
        return count
    if fraction is not None:
        if not 0 < fraction <= 1:
            raise OverSample(f"fracción fuera de (0, 1]: {fraction}")
        # 0.29 · 100 = 28.999999999999996
        return int(fraction * size + 1e-9)
    return size


def sample_subset(corpus: Corpus, count: Optional[int] = None, fraction: Optional[float] = None,
                  seed: int = 0) -> Corpus:
    """Muestra uniforme sin reemplazo, determinista por semilla."""
    k = sample_size(len(corpus), count, fraction)
    chosen = random.Random(seed).sample(corpus.records, k)
    return Corpus(id=corpus.id, records=chosen)


# ─────────────────────────────────────────────
# Etapas
# ─────────────────────────────────────────────
def load_manifest(path: str | Path) -> StageManifest:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return StageManifest.model_validate(json.load(f))
    except json.JSONDecodeError as e:
        raise ParseError(f"manifiesto {path}: JSON no válido: {e.msg}", line=e.lineno) from e
    except ValidationError as e:
        raise ParseError(f"manifiesto {path}: {e.errors()[0]['msg']}") from e


def _contribution_rows(entries: list[SourceEntry], counts: list[int]) -> list[ContributionRow]:
    total = sum(counts)
    return [
        ContributionRow(
            corpus=entry.corpus,
            label=entry.display_name,
            count=count,
            percent=round(100 * count / total, 2) if total else 0.0,
        )
        for entry, count in zip(entries, counts)
    ]


def plan_contributions(manifest: StageManifest, sizes: dict[str, int]) -> list[ContributionRow]:
    """Tabla de aportaciones a partir de los tamaños de corpus, sin cargar registros."""
    missing = [e.corpus for e in manifest.sources if e.corpus not in sizes]
    if missing:
        raise MissingCorpus(f"faltan corpus del manifiesto: {', '.join(missing)}")
    counts = [sample_size(sizes[e.corpus], e.count, e.fraction) for e in manifest.sources]
    return _contribution_rows(manifest.sources, counts)


def assemble_stage(manifest: StageManifest, corpora: dict[str, Corpus]) -> AssembledStage:
    missing = [e.corpus for e in manifest.sources if e.corpus not in corpora]
    if missing:
        raise MissingCorpus(f"faltan corpus del manifiesto: {', '.join(missing)}")

    pooled: list[CorpusRecord] = []
    counts = []
    for entry in manifest.sources:
        sample = sample_subset(corpora[entry.corpus], entry.count, entry.fraction, entry.seed)
        pooled.extend(sample.records)
        counts.append(len(sample))
    train, val = split(pooled, manifest.ratio, manifest.shuffle_seed)
    print(f"✅ Etapa {manifest.stage}: {len(train)} train, {len(val)} val", file=sys.stderr)
    return AssembledStage(
        manifest=manifest,
        train=train,
        val=val,
        contributions=_contribution_rows(manifest.sources, counts),
    )


def render_contribution_table(rows: list[ContributionRow]) -> str:
    width = max([len("Dataset")] + [len(r.label) for r in rows]) + 2
    lines = [f"{'Dataset':<{width}}{'Sentences':>12}{'%':>9}"]
    for row in rows:
        lines.append(f"{row.label:<{width}}{row.count:>12,}{row.percent:>9.2f}")
    lines.append(f"{'Total':<{width}}{sum(r.count for r in rows):>12,}")
    return "\n".join(lines)
