"""
Almacén de registros en ficheros.
Lectura y escritura de flujos JSON por líneas, ficheros de texto por líneas
y utterances de entrada para todos los comandos.
"""

import json
import sys
from pathlib import Path
from typing import Iterable, Iterator, Optional, TextIO

from pydantic import BaseModel, ValidationError

from models.exceptions import ParseError
from models.text_models import RawUtterance


# ─────────────────────────────────────────────
# Texto por líneas
# ─────────────────────────────────────────────
def read_lines(path: str | Path | None) -> list[str]:
    """Lee un fichero UTF-8 (o stdin si path es None / "-") sin saltos de línea."""
    if path is None or str(path) == "-":
        return [line.rstrip("\n") for line in sys.stdin]
    with open(path, "r", encoding="utf-8") as f:
        return [line.rstrip("\n") for line in f]


def write_lines(path: str | Path | None, lines: Iterable[str]) -> int:
    count = 0
    with _open_output(path) as out:
        for line in lines:
            out.write(line + "\n")
            count += 1
    return count


# ─────────────────────────────────────────────
# JSON por líneas
# ─────────────────────────────────────────────
def iter_jsonl(path: str | Path | None) -> Iterator[tuple[int, dict]]:
    """Itera (número de línea, objeto). Las líneas vacías se saltan."""
    for number, line in enumerate(read_lines(path), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as e:
            raise ParseError(f"JSON no válido: {e.msg}", line=number) from e
        if not isinstance(obj, dict):
            raise ParseError("se esperaba un objeto JSON", line=number)
        yield number, obj


def read_models(path: str | Path | None, model: type[BaseModel]) -> list:
    """Lee y valida cada línea con el modelo pydantic indicado."""
    records = []
    for number, obj in iter_jsonl(path):
        try:
            records.append(model.model_validate(obj))
        except ValidationError as e:
            raise ParseError(f"registro no válido: {e.errors()[0]['msg']}", line=number) from e
    return records


def _dump(record) -> str:
    if isinstance(record, BaseModel):
        return record.model_dump_json()
    return json.dumps(record, ensure_ascii=False)


def write_jsonl(path: str | Path | None, records: Iterable) -> int:
    return write_lines(path, (_dump(r) for r in records))


def append_jsonl(path: str | Path, record) -> None:
    """Añade un registro al final (transcripts de generación, trazas)."""
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "a", encoding="utf-8") as f:
        f.write(_dump(record) + "\n")


class _Stdout:
    """Context manager que no cierra stdout."""

    def __enter__(self) -> TextIO:
        return sys.stdout

    def __exit__(self, *exc) -> None:
        sys.stdout.flush()


def _open_output(path: str | Path | None):
    if path is None or str(path) == "-":
        return _Stdout()
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    return open(path, "w", encoding="utf-8")


# ─────────────────────────────────────────────
# Utterances de entrada
# ─────────────────────────────────────────────
def read_utterances(path: str | Path | None, fmt: str = "lines", pair_hint: Optional[str] = None) -> list[RawUtterance]:
    """
    Corpus de entrada: texto con un enunciado por línea ("lines") o
    registros {id, text, pair_hint} ("records").
    """
    if fmt == "records":
        utterances = read_models(path, RawUtterance)
        if pair_hint:
            utterances = [u if u.pair_hint else u.model_copy(update={"pair_hint": pair_hint}) for u in utterances]
        return utterances
    if fmt != "lines":
        raise ParseError(f"formato de utterances no soportado: {fmt}")
    return [
        RawUtterance(id=str(i), text=line, pair_hint=pair_hint)
        for i, line in enumerate(read_lines(path), start=1)
        if line.strip()
    ]
