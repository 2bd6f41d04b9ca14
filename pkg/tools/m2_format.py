"""
Lectura y escritura del formato M2.

    S This are a test .
    A 1 2|||R:VERB:SVA|||is|||REQUIRED|||-NONE-|||0

Bloques separados por línea en blanco; "A -1 -1|||noop|||…" marca una frase
sin ediciones para ese anotador.
"""

from pathlib import Path
from typing import Iterable

from models.exceptions import ParseError
from models.gec_models import Edit, ErrorCategory, M2Block
from tools.record_store import read_lines, write_lines

NONE_TOKEN = "-NONE-"
NOOP = "noop"
OPERATION_PREFIXES = ("M:", "U:", "R:")


# ─────────────────────────────────────────────
# Categorías
# ─────────────────────────────────────────────
def operation_prefix(edit: Edit) -> str:
    if edit.start == edit.end:
        return "M:"
    if not edit.replacement:
        return "U:"
    return "R:"


def format_category(edit: Edit) -> str:
    category = edit.category or ErrorCategory.OTHER
    return operation_prefix(edit) + category.value


def parse_category(raw: str) -> ErrorCategory:
    """Quita el prefijo de operación. Categorías desconocidas → OTHER."""
    value = raw.strip()
    if value.startswith(OPERATION_PREFIXES):
        value = value[2:]
    try:
        return ErrorCategory(value)
    except ValueError:
        return ErrorCategory.OTHER


# ─────────────────────────────────────────────
# Lectura
# ─────────────────────────────────────────────
def _parse_edit_line(line: str, number: int) -> tuple[int, Edit | None]:
    fields = line[2:].split("|||")
    if len(fields) < 3:
        raise ParseError("línea A con menos de 3 campos", line=number)
    span = fields[0].split()
    if len(span) != 2:
        raise ParseError(f"tramo no válido: {fields[0]!r}", line=number)
    try:
        start, end = int(span[0]), int(span[1])
        annotator = int(fields[-1]) if len(fields) >= 6 else 0
    except ValueError as e:
        raise ParseError(f"índice no numérico en {line!r}", line=number) from e

    if (start == -1 and end == -1) or fields[1].strip() == NOOP:
        return annotator, None
    if start < 0 or end < start:
        raise ParseError(f"tramo no válido: {start} {end}", line=number)
    replacement = fields[2].strip()
    tokens = [] if replacement in ("", NONE_TOKEN) else replacement.split(" ")
    return annotator, Edit(start=start, end=end, replacement=tokens, category=parse_category(fields[1]))


def parse_m2(lines: Iterable[str]) -> list[M2Block]:
    blocks: list[M2Block] = []
    current: M2Block | None = None
    for number, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            current = None
            continue
        if line.startswith("S "):
            current = M2Block(source=line[2:].split())
            blocks.append(current)
        elif line == "S":
            current = M2Block(source=[])
            blocks.append(current)
        elif line.startswith("A "):
            if current is None:
                raise ParseError("línea A sin línea S previa", line=number)
            annotator, edit = _parse_edit_line(line, number)
            edits = current.annotations.setdefault(annotator, [])
            if edit is not None:
                if edit.end > len(current.source):
                    raise ParseError(f"edición ({edit.start},{edit.end}) fuera de la frase", line=number)
                edits.append(edit)
        else:
            raise ParseError(f"línea M2 no reconocida: {line[:30]!r}", line=number)
    return blocks


def read_m2(path: str | Path | None) -> list[M2Block]:
    return parse_m2(read_lines(path))


# ─────────────────────────────────────────────
# Escritura
# ─────────────────────────────────────────────
def render_edit(edit: Edit, annotator: int = 0) -> str:
    replacement = " ".join(edit.replacement) if edit.replacement else NONE_TOKEN
    return f"A {edit.start} {edit.end}|||{format_category(edit)}|||{replacement}|||REQUIRED|||-NONE-|||{annotator}"


def render_block(source: list[str], edits: list[Edit], annotator: int = 0) -> list[str]:
    lines = ["S " + " ".join(source)]
    if not edits:
        lines.append(f"A -1 -1|||{NOOP}|||{NONE_TOKEN}|||REQUIRED|||-NONE-|||{annotator}")
    for edit in sorted(edits, key=lambda e: (e.start, e.end)):
        lines.append(render_edit(edit, annotator))
    return lines


def write_m2(path: str | Path | None, blocks: Iterable[tuple[list[str], list[Edit]]]) -> int:
    """Escribe bloques (source, edits) del anotador 0. Devuelve el número de frases."""
    lines: list[str] = []
    count = 0
    for source, edits in blocks:
        lines.extend(render_block(source, edits))
        lines.append("")
        count += 1
    write_lines(path, lines)
    return count
