"""
Decoder de etiquetas de edición a partir de matrices de probabilidad externas.

Flujo por iteración:
1. Se suma additional_confidence a la probabilidad de $KEEP (solo afecta al argmax)
2. Probabilidad de error de la frase = máximo de INCORRECT entre sus tokens
3. Si no llega a min_error_probability, la frase queda como está
4. Los tokens cuyo argmax de detección es CSW se fuerzan a $KEEP, igual que
   un $MERGE_SPACE justo antes de ellos y cualquier etiqueta no APPEND en $START
5. Se aplican las etiquetas elegidas sobre los índices originales

Solo hay una pasada salvo que se pase un proveedor de matrices por iteración.
"""

import sys
from pathlib import Path
from typing import Callable, Optional

import numpy as np
from pydantic import ValidationError

from config import GRID_CONFIDENCE_MAX, GRID_ERROR_PROBABILITY_MAX, GRID_STEP
from models.decoder_models import (
    KEEP,
    START,
    DecodeResult,
    DetectionLabel,
    DevItem,
    GridPoint,
    GridResult,
    InferenceParams,
    IterationTrace,
    TagProbMatrix,
    TagVocab,
)
from models.exceptions import (
    EmptyGrid,
    EmptyInput,
    LineCountMismatch,
    MatrixShapeMismatch,
    ParseError,
    UnknownTag,
)
from models.gec_models import EditList
from tools.edit_alignment import align_edits
from tools.inflection import load_confusion_sets, load_inflections, to_verb_form, toggle_agreement
from tools.record_store import read_lines, read_models
from tools.scorer import score_corpus

TOLERANCE = 1e-6
DELETE = "$DELETE"
MERGE_SPACE = "$MERGE_SPACE"
APPEND_PREFIX = "$APPEND_"
REPLACE_PREFIX = "$REPLACE_"
CASE_TAGS = {
    "$TRANSFORM_CASE_CAPITAL": lambda t: t[:1].upper() + t[1:],
    "$TRANSFORM_CASE_LOWER": str.lower,
    "$TRANSFORM_CASE_UPPER": str.upper,
}
VERB_TAGS = {
    "$TRANSFORM_VERB_PAST": "past",
    "$TRANSFORM_VERB_PRESENT": "base",
    "$TRANSFORM_VERB_ING": "ing",
}
AGREEMENT = "$TRANSFORM_AGREEMENT"
TRANSFORM_TAGS = [*CASE_TAGS, AGREEMENT, *VERB_TAGS, MERGE_SPACE]

MatrixSupplier = Callable[[list[str], int], Optional[TagProbMatrix]]


# ─────────────────────────────────────────────
# Vocabulario
# ─────────────────────────────────────────────
def default_vocab() -> TagVocab:
    """$KEEP, $DELETE, transformaciones y APPEND/REPLACE de las clases cerradas."""
    sets = load_confusion_sets()
    closed = (sets["articles"] + sets["determiners"] + sets["prepositions"] + sets["punctuation"]
              + [p for group in sets["pronoun_groups"] for p in group])
    closed = list(dict.fromkeys(closed))
    inflections = load_inflections()
    verb_forms = [f for forms in inflections["irregular_verbs"].values() for f in forms]
    be = inflections["be_forms"]
    replaceable = list(dict.fromkeys(closed + verb_forms + be["present"] + be["past"] + be["other"]))

    tags = [KEEP, DELETE, *TRANSFORM_TAGS]
    tags += [APPEND_PREFIX + word for word in closed]
    tags += [REPLACE_PREFIX + word for word in replaceable]
    return TagVocab(tags=list(dict.fromkeys(tags)))


def read_vocab(path: str | Path) -> TagVocab:
    """Fichero de vocabulario: una etiqueta por línea, en orden de columna."""
    tags = [line.strip() for line in read_lines(path) if line.strip()]
    try:
        return TagVocab(tags=tags)
    except ValidationError as e:
        raise ParseError(f"vocabulario de etiquetas no válido: {e.errors()[0]['msg']}") from e


def read_matrices(path: str | Path | None) -> list[TagProbMatrix]:
    return read_models(path, TagProbMatrix)


def _check_tag(tag: str) -> None:
    if tag in (KEEP, DELETE) or tag in TRANSFORM_TAGS:
        return
    for prefix in (APPEND_PREFIX, REPLACE_PREFIX):
        if tag.startswith(prefix) and len(tag) > len(prefix):
            return
    raise UnknownTag(f"etiqueta desconocida: {tag!r}")


# ─────────────────────────────────────────────
# Aplicación de etiquetas
# ─────────────────────────────────────────────
def _rewrite(token: str, tag: str) -> list[str]:
    if tag == DELETE:
        return []
    if tag.startswith(APPEND_PREFIX):
        return [token, tag[len(APPEND_PREFIX):]]
    if tag.startswith(REPLACE_PREFIX):
        return [tag[len(REPLACE_PREFIX):]]
    if tag in CASE_TAGS:
        return [CASE_TAGS[tag](token)]
    if tag == AGREEMENT:
        return [toggle_agreement(token)]
    if tag in VERB_TAGS:
        return [to_verb_form(token, VERB_TAGS[tag])]
    return [token]


def apply_tags(tokens: list[str], tags: list[str]) -> list[str]:
    """
    Aplica una etiqueta por token, todas a la vez sobre los índices originales.
    La posición inicial $START (en tokens, o como etiqueta extra al principio)
    solo admite $APPEND_t.
    """
    for tag in tags:
        _check_tag(tag)

    prefix: list[str] = []
    if tokens and tokens[0] == START:
        if len(tags) != len(tokens):
            raise MatrixShapeMismatch(f"{len(tags)} etiquetas para {len(tokens)} tokens")
        start_tag, tokens, tags = tags[0], tokens[1:], tags[1:]
    elif len(tags) == len(tokens) + 1:
        start_tag, tags = tags[0], tags[1:]
    elif len(tags) == len(tokens):
        start_tag = KEEP
    else:
        raise MatrixShapeMismatch(f"{len(tags)} etiquetas para {len(tokens)} tokens")
    if start_tag.startswith(APPEND_PREFIX):
        prefix = [start_tag[len(APPEND_PREFIX):]]

    output = prefix
    i = 0
    while i < len(tokens):
        if tags[i] == MERGE_SPACE and i + 1 < len(tokens):
            # la etiqueta del token absorbido se ignora
            output.append(tokens[i] + tokens[i + 1])
            i += 2
            continue
        output.extend(_rewrite(tokens[i], tags[i]))
        i += 1
    return output


# ─────────────────────────────────────────────
# Matrices
# ─────────────────────────────────────────────
def _check_rows(rows: np.ndarray, what: str) -> None:
    sums = rows.sum(axis=1)
    bad = np.flatnonzero(np.abs(sums - 1.0) > TOLERANCE)
    if bad.size:
        raise MatrixShapeMismatch(f"{what}: la fila {int(bad[0])} suma {sums[bad[0]]:.6f}, no 1")
    if (rows < -TOLERANCE).any():
        raise MatrixShapeMismatch(f"{what}: probabilidades negativas")


def matrix_arrays(matrix: TagProbMatrix, vocab: TagVocab) -> tuple[np.ndarray, np.ndarray]:
    """
    Valida la matriz y devuelve (detección n×3, corrección n×|vocab|).
    La detección de 5 columnas (con relleno/desconocido) se reduce a las 3
    clases y se renormaliza.
    """
    n = len(matrix.tokens)
    if len(matrix.detect_probs) != n or len(matrix.correct_probs) != n:
        raise MatrixShapeMismatch(
            f"{n} tokens pero {len(matrix.detect_probs)} filas de detección y "
            f"{len(matrix.correct_probs)} de corrección"
        )
    if n == 0:
        return np.zeros((0, len(DetectionLabel))), np.zeros((0, len(vocab)))

    widths = {len(row) for row in matrix.detect_probs}
    if len(widths) != 1 or widths.pop() not in (3, 5):
        raise MatrixShapeMismatch("las filas de detección deben tener 3 o 5 columnas")
    detect = np.asarray(matrix.detect_probs, dtype=float)
    _check_rows(detect, "detección")
    if detect.shape[1] == 5:
        detect = detect[:, :3]
        totals = detect.sum(axis=1, keepdims=True)
        if (totals <= 0).any():
            raise MatrixShapeMismatch("detección sin masa en las clases CORRECT/INCORRECT/CSW")
        detect = detect / totals

    if matrix.correct_tag_ids is None:
        if any(len(row) != len(vocab) for row in matrix.correct_probs):
            raise MatrixShapeMismatch(f"las filas de corrección deben tener {len(vocab)} columnas")
        correct = np.asarray(matrix.correct_probs, dtype=float)
    else:
        correct = np.zeros((n, len(vocab)))
        if len(matrix.correct_tag_ids) != n:
            raise MatrixShapeMismatch("correct_tag_ids no tiene una fila por token")
        for i, (ids, probs) in enumerate(zip(matrix.correct_tag_ids, matrix.correct_probs)):
            if len(ids) != len(probs):
                raise MatrixShapeMismatch(f"fila {i}: ids y probabilidades de distinta longitud")
            if any(k < 0 or k >= len(vocab) for k in ids):
                raise UnknownTag(f"fila {i}: id de etiqueta fuera del vocabulario")
            np.add.at(correct[i], ids, probs)
    _check_rows(correct, "corrección")
    return detect, correct


# ─────────────────────────────────────────────
# Decodificación
# ─────────────────────────────────────────────
def choose_tags(detect: np.ndarray, correct: np.ndarray, vocab: TagVocab, additional_confidence: float,
                start: bool = False) -> tuple[list[str], list[int], list[int]]:
    """
    Argmax con sesgo hacia $KEEP. Devuelve (etiquetas, enmascarados, protegidos).
    Los tokens CSW quedan en $KEEP, y también el token anterior si pedía
    $MERGE_SPACE, que los fundiría. Con start=True la fila 0 es $START y solo
    conserva un $APPEND_t.
    """
    biased = correct.copy()
    biased[:, 0] += additional_confidence
    chosen = biased.argmax(axis=1)
    masked = np.flatnonzero(detect.argmax(axis=1) == int(DetectionLabel.CSW))
    chosen[masked] = 0

    guarded = []
    if MERGE_SPACE in vocab.tags:
        merge = vocab.tags.index(MERGE_SPACE)
        for i in masked:
            if i > 0 and chosen[i - 1] == merge:
                chosen[i - 1] = 0
                guarded.append(int(i - 1))

    tags = [vocab.tags[k] for k in chosen]
    if start and tags and not tags[0].startswith(APPEND_PREFIX):
        tags[0] = KEEP
    return tags, [int(i) for i in masked], guarded


def _strip_start(tokens: list[str]) -> list[str]:
    return tokens[1:] if tokens and tokens[0] == START else list(tokens)


def decode(matrix: TagProbMatrix, vocab: TagVocab, params: Optional[InferenceParams] = None,
           supplier: Optional[MatrixSupplier] = None) -> DecodeResult:
    params = params or InferenceParams()
    tokens = _strip_start(matrix.tokens)
    iterations = params.max_iterations if supplier is not None else 1
    trace: list[IterationTrace] = []
    current = matrix

    for iteration in range(1, iterations + 1):
        if iteration > 1:
            current = supplier(tokens, iteration)
            if current is None:
                break
        detect, correct = matrix_arrays(current, vocab)
        error_probability = float(detect[:, int(DetectionLabel.INCORRECT)].max()) if len(detect) else 0.0
        has_start = bool(current.tokens) and current.tokens[0] == START
        tags, masked, guarded = choose_tags(detect, correct, vocab, params.additional_confidence, start=has_start)

        if error_probability < params.min_error_probability:
            trace.append(IterationTrace(iteration=iteration, error_probability=error_probability,
                                        applied=False, masked=masked, guarded=guarded, tokens=tokens))
            break
        if all(tag == KEEP for tag in tags):
            trace.append(IterationTrace(iteration=iteration, error_probability=error_probability,
                                        applied=False, tags=tags, masked=masked, guarded=guarded,
                                        tokens=tokens))
            break
        tokens = apply_tags(current.tokens, tags)
        trace.append(IterationTrace(iteration=iteration, error_probability=error_probability,
                                    applied=True, tags=tags, masked=masked, guarded=guarded,
                                    tokens=tokens))
    return DecodeResult(tokens=tokens, trace=trace)


def decode_corpus(matrices: list[TagProbMatrix], vocab: TagVocab,
                  params: Optional[InferenceParams] = None) -> list[DecodeResult]:
    results = [decode(m, vocab, params) for m in matrices]
    changed = sum(r.changed for r in results)
    print(f"🔧 Decodificadas {len(results)} frases, {changed} con cambios", file=sys.stderr)
    return results


# ─────────────────────────────────────────────
# Búsqueda en rejilla
# ─────────────────────────────────────────────
def grid_values(maximum: float, step: float = GRID_STEP) -> list[float]:
    """0, step, 2·step, … hasta maximum, redondeados para evitar 0.30000000000000004."""
    return [round(i * step, 10) for i in range(int(round(maximum / step)) + 1)]


def default_grid() -> tuple[list[float], list[float]]:
    return grid_values(GRID_CONFIDENCE_MAX), grid_values(GRID_ERROR_PROBABILITY_MAX)


def evaluate_point(dev: list[DevItem], vocab: TagVocab, params: InferenceParams) -> GridPoint:
    hyps = []
    for item in dev:
        source = _strip_start(item.matrix.tokens)
        output = decode(item.matrix, vocab, params).tokens
        hyps.append(align_edits(source, output))
    report = score_corpus(hyps, [item.reference for item in dev])
    c = report.overall
    return GridPoint(
        additional_confidence=params.additional_confidence,
        min_error_probability=params.min_error_probability,
        tp=c.tp, fp=c.fp, fn=c.fn,
        precision=c.precision, recall=c.recall, f05=c.f05,
    )


def grid_search(dev: list[DevItem], vocab: TagVocab,
                confidence_values: Optional[list[float]] = None,
                error_probability_values: Optional[list[float]] = None) -> GridResult:
    """
    Evalúa cada punto de la rejilla sobre el conjunto de validación y se queda
    con el mejor F0.5. Empates: más precisión, mayor min_error_probability,
    menor additional_confidence.
    """
    default_confidence, default_error = default_grid()
    confidence_values = default_confidence if confidence_values is None else confidence_values
    error_probability_values = default_error if error_probability_values is None else error_probability_values
    if not confidence_values or not error_probability_values:
        raise EmptyGrid("la rejilla de parámetros está vacía")
    if not dev:
        raise EmptyInput("el conjunto de validación está vacío")
    for item in dev:
        matrix_arrays(item.matrix, vocab)

    surface = [
        evaluate_point(dev, vocab, InferenceParams(additional_confidence=conf, min_error_probability=mep))
        for conf in confidence_values
        for mep in error_probability_values
    ]
    best = max(surface, key=lambda p: (p.f05, p.precision, p.min_error_probability, -p.additional_confidence))
    print(f"✅ Rejilla de {len(surface)} puntos: mejor F0.5 {best.f05 * 100:.2f}", file=sys.stderr)
    return GridResult(
        best=InferenceParams(additional_confidence=best.additional_confidence,
                             min_error_probability=best.min_error_probability),
        best_point=best,
        surface=surface,
    )


def dev_items(matrices: list[TagProbMatrix], references: list[EditList]) -> list[DevItem]:
    if len(matrices) != len(references):
        raise LineCountMismatch(f"{len(matrices)} matrices pero {len(references)} referencias")
    return [DevItem(matrix=m, reference=r) for m, r in zip(matrices, references)]
