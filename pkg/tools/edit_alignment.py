"""
Alineación de tokens con Damerau-Levenshtein restringido y extracción de
ediciones por tramos.

Costes: coincidencia 0, solo mayúsculas 0.25, raíz compartida 0.5, otra
sustitución 1, inserción/borrado 1, transposición adyacente 1.
Empates: menos inserciones+borrados, después el tramo más a la izquierda.
"""

from models.exceptions import OutOfBounds, OverlappingEdits
from models.gec_models import Edit, EditList

MATCH, SUB, INS, DEL, TRANS = "M", "S", "I", "D", "T"


def _common_prefix(a: str, b: str) -> int:
    n = 0
    for x, y in zip(a, b):
        if x != y:
            break
        n += 1
    return n


def token_sub_cost(a: str, b: str) -> float:
    if a == b:
        return 0.0
    if a.casefold() == b.casefold():
        return 0.25
    la, lb = a.casefold(), b.casefold()
    prefix = _common_prefix(la, lb)
    if prefix >= 2 and prefix * 2 >= min(len(la), len(lb)):
        return 0.5
    return 1.0


def _table(source: list[str], target: list[str]) -> list[list[tuple[float, int]]]:
    """Tabla de (coste, inserciones+borrados) sobre prefijos."""
    n, m = len(source), len(target)
    dp = [[(0.0, 0)] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        dp[i][0] = (float(i), i)
    for j in range(1, m + 1):
        dp[0][j] = (float(j), j)

    for i in range(1, n + 1):
        for j in range(1, m + 1):
            cost, indels = dp[i - 1][j - 1]
            best = (cost + token_sub_cost(source[i - 1], target[j - 1]), indels)
            cost, indels = dp[i - 1][j]
            best = min(best, (cost + 1, indels + 1))
            cost, indels = dp[i][j - 1]
            best = min(best, (cost + 1, indels + 1))
            if i > 1 and j > 1 and source[i - 1] == target[j - 2] and source[i - 2] == target[j - 1] \
                    and source[i - 1] != source[i - 2]:
                cost, indels = dp[i - 2][j - 2]
                best = min(best, (cost + 1, indels))
            dp[i][j] = best
    return dp


def alignment_ops(source: list[str], target: list[str]) -> list[tuple[str, int, int, int, int]]:
    """
    Operaciones (op, i0, i1, j0, j1) en orden. El backtrace prefiere la
    diagonal, así las ediciones quedan lo más a la izquierda posible.
    """
    dp = _table(source, target)
    ops = []
    i, j = len(source), len(target)
    while i > 0 or j > 0:
        here = dp[i][j]
        if i > 0 and j > 0:
            cost, indels = dp[i - 1][j - 1]
            sub = token_sub_cost(source[i - 1], target[j - 1])
            if (cost + sub, indels) == here:
                ops.append((MATCH if sub == 0 else SUB, i - 1, i, j - 1, j))
                i, j = i - 1, j - 1
                continue
        if i > 1 and j > 1 and source[i - 1] == target[j - 2] and source[i - 2] == target[j - 1] \
                and source[i - 1] != source[i - 2]:
            cost, indels = dp[i - 2][j - 2]
            if (cost + 1, indels) == here:
                ops.append((TRANS, i - 2, i, j - 2, j))
                i, j = i - 2, j - 2
                continue
        if i > 0:
            cost, indels = dp[i - 1][j]
            if (cost + 1, indels + 1) == here:
                ops.append((DEL, i - 1, i, j, j))
                i -= 1
                continue
        ops.append((INS, i, i, j - 1, j))
        j -= 1
    ops.reverse()
    return ops


def alignment_cost(source: list[str], target: list[str]) -> float:
    return _table(source, target)[len(source)][len(target)][0]


def align_edits(source: list[str], target: list[str]) -> EditList:
    """Fusiona las operaciones contiguas que no son coincidencia en ediciones de tramo."""
    edits: list[Edit] = []
    run: list[tuple] = []

    def flush():
        if run:
            start, end = run[0][1], run[-1][2]
            edits.append(Edit(start=start, end=end, replacement=target[run[0][3]:run[-1][4]]))
            run.clear()

    for op in alignment_ops(source, target):
        if op[0] == MATCH:
            flush()
        else:
            run.append(op)
    flush()
    return EditList(source=list(source), edits=edits)


def check_edits(source_len: int, edits: list[Edit]) -> list[Edit]:
    """Valida límites y solapes. Devuelve las ediciones ordenadas por posición."""
    for edit in edits:
        if edit.end > source_len:
            raise OutOfBounds(f"edición ({edit.start},{edit.end}) fuera de una frase de {source_len} tokens")
    ordered = sorted(edits, key=lambda e: (e.start, e.end))
    for prev, cur in zip(ordered, ordered[1:]):
        both_insert_here = prev.start == prev.end == cur.start == cur.end
        if prev.end > cur.start or both_insert_here:
            raise OverlappingEdits(f"ediciones solapadas: ({prev.start},{prev.end}) y ({cur.start},{cur.end})")
    return ordered


def apply_edits(source: list[str], edits: list[Edit] | EditList) -> list[str]:
    if isinstance(edits, EditList):
        edits = edits.edits
    tokens = list(source)
    for edit in reversed(check_edits(len(source), edits)):
        tokens[edit.start:edit.end] = edit.replacement
    return tokens
