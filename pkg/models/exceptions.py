"""
Jerarquía de errores del kit CSW-GEC.
Cada familia lleva el código de salida que usa la CLI.
"""


class CswGecError(Exception):
    """Error base. La CLI lo traduce a un mensaje ❌ y a un código de salida."""
    exit_code = 2


class UsageError(CswGecError):
    exit_code = 1


# ─────────────────────────────────────────────
# Errores de datos (exit 2)
# ─────────────────────────────────────────────
class DataError(CswGecError):
    exit_code = 2


class EmptyInput(DataError):
    pass


class ParseError(DataError):
    """Entrada mal formada. Guarda el número de línea (1-based) si se conoce."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"línea {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


class MalformedTree(ParseError):
    pass


class MalformedAlignment(ParseError):
    pass


class NoEligibleSubtree(DataError):
    def __init__(self, text: str):
        self.text = text
        super().__init__(f"el árbol no tiene constituyentes propios: {text!r}")


class NoCandidates(DataError):
    pass


class ExampleNotCSW(DataError):
    pass


class UnparseableResponse(DataError):
    pass


class NoSite(DataError):
    pass


class LineCountMismatch(DataError):
    pass


class OverlappingEdits(DataError):
    pass


class OutOfBounds(DataError):
    pass


class SourceMismatch(DataError):
    pass


class UnknownTag(DataError):
    pass


class MatrixShapeMismatch(DataError):
    pass


class EmptyGrid(DataError):
    pass


class OverSample(DataError):
    pass


class MissingCorpus(DataError):
    pass


# ─────────────────────────────────────────────
# Errores de servicios externos (exit 3)
# ─────────────────────────────────────────────
class ServiceError(CswGecError):
    exit_code = 3


class TranslatorFailure(ServiceError):
    def __init__(self, message: str, span: tuple[int, int] | None = None):
        self.span = span
        super().__init__(f"{message} (span {span})" if span else message)


class BudgetExhausted(ServiceError):
    """Se agotó el presupuesto de peticiones. Lleva el corpus parcial y el log."""

    def __init__(self, message: str, corpus=None, log=None):
        self.corpus = corpus or []
        self.log = log
        super().__init__(message)
