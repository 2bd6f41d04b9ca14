"""
Lectores de artefactos externos: árboles en formato Penn Treebank
(uno por línea) y alineamientos de palabras en formato Pharaoh ("i-j").
"""

from pathlib import Path
from typing import Optional

import regex

from models.exceptions import MalformedAlignment, MalformedTree
from models.generation_models import Alignment, ParseTree
from tools.record_store import read_lines

_TOKEN = regex.compile(r"\(|\)|[^\s()]+")
BRACKET_ESCAPES = {"-LRB-": "(", "-RRB-": ")", "-LCB-": "{", "-RCB-": "}", "-LSB-": "[", "-RSB-": "]"}


# ─────────────────────────────────────────────
# Penn Treebank
# ─────────────────────────────────────────────
class _Reader:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _TOKEN.findall(text)
        self.pos = 0

    def peek(self) -> Optional[str]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        token = self.peek()
        if token is None:
            raise MalformedTree(f"paréntesis sin cerrar en {self.text!r}")
        self.pos += 1
        return token

    def node(self) -> ParseTree:
        if self.take() != "(":
            raise MalformedTree(f"se esperaba '(' en {self.text!r}")
        label = ""
        if self.peek() not in ("(", ")", None):
            label = self.take()

        children: list[ParseTree] = []
        words: list[str] = []
        while self.peek() != ")":
            if self.peek() is None:
                raise MalformedTree(f"paréntesis sin cerrar en {self.text!r}")
            if self.peek() == "(":
                children.append(self.node())
            else:
                words.append(self.take())
        self.take()

        if not children and not words:
            raise MalformedTree(f"constituyente vacío ({label}) en {self.text!r}")
        if children and words:
            raise MalformedTree(f"el nodo {label} mezcla palabras y constituyentes")
        if len(words) > 1:
            raise MalformedTree(f"el nodo {label} tiene varias palabras: {' '.join(words)}")
        if words:
            return ParseTree(label=label, leaf=BRACKET_ESCAPES.get(words[0], words[0]))
        return ParseTree(label=label, children=children)


def _assign_spans(tree: ParseTree, start: int = 0) -> ParseTree:
    if tree.is_leaf:
        return tree.model_copy(update={"start": start, "end": start + 1})
    children = []
    cursor = start
    for child in tree.children:
        child = _assign_spans(child, cursor)
        cursor = child.end
        children.append(child)
    return tree.model_copy(update={"children": children, "start": start, "end": cursor})


def parse_ptb_tree(bracketed: str) -> ParseTree:
    """Árbol con spans [start, end) calculados y hojas en orden textual."""
    reader = _Reader(bracketed.strip())
    if not reader.tokens:
        raise MalformedTree("árbol vacío")
    tree = reader.node()
    if reader.peek() is not None:
        raise MalformedTree(f"texto sobrante tras el árbol: {' '.join(reader.tokens[reader.pos:])!r}")
    # raíz anónima "( (S ...) )"
    while tree.label == "" and len(tree.children) == 1:
        tree = tree.children[0]
    return _assign_spans(tree)


def read_trees(path: str | Path | None) -> list[ParseTree]:
    trees = []
    for number, line in enumerate(read_lines(path), start=1):
        try:
            trees.append(parse_ptb_tree(line))
        except MalformedTree as e:
            raise MalformedTree(str(e), line=number) from e
    return trees


# ─────────────────────────────────────────────
# Pharaoh
# ─────────────────────────────────────────────
def parse_pharaoh(line: str, source_len: Optional[int] = None, target_len: Optional[int] = None) -> Alignment:
    links: set[tuple[int, int]] = set()
    for item in line.split():
        parts = item.split("-")
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise MalformedAlignment(f"enlace no válido: {item!r}")
        link = (int(parts[0]), int(parts[1]))
        if link in links:
            raise MalformedAlignment(f"enlace duplicado: {item}")
        if source_len is not None and link[0] >= source_len:
            raise MalformedAlignment(f"índice origen {link[0]} fuera de rango ({source_len} tokens)")
        if target_len is not None and link[1] >= target_len:
            raise MalformedAlignment(f"índice destino {link[1]} fuera de rango ({target_len} tokens)")
        links.add(link)
    return Alignment(links=frozenset(links))


def format_pharaoh(alignment: Alignment) -> str:
    return " ".join(f"{i}-{j}" for i, j in sorted(alignment.links))


def read_alignments(path: str | Path | None) -> list[Alignment]:
    """Una línea por frase; las líneas vacías son alineamientos vacíos."""
    alignments = []
    for number, line in enumerate(read_lines(path), start=1):
        try:
            alignments.append(parse_pharaoh(line))
        except MalformedAlignment as e:
            raise MalformedAlignment(str(e), line=number) from e
    return alignments
