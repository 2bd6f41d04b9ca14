"""
Fixtures compartidas de la suite.
"""

from pathlib import Path

import pytest

from tools.text_core import tag_text

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def tagged():
    """Atajo: tagged("I like ラーメン") → TaggedUtterance."""
    return tag_text


@pytest.fixture
def write_file(tmp_path):
    def _write(name: str, content: str) -> Path:
        path = tmp_path / name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(content, encoding="utf-8")
        return path
    return _write
