"""SIMP+ programs, their translation into LCTRSs, and a rewriting engine to run them."""

from importlib import resources
from pathlib import Path

__version__ = "0.1.0"


def corpus_dir() -> Path:
    """Directory holding the bundled example programs and systems."""
    return Path(str(resources.files(__name__) / "corpus"))


def corpus_programs() -> list[Path]:
    return sorted(corpus_dir().glob("*.simp"))
