"""Bundled example documents.

Three quasi-Frobenius base algebras with their double-extension data,
reproducing a published family of low-dimensional examples.  Each extension
document carries the printed bracket table as reference data; the extend
command recomputes the table and flags every line that disagrees (including
a duplicated printed assignment in the periplectic example).
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

NAMES = ("c3a", "c112a", "2a11")

DESCRIPTIONS = {
    "c3a": "C3+A: (2|2) nilpotent base, even form, extension by a (1|1) space",
    "c112a": "C1_{1/2}+A: (2|2) solvable base, even form, extension by a (1|1) space",
    "2a11": "(2A_{1,1}+2A)^3_{1/2}: (2|2) base, odd form, extension by a (0|2) space",
}


def corpus_names() -> list[str]:
    return list(NAMES)


def corpus_path(name: str) -> Path:
    """Filesystem path of a bundled document, e.g. 'c3a.alg' or 'c3a'."""
    if "." not in name:
        name = f"{name}.ext"
    base = name.rsplit(".", 1)[0]
    if base not in NAMES:
        raise KeyError(f"unknown corpus entry {name!r}; "
                       f"available: {', '.join(NAMES)}")
    path = resources.files(__package__).joinpath(f"{name}.json")
    with resources.as_file(path) as p:
        return Path(p)


def corpus_text(name: str) -> str:
    return corpus_path(name).read_text(encoding="utf-8")
