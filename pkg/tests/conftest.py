"""Shared fixtures: the bundled corpus, loaded once per session."""

from __future__ import annotations

import pytest

from sfx.corpus import corpus_path, corpus_text
from sfx.documents import (
    LoadedAlgebra, LoadedExtension, load_algebra_document,
    load_extension_document, loads_json,
)


def _load_alg(name: str) -> LoadedAlgebra:
    return load_algebra_document(loads_json(corpus_text(f"{name}.alg"), name), name)


def _load_ext(name: str) -> LoadedExtension:
    path = corpus_path(f"{name}.ext")
    return load_extension_document(
        loads_json(path.read_text(encoding="utf-8"), name), name,
        base_dir=path.parent)


@pytest.fixture(scope="session")
def c3a():
    return _load_alg("c3a")


@pytest.fixture(scope="session")
def c112a():
    return _load_alg("c112a")


@pytest.fixture(scope="session")
def a2a11():
    return _load_alg("2a11")


@pytest.fixture(scope="session")
def c3a_ext():
    return _load_ext("c3a")


@pytest.fixture(scope="session")
def c112a_ext():
    return _load_ext("c112a")


@pytest.fixture(scope="session")
def a2a11_ext():
    return _load_ext("2a11")


@pytest.fixture(scope="session")
def corpus_qfs(c3a, c112a, a2a11):
    return {"c3a": c3a.qf, "c112a": c112a.qf, "2a11": a2a11.qf}


@pytest.fixture(scope="session")
def built_models(c3a_ext, c112a_ext, a2a11_ext):
    from sfx.doubleext import build_model
    return {
        "c3a": build_model(c3a_ext.data),
        "c112a": build_model(c112a_ext.data),
        "2a11": build_model(a2a11_ext.data),
    }
