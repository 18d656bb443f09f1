"""Document formats: parsing, canonical round-trip, reference comparison."""

from __future__ import annotations

import json
import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sfx.corpus import corpus_names, corpus_path, corpus_text
from sfx.documents import (
    DocumentError, algebra_to_document, compare_reference_table,
    load_algebra_document, load_extension_document, loads_json,
)
from sfx.expressions import (
    ExpressionError, parse_combo, parse_endo, parse_gamma_tensor,
    parse_wedge_form,
)
from sfx.liesuper import LieSuperAlgebra, structure_constants_from_relations
from sfx.superlinalg import EVEN, ODD, SuperSpace


# -- grammar -------------------------------------------------------------------

def test_wedge_operator_spellings_agree(c3a):
    sp = c3a.algebra.space
    a = parse_wedge_form("2 e1*∧e2* - e3*∧e4*", sp)
    b = parse_wedge_form("2 e1*^e2* - e3*^e4*", sp)
    c = parse_wedge_form(r"2 e1*/\e2* - e3*/\e4*", sp)
    assert a == b == c


def test_tensor_operator_spellings_agree(c3a):
    a = parse_endo("e2(x)e1*", c3a.algebra)
    b = parse_endo("e2⊗e1*", c3a.algebra)
    assert a.rows == b.rows


def test_rational_coefficients_and_explicit_star(c3a):
    sp = c3a.algebra.space
    v = parse_combo("1/2 e3 - 2*e2", sp)
    assert v == (F(0), F(-2), F(1, 2), F(0))


def test_odd_odd_wedge_is_symmetric_with_negative_diagonal():
    sp = SuperSpace(("x", "y"), (ODD, ODD))
    gram = parse_wedge_form("x*∧x*", sp)
    assert gram[0][0] == F(-2)
    gram2 = parse_wedge_form("x*∧y*", sp)
    assert gram2[0][1] == F(-1) and gram2[1][0] == F(-1)


def test_pi_labels_parse(a2a11_ext):
    from sfx.doubleext import build_model
    model = build_model(a2a11_ext.data)
    v = parse_combo("pi(L1*) + 1/2 e1", model.space)
    assert v[model.space.index("pi(L1*)")] == F(1)
    assert v[model.space.index("e1")] == F(1, 2)


def test_unknown_label_is_an_error(c3a):
    with pytest.raises((ExpressionError, KeyError)):
        parse_combo("e9", c3a.algebra.space)


def test_gamma_tensor_slots(c3a_ext):
    data = c3a_ext.data
    gamma = parse_gamma_tensor("L1*(x)e4*(x)L2*", data.ell, data.base.space)
    assert gamma[0][3][1] == F(1)
    assert all(gamma[i][j][k] == 0
               for i in range(2) for j in range(4) for k in range(2)
               if (i, j, k) != (0, 3, 1))


# -- corpus round-trip -----------------------------------------------------------

def test_corpus_documents_are_canonical():
    for name in corpus_names():
        alg_doc = loads_json(corpus_text(f"{name}.alg"), name)
        loaded = load_algebra_document(alg_doc, name)
        assert loaded.document == alg_doc
        path = corpus_path(f"{name}.ext")
        ext_doc = loads_json(path.read_text(encoding="utf-8"), name)
        loaded_ext = load_extension_document(ext_doc, name, base_dir=path.parent)
        assert loaded_ext.document == ext_doc


def test_random_documents_round_trip():
    rng = random.Random(42)
    for trial in range(100):
        n_even = rng.randint(0, 3)
        n_odd = rng.randint(0, 3)
        if n_even + n_odd == 0:
            n_even = 1
        labels = tuple(f"v{i}" for i in range(n_even + n_odd))
        parities = (EVEN,) * n_even + (ODD,) * n_odd
        space = SuperSpace(labels, parities)
        n = space.dim
        relations = {}
        for _ in range(rng.randint(0, 4)):
            i, j = rng.randrange(n), rng.randrange(n)
            if i == j and parities[i] == EVEN:
                continue  # [x,x] = 0 is forced for even x
            want = (parities[i] + parities[j]) % 2
            v = tuple(F(rng.randint(-3, 3)) if parities[k] == want else F(0)
                      for k in range(n))
            if (i, j) in relations or (j, i) in relations:
                continue
            relations[(i, j)] = v
            sign = -1 if (parities[i] * parities[j]) % 2 else 1
            relations[(j, i)] = tuple(-sign * c for c in v)
        alg = LieSuperAlgebra(space, structure_constants_from_relations(space, relations))
        doc = algebra_to_document(alg, name=f"random-{trial}")
        loaded = load_algebra_document(doc, "random")
        assert loaded.document == doc
        assert loaded.algebra.c == alg.c


def test_reload_of_a_dumped_document_is_stable(c3a):
    doc = algebra_to_document(c3a.algebra, c3a.form, name="again")
    text = json.dumps(doc, indent=2, ensure_ascii=False)
    assert load_algebra_document(json.loads(text), "x").document == doc


@given(st.lists(st.fractions(max_denominator=50), min_size=4, max_size=4))
def test_combo_print_parse_round_trip(coords):
    space = SuperSpace(("e1", "e2", "e3", "e4"), (EVEN, EVEN, ODD, ODD))
    v = tuple(F(c) for c in coords)
    assert parse_combo(space.format_vector(v), space) == v


# -- error paths --------------------------------------------------------------------

def test_empty_document_is_a_parse_error():
    with pytest.raises(DocumentError):
        loads_json("", "empty")


def test_bad_json_reports_line_and_column():
    with pytest.raises(DocumentError) as err:
        loads_json("{\n  \"schema\": }", "bad")
    assert "line 2" in str(err.value)


def test_wrong_schema_rejected():
    with pytest.raises(DocumentError):
        load_algebra_document({"schema": "nope/9"}, "x")


def test_undeclared_label_in_bracket_rejected():
    doc = {"schema": "sfx.algebra/1",
           "basis": [{"label": "a", "parity": 0}],
           "brackets": [{"left": "a", "right": "zz", "value": "a"}]}
    with pytest.raises(DocumentError):
        load_algebra_document(doc, "x")


def test_duplicate_labels_rejected():
    doc = {"schema": "sfx.algebra/1",
           "basis": [{"label": "a", "parity": 0}, {"label": "a", "parity": 1}]}
    with pytest.raises(DocumentError):
        load_algebra_document(doc, "x")


def test_inconsistent_mirror_brackets_rejected():
    doc = {"schema": "sfx.algebra/1",
           "basis": [{"label": "a", "parity": 0}, {"label": "b", "parity": 0},
                     {"label": "c", "parity": 0}],
           "brackets": [{"left": "a", "right": "b", "value": "c"},
                        {"left": "b", "right": "a", "value": "c"}]}
    with pytest.raises(DocumentError):
        load_algebra_document(doc, "x")


def test_redundant_consistent_mirrors_accepted():
    doc = {"schema": "sfx.algebra/1",
           "basis": [{"label": "a", "parity": 0}, {"label": "b", "parity": 0},
                     {"label": "c", "parity": 0}],
           "brackets": [{"left": "a", "right": "b", "value": "c"},
                        {"left": "b", "right": "a", "value": "-c"}]}
    loaded = load_algebra_document(doc, "x")
    assert loaded.algebra.validate().ok


def test_non_canonical_basis_order_is_resorted():
    doc = {"schema": "sfx.algebra/1",
           "basis": [{"label": "x", "parity": 1}, {"label": "a", "parity": 0}],
           "brackets": []}
    loaded = load_algebra_document(doc, "x")
    assert loaded.reordered
    assert loaded.algebra.space.labels == ("a", "x")


def test_extension_model_kind_must_match_base_parity(c3a_ext):
    doc = json.loads(json.dumps(c3a_ext.document))
    doc["model"] = "periplectic"
    with pytest.raises(DocumentError):
        load_extension_document(doc, "x", base_dir=corpus_path("c3a.alg").parent)


# -- reference comparison --------------------------------------------------------------

EXPECTED_STATUSES = {
    "c3a": {
        "[e1,e4]": "match", "[e4,e4]": "match", "[e1,L1]": "match",
        "[e1,L2]": "mismatch", "[e4,L1]": "match", "[e4,L2]": "match",
        "[L1,L2]": "match", "[L2,L2]": "mismatch",
    },
    "c112a": {
        "[e1,e2]": "match", "[e1,e3]": "match", "[e1,e4]": "match",
        "[e1,L1]": "match", "[e1,L2]": "mismatch", "[e2,L1]": "match",
        "[e3,e3]": "match", "[e3,L1]": "match", "[L1,L2]": "mismatch",
        "[L2,L2]": "unlisted",
    },
}


def test_reference_comparison_flags_exactly_the_known_lines(
        built_models, c3a_ext, c112a_ext):
    for name, loaded in (("c3a", c3a_ext), ("c112a", c112a_ext)):
        records = compare_reference_table(built_models[name], loaded.reference)
        got = {r["bracket"]: r["status"] for r in records}
        assert got == EXPECTED_STATUSES[name], name


def test_periplectic_reference_flags_duplicate_line(built_models, a2a11_ext):
    records = compare_reference_table(built_models["2a11"], a2a11_ext.reference)
    by_bracket = {}
    for r in records:
        by_bracket.setdefault(r["bracket"], []).append(r["status"])
    assert by_bracket["[e3,e3]"] == ["match"]
    assert by_bracket["[e3,e4]"] == ["mismatch"]
    assert by_bracket["[e4,e4]"] == ["mismatch"]
    assert by_bracket["[e3,L1]"] == ["match"]      # printed as [L1,e3]
    assert by_bracket["[e3,L2]"] == ["match"]
    assert by_bracket["[e4,L2]"] == ["match"]
    assert sorted(by_bracket["[L1,L2]"]) == [
        "duplicate-printed-line:match", "duplicate-printed-line:mismatch"]
    assert by_bracket["[L2,L2]"] == ["unlisted"]
