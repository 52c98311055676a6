import json

import pytest

from relhom.algebra.homological import projective, simple
from relhom.complexes.complex import Complex
from relhom.core.exceptions import InputFormatError
from relhom.services.serialization import (
    CorpusLoader,
    algebra_to_schema,
    complex_to_schema,
    load_algebra,
    load_complex,
    load_module,
    load_subcat,
    module_to_schema,
    read_json,
)


def algebra_doc(**overrides):
    doc = {
        "schema": 1,
        "kind": "algebra",
        "name": "A2",
        "quiver": {"vertex-count": 2, "arrows": [{"source": 0, "target": 1, "name": "a"}]},
        "nilpotency-bound": 2,
    }
    doc.update(overrides)
    return doc


def test_load_algebra_from_file(data_dir):
    algebra = load_algebra(data_dir / "a2.json", 3)
    assert algebra.dim() == 3
    assert algebra.p == 3


def test_algebra_field_overrides_session_field():
    algebra = load_algebra(algebra_doc(field=5), 2)
    assert algebra.p == 5


def test_example_name_is_accepted():
    assert load_algebra("dual_numbers", 3).dim() == 2


def test_schema_error_carries_pointer(data_dir):
    with pytest.raises(InputFormatError) as exc:
        load_algebra(data_dir / "malformed_algebra.json")
    assert exc.value.error_code == "SCHEMA_VALIDATION"
    assert exc.value.context["pointer"] == "/quiver/vertex-count"


def test_unknown_field_is_rejected():
    with pytest.raises(InputFormatError) as exc:
        load_algebra(algebra_doc(colour="bleu"))
    assert exc.value.context["pointer"] == "/colour"


def test_unsupported_schema_version():
    with pytest.raises(InputFormatError) as exc:
        load_algebra(algebra_doc(schema=2))
    assert exc.value.error_code == "SCHEMA_VALIDATION"


def test_arrow_out_of_range_is_a_format_error():
    doc = algebra_doc(quiver={"vertex-count": 1, "arrows": [{"source": 0, "target": 3, "name": "a"}]})
    with pytest.raises(InputFormatError) as exc:
        load_algebra(doc)
    assert exc.value.error_code == "ARROW_OUT_OF_RANGE"
    assert exc.value.context["pointer"] == "/quiver"


def test_missing_file(tmp_path):
    with pytest.raises(InputFormatError) as exc:
        read_json(tmp_path / "absent.json")
    assert exc.value.error_code == "FILE_NOT_FOUND"


def test_json_must_be_an_object(tmp_path):
    path = tmp_path / "liste.json"
    path.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(InputFormatError) as exc:
        read_json(path)
    assert exc.value.error_code == "NOT_AN_OBJECT"


def test_module_matrix_shape(a2):
    doc = {"schema": 1, "kind": "module", "dims": [1, 1], "action": {"a": [[1, 1]]}}
    with pytest.raises(InputFormatError) as exc:
        load_module(a2, doc)
    assert exc.value.error_code == "MATRIX_SHAPE"
    assert exc.value.context["pointer"] == "/action/a"


def test_module_bad_dims(a2):
    with pytest.raises(InputFormatError) as exc:
        load_module(a2, {"schema": 1, "kind": "module", "dims": [1]})
    assert exc.value.error_code == "BAD_DIMS"


def test_module_relation_violation_is_a_format_error(dual):
    with pytest.raises(InputFormatError) as exc:
        load_module(dual, {"schema": 1, "kind": "module", "dims": [1], "action": {"x": [[1]]}})
    assert exc.value.error_code == "RELATION_VIOLATED"


def test_module_from_file(a2_gf2, data_dir):
    m = load_module(a2_gf2, data_dir / "simple_s0.json")
    assert m.dims == simple(a2_gf2, 0).dims
    assert m.name == "S0"


def test_complex_is_loaded_without_validation(a2_gf2, data_dir):
    c = load_complex(a2_gf2, data_dir / "square_nonzero_complex.json")
    assert (c.lo, c.hi) == (0, 2)
    assert not (c.diff(1) @ c.diff(0)).is_zero()


def test_complex_differential_count(a2):
    doc = {
        "schema": 1,
        "kind": "complex",
        "terms": [{"dims": [1, 0]}, {"dims": [1, 0]}],
        "differentials": [],
    }
    with pytest.raises(InputFormatError) as exc:
        load_complex(a2, doc)
    assert exc.value.error_code == "DIFF_COUNT"


def test_complex_block_count(a2):
    doc = {
        "schema": 1,
        "kind": "complex",
        "terms": [{"dims": [1, 0]}, {"dims": [1, 0]}],
        "differentials": [[[[1]]]],
    }
    with pytest.raises(InputFormatError) as exc:
        load_complex(a2, doc)
    assert exc.value.error_code == "MAP_BLOCK_COUNT"
    assert exc.value.context["pointer"] == "/differentials/0"


def test_algebra_schema_reloads(a2):
    doc = algebra_to_schema(a2).model_dump(by_alias=True)
    again = load_algebra(doc)
    assert again.dim() == a2.dim()
    assert again.p == a2.p


def test_module_and_complex_documents_reload(a2):
    p0 = projective(a2, 0)
    m = load_module(a2, module_to_schema(p0).model_dump(by_alias=True))
    assert m.dims == p0.dims
    c = Complex(a2, -1, [p0, p0])
    again = load_complex(a2, complex_to_schema(c).model_dump(by_alias=True))
    assert (again.lo, again.hi) == (-1, 0)


def test_subcategory_document(a2):
    doc = {
        "schema": 1,
        "kind": "subcategory",
        "name": "S0",
        "generators": [{"schema": 1, "kind": "module", "dims": [1, 0]}],
    }
    x = load_subcat(a2, doc)
    assert x.name == "S0"
    assert len(x.generators) == 1


def test_corpus_loader(a2_gf2, tmp_path):
    (tmp_path / "a.json").write_text(json.dumps({"schema": 1, "kind": "module", "dims": [1, 1], "action": {"a": [[1]]}}))
    (tmp_path / "b.json").write_text(json.dumps({
        "schema": 1, "kind": "complex", "lo": 0,
        "terms": [{"dims": [0, 1]}], "differentials": [],
    }))
    loader = CorpusLoader(a2_gf2).load_directory(tmp_path)
    assert len(loader.modules) == 1 and loader.modules[0].name == "a"
    assert len(loader.complexes) == 1 and loader.complexes[0].name == "b"


def test_corpus_loader_errors(a2_gf2, tmp_path):
    with pytest.raises(InputFormatError) as exc:
        CorpusLoader(a2_gf2).load_directory(tmp_path / "absent")
    assert exc.value.error_code == "CORPUS_NOT_FOUND"

    (tmp_path / "x.json").write_text(json.dumps({"kind": "quiver"}))
    with pytest.raises(InputFormatError) as exc:
        CorpusLoader(a2_gf2).load_directory(tmp_path)
    assert exc.value.error_code == "UNKNOWN_KIND"

    (tmp_path / "x.json").write_text("{ pas du json")
    with pytest.raises(InputFormatError) as exc:
        CorpusLoader(a2_gf2).load_directory(tmp_path)
    assert exc.value.error_code == "INVALID_JSON"
