import copy

import pytest

from gene_atlas.colors import ColorCluster, ColorProfile
from gene_atlas.records import (
    CostumeRecord,
    MiddleContext,
    PatternGene,
    RecordValidationError,
    SurfaceGenes,
    from_document,
    to_document,
    validate_document,
    validate_record,
)
from gene_atlas.vocab import (
    ColorClass,
    FormClass,
    MaterialClass,
    MiddleDimension,
    PatternClass,
    taxonomy,
)


def make_profile() -> ColorProfile:
    return ColorProfile(
        clusters=(
            ColorCluster((178.0, 34.0, 34.0), 0.7),
            ColorCluster((30.0, 30.0, 30.0), 0.3),
        ),
        dominant_hex="#B22222",
        perceptual_class=ColorClass.Warm,
    )


def make_record(record_id="c-001") -> CostumeRecord:
    return CostumeRecord(
        id=record_id,
        title="festival Miao jacket",
        ethnic_group="Miao",
        region="Guizhou",
        image_refs=("images/c-001.png",),
        surface=SurfaceGenes(
            patterns=frozenset({PatternGene(PatternClass.Animal, "butterfly")}),
            materials=frozenset({MaterialClass.Silk, MaterialClass.Metal}),
            forms=frozenset({FormClass.Top}),
            color_profile=make_profile(),
        ),
        middle=(
            MiddleContext(
                MiddleDimension.FestiveCeremonies,
                "Worn at the flower-mountain festival while antiphonal songs "
                "are exchanged between villages.",
            ),
            MiddleContext(
                MiddleDimension.ReligiousBeliefs,
                "The butterfly figure recalls the ancestral Butterfly Mother "
                "story told at spring rites.",
            ),
        ),
        inner=frozenset({"Harmony", "Friendliness"}),
        source_text="Museum description of a Miao festival jacket.",
    )


def test_fully_populated_record_is_ok():
    assert validate_record(make_record()).ok


def test_unknown_inner_concept_is_flagged_with_path():
    doc = to_document(make_record())
    doc["inner"] = ["Bravery"]
    result = validate_document(doc)
    assert not result.ok
    assert any(v.path == "inner[0]" and "unknown" in v.message for v in result.violations)


def test_duplicate_middle_dimension_is_flagged():
    doc = to_document(make_record())
    doc["middle"].append(
        {"dimension": "FestiveCeremonies", "narrative": "A second festive entry."}
    )
    result = validate_document(doc)
    assert not result.ok
    assert any("duplicate dimension" in v.message for v in result.violations)


def test_empty_forms_rejected():
    doc = to_document(make_record())
    doc["surface"]["forms"] = []
    result = validate_document(doc)
    assert any(v.path == "surface.forms" for v in result.violations)


def test_empty_id_rejected():
    doc = to_document(make_record())
    doc["id"] = "  "
    assert not validate_document(doc).ok


def test_vocabulary_closure_every_category():
    # Anything not in taxonomy(category) must be rejected.
    cases = [
        (["surface", "patterns"], [{"class": "Spiral", "motif": None}]),
        (["surface", "materials"], ["Plastic"]),
        (["surface", "forms"], ["Top", "Cape"]),
        (["middle"], [{"dimension": "CulinaryTraditions", "narrative": "text"}]),
        (["inner"], ["Valor"]),
    ]
    for path, bad_value in cases:
        doc = to_document(make_record())
        target = doc
        for key in path[:-1]:
            target = target[key]
        target[path[-1]] = bad_value
        assert not validate_document(doc).ok, path


def test_color_profile_proportions_must_sum_to_one():
    doc = to_document(make_record())
    doc["surface"]["color_profile"]["clusters"][0]["proportion"] = 0.5
    result = validate_document(doc)
    assert any("sum" in v.message for v in result.violations)


def test_color_profile_dominant_hex_must_match_largest_cluster():
    doc = to_document(make_record())
    doc["surface"]["color_profile"]["dominant_hex"] = "#000000"
    result = validate_document(doc)
    assert any(v.path.endswith("dominant_hex") for v in result.violations)


def test_validation_is_pure():
    record = make_record()
    first = validate_record(record)
    second = validate_record(record)
    assert first == second
    assert to_document(record) == to_document(record)


def test_document_round_trip_preserves_record():
    record = make_record()
    assert from_document(to_document(record)) == record


def test_round_trip_is_insensitive_to_field_order():
    doc = to_document(make_record())
    shuffled = dict(reversed(list(doc.items())))
    assert from_document(shuffled) == make_record()


def test_from_document_raises_on_invalid():
    doc = to_document(make_record())
    doc["inner"] = ["Bravery"]
    with pytest.raises(RecordValidationError):
        from_document(doc)


def test_middle_order_is_canonical():
    record = make_record()
    # Construction order was Festive then Religious; canonical order is
    # declaration order (Religious first).
    assert [m.dimension.value for m in record.middle] == [
        "ReligiousBeliefs",
        "FestiveCeremonies",
    ]


def test_validate_document_reports_multiple_violations():
    doc = to_document(make_record())
    doc["inner"] = ["Bravery", "Valor"]
    doc["surface"]["materials"] = ["Plastic"]
    result = validate_document(doc)
    assert len(result.violations) >= 3


def test_mutating_copy_does_not_affect_validation_of_original():
    record = make_record()
    doc = to_document(record)
    mutated = copy.deepcopy(doc)
    mutated["surface"]["forms"] = []
    assert validate_document(doc).ok
    assert not validate_document(mutated).ok


def test_taxonomy_closure_matches_validator():
    # For every surface category, a value straight from taxonomy() passes.
    doc = to_document(make_record())
    doc["surface"]["materials"] = list(taxonomy("Material"))
    doc["surface"]["forms"] = list(taxonomy("Form"))
    assert validate_document(doc).ok
