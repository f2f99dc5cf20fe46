import dataclasses

import pytest

from gene_atlas.narrative import (
    CoCreationRequest,
    DEFAULT_TEMPLATE,
    IdMismatchError,
    NarrativeArtifact,
    PromptTemplate,
    Theme,
    THEME_DIMENSIONS,
    ThemeUnavailableError,
    UnresolvedPlaceholderError,
    assemble_prompt,
    generate,
    surface_summary,
    validate_scaffold,
    validate_template,
)
from gene_atlas.providers import (
    MockProvider,
    ProviderRefusal,
    ProviderResponse,
    ProviderTimeout,
)
from gene_atlas.rng import SplitMix64
from gene_atlas.vocab import MiddleDimension, UnknownNameError, inner_concept

from test_records import make_record


def make_request(record, theme=Theme.Festive, concept="Harmony", seed=42, note=""):
    return CoCreationRequest(
        costume_id=record.id,
        theme=theme,
        inner_concept=concept,
        user_note=note,
        seed=seed,
    )


# -- templates ---------------------------------------------------------------


def test_default_template_is_valid():
    validate_template(DEFAULT_TEMPLATE)


def test_template_missing_required_placeholder_rejected():
    broken = PromptTemplate(name="broken", story_body="{{title}} only", image_body="x")
    with pytest.raises(UnresolvedPlaceholderError):
        validate_template(broken)


# -- assembly ----------------------------------------------------------------


def test_assembly_embeds_narrative_and_concept_texts():
    record = make_record()
    prompt = assemble_prompt(record, make_request(record))
    festive = record.middle_for(MiddleDimension.FestiveCeremonies)
    assert festive.narrative in prompt.story_prompt
    assert "harmony between heaven and humanity" in prompt.story_prompt
    assert inner_concept("Harmony").connotation in prompt.story_prompt
    assert record.title in prompt.story_prompt
    assert record.title in prompt.image_prompt


def test_assembly_is_deterministic():
    record = make_record()
    request = make_request(record, note="a note")
    assert assemble_prompt(record, request) == assemble_prompt(record, request)


def test_theme_without_matching_context_is_rejected():
    record = make_record()
    assert record.middle_for(THEME_DIMENSIONS[Theme.Artistic]) is None
    with pytest.raises(ThemeUnavailableError):
        assemble_prompt(record, make_request(record, theme=Theme.Artistic))


def test_record_request_id_mismatch():
    record = make_record()
    request = CoCreationRequest(
        costume_id="other-id", theme=Theme.Festive, inner_concept="Harmony"
    )
    with pytest.raises(IdMismatchError):
        assemble_prompt(record, request)


def test_unknown_placeholder_in_template():
    record = make_record()
    template = PromptTemplate(
        name="bad",
        story_body=DEFAULT_TEMPLATE.story_body + " {{costume_weight}}",
        image_body=DEFAULT_TEMPLATE.image_body,
    )
    with pytest.raises(UnresolvedPlaceholderError):
        assemble_prompt(record, make_request(record), template)


def test_no_unresolved_placeholders_remain():
    record = make_record()
    prompt = assemble_prompt(record, make_request(record))
    assert "{{" not in prompt.story_prompt
    assert "{{" not in prompt.image_prompt


def test_provenance_covers_all_three_layers():
    record = make_record()
    prompt = assemble_prompt(record, make_request(record))
    assert prompt.provenance["surface_summary"] == "record.surface"
    assert prompt.provenance["middle_narrative"].startswith("record.middle[")
    assert "connotation" in prompt.provenance["inner_connotation"]
    for placeholder in prompt.substitutions:
        assert placeholder in prompt.provenance


def test_unknown_concept_rejected_at_request():
    with pytest.raises(UnknownNameError):
        CoCreationRequest(costume_id="x", theme=Theme.Festive, inner_concept="Bravery")


def test_user_note_length_capped():
    with pytest.raises(ValueError):
        CoCreationRequest(
            costume_id="x",
            theme=Theme.Festive,
            inner_concept="Harmony",
            user_note="n" * 501,
        )


def test_surface_summary_renders_in_taxonomy_order():
    record = make_record()
    text = surface_summary(record)
    assert text == (
        "patterns: Animal (butterfly); materials: Silk, Metal; forms: Top; "
        "dominant color: #B22222 (Warm)"
    )


# -- mock provider -----------------------------------------------------------


def test_mock_artifact_is_seed_deterministic():
    record = make_record()
    request = make_request(record, seed=42)
    prompt = assemble_prompt(record, request)
    first = generate(MockProvider(), prompt, request)
    second = generate(MockProvider(), prompt, request)
    assert first.story == second.story
    assert first.image_ref == second.image_ref
    assert first.provider_id == "mock"


def test_mock_stories_differ_across_seeds():
    record = make_record()
    prompt42 = assemble_prompt(record, make_request(record, seed=42))
    prompt43 = assemble_prompt(record, make_request(record, seed=43))
    story42 = generate(MockProvider(), prompt42, make_request(record, seed=42)).story
    story43 = generate(MockProvider(), prompt43, make_request(record, seed=43)).story
    assert story42 != story43


def test_mock_has_no_seed_collisions_over_hundred_seeds():
    record = make_record()
    stories = set()
    for seed in range(100):
        request = make_request(record, seed=seed)
        prompt = assemble_prompt(record, request)
        stories.add(generate(MockProvider(), prompt, request).story)
    assert len(stories) == 100


def test_mock_stories_differ_exactly_at_title_positions():
    record_a = make_record()
    record_b = dataclasses.replace(make_record(), title="ceremonial Dong headdress")
    request_a = make_request(record_a, seed=5)
    request_b = make_request(record_b, seed=5)
    story_a = generate(MockProvider(), assemble_prompt(record_a, request_a), request_a).story
    story_b = generate(MockProvider(), assemble_prompt(record_b, request_b), request_b).story
    assert story_a != story_b
    assert story_a.replace(record_a.title, record_b.title) == story_b


def test_mock_image_descriptor_shape():
    record = make_record()
    request = make_request(record)
    artifact = generate(MockProvider(), assemble_prompt(record, request), request)
    prefix, _, digest = artifact.image_ref.partition(":")
    assert prefix == "mock-image"
    assert len(digest) == 16
    int(digest, 16)


# -- generate retry contract -------------------------------------------------


class FlakyProvider:
    provider_id = "flaky"

    def __init__(self, failures: int):
        self.failures = failures
        self.calls = 0

    def generate(self, request):
        self.calls += 1
        if self.calls <= self.failures:
            raise ProviderTimeout("unreachable")
        return ProviderResponse(story="a recovered story", image_descriptor=None)


class RefusingProvider:
    provider_id = "refusing"

    def generate(self, request):
        return ProviderResponse(story="", refusal_reason="content filter")


def test_timeouts_are_retried_then_surface():
    record = make_record()
    request = make_request(record)
    prompt = assemble_prompt(record, request)

    recovering = FlakyProvider(failures=2)
    artifact = generate(recovering, prompt, request, retries=2)
    assert recovering.calls == 3
    assert artifact.story == "a recovered story"

    hopeless = FlakyProvider(failures=10)
    with pytest.raises(ProviderTimeout):
        generate(hopeless, prompt, request, retries=2)
    assert hopeless.calls == 3  # initial attempt + two retries


def test_refusal_surfaces_with_reason():
    record = make_record()
    request = make_request(record)
    prompt = assemble_prompt(record, request)
    with pytest.raises(ProviderRefusal) as excinfo:
        generate(RefusingProvider(), prompt, request)
    assert excinfo.value.reason == "content filter"


def test_artifact_echoes_request():
    record = make_record()
    request = make_request(record, seed=13, note="remember the drums")
    artifact = generate(MockProvider(), assemble_prompt(record, request), request)
    assert artifact.request == request
    assert artifact.created_at.endswith("+00:00")
    assert NarrativeArtifact.from_document(artifact.to_document()) == artifact


# -- scaffold validation -----------------------------------------------------


def test_mock_artifacts_pass_scaffold():
    record = make_record()
    request = make_request(record)
    prompt = assemble_prompt(record, request)
    artifact = generate(MockProvider(), prompt, request)
    assert validate_scaffold(artifact, prompt).passed


def test_scaffold_flags_everything_for_unrelated_story():
    record = make_record()
    request = make_request(record)
    prompt = assemble_prompt(record, request)
    artifact = generate(MockProvider(), prompt, request)
    hollow = NarrativeArtifact(
        request=request,
        story="hello",
        image_prompt=artifact.image_prompt,
        provider_id="mock",
        created_at=artifact.created_at,
    )
    report = validate_scaffold(hollow, prompt)
    assert set(report.missing_anchors) == {"title", "inner_concept", "middle_narrative"}


def test_scaffold_reports_exactly_the_missing_anchor():
    # Title chosen to share no 10-character run with the festive narrative.
    record = dataclasses.replace(make_record(), title="indigo Dong sash")
    request = make_request(record)
    prompt = assemble_prompt(record, request)
    story = f"A tale of {record.title} in praise of Harmony, nothing more."
    partial = NarrativeArtifact(
        request=request,
        story=story,
        image_prompt=prompt.image_prompt,
        provider_id="mock",
        created_at="2026-01-01T00:00:00+00:00",
    )
    report = validate_scaffold(partial, prompt)
    assert report.missing_anchors == ("middle_narrative",)


def test_scaffold_check_is_case_insensitive():
    record = make_record()
    request = make_request(record)
    prompt = assemble_prompt(record, request)
    artifact = generate(MockProvider(), prompt, request)
    shouty = NarrativeArtifact(
        request=request,
        story=artifact.story.upper(),
        image_prompt=artifact.image_prompt,
        provider_id="mock",
        created_at=artifact.created_at,
    )
    assert validate_scaffold(shouty, prompt).passed


def test_scaffold_closure_over_random_fixture_pairs(fixture_records):
    rng = SplitMix64(2024)
    eligible = [
        r
        for r in fixture_records
        if any(r.middle_for(d) for d in THEME_DIMENSIONS.values())
    ]
    passed = 0
    for _ in range(100):
        record = eligible[rng.next_below(len(eligible))]
        theme = next(
            t for t in Theme if record.middle_for(THEME_DIMENSIONS[t]) is not None
        )
        request = CoCreationRequest(
            costume_id=record.id,
            theme=theme,
            inner_concept="Dedication",
            seed=rng.next_u64(),
        )
        prompt = assemble_prompt(record, request)
        artifact = generate(MockProvider(), prompt, request)
        if validate_scaffold(artifact, prompt).passed:
            passed += 1
    assert passed == 100
