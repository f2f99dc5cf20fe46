"""Scaffolded co-creation: prompt assembly, generation, anchor validation.

A co-creation request names a costume, one of three context themes, and one
inner-layer concept. Assembly deterministically fills a template with the
costume's surface summary, the matching middle-layer narrative, and the
concept's interpretive texts, recording where every substitution came from.
Validation then checks the generated story lexically against those anchors,
which is the machine-checkable sense in which the output stays tied to its
cultural origin.
"""

from __future__ import annotations

import re
import threading
import unicodedata
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum

from .colors import ColorProfile
from .providers import (
    DEFAULT_MAX_LENGTH,
    ProviderRefusal,
    ProviderRequest,
    ProviderTimeout,
)
from .records import CostumeRecord
from .vocab import MiddleDimension, inner_concept, taxonomy


class Theme(str, Enum):
    Religious = "Religious"
    Festive = "Festive"
    Artistic = "Artistic"


THEME_DIMENSIONS: dict[Theme, MiddleDimension] = {
    Theme.Religious: MiddleDimension.ReligiousBeliefs,
    Theme.Festive: MiddleDimension.FestiveCeremonies,
    Theme.Artistic: MiddleDimension.ArtsEntertainment,
}

MAX_USER_NOTE = 500

# Retries on provider failure before the error is surfaced.
DEFAULT_RETRIES = 2

# At most this many provider calls in flight at once.
MAX_IN_FLIGHT = 4
_generation_slots = threading.Semaphore(MAX_IN_FLIGHT)


class ThemeUnavailableError(ValueError):
    pass


class IdMismatchError(ValueError):
    pass


class UnresolvedPlaceholderError(ValueError):
    pass


@dataclass(frozen=True)
class CoCreationRequest:
    costume_id: str
    theme: Theme
    inner_concept: str
    user_note: str = ""
    seed: int = 0

    def __post_init__(self) -> None:
        inner_concept(self.inner_concept)  # raises UnknownNameError
        if len(self.user_note) > MAX_USER_NOTE:
            raise ValueError(f"user_note exceeds {MAX_USER_NOTE} characters")

    def to_document(self) -> dict:
        return {
            "costume_id": self.costume_id,
            "theme": self.theme.value,
            "inner_concept": self.inner_concept,
            "user_note": self.user_note,
            "seed": self.seed,
        }

    @classmethod
    def from_document(cls, doc: dict) -> "CoCreationRequest":
        return cls(
            costume_id=doc["costume_id"],
            theme=Theme(doc["theme"]),
            inner_concept=doc["inner_concept"],
            user_note=doc.get("user_note", ""),
            seed=int(doc.get("seed", 0)),
        )


@dataclass(frozen=True)
class PromptTemplate:
    name: str
    story_body: str
    image_body: str


REQUIRED_PLACEHOLDERS = (
    "title",
    "ethnic_group",
    "surface_summary",
    "middle_narrative",
    "inner_concept",
    "inner_connotation",
    "user_note",
)

# inner_expression (how the concept shows up in costume) is optional in
# custom templates but part of the default one.
OPTIONAL_PLACEHOLDERS = ("inner_expression",)

DEFAULT_TEMPLATE = PromptTemplate(
    name="default",
    story_body=(
        "Write a culturally grounded short story about an ethnic costume.\n"
        "Costume: {{title}}, a garment of the {{ethnic_group}}.\n"
        "Surface genes: {{surface_summary}}.\n"
        "Cultural context: {{middle_narrative}}\n"
        "Core value to convey: {{inner_concept}}.\n"
        "How this value appears in costume: {{inner_expression}}\n"
        "Its meaning: {{inner_connotation}}\n"
        "Reader's note: {{user_note}}\n"
        "Keep the story faithful to this cultural origin; do not invent "
        "contradicting customs."
    ),
    image_body=(
        "An evocative illustration of {{title}}, a costume of the "
        "{{ethnic_group}}. {{surface_summary}}. The mood expresses "
        "{{inner_concept}}. {{user_note}}"
    ),
)

_PLACEHOLDER_RE = re.compile(r"\{\{([a-zA-Z_]+)\}\}")


def template_placeholders(body: str) -> list[str]:
    return _PLACEHOLDER_RE.findall(body)


def validate_template(template: PromptTemplate) -> None:
    present = set(template_placeholders(template.story_body))
    missing = [p for p in REQUIRED_PLACEHOLDERS if p not in present]
    if missing:
        raise UnresolvedPlaceholderError(
            f"template {template.name!r} lacks required placeholders: {', '.join(missing)}"
        )


@dataclass(frozen=True)
class AssembledPrompt:
    story_prompt: str
    image_prompt: str
    substitutions: dict[str, str]
    provenance: dict[str, str]


@dataclass(frozen=True)
class NarrativeArtifact:
    request: CoCreationRequest
    story: str
    image_prompt: str
    provider_id: str
    created_at: str
    image_ref: str | None = None

    def to_document(self) -> dict:
        return {
            "request": self.request.to_document(),
            "story": self.story,
            "image_prompt": self.image_prompt,
            "image_ref": self.image_ref,
            "provider_id": self.provider_id,
            "created_at": self.created_at,
        }

    @classmethod
    def from_document(cls, doc: dict) -> "NarrativeArtifact":
        return cls(
            request=CoCreationRequest.from_document(doc["request"]),
            story=doc["story"],
            image_prompt=doc["image_prompt"],
            image_ref=doc.get("image_ref"),
            provider_id=doc["provider_id"],
            created_at=doc["created_at"],
        )


@dataclass(frozen=True)
class ScaffoldReport:
    missing_anchors: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.missing_anchors

    def to_document(self) -> dict:
        return {"passed": self.passed, "missing_anchors": list(self.missing_anchors)}


def surface_summary(record: CostumeRecord) -> str:
    """Deterministic one-line rendering of the surface layer."""

    def pattern_text() -> str:
        by_class: dict[str, list[str]] = {}
        for p in record.surface.patterns:
            by_class.setdefault(p.cls.value, [])
            if p.motif:
                by_class[p.cls.value].append(p.motif)
        parts = []
        for value in taxonomy("Pattern"):
            if value in by_class:
                motifs = sorted(by_class[value])
                parts.append(f"{value} ({', '.join(motifs)})" if motifs else value)
        return ", ".join(parts) if parts else "none"

    materials = [
        v for v in taxonomy("Material") if v in {m.value for m in record.surface.materials}
    ]
    forms = [v for v in taxonomy("Form") if v in {f.value for f in record.surface.forms}]
    profile: ColorProfile | None = record.surface.color_profile
    color = (
        f"{profile.dominant_hex} ({profile.perceptual_class.value})"
        if profile
        else "unknown"
    )
    return (
        f"patterns: {pattern_text()}; "
        f"materials: {', '.join(materials) if materials else 'none'}; "
        f"forms: {', '.join(forms)}; "
        f"dominant color: {color}"
    )


def assemble_prompt(
    record: CostumeRecord,
    request: CoCreationRequest,
    template: PromptTemplate = DEFAULT_TEMPLATE,
) -> AssembledPrompt:
    """Fill the template from the record's three layers and the request.

    Pure function: identical inputs produce identical output, including the
    provenance map from each placeholder to the field that fed it.
    """
    if record.id != request.costume_id:
        raise IdMismatchError(
            f"record {record.id!r} does not match request {request.costume_id!r}"
        )
    validate_template(template)
    dimension = THEME_DIMENSIONS[request.theme]
    context = record.middle_for(dimension)
    if context is None:
        raise ThemeUnavailableError(
            f"costume {record.id!r} has no {dimension.value} context for the "
            f"{request.theme.value} theme"
        )
    concept = inner_concept(request.inner_concept)

    substitutions = {
        "title": record.title,
        "ethnic_group": record.ethnic_group,
        "surface_summary": surface_summary(record),
        "middle_narrative": context.narrative,
        "inner_concept": concept.display_name,
        "inner_connotation": concept.connotation,
        "inner_expression": concept.expression,
        "user_note": request.user_note,
    }
    provenance = {
        "title": "record.title",
        "ethnic_group": "record.ethnic_group",
        "surface_summary": "record.surface",
        "middle_narrative": f"record.middle[{dimension.value}].narrative",
        "inner_concept": f"inner[{concept.name}].display_name",
        "inner_connotation": f"inner[{concept.name}].connotation",
        "inner_expression": f"inner[{concept.name}].expression",
        "user_note": "request.user_note",
    }

    used: set[str] = set()

    def fill(body: str) -> str:
        def sub(match: re.Match) -> str:
            name = match.group(1)
            if name not in substitutions:
                raise UnresolvedPlaceholderError(
                    f"template {template.name!r} references unknown field {name!r}"
                )
            used.add(name)
            return substitutions[name]

        return _PLACEHOLDER_RE.sub(sub, body)

    story_prompt = fill(template.story_body)
    image_prompt = fill(template.image_body)
    return AssembledPrompt(
        story_prompt=story_prompt,
        image_prompt=image_prompt,
        substitutions={name: substitutions[name] for name in sorted(used)},
        provenance={name: provenance[name] for name in sorted(used)},
    )


def generate(
    provider,
    prompt: AssembledPrompt,
    request: CoCreationRequest,
    retries: int = DEFAULT_RETRIES,
    max_length: int = DEFAULT_MAX_LENGTH,
) -> NarrativeArtifact:
    """Call a provider with the assembled prompt; never mutates corpus state.

    Timeouts and refusals are retried at most ``retries`` times, then
    surfaced as-is.
    """
    provider_request = ProviderRequest(
        story_prompt=prompt.story_prompt,
        image_prompt=prompt.image_prompt,
        seed=request.seed,
        max_length=max_length,
        anchors={
            "title": prompt.substitutions.get("title", ""),
            "inner_concept": prompt.substitutions.get("inner_concept", ""),
            "middle_narrative": prompt.substitutions.get("middle_narrative", ""),
        },
    )
    attempts = retries + 1
    last_error: Exception | None = None
    for _ in range(attempts):
        with _generation_slots:
            try:
                response = provider.generate(provider_request)
            except (ProviderTimeout, ProviderRefusal) as exc:
                last_error = exc
                continue
        if response.refusal_reason:
            last_error = ProviderRefusal(response.refusal_reason)
            continue
        if not response.story:
            last_error = ProviderRefusal("provider returned an empty story")
            continue
        return NarrativeArtifact(
            request=request,
            story=response.story,
            image_prompt=prompt.image_prompt,
            image_ref=response.image_descriptor,
            provider_id=provider.provider_id,
            created_at=datetime.now(timezone.utc).isoformat(),
        )
    assert last_error is not None
    raise last_error


def _fold(text: str) -> str:
    return unicodedata.normalize("NFC", text).lower()


def validate_scaffold(artifact: NarrativeArtifact, prompt: AssembledPrompt) -> ScaffoldReport:
    """Lexical anchor check: the story must carry the costume title, the
    concept display name, and a 10+-character contiguous excerpt of the
    middle narrative."""
    story = _fold(artifact.story)
    missing = []

    title = _fold(prompt.substitutions.get("title", ""))
    if not title or title not in story:
        missing.append("title")

    concept = _fold(prompt.substitutions.get("inner_concept", ""))
    if not concept or concept not in story:
        missing.append("inner_concept")

    narrative = _fold(prompt.substitutions.get("middle_narrative", ""))
    window = 10
    if len(narrative) < window:
        found = bool(narrative) and narrative in story
    else:
        found = any(
            narrative[i : i + window] in story
            for i in range(len(narrative) - window + 1)
        )
    if not found:
        missing.append("middle_narrative")

    return ScaffoldReport(missing_anchors=tuple(missing))
