"""Double-coder annotation, cross-check, and resolution.

Two coders transcribe a costume independently; their drafts are compared
field-by-field over a fixed, schema-derived enumeration (membership booleans
per vocabulary value, presence and normalized narrative per middle dimension,
one manual color override). A third decision map settles each conflict and
the merged annotation plus image color extraction becomes a validated record.

The enumeration is fixed so total_fields is the same for every costume and
agreement rates are comparable across the corpus.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, replace

from .colors import ColorParams, ColorProfile, extract_profile
from .records import (
    CostumeRecord,
    DuplicateIdError,
    MiddleContext,
    PatternGene,
    RecordValidationError,
    SurfaceGenes,
    Violation,
    to_document,
    validate_document,
)
from .vocab import (
    ColorClass,
    FormClass,
    MaterialClass,
    MiddleDimension,
    PatternClass,
    taxonomy,
)

_PRESENT = "present"
_ABSENT = "absent"


class CostumeIdMismatchError(ValueError):
    pass


class InvalidDraftError(ValueError):
    def __init__(self, coder_id: str, violations) -> None:
        self.coder_id = coder_id
        self.violations = tuple(violations)
        detail = "; ".join(f"{v.path}: {v.message}" for v in self.violations)
        super().__init__(f"draft by {coder_id!r} is invalid: {detail}")


class MissingDecisionError(ValueError):
    def __init__(self, paths) -> None:
        self.paths = tuple(paths)
        super().__init__(f"undecided conflicts: {', '.join(self.paths)}")


class StaleReportError(ValueError):
    pass


@dataclass(frozen=True)
class AnnotationDraft:
    coder_id: str
    costume_id: str
    surface: SurfaceGenes
    middle: tuple[MiddleContext, ...] = ()
    inner: frozenset[str] = frozenset()
    manual_color_class: ColorClass | None = None


@dataclass(frozen=True)
class Conflict:
    field_path: str
    value_a: str
    value_b: str


@dataclass(frozen=True)
class ReconciliationReport:
    costume_id: str
    agreement_rate: float
    conflicts: tuple[Conflict, ...]
    total_fields: int

    def to_document(self) -> dict:
        return {
            "costume_id": self.costume_id,
            "agreement_rate": self.agreement_rate,
            "total_fields": self.total_fields,
            "conflicts": [
                {"field_path": c.field_path, "value_a": c.value_a, "value_b": c.value_b}
                for c in self.conflicts
            ],
        }


@dataclass(frozen=True)
class MergedAnnotation:
    surface: SurfaceGenes
    middle: tuple[MiddleContext, ...]
    inner: frozenset[str]
    manual_color_class: ColorClass | None = None


def normalize_text(text: str) -> str:
    """NFC plus whitespace collapsing; formatting noise is not disagreement."""
    return " ".join(unicodedata.normalize("NFC", text).split())


def field_enumeration() -> list[str]:
    """The fixed comparison fields, one boolean per vocabulary value plus the
    middle narratives and the manual color override."""
    fields = []
    for v in taxonomy("Pattern"):
        fields.append(f"surface.patterns.{v}")
    for v in taxonomy("Material"):
        fields.append(f"surface.materials.{v}")
    for v in taxonomy("Form"):
        fields.append(f"surface.forms.{v}")
    for d in taxonomy("middle"):
        fields.append(f"middle.{d}.present")
        fields.append(f"middle.{d}.narrative")
    for c in taxonomy("inner"):
        fields.append(f"inner.{c}")
    fields.append("manual_color_class")
    return fields


TOTAL_FIELDS = len(field_enumeration())


def draft_to_document(draft: AnnotationDraft) -> dict:
    doc = {
        "coder_id": draft.coder_id,
        "costume_id": draft.costume_id,
        "surface": {
            "patterns": [
                {"class": p.cls.value, "motif": p.motif}
                for p in sorted(
                    draft.surface.patterns,
                    key=lambda p: (taxonomy("Pattern").index(p.cls.value), p.motif or ""),
                )
            ],
            "materials": sorted(
                (m.value for m in draft.surface.materials),
                key=taxonomy("Material").index,
            ),
            "forms": sorted(
                (f.value for f in draft.surface.forms), key=taxonomy("Form").index
            ),
        },
        "middle": [
            {"dimension": m.dimension.value, "narrative": m.narrative}
            for m in draft.middle
        ],
        "inner": sorted(draft.inner, key=taxonomy("inner").index),
        "manual_color_class": (
            draft.manual_color_class.value if draft.manual_color_class else None
        ),
    }
    return doc


def draft_from_document(doc: dict) -> AnnotationDraft:
    violations = _validate_draft_document(doc)
    if violations:
        raise InvalidDraftError(str(doc.get("coder_id", "?")), violations)
    surface_doc = doc.get("surface", {})
    manual = doc.get("manual_color_class")
    return AnnotationDraft(
        coder_id=doc["coder_id"],
        costume_id=doc["costume_id"],
        surface=SurfaceGenes(
            patterns=frozenset(
                PatternGene(PatternClass(p["class"]), p.get("motif"))
                for p in surface_doc.get("patterns", [])
            ),
            materials=frozenset(
                MaterialClass(m) for m in surface_doc.get("materials", [])
            ),
            forms=frozenset(FormClass(f) for f in surface_doc.get("forms", [])),
        ),
        middle=tuple(
            MiddleContext(MiddleDimension(m["dimension"]), m["narrative"])
            for m in doc.get("middle", [])
        ),
        inner=frozenset(doc.get("inner", [])),
        manual_color_class=ColorClass(manual) if manual else None,
    )


def _validate_draft_document(doc: dict) -> tuple:
    # Reuse the record validator over a skeleton record document.
    skeleton = {
        "id": doc.get("costume_id"),
        "title": "",
        "ethnic_group": "",
        "surface": doc.get("surface", {}),
        "middle": doc.get("middle", []),
        "inner": doc.get("inner", []),
        "source_text": "",
    }
    violations = list(validate_document(skeleton).violations)
    coder = doc.get("coder_id")
    if not isinstance(coder, str) or not coder.strip():
        violations.append(Violation("coder_id", "must be non-empty"))
    manual = doc.get("manual_color_class")
    if manual is not None and manual not in taxonomy("Color"):
        violations.append(
            Violation("manual_color_class", f"unknown color class: {manual!r}")
        )
    return tuple(violations)


def validate_draft(draft: AnnotationDraft) -> tuple:
    return _validate_draft_document(draft_to_document(draft))


def _field_values(draft: AnnotationDraft) -> dict[str, str]:
    pattern_classes = {p.cls.value for p in draft.surface.patterns}
    materials = {m.value for m in draft.surface.materials}
    forms = {f.value for f in draft.surface.forms}
    narratives = {m.dimension.value: m.narrative for m in draft.middle}
    values: dict[str, str] = {}
    for v in taxonomy("Pattern"):
        values[f"surface.patterns.{v}"] = _PRESENT if v in pattern_classes else _ABSENT
    for v in taxonomy("Material"):
        values[f"surface.materials.{v}"] = _PRESENT if v in materials else _ABSENT
    for v in taxonomy("Form"):
        values[f"surface.forms.{v}"] = _PRESENT if v in forms else _ABSENT
    for d in taxonomy("middle"):
        present = d in narratives
        values[f"middle.{d}.present"] = _PRESENT if present else _ABSENT
        values[f"middle.{d}.narrative"] = normalize_text(narratives[d]) if present else ""
    for c in taxonomy("inner"):
        values[f"inner.{c}"] = _PRESENT if c in draft.inner else _ABSENT
    values["manual_color_class"] = (
        draft.manual_color_class.value if draft.manual_color_class else _ABSENT
    )
    return values


def compare_drafts(a: AnnotationDraft, b: AnnotationDraft) -> ReconciliationReport:
    """Field-wise cross-check of two coders' drafts for the same costume."""
    if a.costume_id != b.costume_id:
        raise CostumeIdMismatchError(
            f"drafts describe different costumes: {a.costume_id!r} vs {b.costume_id!r}"
        )
    for draft in (a, b):
        violations = validate_draft(draft)
        if violations:
            raise InvalidDraftError(draft.coder_id, violations)
    va, vb = _field_values(a), _field_values(b)
    conflicts = tuple(
        Conflict(path, va[path], vb[path])
        for path in field_enumeration()
        if va[path] != vb[path]
    )
    total = TOTAL_FIELDS
    return ReconciliationReport(
        costume_id=a.costume_id,
        agreement_rate=(total - len(conflicts)) / total,
        conflicts=conflicts,
        total_fields=total,
    )


def _merge_memberships(prefix, vocab, chosen_side, a_set, b_set):
    merged = set()
    for v in vocab:
        side = chosen_side.get(f"{prefix}.{v}", "A")
        source = a_set if side == "A" else b_set
        if v in source:
            merged.add(v)
    return merged


def resolve(
    report: ReconciliationReport,
    a: AnnotationDraft,
    b: AnnotationDraft,
    decisions: dict[str, str],
) -> MergedAnnotation:
    """Apply third-coder decisions to produce the merged annotation.

    Non-conflicting fields come from draft A (they are equal in B anyway);
    each conflict takes the side named in ``decisions``. Decisions for paths
    that did not conflict are permitted and ignored. Motif labels are not
    compared, so each merged pattern class carries the motifs of whichever
    side contributed it.
    """
    fresh = compare_drafts(a, b)
    if fresh != report:
        raise StaleReportError("report does not match these drafts; re-run the cross-check")
    for path, side in decisions.items():
        if side not in ("A", "B"):
            raise ValueError(f"decision for {path!r} must be 'A' or 'B', got {side!r}")
    missing = [c.field_path for c in report.conflicts if c.field_path not in decisions]
    if missing:
        raise MissingDecisionError(missing)

    conflict_paths = {c.field_path for c in report.conflicts}
    chosen = {path: decisions[path] for path in conflict_paths}

    merged_patterns = _merge_memberships(
        "surface.patterns",
        taxonomy("Pattern"),
        chosen,
        {p.cls.value for p in a.surface.patterns},
        {p.cls.value for p in b.surface.patterns},
    )
    patterns = set()
    for v in merged_patterns:
        side = chosen.get(f"surface.patterns.{v}", "A")
        source = a if side == "A" else b
        patterns.update(p for p in source.surface.patterns if p.cls.value == v)

    materials = _merge_memberships(
        "surface.materials",
        taxonomy("Material"),
        chosen,
        {m.value for m in a.surface.materials},
        {m.value for m in b.surface.materials},
    )
    forms = _merge_memberships(
        "surface.forms",
        taxonomy("Form"),
        chosen,
        {f.value for f in a.surface.forms},
        {f.value for f in b.surface.forms},
    )

    a_middle = {m.dimension.value: m for m in a.middle}
    b_middle = {m.dimension.value: m for m in b.middle}
    middle = []
    for d in taxonomy("middle"):
        presence_side = chosen.get(f"middle.{d}.present", "A")
        present_in = a_middle if presence_side == "A" else b_middle
        if d not in present_in:
            continue
        narrative_side = chosen.get(f"middle.{d}.narrative", "A")
        narrative_source = a_middle if narrative_side == "A" else b_middle
        if d not in narrative_source:
            narrative_source = present_in
        middle.append(narrative_source[d])

    inner = _merge_memberships("inner", taxonomy("inner"), chosen, a.inner, b.inner)

    manual_side = chosen.get("manual_color_class", "A")
    manual = a.manual_color_class if manual_side == "A" else b.manual_color_class

    merged = MergedAnnotation(
        surface=SurfaceGenes(
            patterns=frozenset(patterns),
            materials=frozenset(MaterialClass(m) for m in materials),
            forms=frozenset(FormClass(f) for f in forms),
        ),
        middle=tuple(middle),
        inner=frozenset(inner),
        manual_color_class=manual,
    )
    violations = validate_draft(
        AnnotationDraft(
            coder_id="merged",
            costume_id=a.costume_id,
            surface=merged.surface,
            middle=merged.middle,
            inner=merged.inner,
            manual_color_class=merged.manual_color_class,
        )
    )
    if violations:
        raise RecordValidationError(violations)
    return merged


@dataclass(frozen=True)
class DecodedImage:
    ref: str
    pixels: object  # (n, 3) RGB array accepted by the color extractor


def ingest_record(
    source_text: str,
    meta: dict,
    images: list[DecodedImage],
    merged: MergedAnnotation,
    color_params: ColorParams = ColorParams(),
    existing_ids: frozenset[str] = frozenset(),
) -> CostumeRecord:
    """Assemble and validate a record from a resolved annotation.

    The first image (if any) drives color extraction; a manual color class
    on the merged annotation overrides the computed perceptual class.
    """
    costume_id = meta.get("id", "")
    if costume_id in existing_ids:
        raise DuplicateIdError(f"costume id already in corpus: {costume_id!r}")

    profile: ColorProfile | None = None
    if images:
        profile = extract_profile(images[0].pixels, color_params)
        if merged.manual_color_class is not None:
            profile = replace(profile, perceptual_class=merged.manual_color_class)

    record = CostumeRecord(
        id=costume_id,
        title=meta.get("title", ""),
        ethnic_group=meta.get("ethnic_group", ""),
        region=meta.get("region"),
        image_refs=tuple(img.ref for img in images),
        surface=replace(merged.surface, color_profile=profile),
        middle=merged.middle,
        inner=merged.inner,
        source_text=source_text,
    )
    result = validate_document(to_document(record))
    if not result.ok:
        raise RecordValidationError(result.violations)
    return record
