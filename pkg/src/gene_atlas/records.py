"""Costume records and their validation.

A record carries all three gene layers: surface classes (with optional motif
labels on patterns and a color profile), middle-layer context narratives
keyed by dimension, and inner-layer concept names. Validation is
document-shaped so that raw JSON straight off disk or the wire can be checked
before any typed object exists; violations are data, not exceptions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .colors import ColorProfile, dominant_cluster, rgb_to_hex
from .vocab import (
    FormClass,
    INNER_CONCEPT_NAMES,
    MaterialClass,
    MiddleDimension,
    PatternClass,
    taxonomy,
)

_PATTERN_ORDER = {v: i for i, v in enumerate(taxonomy("Pattern"))}
_MATERIAL_ORDER = {v: i for i, v in enumerate(taxonomy("Material"))}
_FORM_ORDER = {v: i for i, v in enumerate(taxonomy("Form"))}
_MIDDLE_ORDER = {v: i for i, v in enumerate(taxonomy("middle"))}
_INNER_ORDER = {v: i for i, v in enumerate(INNER_CONCEPT_NAMES)}


@dataclass(frozen=True)
class PatternGene:
    cls: PatternClass
    motif: str | None = None


@dataclass(frozen=True)
class MiddleContext:
    dimension: MiddleDimension
    narrative: str


@dataclass(frozen=True)
class SurfaceGenes:
    patterns: frozenset[PatternGene] = frozenset()
    materials: frozenset[MaterialClass] = frozenset()
    forms: frozenset[FormClass] = frozenset()
    color_profile: ColorProfile | None = None


@dataclass(frozen=True)
class CostumeRecord:
    id: str
    title: str
    ethnic_group: str
    surface: SurfaceGenes
    middle: tuple[MiddleContext, ...] = ()
    inner: frozenset[str] = frozenset()
    region: str | None = None
    image_refs: tuple[str, ...] = ()
    source_text: str = ""

    def __post_init__(self) -> None:
        # Canonical middle order (one entry per dimension makes this total).
        ordered = tuple(
            sorted(self.middle, key=lambda m: _MIDDLE_ORDER[m.dimension.value])
        )
        object.__setattr__(self, "middle", ordered)

    def middle_for(self, dimension: MiddleDimension) -> MiddleContext | None:
        for ctx in self.middle:
            if ctx.dimension is dimension:
                return ctx
        return None


@dataclass(frozen=True)
class Violation:
    path: str
    message: str


@dataclass(frozen=True)
class ValidationResult:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


class RecordValidationError(ValueError):
    def __init__(self, violations) -> None:
        self.violations = tuple(violations)
        lines = "; ".join(f"{v.path}: {v.message}" for v in self.violations)
        super().__init__(f"invalid record: {lines}")


class DuplicateIdError(ValueError):
    pass


def _sorted_patterns(patterns) -> list[PatternGene]:
    return sorted(patterns, key=lambda p: (_PATTERN_ORDER[p.cls.value], p.motif or ""))


def to_document(record: CostumeRecord) -> dict:
    """Canonical JSON-ready form; set-valued fields in taxonomy order."""
    surface = record.surface
    return {
        "id": record.id,
        "title": record.title,
        "ethnic_group": record.ethnic_group,
        "region": record.region,
        "image_refs": list(record.image_refs),
        "surface": {
            "patterns": [
                {"class": p.cls.value, "motif": p.motif}
                for p in _sorted_patterns(surface.patterns)
            ],
            "materials": sorted(
                (m.value for m in surface.materials), key=_MATERIAL_ORDER.__getitem__
            ),
            "forms": sorted(
                (f.value for f in surface.forms), key=_FORM_ORDER.__getitem__
            ),
            "color_profile": (
                surface.color_profile.to_document() if surface.color_profile else None
            ),
        },
        "middle": [
            {"dimension": m.dimension.value, "narrative": m.narrative}
            for m in record.middle
        ],
        "inner": sorted(record.inner, key=_INNER_ORDER.__getitem__),
        "source_text": record.source_text,
    }


def _check_string(doc, key, out, required=True, allow_empty=True):
    value = doc.get(key)
    if value is None:
        if required:
            out.append(Violation(key, "missing"))
        return
    if not isinstance(value, str):
        out.append(Violation(key, f"expected string, got {type(value).__name__}"))
    elif not allow_empty and not value.strip():
        out.append(Violation(key, "must be non-empty"))


def _check_color_profile(doc, path, out) -> None:
    clusters = doc.get("clusters")
    if not isinstance(clusters, list) or not clusters:
        out.append(Violation(f"{path}.clusters", "must be a non-empty list"))
        return
    total = 0.0
    parsed = []
    for i, c in enumerate(clusters):
        centroid = c.get("centroid") if isinstance(c, dict) else None
        proportion = c.get("proportion") if isinstance(c, dict) else None
        if (
            not isinstance(centroid, list)
            or len(centroid) != 3
            or not all(isinstance(x, (int, float)) for x in centroid)
            or any(x < 0 or x > 255 for x in centroid)
        ):
            out.append(
                Violation(f"{path}.clusters[{i}].centroid", "expected RGB triple in [0, 255]")
            )
            return
        if not isinstance(proportion, (int, float)) or not 0 <= proportion <= 1:
            out.append(
                Violation(f"{path}.clusters[{i}].proportion", "expected real in [0, 1]")
            )
            return
        total += proportion
        parsed.append((tuple(float(x) for x in centroid), float(proportion)))
    if abs(total - 1.0) > 1e-9:
        out.append(Violation(f"{path}.clusters", f"proportions sum to {total}, not 1"))
    hexcode = doc.get("dominant_hex")
    if not isinstance(hexcode, str) or len(hexcode) != 7 or not hexcode.startswith("#"):
        out.append(Violation(f"{path}.dominant_hex", "expected #RRGGBB"))
    elif parsed:
        from .colors import ColorCluster

        dom = dominant_cluster([ColorCluster(c, p) for c, p in parsed])
        expected = rgb_to_hex(dom.centroid)
        if hexcode != expected:
            out.append(
                Violation(
                    f"{path}.dominant_hex",
                    f"{hexcode} does not match dominant cluster {expected}",
                )
            )
    # The class may be a manual override, so membership is all we check.
    if doc.get("perceptual_class") not in taxonomy("Color"):
        out.append(
            Violation(f"{path}.perceptual_class", f"unknown color class: {doc.get('perceptual_class')!r}")
        )


def _check_vocab_list(values, vocab, path, out) -> None:
    seen = set()
    for i, v in enumerate(values):
        if v not in vocab:
            out.append(Violation(f"{path}[{i}]", f"unknown value: {v!r}"))
        elif v in seen:
            out.append(Violation(f"{path}[{i}]", f"duplicate value: {v!r}"))
        seen.add(v)


def validate_document(doc: dict) -> ValidationResult:
    """Check a record document against every schema invariant.

    Returns all violations with field paths; an empty list means the
    document can be materialized with :func:`from_document`.
    """
    out: list[Violation] = []
    if not isinstance(doc, dict):
        return ValidationResult((Violation("", "record must be an object"),))

    _check_string(doc, "id", out, allow_empty=False)
    _check_string(doc, "title", out)
    _check_string(doc, "ethnic_group", out)
    region = doc.get("region")
    if region is not None and not isinstance(region, str):
        out.append(Violation("region", "expected string or null"))
    refs = doc.get("image_refs", [])
    if not isinstance(refs, list) or not all(isinstance(r, str) for r in refs):
        out.append(Violation("image_refs", "expected list of paths"))
    _check_string(doc, "source_text", out, required=False)

    surface = doc.get("surface")
    if not isinstance(surface, dict):
        out.append(Violation("surface", "missing or not an object"))
    else:
        patterns = surface.get("patterns", [])
        if not isinstance(patterns, list):
            out.append(Violation("surface.patterns", "expected list"))
        else:
            pattern_vocab = set(taxonomy("Pattern"))
            seen_pairs = set()
            for i, p in enumerate(patterns):
                if not isinstance(p, dict) or "class" not in p:
                    out.append(Violation(f"surface.patterns[{i}]", "expected {class, motif?}"))
                    continue
                if p["class"] not in pattern_vocab:
                    out.append(
                        Violation(f"surface.patterns[{i}].class", f"unknown value: {p['class']!r}")
                    )
                motif = p.get("motif")
                if motif is not None and not isinstance(motif, str):
                    out.append(Violation(f"surface.patterns[{i}].motif", "expected string or null"))
                pair = (p.get("class"), motif)
                if pair in seen_pairs:
                    out.append(Violation(f"surface.patterns[{i}]", f"duplicate entry: {pair}"))
                seen_pairs.add(pair)
        materials = surface.get("materials", [])
        if not isinstance(materials, list):
            out.append(Violation("surface.materials", "expected list"))
        else:
            _check_vocab_list(materials, set(taxonomy("Material")), "surface.materials", out)
        forms = surface.get("forms", [])
        if not isinstance(forms, list):
            out.append(Violation("surface.forms", "expected list"))
        else:
            _check_vocab_list(forms, set(taxonomy("Form")), "surface.forms", out)
            if not forms:
                out.append(Violation("surface.forms", "must be non-empty"))
        profile = surface.get("color_profile")
        if profile is not None:
            if not isinstance(profile, dict):
                out.append(Violation("surface.color_profile", "expected object or null"))
            else:
                _check_color_profile(profile, "surface.color_profile", out)

    middle = doc.get("middle", [])
    if not isinstance(middle, list):
        out.append(Violation("middle", "expected list"))
    else:
        middle_vocab = set(taxonomy("middle"))
        seen_dims = set()
        for i, m in enumerate(middle):
            if not isinstance(m, dict):
                out.append(Violation(f"middle[{i}]", "expected {dimension, narrative}"))
                continue
            dim = m.get("dimension")
            if dim not in middle_vocab:
                out.append(Violation(f"middle[{i}].dimension", f"unknown dimension: {dim!r}"))
            elif dim in seen_dims:
                out.append(Violation(f"middle[{i}].dimension", f"duplicate dimension: {dim}"))
            seen_dims.add(dim)
            narrative = m.get("narrative")
            if not isinstance(narrative, str) or not narrative.strip():
                out.append(Violation(f"middle[{i}].narrative", "must be non-empty text"))

    inner = doc.get("inner", [])
    if not isinstance(inner, list):
        out.append(Violation("inner", "expected list"))
    else:
        inner_vocab = set(INNER_CONCEPT_NAMES)
        seen_concepts = set()
        for i, name in enumerate(inner):
            if name not in inner_vocab:
                out.append(Violation(f"inner[{i}]", f"unknown concept: {name!r}"))
            elif name in seen_concepts:
                out.append(Violation(f"inner[{i}]", f"duplicate concept: {name}"))
            seen_concepts.add(name)

    return ValidationResult(tuple(out))


def validate_record(record) -> ValidationResult:
    """Validate a CostumeRecord or a raw record document."""
    doc = to_document(record) if isinstance(record, CostumeRecord) else record
    return validate_document(doc)


def from_document(doc: dict) -> CostumeRecord:
    """Materialize a validated document; raises RecordValidationError."""
    result = validate_document(doc)
    if not result.ok:
        raise RecordValidationError(result.violations)
    surface_doc = doc["surface"]
    profile_doc = surface_doc.get("color_profile")
    surface = SurfaceGenes(
        patterns=frozenset(
            PatternGene(PatternClass(p["class"]), p.get("motif"))
            for p in surface_doc.get("patterns", [])
        ),
        materials=frozenset(MaterialClass(m) for m in surface_doc.get("materials", [])),
        forms=frozenset(FormClass(f) for f in surface_doc.get("forms", [])),
        color_profile=ColorProfile.from_document(profile_doc) if profile_doc else None,
    )
    return CostumeRecord(
        id=doc["id"],
        title=doc["title"],
        ethnic_group=doc["ethnic_group"],
        region=doc.get("region"),
        image_refs=tuple(doc.get("image_refs", [])),
        surface=surface,
        middle=tuple(
            MiddleContext(MiddleDimension(m["dimension"]), m["narrative"])
            for m in doc.get("middle", [])
        ),
        inner=frozenset(doc.get("inner", [])),
        source_text=doc.get("source_text", ""),
    )
