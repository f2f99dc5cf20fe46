"""Naive full-scan oracles the optimized paths are checked against.

These re-derive browse/search/related results directly from record fields
with no inverted index, and re-derive k-means blob assignments by exhaustive
nearest-color scan. Keep them dumb; their value is independence.
"""

from __future__ import annotations

import numpy as np

from gene_atlas.explore import tokenize
from gene_atlas.records import CostumeRecord
from gene_atlas.vocab import GeneTag, TagCategory, taxonomy


def oracle_record_tags(record: CostumeRecord) -> set[GeneTag]:
    tags = set()
    for p in record.surface.patterns:
        tags.add(GeneTag(TagCategory.Pattern, p.cls.value))
    for m in record.surface.materials:
        tags.add(GeneTag(TagCategory.Material, m.value))
    for f in record.surface.forms:
        tags.add(GeneTag(TagCategory.Form, f.value))
    profile = record.surface.color_profile
    if profile is not None:
        tags.add(GeneTag(TagCategory.Color, profile.perceptual_class.value))
    return tags


def oracle_browse(records: list[CostumeRecord], tag: GeneTag) -> list[str]:
    return sorted(r.id for r in records if tag in oracle_record_tags(r))


def oracle_record_token_counts(record: CostumeRecord) -> dict[str, int]:
    texts = [record.title, record.ethnic_group]
    if record.region:
        texts.append(record.region)
    texts.extend(p.motif for p in record.surface.patterns if p.motif)
    texts.extend(
        tag.value
        for cat in TagCategory
        for tag in sorted(oracle_record_tags(record))
        if tag.category is cat
    )
    counts: dict[str, int] = {}
    for text in texts:
        for token in tokenize(text):
            counts[token] = counts.get(token, 0) + 1
    return counts


def oracle_search(records: list[CostumeRecord], query: str) -> list[tuple[str, int]]:
    tokens = list(dict.fromkeys(tokenize(query)))
    scored = []
    for record in records:
        counts = oracle_record_token_counts(record)
        if all(token in counts for token in tokens):
            scored.append((record.id, sum(counts[token] for token in tokens)))
    return sorted(scored, key=lambda pair: (-pair[1], pair[0]))


def oracle_related(
    records: list[CostumeRecord], costume_id: str, category: TagCategory
) -> list[tuple[GeneTag, list[str]]]:
    record = next(r for r in records if r.id == costume_id)
    carried = oracle_record_tags(record)
    groups = []
    for value in taxonomy(category.value):
        tag = GeneTag(category, value)
        if tag in carried:
            others = sorted(
                r.id
                for r in records
                if r.id != costume_id and tag in oracle_record_tags(r)
            )
            groups.append((tag, others))
    return groups


def oracle_blob_assignment(pixels, blob_colors) -> list[float]:
    """Exhaustive nearest-blob-color proportions for well-separated fixtures."""
    pts = np.asarray(pixels, dtype=np.float64)
    blobs = np.asarray(blob_colors, dtype=np.float64)
    dists = ((pts[:, None, :] - blobs[None, :, :]) ** 2).sum(axis=2)
    nearest = dists.argmin(axis=1)
    return [(nearest == j).sum() / len(pts) for j in range(len(blobs))]
