"""Gene-first exploration: tag browse, keyword search, and tag traversal.

The index inverts the corpus two ways: tag postings (which costumes carry a
given surface tag, including the dominant color class) and token postings
(term frequencies over titles, ethnic groups, regions, motif labels, and tag
display names). It is immutable once built; mutations rebuild and swap.

Ranking is a raw term-frequency sum with AND semantics over query tokens;
at this corpus scale determinism and explainability beat anything cleverer.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .records import CostumeRecord, DuplicateIdError
from .vocab import GeneTag, TagCategory, taxonomy


class UnknownIdError(KeyError):
    pass


class EmptyQueryError(ValueError):
    pass


@dataclass(frozen=True)
class PageRequest:
    page: int = 1
    page_size: int = 20

    MAX_PAGE_SIZE = 100

    def __post_init__(self) -> None:
        if self.page < 1:
            raise ValueError("page is 1-based")
        if not 1 <= self.page_size <= self.MAX_PAGE_SIZE:
            raise ValueError(f"page_size must be in [1, {self.MAX_PAGE_SIZE}]")

    def slice(self, items: list) -> list:
        start = (self.page - 1) * self.page_size
        return items[start : start + self.page_size]


@dataclass(frozen=True)
class SearchHit:
    costume_id: str
    score: int


@dataclass(frozen=True)
class BrowsePage:
    total: int
    ids: tuple[str, ...]


@dataclass(frozen=True)
class SearchPage:
    total: int
    hits: tuple[SearchHit, ...]


@dataclass(frozen=True)
class RelatedGroup:
    tag: GeneTag
    ids: tuple[str, ...]


@dataclass(frozen=True)
class GeneIndex:
    tag_postings: dict[GeneTag, tuple[str, ...]] = field(default_factory=dict)
    token_postings: dict[str, dict[str, int]] = field(default_factory=dict)
    id_order: tuple[str, ...] = ()


_CJK_RANGES = ((0x3400, 0x4DBF), (0x4E00, 0x9FFF), (0xF900, 0xFAFF))


def _is_cjk(ch: str) -> bool:
    cp = ord(ch)
    return any(lo <= cp <= hi for lo, hi in _CJK_RANGES)


def tokenize(text: str) -> list[str]:
    """Lowercase, split on non-alphanumeric runs; inside multi-character
    tokens each CJK codepoint is additionally emitted on its own so that
    single-character queries match compound words."""
    words = []
    current: list[str] = []
    for ch in text.lower():
        if ch.isalnum():
            current.append(ch)
        elif current:
            words.append("".join(current))
            current = []
    if current:
        words.append("".join(current))
    tokens = []
    for word in words:
        tokens.append(word)
        if len(word) > 1:
            tokens.extend(ch for ch in word if _is_cjk(ch))
    return tokens


def record_tags(record: CostumeRecord) -> list[GeneTag]:
    """The surface tags a record carries, in taxonomy order."""
    carried = {
        TagCategory.Pattern: {p.cls.value for p in record.surface.patterns},
        TagCategory.Material: {m.value for m in record.surface.materials},
        TagCategory.Form: {f.value for f in record.surface.forms},
        TagCategory.Color: (
            {record.surface.color_profile.perceptual_class.value}
            if record.surface.color_profile
            else set()
        ),
    }
    tags = []
    for cat in TagCategory:
        for value in taxonomy(cat.value):
            if value in carried[cat]:
                tags.append(GeneTag(cat, value))
    return tags


def _record_token_text(record: CostumeRecord) -> list[str]:
    parts = [record.title, record.ethnic_group]
    if record.region:
        parts.append(record.region)
    parts.extend(p.motif for p in record.surface.patterns if p.motif)
    parts.extend(tag.value for tag in record_tags(record))
    return parts


def build_index(records: list[CostumeRecord]) -> GeneIndex:
    """Invert the corpus; deterministic for a fixed record list."""
    seen = set()
    for r in records:
        if r.id in seen:
            raise DuplicateIdError(f"duplicate costume id: {r.id!r}")
        seen.add(r.id)

    tag_ids: dict[GeneTag, list[str]] = {}
    token_postings: dict[str, dict[str, int]] = {}
    for record in records:
        for tag in record_tags(record):
            tag_ids.setdefault(tag, []).append(record.id)
        for part in _record_token_text(record):
            for token in tokenize(part):
                token_postings.setdefault(token, {})
                token_postings[token][record.id] = (
                    token_postings[token].get(record.id, 0) + 1
                )
    return GeneIndex(
        tag_postings={tag: tuple(sorted(ids)) for tag, ids in tag_ids.items()},
        token_postings=token_postings,
        id_order=tuple(sorted(seen)),
    )


def browse_by_tag(index: GeneIndex, tag: GeneTag, page: PageRequest = PageRequest()) -> BrowsePage:
    """All costumes carrying a tag, id-ascending, paged."""
    ids = list(index.tag_postings.get(tag, ()))
    return BrowsePage(total=len(ids), ids=tuple(page.slice(ids)))


def search_keyword(index: GeneIndex, query: str, page: PageRequest = PageRequest()) -> SearchPage:
    """AND keyword search scored by summed term frequency."""
    tokens = list(dict.fromkeys(tokenize(query)))
    if not tokens:
        raise EmptyQueryError("query has no searchable tokens")
    scores: dict[str, int] | None = None
    for token in tokens:
        posting = index.token_postings.get(token, {})
        if scores is None:
            scores = dict(posting)
        else:
            scores = {
                cid: acc + posting[cid]
                for cid, acc in scores.items()
                if cid in posting
            }
        if not scores:
            break
    ranked = sorted((scores or {}).items(), key=lambda kv: (-kv[1], kv[0]))
    hits = [SearchHit(costume_id=cid, score=s) for cid, s in ranked]
    return SearchPage(total=len(hits), hits=tuple(page.slice(hits)))


def related_costumes(
    index: GeneIndex, costume_id: str, category: TagCategory
) -> list[RelatedGroup]:
    """The from-point-to-surface hop: for each tag of the category this
    costume carries, every other costume sharing it."""
    if costume_id not in index.id_order:
        raise UnknownIdError(f"unknown costume id: {costume_id!r}")
    groups = []
    for value in taxonomy(category.value):
        tag = GeneTag(category, value)
        posting = index.tag_postings.get(tag, ())
        if costume_id in posting:
            groups.append(
                RelatedGroup(
                    tag=tag, ids=tuple(cid for cid in posting if cid != costume_id)
                )
            )
    return groups
