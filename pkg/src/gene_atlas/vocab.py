"""Closed vocabularies of the three-layer costume gene model.

Surface layer: pattern, color, material, form classes. Middle layer: six
socio-cultural context dimensions. Inner layer: twelve value concepts, each
fixed to one of three levels and shipped with its interpretive reference
texts (used verbatim as prompt anchors by the narrative engine).

All vocabularies are closed: validation rejects anything not listed here,
and ``taxonomy()`` is the single source of declaration order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum


class PatternClass(str, Enum):
    Geometric = "Geometric"
    Animal = "Animal"
    Plant = "Plant"


class ColorClass(str, Enum):
    Cool = "Cool"
    Warm = "Warm"
    Neutral = "Neutral"


class MaterialClass(str, Enum):
    Cloth = "Cloth"
    Silk = "Silk"
    Brocade = "Brocade"
    Satin = "Satin"
    Velvet = "Velvet"
    Gauze = "Gauze"
    Leather = "Leather"
    Metal = "Metal"
    # Ninth slot: anything outside the eight named weaves; carries a free-text
    # label on the record side.
    Other = "Other"


class FormClass(str, Enum):
    Top = "Top"
    Pants = "Pants"
    Skirt = "Skirt"
    Shoes = "Shoes"
    Hat = "Hat"
    Accessory = "Accessory"


class MiddleDimension(str, Enum):
    ReligiousBeliefs = "ReligiousBeliefs"
    FestiveCeremonies = "FestiveCeremonies"
    SocialStructures = "SocialStructures"
    LivelihoodActivities = "LivelihoodActivities"
    ArtsEntertainment = "ArtsEntertainment"
    EnvironmentalAdaptation = "EnvironmentalAdaptation"


class InnerLevel(str, Enum):
    State = "State"
    Societal = "Societal"
    Individual = "Individual"


class TagCategory(str, Enum):
    Pattern = "Pattern"
    Color = "Color"
    Material = "Material"
    Form = "Form"


@dataclass(frozen=True)
class InnerConcept:
    """One inner-layer value concept with its interpretive reference row."""

    name: str
    level: InnerLevel
    display_name: str
    expression: str
    connotation: str


# The twelve inner-layer concepts. ``expression`` describes how the value is
# expressed in costume; ``connotation`` its cultural meaning and contemporary
# relevance. Both texts are prompt anchors and must stay stable.
INNER_CONCEPTS: tuple[InnerConcept, ...] = (
    InnerConcept(
        name="Prosperity",
        level=InnerLevel.State,
        display_name="Prosperity",
        expression=(
            "The recurring use of patterns symbolizing fertility and abundance "
            "(e.g., pomegranates, fish, wheat ears), and the use of splendid "
            "materials in festive and wedding attire."
        ),
        connotation=(
            "Materializes the collective aspiration for life's continuity, "
            "abundant resources, and well-being. This universal pursuit inspires "
            "innovation in contemporary cultural industries."
        ),
    ),
    InnerConcept(
        name="Democracy",
        level=InnerLevel.State,
        display_name="Democracy",
        expression=(
            "Certain ceremonial garments worn by elders or community leaders may "
            "symbolize a tradition of collective deliberation and respect for "
            "members' rights."
        ),
        connotation=(
            "Reflects the inherent wisdom in community governance and social "
            "harmony. This provides insights into diverse forms of social "
            "organization and inspires modern approaches to participatory "
            "consensus-building."
        ),
    ),
    InnerConcept(
        name="Civility",
        level=InnerLevel.State,
        display_name="Civility",
        expression=(
            "Exquisite craftsmanship, complex narrative patterns, and strict "
            "dress codes for specific rituals all demonstrate a high regard for "
            "wisdom, skill, and behavioral propriety."
        ),
        connotation=(
            "Highlights the universal human respect for knowledge, skill, and "
            "decorum. This inspires a greater appreciation for the transmission "
            "of traditional crafts and mutual respect in cross-cultural "
            "communication."
        ),
    ),
    InnerConcept(
        name="Harmony",
        level=InnerLevel.State,
        display_name="Harmony",
        expression=(
            "The extensive use of natural materials, colors, and motifs (flora "
            "and fauna) embodies the philosophy of \"harmony between heaven and "
            "humanity\" and a reverence for nature."
        ),
        connotation=(
            "Emphasizes the valuable ecological wisdom inherent in many "
            "traditional cultures. In an era of global environmental challenges, "
            "this concept offers profound inspiration for sustainable design."
        ),
    ),
    InnerConcept(
        name="Freedom",
        level=InnerLevel.Societal,
        display_name="Freedom",
        expression=(
            "The structure of nomadic attire, often designed for ease of "
            "movement, reflects an adaptation to a migratory lifestyle and a "
            "yearning for physical and spiritual freedom."
        ),
        connotation=(
            "Reflects the human desire for vitality, mobility, and liberation of "
            "the spirit. This spirit encourages the exploration of the unknown "
            "and continues to inspire artistic and cultural expression."
        ),
    ),
    InnerConcept(
        name="Equality",
        level=InnerLevel.Societal,
        display_name="Equality",
        expression=(
            "Symbolic elements shared across different genders or social classes "
            "in ceremonial attire; patterns narrating stories of resistance "
            "against oppression."
        ),
        connotation=(
            "Expresses the pursuit of fairness and the inherent value of "
            "individuals within the community. These ideas contribute to the "
            "development of more inclusive societies today."
        ),
    ),
    InnerConcept(
        name="Justice",
        level=InnerLevel.Societal,
        display_name="Justice",
        expression=(
            "The solemn and symmetrical design of garments worn by law-keepers "
            "or ritual hosts may symbolize the authority and responsibility to "
            "uphold community norms and dispense fairness."
        ),
        connotation=(
            "Embodies the universal human need to establish and maintain a just "
            "order. Studying traditional norms helps us understand the formation "
            "of justice concepts in diverse cultural contexts."
        ),
    ),
    InnerConcept(
        name="RuleOfLaw",
        level=InnerLevel.Societal,
        display_name="Rule of Law",
        expression=(
            "The specific rules governing who wears what on which occasion is "
            "itself a form of social contract, reflecting a shared respect for "
            "communal order and established customs."
        ),
        connotation=(
            "Emphasizes the importance of abiding by agreements and respecting "
            "rules in social life. This consciousness is a cornerstone of social "
            "stability and cultural transmission."
        ),
    ),
    InnerConcept(
        name="CommunityGuardianship",
        level=InnerLevel.Individual,
        display_name="Community Guardianship",
        expression=(
            "Totemic patterns symbolizing a specific region or ethnic group; "
            "iconic garments that evoke collective emotion and are worn during "
            "significant community events."
        ),
        connotation=(
            "Reflects a deep emotional bond and sense of responsibility towards "
            "one's homeland and community. This identity is the foundation of "
            "cultural diversity and a spiritual tie that unifies a community."
        ),
    ),
    InnerConcept(
        name="Dedication",
        level=InnerLevel.Individual,
        display_name="Dedication",
        expression=(
            "The meticulous, time-consuming, and highly skilled craftsmanship "
            "involved in making a garment is itself a testament to the artisan's "
            "dedication, patience, and creative spirit."
        ),
        connotation=(
            "Showcases the universal virtue of creating value through diligent "
            "work and skill. This \"spirit of craftsmanship\" is a vital driving "
            "force for social and cultural development."
        ),
    ),
    InnerConcept(
        name="Integrity",
        level=InnerLevel.Individual,
        display_name="Integrity",
        expression=(
            "The simple, unadorned style of certain garments may symbolize an "
            "honest and upright character; the formality of attire worn for "
            "oaths or important agreements implies a high regard for "
            "trustworthiness."
        ),
        connotation=(
            "As the foundation of interpersonal relationships and social trust, "
            "integrity is a crucial virtue shared across cultures, especially "
            "vital for building harmonious communities in our complex modern "
            "world."
        ),
    ),
    InnerConcept(
        name="Friendliness",
        level=InnerLevel.Individual,
        display_name="Friendliness",
        expression=(
            "The vibrant colors and welcoming motifs (e.g., blooming flowers) of "
            "festive or ceremonial attire often convey signals of hospitality "
            "and inclusiveness."
        ),
        connotation=(
            "Embodies the universal human desire to establish friendly relations "
            "and foster emotional communication. This quality is essential for "
            "promoting cross-cultural understanding and cooperation."
        ),
    ),
)

INNER_CONCEPT_NAMES: tuple[str, ...] = tuple(c.name for c in INNER_CONCEPTS)
_CONCEPTS_BY_NAME = {c.name: c for c in INNER_CONCEPTS}

# Human-readable forms of the camel-case middle dimension values.
MIDDLE_DISPLAY_NAMES: dict[MiddleDimension, str] = {
    MiddleDimension.ReligiousBeliefs: "Religious Beliefs",
    MiddleDimension.FestiveCeremonies: "Festive Ceremonies",
    MiddleDimension.SocialStructures: "Social Structures",
    MiddleDimension.LivelihoodActivities: "Livelihood Activities",
    MiddleDimension.ArtsEntertainment: "Arts & Entertainment",
    MiddleDimension.EnvironmentalAdaptation: "Environmental Adaptation",
}


class UnknownNameError(KeyError):
    """A string fell outside a closed vocabulary."""


def inner_concept(name: str) -> InnerConcept:
    """Look up a concept by its vocabulary name; raises UnknownNameError."""
    try:
        return _CONCEPTS_BY_NAME[name]
    except KeyError:
        raise UnknownNameError(f"unknown inner concept: {name!r}") from None


def concept_level(name: str) -> InnerLevel:
    """The fixed level of one of the twelve inner concepts."""
    return inner_concept(name).level


_SURFACE_VOCABS: dict[TagCategory, type[Enum]] = {
    TagCategory.Pattern: PatternClass,
    TagCategory.Color: ColorClass,
    TagCategory.Material: MaterialClass,
    TagCategory.Form: FormClass,
}

_CATEGORY_ALIASES = {c.value.lower(): c.value for c in TagCategory}
_CATEGORY_ALIASES["middle"] = "middle"
_CATEGORY_ALIASES["inner"] = "inner"


def taxonomy(category: str) -> list[str]:
    """The full closed vocabulary for a category, in declaration order.

    ``category`` is one of Pattern/Color/Material/Form (case-insensitive) or
    the literals "middle" / "inner".
    """
    key = _CATEGORY_ALIASES.get(str(category).lower())
    if key is None:
        raise UnknownNameError(f"unknown category: {category!r}")
    if key == "middle":
        return [d.value for d in MiddleDimension]
    if key == "inner":
        return list(INNER_CONCEPT_NAMES)
    return [v.value for v in _SURFACE_VOCABS[TagCategory(key)]]


@dataclass(frozen=True, order=True)
class GeneTag:
    """A (category, value) pair; the unit of tag browse and traversal."""

    category: TagCategory
    value: str

    def __post_init__(self) -> None:
        if self.value not in taxonomy(self.category.value):
            raise UnknownNameError(
                f"unknown {self.category.value} value: {self.value!r}"
            )

    def __str__(self) -> str:
        return f"{self.category.value}:{self.value}"

    @classmethod
    def parse(cls, text: str) -> "GeneTag":
        """Parse "Category:Value" (category case-insensitive)."""
        cat, sep, value = text.partition(":")
        if not sep or not value:
            raise UnknownNameError(f"malformed tag (want Category:Value): {text!r}")
        key = _CATEGORY_ALIASES.get(cat.lower())
        if key is None or key in ("middle", "inner"):
            raise UnknownNameError(f"unknown tag category: {cat!r}")
        return cls(TagCategory(key), value)


def all_tags() -> list[GeneTag]:
    """Every legal surface tag, categories and values in declaration order."""
    tags = []
    for cat in TagCategory:
        for value in taxonomy(cat.value):
            tags.append(GeneTag(cat, value))
    return tags


def taxonomy_document() -> dict:
    """All vocabularies as one JSON-ready document.

    The web client renders its tag directory and selector lists from this
    document so the lists exist in exactly one place.
    """
    return {
        "categories": [c.value for c in TagCategory],
        "Pattern": taxonomy("Pattern"),
        "Color": taxonomy("Color"),
        "Material": taxonomy("Material"),
        "Form": taxonomy("Form"),
        "middle": [
            {"value": d.value, "display": MIDDLE_DISPLAY_NAMES[d]}
            for d in MiddleDimension
        ],
        "inner": [
            {
                "name": c.name,
                "display": c.display_name,
                "level": c.level.value,
                "expression": c.expression,
                "connotation": c.connotation,
            }
            for c in INNER_CONCEPTS
        ],
        "levels": [lv.value for lv in InnerLevel],
    }


def taxonomy_json() -> str:
    """The taxonomy document serialized UTF-8 with sorted keys."""
    return json.dumps(taxonomy_document(), ensure_ascii=False, sort_keys=True)
