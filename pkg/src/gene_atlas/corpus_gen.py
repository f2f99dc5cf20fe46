"""Deterministic synthetic fixture corpus.

The real museum collection is not redistributable, so tests and demos run on
a generated stand-in: every field is drawn from the closed taxonomies with a
seeded splitmix64 stream, narratives come from a fixed per-dimension phrase
bank, and color profiles are synthesized from a named palette so the profile
invariants hold without any image files. Fixed (n, seed) reproduces the
corpus byte for byte, and a final injection pass guarantees every surface
tag appears on at least one costume.
"""

from __future__ import annotations

from dataclasses import replace

from .colors import ColorCluster, ColorProfile, classify_perceptual, rgb_to_hex
from .records import CostumeRecord, MiddleContext, PatternGene, SurfaceGenes
from .rng import SplitMix64
from .store import Corpus
from .vocab import (
    FormClass,
    INNER_CONCEPT_NAMES,
    MaterialClass,
    MiddleDimension,
    PatternClass,
    all_tags,
    taxonomy,
)

ETHNIC_GROUPS = (
    "Miao", "Hezhen", "Dai", "Yi", "Zhuang", "Dong", "Yao", "Bai",
    "Tujia", "Buyi", "Hani", "Li", "Wa", "Shui", "Qiang", "Naxi",
)

REGIONS = (
    "Guizhou", "Yunnan", "Guangxi", "Hunan", "Hainan",
    "Sichuan", "Heilongjiang", "Gansu", "Qinghai",
)

MOTIFS = (
    "butterfly", "dragon", "fish", "pomegranate", "wheat ear", "cloud",
    "blooming flower", "phoenix", "songbird", "river wave", "mountain ridge",
    "eight-point star",
)

TITLE_ADJECTIVES = (
    "indigo", "brick-red", "silver-trimmed", "festival", "ceremonial",
    "everyday", "bridal", "pleated", "quilted", "batik",
)

FORM_NOUNS = {
    FormClass.Top: "jacket",
    FormClass.Pants: "trousers",
    FormClass.Skirt: "skirt",
    FormClass.Shoes: "shoes",
    FormClass.Hat: "headdress",
    FormClass.Accessory: "sash",
}

# Named palette, grouped by the perceptual class its entries classify to.
PALETTE = {
    "Warm": ((178, 34, 34), (200, 90, 30), (218, 165, 32), (153, 50, 60), (255, 99, 71)),
    "Cool": ((25, 25, 112), (0, 100, 0), (70, 130, 180), (72, 61, 139), (0, 139, 139)),
    "Neutral": ((128, 128, 128), (105, 105, 105), (30, 30, 30), (190, 190, 190)),
}

# Exact-sum proportion splits for 1-3 synthetic clusters.
PROPORTION_SPLITS = ((1.0,), (0.7, 0.3), (0.65, 0.35), (0.6, 0.3, 0.1), (0.5, 0.3, 0.2))

NARRATIVE_BANK: dict[MiddleDimension, tuple[str, ...]] = {
    MiddleDimension.ReligiousBeliefs: (
        "Before the spring rites the {group} elders purify this garment with "
        "cedar smoke, for the {motif} motif is believed to carry prayers to "
        "the ancestors.",
        "The {group} regard the {motif} design as a protective charm, and the "
        "garment is worn when offerings are laid at the village shrine.",
        "When a {group} household honors its ancestral altar, this piece is "
        "brought out so the spirits recognize their descendants.",
        "Shamans of the {group} say the stitched {motif} guards the wearer's "
        "soul during night ceremonies.",
    ),
    MiddleDimension.FestiveCeremonies: (
        "At the new-year gathering every {group} family displays this garment, "
        "and the {motif} pattern is read as a wish for good fortune.",
        "During the flower-mountain festival young {group} wearers dance in "
        "it until the drums stop at dawn.",
        "It is the centerpiece of {group} wedding processions, where the "
        "{motif} embroidery announces the joining of two houses.",
        "On harvest-celebration days the {group} pair it with silver "
        "ornaments that ring with every step of the circle dance.",
    ),
    MiddleDimension.SocialStructures: (
        "Among the {group}, only the eldest branch of a clan may add the "
        "{motif} border, so the garment quietly records family rank.",
        "The cut of the collar tells other {group} villages which lineage the "
        "wearer belongs to.",
        "A {group} bride receives this piece from her mother's brother, "
        "binding the two households for a generation.",
        "Village mediators of the {group} wear it when settling disputes, a "
        "sign that their word carries the clan's authority.",
    ),
    MiddleDimension.LivelihoodActivities: (
        "The {group} cut the sleeves short so fishers can haul nets without "
        "soaking the cloth.",
        "Herders of the {group} line it against mountain wind, and the "
        "{motif} pattern marks flocks' summer routes.",
        "Terrace farmers of the {group} dye it with mud from the paddies, "
        "which keeps insects away during transplanting.",
        "Its deep inner pockets let {group} traders carry seed and silver on "
        "market journeys.",
    ),
    MiddleDimension.ArtsEntertainment: (
        "Storytellers of the {group} spread this garment as a backdrop, "
        "pointing to the {motif} figures as each episode unfolds.",
        "The {group} antiphonal singers wear it at song contests, and its "
        "swaying fringe keeps time with the verses.",
        "Each {motif} panel is embroidered to match a tune in the {group} "
        "reed-pipe repertoire.",
        "During lantern plays the {group} performers flash its bright lining "
        "to mark a change of scene.",
    ),
    MiddleDimension.EnvironmentalAdaptation: (
        "Woven tight against the {group} highlands' fog, the cloth sheds "
        "mist before it can soak through.",
        "The {group} of the river plains bleach it pale to bear the long "
        "summer sun.",
        "Layered felt under the shoulders lets {group} herders sleep warm "
        "through mountain nights.",
        "Its split hem was the {group} answer to fording streams on the way "
        "to terraced fields.",
    ),
}

SOURCE_TEXT_TEMPLATES = (
    "Museum catalogue entry: a {title} collected from a {group} community"
    "{region_clause}. The piece is documented as {materials} work and enters "
    "the register with full provenance.",
    "Accession note: {title}, attributed to {group} makers{region_clause}; "
    "the description records {materials} construction and ceremonial use.",
)


def _pick_distinct(rng: SplitMix64, items, low: int, high: int) -> list:
    count = low + rng.next_below(high - low + 1)
    return rng.sample(list(items), count)


def _synth_profile(rng: SplitMix64) -> ColorProfile:
    class_name = rng.choice(("Warm", "Cool", "Neutral"))
    return _profile_for_class(rng, class_name)


def _profile_for_class(rng: SplitMix64, class_name: str) -> ColorProfile:
    dominant = rng.choice(PALETTE[class_name])
    split = rng.choice(PROPORTION_SPLITS)
    others_pool = [c for group in PALETTE.values() for c in group if c != dominant]
    clusters = [ColorCluster(tuple(float(x) for x in dominant), split[0])]
    for proportion in split[1:]:
        other = others_pool.pop(rng.next_below(len(others_pool)))
        clusters.append(ColorCluster(tuple(float(x) for x in other), proportion))
    return ColorProfile(
        clusters=tuple(clusters),
        dominant_hex=rgb_to_hex(dominant),
        perceptual_class=classify_perceptual(dominant),
    )


def _make_record(rng: SplitMix64, index: int) -> CostumeRecord:
    group = rng.choice(ETHNIC_GROUPS)
    region = rng.choice(REGIONS) if rng.next_float() < 0.7 else None

    pattern_classes = _pick_distinct(rng, taxonomy("Pattern"), 0, 2)
    patterns = set()
    for cls in pattern_classes:
        motif = rng.choice(MOTIFS) if rng.next_float() < 0.6 else None
        patterns.add(PatternGene(PatternClass(cls), motif))
    materials = {
        MaterialClass(m) for m in _pick_distinct(rng, taxonomy("Material"), 1, 3)
    }
    forms = {FormClass(f) for f in _pick_distinct(rng, taxonomy("Form"), 1, 2)}

    first_form = sorted(forms, key=lambda f: taxonomy("Form").index(f.value))[0]
    title = f"{rng.choice(TITLE_ADJECTIVES)} {group} {FORM_NOUNS[first_form]}"

    motif_word = next((p.motif for p in sorted(patterns, key=str) if p.motif), "cloud")
    middle = []
    for dim_name in _pick_distinct(rng, taxonomy("middle"), 1, 4):
        dim = MiddleDimension(dim_name)
        narrative = rng.choice(NARRATIVE_BANK[dim]).format(group=group, motif=motif_word)
        middle.append(MiddleContext(dim, narrative))

    inner = frozenset(_pick_distinct(rng, INNER_CONCEPT_NAMES, 1, 3))

    materials_text = ", ".join(sorted(m.value.lower() for m in materials))
    region_clause = f" in {region}" if region else ""
    source_text = rng.choice(SOURCE_TEXT_TEMPLATES).format(
        title=title, group=group, region_clause=region_clause, materials=materials_text
    )

    return CostumeRecord(
        id=f"costume-{index:04d}",
        title=title,
        ethnic_group=group,
        region=region,
        image_refs=(),
        surface=SurfaceGenes(
            patterns=frozenset(patterns),
            materials=frozenset(materials),
            forms=frozenset(forms),
            color_profile=_synth_profile(rng),
        ),
        middle=tuple(middle),
        inner=inner,
        source_text=source_text,
    )


def _inject_missing_tags(records: list[CostumeRecord], rng: SplitMix64) -> list[CostumeRecord]:
    """Ensure every surface tag occurs at least once (uniform draws can miss
    rare values on small corpora)."""
    from .explore import record_tags

    carried = set()
    for record in records:
        carried.update(record_tags(record))
    missing = [tag for tag in all_tags() if tag not in carried]
    for slot, tag in enumerate(missing):
        record = records[slot % len(records)]
        surface = record.surface
        if tag.category.value == "Pattern":
            surface = replace(
                surface,
                patterns=surface.patterns | {PatternGene(PatternClass(tag.value))},
            )
        elif tag.category.value == "Material":
            surface = replace(
                surface, materials=surface.materials | {MaterialClass(tag.value)}
            )
        elif tag.category.value == "Form":
            surface = replace(surface, forms=surface.forms | {FormClass(tag.value)})
        else:
            surface = replace(
                surface, color_profile=_profile_for_class(rng, tag.value)
            )
        records[slot % len(records)] = replace(record, surface=surface)
    return records


def generate_corpus(n: int, seed: int) -> Corpus:
    """n records, fully deterministic in (n, seed)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = SplitMix64(seed)
    records = [_make_record(rng, i + 1) for i in range(n)]
    records = _inject_missing_tags(records, rng)
    return Corpus(records={r.id: r for r in records}, version=1)
