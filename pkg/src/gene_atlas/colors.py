"""Dominant-color extraction for costume images.

Clusters image pixels in RGB with seeded k-means, reports the palette with
per-cluster proportions, the dominant hex code, and the perceptual
cool/warm/neutral class of the dominant centroid. Everything here is a pure
function of its inputs: same pixels, same parameters, same profile.
"""

from __future__ import annotations

import colorsys
import math
from dataclasses import dataclass

import numpy as np

from .rng import SplitMix64
from .vocab import ColorClass

# Classification thresholds. Hues in [0, HUE_WARM_MAX) and [HUE_WRAP_MIN, 360)
# read as warm; low saturation or low value reads as neutral regardless of hue.
HUE_WARM_MAX = 90.0
HUE_WRAP_MIN = 330.0
NEUTRAL_SATURATION = 0.15
NEUTRAL_VALUE = 0.15

# Uniform-stride downsampling bound applied before clustering a full image.
MAX_SAMPLED_PIXELS = 10_000


@dataclass(frozen=True)
class ColorCluster:
    centroid: tuple[float, float, float]
    proportion: float


@dataclass(frozen=True)
class ColorParams:
    k: int = 5
    seed: int = 0
    max_iter: int = 50
    tol: float = 1e-3


@dataclass(frozen=True)
class ColorProfile:
    clusters: tuple[ColorCluster, ...]
    dominant_hex: str
    perceptual_class: ColorClass

    def to_document(self) -> dict:
        return {
            "clusters": [
                {"centroid": list(c.centroid), "proportion": c.proportion}
                for c in self.clusters
            ],
            "dominant_hex": self.dominant_hex,
            "perceptual_class": self.perceptual_class.value,
        }

    @classmethod
    def from_document(cls, doc: dict) -> "ColorProfile":
        clusters = tuple(
            ColorCluster(tuple(float(x) for x in c["centroid"]), float(c["proportion"]))
            for c in doc["clusters"]
        )
        return cls(
            clusters=clusters,
            dominant_hex=doc["dominant_hex"],
            perceptual_class=ColorClass(doc["perceptual_class"]),
        )


def _as_points(pixels) -> np.ndarray:
    pts = np.asarray(pixels, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise ValueError("pixels must be an (n, 3) RGB sequence")
    if pts.shape[0] == 0:
        raise ValueError("pixels must be non-empty")
    if pts.min() < 0 or pts.max() > 255:
        raise ValueError("pixel channels must lie in [0, 255]")
    return pts


def _plus_plus_init(pts: np.ndarray, k: int, rng: SplitMix64) -> np.ndarray:
    """k-means++ seeding driven by the splitmix64 stream."""
    n = pts.shape[0]
    centroids = np.empty((k, 3), dtype=np.float64)
    centroids[0] = pts[rng.next_below(n)]
    d2 = ((pts - centroids[0]) ** 2).sum(axis=1)
    for j in range(1, k):
        total = float(d2.sum())
        if total <= 0.0:
            idx = rng.next_below(n)
        else:
            r = rng.next_float() * total
            idx = int(np.searchsorted(np.cumsum(d2), r, side="right"))
            idx = min(idx, n - 1)
        centroids[j] = pts[idx]
        d2 = np.minimum(d2, ((pts - centroids[j]) ** 2).sum(axis=1))
    return centroids


def kmeans_palette(
    pixels,
    k: int = 5,
    seed: int = 0,
    max_iter: int = 50,
    tol: float = 1e-3,
) -> list[ColorCluster]:
    """Cluster RGB pixels into at most ``k`` colors.

    Assignment is by squared Euclidean distance (ties to the lowest cluster
    index); iteration stops when the largest centroid movement drops below
    ``tol`` or after ``max_iter`` rounds. A cluster that empties out is
    repaired by moving the point currently farthest from its centroid into
    it; clusters still empty at the end are dropped, so proportions always
    partition the input exactly.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    pts = _as_points(pixels)
    n = pts.shape[0]
    k_eff = min(k, n)
    rng = SplitMix64(seed)
    centroids = _plus_plus_init(pts, k_eff, rng)

    assign = np.zeros(n, dtype=np.int64)
    for _ in range(max_iter):
        dists = ((pts[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        assign = dists.argmin(axis=1)
        point_d = dists[np.arange(n), assign]
        for j in range(k_eff):
            if not (assign == j).any():
                far = int(point_d.argmax())
                # Repair only helps when there is genuine spread to steal.
                if point_d[far] > 0.0:
                    assign[far] = j
                    point_d[far] = 0.0
        moved = 0.0
        new_centroids = centroids.copy()
        for j in range(k_eff):
            members = pts[assign == j]
            if members.shape[0] == 0:
                continue
            new_centroids[j] = members.mean(axis=0)
            moved = max(moved, float(np.linalg.norm(new_centroids[j] - centroids[j])))
        centroids = new_centroids
        if moved < tol:
            break

    # Final partition against the settled centroids.
    dists = ((pts[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    assign = dists.argmin(axis=1)
    clusters = []
    for j in range(k_eff):
        members = pts[assign == j]
        if members.shape[0] == 0:
            continue
        centroid = members.mean(axis=0)
        clusters.append(
            ColorCluster(
                centroid=(float(centroid[0]), float(centroid[1]), float(centroid[2])),
                proportion=members.shape[0] / n,
            )
        )
    return clusters


def rgb_to_hex(c) -> str:
    """Round-half-up each channel and format as uppercase #RRGGBB."""
    r, g, b = (float(x) for x in c)
    for x in (r, g, b):
        if x < 0 or x > 255:
            raise ValueError(f"channel out of range [0, 255]: {x}")
    return "#{:02X}{:02X}{:02X}".format(
        int(math.floor(r + 0.5)), int(math.floor(g + 0.5)), int(math.floor(b + 0.5))
    )


def classify_perceptual(c) -> ColorClass:
    """Cool/warm/neutral call for one RGB color.

    Neutral when saturation or value falls below the neutral thresholds;
    otherwise warm for hues in [0, 90) and [330, 360), cool for the rest.
    """
    r, g, b = (float(x) for x in c)
    for x in (r, g, b):
        if x < 0 or x > 255:
            raise ValueError(f"channel out of range [0, 255]: {x}")
    h, s, v = colorsys.rgb_to_hsv(r / 255.0, g / 255.0, b / 255.0)
    if s < NEUTRAL_SATURATION or v < NEUTRAL_VALUE:
        return ColorClass.Neutral
    hue = h * 360.0
    if hue < HUE_WARM_MAX or hue >= HUE_WRAP_MIN:
        return ColorClass.Warm
    return ColorClass.Cool


def dominant_cluster(clusters: list[ColorCluster]) -> ColorCluster:
    """The largest-proportion cluster; proportion ties break toward the
    lexicographically smallest hex of the rounded centroid."""
    if not clusters:
        raise ValueError("clusters must be non-empty")
    return min(clusters, key=lambda c: (-c.proportion, rgb_to_hex(c.centroid)))


def downsample(pixels, limit: int = MAX_SAMPLED_PIXELS):
    """Uniform-stride subsample bounding the pixel count by ``limit``."""
    pts = _as_points(pixels)
    n = pts.shape[0]
    if n <= limit:
        return pts
    stride = math.ceil(n / limit)
    return pts[::stride]


def extract_profile(pixels, params: ColorParams = ColorParams()) -> ColorProfile:
    """Full pipeline: downsample, cluster, pick dominant, classify."""
    pts = downsample(pixels)
    clusters = kmeans_palette(
        pts, k=params.k, seed=params.seed, max_iter=params.max_iter, tol=params.tol
    )
    dom = dominant_cluster(clusters)
    return ColorProfile(
        clusters=tuple(clusters),
        dominant_hex=rgb_to_hex(dom.centroid),
        perceptual_class=classify_perceptual(dom.centroid),
    )


def read_image_rgb(path: str) -> np.ndarray:
    """Decode an image file into an (n, 3) uint8 RGB pixel array."""
    from PIL import Image, UnidentifiedImageError

    try:
        with Image.open(path) as img:
            rgb = img.convert("RGB")
            return np.asarray(rgb, dtype=np.uint8).reshape(-1, 3)
    except (UnidentifiedImageError, OSError) as exc:
        raise ImageDecodeError(f"cannot decode image {path!r}: {exc}") from exc


class ImageDecodeError(ValueError):
    pass
