"""Story/image generation providers.

The platform talks to generation models through one narrow interface:
a request carrying the assembled prompts, the user's seed, and the anchor
strings the story must keep, and a response carrying the story and an
optional image descriptor. The bundled mock provider is fully deterministic
and embeds every anchor verbatim, which is what makes the co-creation flow
testable offline; the remote adapter speaks the same shape over HTTP and is
configured (endpoint, credential) at deployment time only.
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass, field

from .rng import SplitMix64

DEFAULT_MAX_LENGTH = 2000
DEFAULT_TIMEOUT_SECONDS = 30.0
CREDENTIAL_ENV_VAR = "GENE_ATLAS_PROVIDER_KEY"


class ProviderTimeout(Exception):
    pass


class ProviderRefusal(Exception):
    def __init__(self, reason: str) -> None:
        self.reason = reason
        super().__init__(reason)


@dataclass(frozen=True)
class ProviderRequest:
    story_prompt: str
    image_prompt: str
    seed: int
    max_length: int = DEFAULT_MAX_LENGTH
    # Anchor strings the story must carry verbatim (title, concept display
    # name, narrative excerpt). The wire protocol does not transmit these;
    # they exist so in-process providers can weave them in.
    anchors: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class ProviderResponse:
    story: str
    image_descriptor: str | None = None
    refusal_reason: str | None = None


_OPENERS = (
    "In the quiet hours before the festival, {title} waited on its wooden stand.",
    "Elders say that {title} was first stitched beneath a waning moon.",
    "The story of {title} begins with a single thread dyed at dawn.",
    "No one remembers the first hands that shaped {title}, only what it taught them.",
    "When the valley mist lifted, {title} caught the morning light.",
    "A traveler once traded three songs for a single glimpse of {title}.",
    "Every stitch of {title} holds a promise made long ago.",
    "Children of the village learned to read the seasons in {title}.",
)

_CONTEXT_LINES = (
    "Those who keep the old ways still tell it plainly: {excerpt}",
    "The record of the garment carries this memory: {excerpt}",
    "Its keepers explain the custom in their own words: {excerpt}",
    "One passage of its history is recited at every gathering: {excerpt}",
    "The loom-song that accompanies it goes back to this: {excerpt}",
    "Ask any weaver why, and the answer is the same: {excerpt}",
    "What the garment means is written into its use: {excerpt}",
    "The account handed down with it has not changed: {excerpt}",
)

_VALUE_LINES = (
    "Through it all runs the value of {concept}, steady as the warp beneath the weft.",
    "In this, the community recognizes {concept} made visible.",
    "To wear it is to carry {concept} across another generation.",
    "The pattern speaks, and what it speaks of is {concept}.",
    "Here {concept} is not an idea but a practice, renewed each wearing.",
    "So the cloth becomes a vessel for {concept}.",
    "And always, beneath color and thread, {concept} endures.",
    "What the garment guards most closely is {concept}.",
)

_CLOSERS = (
    "When the {adj} {noun} fades, the costume remains, and the story with it.",
    "The {adj} {noun} passes; the garment keeps its counsel.",
    "Under a {adj} {noun}, the next wearer will add a stitch of their own.",
    "And so it is folded away until the {adj} {noun} calls it out again.",
    "The {adj} {noun} turns, and the cloth turns with it.",
    "Somewhere a {adj} {noun} waits for the costume's next appearance.",
    "Long after the {adj} {noun}, these threads will still hold their meaning.",
    "The tale ends where the {adj} {noun} begins, ready to be told again.",
)

_ADJECTIVES = (
    "crimson", "silver", "patient", "restless", "festival", "winter",
    "river", "mountain", "lantern", "harvest", "migrating", "embroidered",
    "whispering", "ancestral", "bright", "weathered",
)

_NOUNS = (
    "moon", "market", "procession", "season", "drumbeat", "bonfire",
    "snowfall", "caravan", "courtyard", "loom", "festival", "river-crossing",
    "song", "threshold", "horizon", "dawn",
)


def _narrative_excerpt(anchors: dict[str, str], limit: int = 80) -> str:
    narrative = anchors.get("middle_narrative", "")
    return narrative[:limit]


class MockProvider:
    """Seed-deterministic story generator for offline runs and tests.

    A splitmix64 stream seeded by the request seed picks one skeleton from
    each sentence bank; the anchors (title, concept, narrative excerpt) are
    substituted verbatim, so scaffold validation passes by construction.
    """

    provider_id = "mock"

    def generate(self, request: ProviderRequest) -> ProviderResponse:
        rng = SplitMix64(request.seed)
        title = request.anchors.get("title", "the costume")
        concept = request.anchors.get("inner_concept", "heritage")
        excerpt = _narrative_excerpt(request.anchors)
        sentences = [
            rng.choice(_OPENERS).format(title=title),
            rng.choice(_CONTEXT_LINES).format(excerpt=excerpt),
            rng.choice(_VALUE_LINES).format(concept=concept),
            rng.choice(_CLOSERS).format(
                adj=rng.choice(_ADJECTIVES), noun=rng.choice(_NOUNS)
            ),
        ]
        story = " ".join(sentences)
        digest = hashlib.sha256(request.image_prompt.encode("utf-8")).hexdigest()
        return ProviderResponse(story=story, image_descriptor=f"mock-image:{digest[:16]}")


class RemoteProvider:
    """HTTP adapter for a hosted generation endpoint.

    POSTs {story_prompt, image_prompt, seed, max_length} as JSON and expects
    {story, image_descriptor?, refusal_reason?} back. The credential is read
    from the environment, never from configuration files.
    """

    provider_id = "remote"

    def __init__(self, endpoint: str, timeout: float = DEFAULT_TIMEOUT_SECONDS) -> None:
        self.endpoint = endpoint
        self.timeout = timeout

    def generate(self, request: ProviderRequest) -> ProviderResponse:
        import requests

        headers = {}
        credential = os.environ.get(CREDENTIAL_ENV_VAR)
        if credential:
            headers["Authorization"] = f"Bearer {credential}"
        body = {
            "story_prompt": request.story_prompt,
            "image_prompt": request.image_prompt,
            "seed": request.seed,
            "max_length": request.max_length,
        }
        try:
            resp = requests.post(
                self.endpoint, json=body, headers=headers, timeout=self.timeout
            )
            resp.raise_for_status()
            payload = resp.json()
        except (requests.Timeout, requests.ConnectionError) as exc:
            raise ProviderTimeout(f"provider unreachable: {exc}") from exc
        except requests.RequestException as exc:
            raise ProviderRefusal(f"provider error: {exc}") from exc
        return ProviderResponse(
            story=payload.get("story", ""),
            image_descriptor=payload.get("image_descriptor"),
            refusal_reason=payload.get("refusal_reason"),
        )


def get_provider(name: str, endpoint: str | None = None):
    """Resolve a registered provider by id."""
    if name == "mock":
        return MockProvider()
    if name == "remote":
        if not endpoint:
            raise ValueError("remote provider requires an endpoint")
        return RemoteProvider(endpoint)
    raise ValueError(f"unknown provider: {name!r}")
