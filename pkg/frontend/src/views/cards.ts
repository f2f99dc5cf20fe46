/** Costume card grid shared by home, browse, and search results. */

import type { CostumeSummary, SearchHit } from "../api.js";
import { el, swatch } from "../dom.js";

export function costumeCard(item: CostumeSummary): HTMLElement {
  return el("a", { class: "card", href: `#/costume/${item.id}`, "data-id": item.id }, [
    swatch(item.dominant_hex, item.perceptual_class),
    el("h3", {}, [item.title]),
    el("p", { class: "card-meta" }, [
      item.ethnic_group + (item.region ? ` · ${item.region}` : ""),
    ]),
    el("p", { class: "card-tags" }, [item.tags.join("  ")]),
  ]);
}

export function hitCard(hit: SearchHit): HTMLElement {
  const card = costumeCard({ ...hit, id: hit.costume_id });
  card.append(el("span", { class: "score", "data-score": String(hit.score) }, [
    `score ${hit.score}`,
  ]));
  return card;
}

export function grid(children: HTMLElement[]): HTMLElement {
  return el("div", { class: "grid" }, children);
}
