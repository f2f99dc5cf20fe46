/** Tag directory: all four gene categories with per-tag counts, plus the
 * keyword search box. Clicking a tag opens its browse grid. */

import { api } from "../api.js";
import { clear, el, errorBanner, withLoading } from "../dom.js";

const CATEGORIES = ["Pattern", "Color", "Material", "Form"];

export async function renderTagDirectory(container: HTMLElement): Promise<void> {
  await withLoading(container, async () => {
    try {
      const responses = await Promise.all(CATEGORIES.map((c) => api.tags(c)));
      clear(container);
      container.append(el("h2", {}, ["Explore by gene"]));

      const form = el("form", { class: "search-box" }, [
        el("input", {
          type: "search",
          name: "q",
          placeholder: "Search costumes, groups, genes…",
          "aria-label": "keyword search",
        }),
        el("button", { type: "submit" }, ["Search"]),
      ]);
      form.addEventListener("submit", (event) => {
        event.preventDefault();
        const input = form.querySelector("input") as HTMLInputElement;
        if (input.value.trim()) {
          location.hash = `#/search?q=${encodeURIComponent(input.value.trim())}`;
        }
      });
      container.append(form);

      for (const response of responses) {
        const section = el("section", {
          class: "tag-category",
          "data-category": response.category,
        });
        section.append(el("h3", {}, [response.category]));
        const list = el("ul", { class: "tag-list" });
        for (const tag of response.tags) {
          const link = el(
            "a",
            {
              href: `#/browse?tag=${encodeURIComponent(`${response.category}:${tag.value}`)}`,
              class: "tag",
              "data-tag": `${response.category}:${tag.value}`,
              "data-count": String(tag.count),
            },
            [`${tag.value} (${tag.count})`],
          );
          list.append(el("li", {}, [link]));
        }
        section.append(list);
        container.append(section);
      }
    } catch (err) {
      clear(container);
      container.append(errorBanner(err));
    }
  });
}
