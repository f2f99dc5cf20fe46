/** Paged grids: tag browse and keyword search results, rendered exactly in
 * API order. */

import { api } from "../api.js";
import { clear, el, errorBanner, withLoading } from "../dom.js";
import { costumeCard, grid, hitCard } from "./cards.js";

const PAGE_SIZE = 20;

function pager(page: number, total: number, hrefFor: (page: number) => string): HTMLElement {
  const pages = Math.max(1, Math.ceil(total / PAGE_SIZE));
  const nav = el("nav", { class: "pager" });
  if (page > 1) nav.append(el("a", { href: hrefFor(page - 1) }, ["← previous"]));
  nav.append(el("span", {}, [` page ${page} / ${pages} `]));
  if (page < pages) nav.append(el("a", { href: hrefFor(page + 1) }, ["next →"]));
  return nav;
}

export async function renderBrowse(
  container: HTMLElement,
  tag: string,
  page: number,
): Promise<void> {
  await withLoading(container, async () => {
    try {
      const response = await api.browse(tag, page, PAGE_SIZE);
      clear(container);
      container.append(el("h2", {}, [`Tag ${tag}`]));
      container.append(
        el("p", { class: "total", "data-total": String(response.total) }, [
          `${response.total} costumes`,
        ]),
      );
      container.append(grid(response.items.map(costumeCard)));
      container.append(
        pager(page, response.total, (p) => `#/browse?tag=${encodeURIComponent(tag)}&page=${p}`),
      );
    } catch (err) {
      clear(container);
      container.append(errorBanner(err));
    }
  });
}

export async function renderSearch(
  container: HTMLElement,
  query: string,
  page: number,
): Promise<void> {
  await withLoading(container, async () => {
    try {
      const response = await api.search(query, page, PAGE_SIZE);
      clear(container);
      container.append(el("h2", {}, [`Search “${query}”`]));
      container.append(
        el("p", { class: "total", "data-total": String(response.total) }, [
          `${response.total} matches`,
        ]),
      );
      container.append(grid(response.hits.map(hitCard)));
      container.append(
        pager(page, response.total, (p) => `#/search?q=${encodeURIComponent(query)}&page=${p}`),
      );
    } catch (err) {
      clear(container);
      container.append(errorBanner(err));
    }
  });
}
