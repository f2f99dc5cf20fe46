/** Small DOM helpers; no framework, no virtual anything. */

import { ApiError } from "./api.js";

type Child = Node | string;

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  children: Child[] = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  for (const child of children) {
    node.append(typeof child === "string" ? document.createTextNode(child) : child);
  }
  return node;
}

export function clear(container: HTMLElement): void {
  while (container.firstChild) container.removeChild(container.firstChild);
}

/** Mark a container stale while its data refetches. */
export async function withLoading<T>(
  container: HTMLElement,
  work: () => Promise<T>,
): Promise<T> {
  container.classList.add("loading");
  try {
    return await work();
  } finally {
    container.classList.remove("loading");
  }
}

export function errorBanner(err: unknown): HTMLElement {
  const code = err instanceof ApiError ? err.code : "unexpected_error";
  const message = err instanceof Error ? err.message : String(err);
  return el("div", { class: "error-banner", "data-code": code }, [
    `[${code}] ${message}`,
  ]);
}

export function swatch(hex: string | null, cls: string | null): HTMLElement {
  const box = el("span", { class: "swatch", title: cls ?? "" });
  if (hex) box.style.backgroundColor = hex;
  return box;
}
