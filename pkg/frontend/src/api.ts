/** Typed client for the gene-atlas HTTP API. All reads/writes go through
 * here; views render responses verbatim (no client-side re-sorting). */

let baseUrl = "";

/** Point the client at a non-origin server (used by tests). */
export function configure(base: string): void {
  baseUrl = base.replace(/\/$/, "");
}

export class ApiError extends Error {
  constructor(
    public readonly code: string,
    message: string,
    public readonly status: number,
  ) {
    super(message);
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  let response: Response;
  try {
    response = await fetch(`${baseUrl}${path}`, init);
  } catch (err) {
    throw new ApiError("network_error", String(err), 0);
  }
  const body = await response.json().catch(() => ({}));
  if (!response.ok) {
    const code = typeof body.code === "string" ? body.code : "http_error";
    const message = typeof body.message === "string" ? body.message : response.statusText;
    throw new ApiError(code, message, response.status);
  }
  return body as T;
}

function jsonInit(method: string, payload: unknown): RequestInit {
  return {
    method,
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(payload),
  };
}

// -- response shapes (the wire contract) ------------------------------------

export interface TagCount {
  value: string;
  count: number;
}

export interface TagsResponse {
  category: string;
  tags: TagCount[];
}

export interface CostumeSummary {
  id: string;
  title: string;
  ethnic_group: string;
  region: string | null;
  tags: string[];
  dominant_hex: string | null;
  perceptual_class: string | null;
}

export interface BrowseResponse {
  total: number;
  items: CostumeSummary[];
}

export interface SearchHit {
  costume_id: string;
  score: number;
  title: string;
  ethnic_group: string;
  region: string | null;
  tags: string[];
  dominant_hex: string | null;
  perceptual_class: string | null;
}

export interface SearchResponse {
  total: number;
  hits: SearchHit[];
}

export interface PatternEntry {
  class: string;
  motif: string | null;
}

export interface ColorProfileDoc {
  clusters: { centroid: number[]; proportion: number }[];
  dominant_hex: string;
  perceptual_class: string;
}

export interface RecordDoc {
  id: string;
  title: string;
  ethnic_group: string;
  region: string | null;
  image_refs: string[];
  surface: {
    patterns: PatternEntry[];
    materials: string[];
    forms: string[];
    color_profile: ColorProfileDoc | null;
  };
  middle: { dimension: string; narrative: string }[];
  inner: string[];
  source_text: string;
}

export interface RelatedGroup {
  tag: string;
  value: string;
  ids: string[];
}

export interface InnerDetail {
  name: string;
  display: string;
  level: string;
  expression: string;
  connotation: string;
}

export interface DetailResponse {
  record: RecordDoc;
  related: Record<string, RelatedGroup[]>;
  available_themes: string[];
  inner_details: InnerDetail[];
}

export interface TaxonomyDoc {
  categories: string[];
  Pattern: string[];
  Color: string[];
  Material: string[];
  Form: string[];
  middle: { value: string; display: string }[];
  inner: InnerDetail[];
  levels: string[];
}

export interface ScaffoldReport {
  passed: boolean;
  missing_anchors: string[];
}

export interface ArtifactDoc {
  request: {
    costume_id: string;
    theme: string;
    inner_concept: string;
    user_note: string;
    seed: number;
  };
  story: string;
  image_prompt: string;
  image_ref: string | null;
  provider_id: string;
  created_at: string;
}

export interface GenerateResponse {
  artifact_id: number;
  artifact: ArtifactDoc;
  scaffold_report: ScaffoldReport;
}

export interface FavoritesResponse {
  user_id: string;
  favorites: string[];
}

// -- calls -------------------------------------------------------------------

export const api = {
  taxonomies: () => request<TaxonomyDoc>("/api/taxonomies"),

  tags: (category: string) =>
    request<TagsResponse>(`/api/tags/${encodeURIComponent(category)}`),

  browse: (tag: string | null, page = 1, pageSize = 20) => {
    const params = new URLSearchParams({ page: String(page), page_size: String(pageSize) });
    if (tag) params.set("tag", tag);
    return request<BrowseResponse>(`/api/costumes?${params}`);
  },

  search: (query: string, page = 1, pageSize = 20) => {
    const params = new URLSearchParams({
      q: query,
      page: String(page),
      page_size: String(pageSize),
    });
    return request<SearchResponse>(`/api/search?${params}`);
  },

  detail: (id: string) =>
    request<DetailResponse>(`/api/costumes/${encodeURIComponent(id)}`),

  favorites: (userId: string) =>
    request<FavoritesResponse>(`/api/favorites?user_id=${encodeURIComponent(userId)}`),

  addFavorite: (userId: string, costumeId: string) =>
    request<FavoritesResponse>(
      "/api/favorites",
      jsonInit("POST", { user_id: userId, costume_id: costumeId }),
    ),

  removeFavorite: (userId: string, costumeId: string) =>
    request<FavoritesResponse>(
      "/api/favorites",
      jsonInit("DELETE", { user_id: userId, costume_id: costumeId }),
    ),

  generate: (body: {
    costume_id: string;
    theme: string;
    inner_concept: string;
    user_note?: string;
    seed?: number;
    user_id?: string;
  }) => request<GenerateResponse>("/api/generate", jsonInit("POST", body)),
};
