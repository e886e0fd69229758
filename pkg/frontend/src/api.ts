/**
 * Typed client for the semaps JSON API.
 *
 * All network traffic goes through an injectable Transport so tests can
 * mock the server and count requests.
 */

export interface HttpResponse {
  status: number;
  body: unknown;
}

export type Transport = (
  method: string,
  path: string,
  body?: unknown,
  headers?: Record<string, string>,
) => Promise<HttpResponse>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export interface Candidate {
  concept_id: number;
  lemma: string;
  score: number;
  match_kind: string;
  external_links: string[];
}

export interface RelationPreview {
  name: string;
  target_id: number;
  target_lemma: string;
  polarity: string;
}

export interface ConceptClass {
  id: number;
  class_iri: string;
  label: string;
  top_class: string;
  kb_concept_id: number | null;
  map_id: number;
}

export interface Provenance {
  source_type: string;
  reliability: number;
  confirmations: number;
  refutations: number;
}

export interface Marker {
  id: number;
  iri: string;
  map_id: number;
  class_id: number;
  creator: number;
  latitude: number;
  longitude: number;
  timestamp: string;
  description: string;
  provenance: Provenance;
}

export interface CrowdMap {
  id: number;
  iri: string;
  title: string;
  owner: number;
  concept_class_ids: number[];
}

export interface Viewport {
  west: number;
  south: number;
  east: number;
  north: number;
}

export interface LodResource {
  uri: string;
  label: string;
  source: string;
  matched_lemma: string;
  relation: string;
  depth: number;
  latitude: number | null;
  longitude: number | null;
  snippet: string | null;
  distance_km: number | null;
  unlocated: boolean;
}

export interface LodGroup {
  label: string;
  resources: LodResource[];
}

export interface LodSearchResult {
  seed_concept_id: number;
  depth: number;
  groups: LodGroup[];
  degraded_sources: { source: string; error: string }[];
}

export function bboxParam(v: Viewport): string {
  return `${v.west},${v.south},${v.east},${v.north}`;
}

export function fetchTransport(baseUrl: string): Transport {
  return async (method, path, body, headers) => {
    const response = await fetch(baseUrl + path, {
      method,
      headers: { 'Content-Type': 'application/json', ...headers },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    let parsed: unknown = null;
    try {
      parsed = await response.json();
    } catch {
      parsed = null;
    }
    return { status: response.status, body: parsed };
  };
}

export class ApiClient {
  constructor(
    private readonly transport: Transport,
    private accountId: number | null = null,
  ) {}

  setAccount(accountId: number): void {
    this.accountId = accountId;
  }

  private headers(): Record<string, string> {
    return this.accountId === null ? {} : { 'X-Account': String(this.accountId) };
  }

  private async call<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.transport(method, path, body, this.headers());
    if (response.status >= 400) {
      const err = (response.body as { error?: { code?: string; message?: string } })?.error;
      throw new ApiError(
        response.status,
        err?.code ?? 'internal',
        err?.message ?? `HTTP ${response.status}`,
      );
    }
    return response.body as T;
  }

  characterize(expression: string, language: string): Promise<{ candidates: Candidate[]; warning?: string }> {
    return this.call('POST', '/api/characterize', { expression, language });
  }

  conceptRelations(conceptId: number): Promise<{ relations: RelationPreview[] }> {
    return this.call('GET', `/api/concepts/${conceptId}/relations`);
  }

  getMap(mapId: number): Promise<CrowdMap> {
    return this.call('GET', `/api/maps/${mapId}`);
  }

  listConcepts(mapId: number): Promise<{ concepts: ConceptClass[] }> {
    return this.call('GET', `/api/maps/${mapId}/concepts`);
  }

  createConcept(
    mapId: number,
    label: string,
    topClass: string,
    kbConceptId: number | null,
  ): Promise<ConceptClass> {
    return this.call('POST', `/api/maps/${mapId}/concepts`, {
      label,
      top_class: topClass,
      kb_concept_id: kbConceptId,
    });
  }

  listMarkers(mapId: number, bbox?: Viewport): Promise<{ markers: Marker[] }> {
    const query = bbox ? `?bbox=${encodeURIComponent(bboxParam(bbox))}` : '';
    return this.call('GET', `/api/maps/${mapId}/markers${query}`);
  }

  createMarker(
    mapId: number,
    marker: {
      class_id: number;
      latitude: number;
      longitude: number;
      description: string;
      source_type: string;
    },
  ): Promise<Marker> {
    return this.call('POST', `/api/maps/${mapId}/markers`, marker);
  }

  lodSearch(conceptId: number, bbox: Viewport, depth?: number): Promise<LodSearchResult> {
    const params = new URLSearchParams({ concept: String(conceptId), bbox: bboxParam(bbox) });
    if (depth !== undefined) params.set('depth', String(depth));
    return this.call('GET', `/api/lod/search?${params.toString()}`);
  }
}
