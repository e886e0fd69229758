/**
 * In-memory stand-in for the platform API, good enough for the client
 * contracts under test. Records every request so tests can count them.
 */

import { HttpResponse, Transport } from '../src/api.js';

export interface RecordedRequest {
  method: string;
  path: string;
  body: unknown;
}

interface ServerMarker {
  id: number;
  iri: string;
  map_id: number;
  class_id: number;
  creator: number;
  latitude: number;
  longitude: number;
  timestamp: string;
  description: string;
  provenance: {
    source_type: string;
    reliability: number;
    confirmations: number;
    refutations: number;
  };
}

export class FakeServer {
  requests: RecordedRequest[] = [];
  failLodSearch = false;

  concepts: {
    id: number;
    class_iri: string;
    label: string;
    top_class: string;
    kb_concept_id: number | null;
    map_id: number;
  }[] = [];
  markers: ServerMarker[] = [];
  private nextConceptId = 1;
  private nextMarkerId = 1;

  readonly candidates = [
    {
      concept_id: 1,
      lemma: 'politician',
      score: 1.0,
      match_kind: 'exact',
      external_links: ['http://dbpedia.org/resource/Politician'],
    },
    {
      concept_id: 14,
      lemma: 'mayor',
      score: 0.27,
      match_kind: 'token_overlap',
      external_links: [],
    },
  ];

  readonly relations: Record<number, { name: string; target_id: number; target_lemma: string; polarity: string }[]> = {
    1: [
      { name: 'CapableOf', target_id: 2, target_lemma: 'to propose laws', polarity: 'Pre' },
      { name: 'PropertyOf', target_id: 3, target_lemma: 'corruption', polarity: 'Pre' },
    ],
    14: [],
  };

  transport(): Transport {
    return async (method, path, body) => {
      this.requests.push({ method, path, body });
      return this.route(method, path, body);
    };
  }

  requestsTo(prefix: string): RecordedRequest[] {
    return this.requests.filter((r) => r.path.startsWith(prefix));
  }

  private ok(body: unknown, status = 200): HttpResponse {
    return { status, body };
  }

  private error(status: number, code: string, message: string): HttpResponse {
    return { status, body: { error: { code, message } } };
  }

  private route(method: string, path: string, body: unknown): HttpResponse {
    if (method === 'POST' && path === '/api/characterize') {
      const { expression } = body as { expression: string };
      if (!expression.trim()) return this.error(400, 'validation', 'empty expression');
      const hits = expression.includes('politician') ? this.candidates : [];
      return this.ok({ candidates: hits });
    }
    const relations = path.match(/^\/api\/concepts\/(\d+)\/relations$/);
    if (method === 'GET' && relations) {
      return this.ok({ relations: this.relations[Number(relations[1])] ?? [] });
    }
    if (method === 'GET' && path === '/api/maps/1') {
      return this.ok({
        id: 1,
        iri: 'http://semaps.example/ns/map/m-1',
        title: 'Politicians of Illinois',
        owner: 1,
        concept_class_ids: this.concepts.map((c) => c.id),
      });
    }
    if (method === 'GET' && path === '/api/maps/1/concepts') {
      return this.ok({ concepts: this.concepts });
    }
    if (method === 'POST' && path === '/api/maps/1/concepts') {
      const request = body as { label: string; top_class: string; kb_concept_id: number | null };
      const duplicate = this.concepts.some(
        (c) => c.label.toLowerCase() === request.label.toLowerCase(),
      );
      if (duplicate) return this.error(409, 'conflict', `duplicate label ${request.label}`);
      const created = {
        id: this.nextConceptId++,
        class_iri: `http://semaps.example/ns/class/${request.label}-${this.nextConceptId - 1}`,
        label: request.label,
        top_class: request.top_class,
        kb_concept_id: request.kb_concept_id,
        map_id: 1,
      };
      this.concepts.push(created);
      return this.ok(created, 201);
    }
    if (method === 'GET' && path.startsWith('/api/maps/1/markers')) {
      return this.ok({ markers: this.markers });
    }
    if (method === 'POST' && path === '/api/maps/1/markers') {
      const request = body as {
        class_id: number;
        latitude: number;
        longitude: number;
        description: string;
        source_type: string;
      };
      if (Math.abs(request.latitude) > 90 || Math.abs(request.longitude) > 180) {
        return this.error(400, 'validation', 'coordinates out of range');
      }
      const marker: ServerMarker = {
        id: this.nextMarkerId++,
        iri: `http://semaps.example/ns/marker/m-${this.nextMarkerId - 1}`,
        map_id: 1,
        class_id: request.class_id,
        creator: 1,
        latitude: request.latitude,
        longitude: request.longitude,
        timestamp: '2026-08-09T12:00:00+00:00',
        description: request.description,
        provenance: {
          source_type: request.source_type,
          reliability: 0.8,
          confirmations: 0,
          refutations: 0,
        },
      };
      this.markers.push(marker);
      return this.ok(marker, 201);
    }
    if (method === 'GET' && path.startsWith('/api/lod/search')) {
      if (this.failLodSearch) {
        return this.error(500, 'internal', 'boom');
      }
      return this.ok({
        seed_concept_id: 1,
        depth: 1,
        groups: [
          {
            label: 'direct',
            resources: [
              {
                uri: 'http://data.example/a',
                label: 'Article A',
                source: 'nytimes',
                matched_lemma: 'politician',
                relation: 'direct',
                depth: 0,
                latitude: 41.8,
                longitude: -87.6,
                snippet: null,
                distance_km: 12.5,
                unlocated: false,
              },
            ],
          },
        ],
        degraded_sources: [],
      });
    }
    return this.error(404, 'not_found', `no route ${method} ${path}`);
  }
}
