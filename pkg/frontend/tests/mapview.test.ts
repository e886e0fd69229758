import { beforeEach, describe, expect, it, vi } from 'vitest';

import { ApiClient } from '../src/api.js';
import { MapView } from '../src/mapview.js';
import { LodWidget } from '../src/widget.js';
import { FakeServer } from './fakeserver.js';

describe('MapView', () => {
  let server: FakeServer;
  let api: ApiClient;

  beforeEach(async () => {
    server = new FakeServer();
    api = new ApiClient(server.transport(), 1);
    // seed server-side state through the API, as the wizard would
    await api.createConcept(1, 'politician', 'Person', 1);
  });

  it('reload reconstructs state from the server alone', async () => {
    const view = new MapView(api, 1);
    await view.loadFromServer();
    await view.placeMarker(41.88, -87.63, 'rally downtown', 'DirectWitness');
    await view.placeMarker(39.78, -89.65, 'statehouse visit', 'MediaReport');

    const reloaded = new MapView(new ApiClient(server.transport(), 1), 1);
    await reloaded.loadFromServer();
    expect(reloaded.palette).toEqual(view.palette);
    expect(reloaded.markers).toEqual(view.markers);
    expect(reloaded.map?.title).toBe('Politicians of Illinois');
    expect(reloaded.selectedClassId).toBe(view.selectedClassId);
  });

  it('placement is blocked client-side for out-of-range coordinates', async () => {
    const view = new MapView(api, 1);
    await view.loadFromServer();
    const before = server.requestsTo('/api/maps/1/markers').filter((r) => r.method === 'POST');
    await expect(view.placeMarker(91, 0, 'x', 'Anonymous')).rejects.toThrow('out of range');
    const after = server.requestsTo('/api/maps/1/markers').filter((r) => r.method === 'POST');
    expect(after).toHaveLength(before.length); // nothing sent
  });

  it('marker popups expose provenance fields', async () => {
    const view = new MapView(api, 1);
    await view.loadFromServer();
    const marker = await view.placeMarker(41.0, -88.0, 'pothole report', 'DirectWitness');
    const lines = view.popupLines(marker);
    expect(lines[0]).toBe('pothole report');
    expect(lines[1]).toContain('DirectWitness');
    expect(lines[1]).toContain('0.80');
    expect(lines[2]).toContain('confirmations: 0');
  });

  it('selecting a palette class points the widget at its concept', async () => {
    vi.useFakeTimers();
    try {
      const widget = new LodWidget(api, { debounceMs: 400 });
      const view = new MapView(api, 1, widget);
      await view.loadFromServer(); // auto-selects the first class (kb concept 1)
      view.setViewport({ west: -91.6, south: 36.9, east: -87.0, north: 42.6 });
      await vi.advanceTimersByTimeAsync(450);
      const search = server.requestsTo('/api/lod/search');
      expect(search).toHaveLength(1);
      expect(search[0]!.path).toContain('concept=1');
    } finally {
      vi.useRealTimers();
    }
  });

  it('an unlinked palette class disables the widget', async () => {
    vi.useFakeTimers();
    try {
      await api.createConcept(1, 'mystery', 'Event', null);
      const widget = new LodWidget(api, { debounceMs: 400 });
      const view = new MapView(api, 1, widget);
      await view.loadFromServer();
      const unlinked = view.palette.find((c) => c.kb_concept_id === null)!;
      view.selectClass(unlinked.id);
      view.setViewport({ west: -91.6, south: 36.9, east: -87.0, north: 42.6 });
      await vi.advanceTimersByTimeAsync(450);
      expect(server.requestsTo('/api/lod/search')).toHaveLength(0);
      expect(widget.panel).toBe('idle');
    } finally {
      vi.useRealTimers();
    }
  });

  it('tile template is configurable with a sensible default', () => {
    const view = new MapView(api, 1);
    expect(view.tileUrlTemplate).toContain('{z}');
    const custom = new MapView(api, 1, null, { tileUrlTemplate: 'https://t.example/{z}/{x}/{y}.png' });
    expect(custom.tileUrlTemplate).toBe('https://t.example/{z}/{x}/{y}.png');
  });
});
