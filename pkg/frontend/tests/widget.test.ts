import { afterEach, beforeEach, describe, expect, it, vi } from 'vitest';

import { ApiClient, Viewport } from '../src/api.js';
import { LodWidget } from '../src/widget.js';
import { FakeServer } from './fakeserver.js';

const box = (west: number): Viewport => ({ west, south: 36.9, east: west + 4, north: 42.6 });

describe('LodWidget request discipline', () => {
  let server: FakeServer;
  let widget: LodWidget;

  beforeEach(() => {
    vi.useFakeTimers();
    server = new FakeServer();
    widget = new LodWidget(new ApiClient(server.transport()), { debounceMs: 400 });
    widget.setConcept(1);
  });

  afterEach(() => {
    vi.useRealTimers();
  });

  const settle = async (ms = 450) => {
    await vi.advanceTimersByTimeAsync(ms);
  };

  it('three rapid viewport changes produce exactly one request', async () => {
    widget.viewportChanged(box(-91.6));
    await vi.advanceTimersByTimeAsync(100);
    widget.viewportChanged(box(-91.0));
    await vi.advanceTimersByTimeAsync(100);
    widget.viewportChanged(box(-90.4));
    expect(server.requestsTo('/api/lod/search')).toHaveLength(0); // still debouncing
    await settle();
    expect(server.requestsTo('/api/lod/search')).toHaveLength(1);
    expect(widget.panel).toBe('groups');
    expect(widget.groups[0]?.label).toBe('direct');
  });

  it('no request fires before the debounce interval elapses', async () => {
    widget.viewportChanged(box(-91.6));
    await vi.advanceTimersByTimeAsync(399);
    expect(server.requestsTo('/api/lod/search')).toHaveLength(0);
    await vi.advanceTimersByTimeAsync(2);
    expect(server.requestsTo('/api/lod/search')).toHaveLength(1);
  });

  it('requests never exceed settled viewport changes', async () => {
    for (let round = 0; round < 5; round++) {
      widget.viewportChanged(box(-91.6 + round));
      await settle();
    }
    expect(server.requestsTo('/api/lod/search')).toHaveLength(5);
  });

  it('changes during a flight collapse into exactly one follow-up', async () => {
    let release: () => void = () => {};
    const gate = new Promise<void>((resolve) => {
      release = resolve;
    });
    const transport = server.transport();
    const slow: typeof transport = async (method, path, body, headers) => {
      if (path.startsWith('/api/lod/search')) {
        await gate;
      }
      return transport(method, path, body, headers);
    };
    widget = new LodWidget(new ApiClient(slow), { debounceMs: 400 });
    widget.setConcept(1);

    widget.viewportChanged(box(-91.6));
    await settle(); // first request now in flight, blocked on the gate
    widget.viewportChanged(box(-90.0));
    await settle();
    widget.viewportChanged(box(-89.0));
    await settle();
    widget.viewportChanged(box(-88.0));
    await settle();
    release();
    await vi.advanceTimersByTimeAsync(10);
    await vi.runAllTimersAsync();
    // one original flight + exactly one follow-up for the three mid-flight changes
    expect(server.requestsTo('/api/lod/search')).toHaveLength(2);
    const last = server.requestsTo('/api/lod/search')[1]!;
    expect(decodeURIComponent(last.path)).toContain('-88,36.9'); // latest viewport won
  });

  it('a failure keeps previous groups and retry refires', async () => {
    widget.viewportChanged(box(-91.6));
    await settle();
    expect(widget.groups).toHaveLength(1);

    server.failLodSearch = true;
    widget.viewportChanged(box(-90.0));
    await settle();
    expect(widget.panel).toBe('error');
    expect(widget.errorMessage).toBeTruthy();
    expect(widget.groups).toHaveLength(1); // stale results retained

    server.failLodSearch = false;
    widget.retry();
    await vi.runAllTimersAsync();
    expect(widget.panel).toBe('groups');
    expect(server.requestsTo('/api/lod/search')).toHaveLength(3);
  });

  it('degraded sources surface as a non-blocking notice', async () => {
    const transport = server.transport();
    const degraded: typeof transport = async (method, path, body, headers) => {
      const response = await transport(method, path, body, headers);
      if (path.startsWith('/api/lod/search')) {
        (response.body as { degraded_sources: unknown[] }).degraded_sources = [
          { source: 'nytimes', error: 'timeout' },
        ];
      }
      return response;
    };
    widget = new LodWidget(new ApiClient(degraded), { debounceMs: 400 });
    widget.setConcept(1);
    widget.viewportChanged(box(-91.6));
    await settle();
    expect(widget.panel).toBe('groups');
    expect(widget.degradedSources).toEqual(['nytimes']);
  });

  it('clearing the concept idles the panel without a request', async () => {
    widget.viewportChanged(box(-91.6));
    widget.setConcept(null);
    await settle();
    expect(server.requestsTo('/api/lod/search')).toHaveLength(0);
    expect(widget.panel).toBe('idle');
  });
});
