/**
 * Viewport-driven linked-data widget.
 *
 * Viewport changes are debounced (400 ms by default); after the debounce
 * settles, one search request is issued. At most one request is ever in
 * flight: changes arriving mid-flight collapse into exactly one queued
 * follow-up carrying the latest viewport. Failures keep the previous
 * groups on screen and expose a retry affordance; degraded sources are a
 * non-blocking notice.
 */

import { ApiClient, LodGroup, Viewport } from './api.js';
import { Debouncer } from './debounce.js';

export type PanelState = 'idle' | 'loading' | 'groups' | 'error';

export interface WidgetOptions {
  debounceMs?: number;
  depth?: number;
  onRender?: (widget: LodWidget) => void;
}

export class LodWidget {
  panel: PanelState = 'idle';
  groups: LodGroup[] = [];
  degradedSources: string[] = [];
  errorMessage: string | null = null;
  requestCount = 0;

  private conceptId: number | null = null;
  private viewport: Viewport | null = null;
  private readonly debouncer: Debouncer;
  private readonly depth: number | undefined;
  private readonly onRender: (widget: LodWidget) => void;
  private inFlight = false;
  private queued: Viewport | null = null;

  constructor(
    private readonly api: ApiClient,
    options: WidgetOptions = {},
  ) {
    this.debouncer = new Debouncer(options.debounceMs ?? 400, () => {
      void this.startSearch();
    });
    this.depth = options.depth;
    this.onRender = options.onRender ?? (() => {});
  }

  /** Select which marker class's concept drives the search. */
  setConcept(conceptId: number | null): void {
    this.conceptId = conceptId;
    if (conceptId === null) {
      this.debouncer.cancel();
      this.panel = 'idle';
      this.groups = [];
      this.render();
    }
  }

  /** Called on every pan/zoom; the actual request waits for the debounce. */
  viewportChanged(viewport: Viewport): void {
    this.viewport = viewport;
    if (this.conceptId === null) {
      return;
    }
    this.debouncer.trigger();
  }

  /** Re-issue the last search immediately (retry affordance). */
  retry(): void {
    if (this.conceptId !== null && this.viewport !== null) {
      void this.startSearch();
    }
  }

  private async startSearch(): Promise<void> {
    if (this.conceptId === null || this.viewport === null) {
      return;
    }
    if (this.inFlight) {
      this.queued = this.viewport; // exactly one follow-up, latest wins
      return;
    }
    this.inFlight = true;
    this.panel = 'loading';
    this.render();
    const requested = this.viewport;
    try {
      this.requestCount += 1;
      const result = await this.api.lodSearch(this.conceptId, requested, this.depth);
      this.groups = result.groups;
      this.degradedSources = result.degraded_sources.map((d) => d.source);
      this.errorMessage = null;
      this.panel = 'groups';
    } catch (err) {
      // keep previous groups; surface the failure with a retry option
      this.errorMessage = err instanceof Error ? err.message : String(err);
      this.panel = 'error';
    } finally {
      this.inFlight = false;
      this.render();
      const followUp = this.queued;
      this.queued = null;
      if (followUp !== null) {
        this.viewport = followUp;
        await this.startSearch();
      }
    }
  }

  get isEmpty(): boolean {
    return this.panel === 'groups' && this.groups.length === 0;
  }

  /** Placeholder text for an empty result ("no linked resources here"). */
  emptyNotice(): string | null {
    return this.isEmpty ? 'no linked resources here' : null;
  }

  private render(): void {
    this.onRender(this);
  }
}
