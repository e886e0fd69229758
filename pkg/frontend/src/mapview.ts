/**
 * Map view state: the palette of marker classes, the markers on screen,
 * and marker placement. Everything here is reconstructable from the
 * server (loadFromServer); the client never owns authoritative data.
 */

import { ApiClient, ConceptClass, CrowdMap, Marker, Viewport } from './api.js';
import { LodWidget } from './widget.js';

export const SOURCE_TYPES = [
  'DirectWitness',
  'SecondHand',
  'OfficialRecord',
  'MediaReport',
  'Anonymous',
] as const;

export interface MapViewOptions {
  /** Slippy-tile URL template, e.g. https://tile.example/{z}/{x}/{y}.png */
  tileUrlTemplate?: string;
}

export class MapView {
  map: CrowdMap | null = null;
  palette: ConceptClass[] = [];
  markers: Marker[] = [];
  selectedClassId: number | null = null;
  viewport: Viewport = { west: -180, south: -90, east: 180, north: 90 };
  readonly tileUrlTemplate: string;

  constructor(
    private readonly api: ApiClient,
    readonly mapId: number,
    private readonly widget: LodWidget | null = null,
    options: MapViewOptions = {},
  ) {
    this.tileUrlTemplate =
      options.tileUrlTemplate ?? 'https://tile.openstreetmap.org/{z}/{x}/{y}.png';
  }

  /** Rebuild the whole view from server state (initial load and reload). */
  async loadFromServer(): Promise<void> {
    this.map = await this.api.getMap(this.mapId);
    this.palette = (await this.api.listConcepts(this.mapId)).concepts;
    this.markers = (await this.api.listMarkers(this.mapId)).markers;
    if (this.selectedClassId === null && this.palette.length > 0) {
      this.selectClass(this.palette[0]!.id);
    }
  }

  selectClass(classId: number): void {
    const entry = this.palette.find((c) => c.id === classId);
    if (entry === undefined) {
      throw new Error(`class ${classId} is not on this map's palette`);
    }
    this.selectedClassId = classId;
    this.widget?.setConcept(entry.kb_concept_id);
  }

  addToPalette(concept: ConceptClass): void {
    if (!this.palette.some((c) => c.id === concept.id)) {
      this.palette.push(concept);
    }
  }

  setViewport(viewport: Viewport): void {
    this.viewport = viewport;
    this.widget?.viewportChanged(viewport);
  }

  /** Client-side guard; mirrors the server's range validation. */
  static coordinatesValid(latitude: number, longitude: number): boolean {
    return (
      Number.isFinite(latitude) &&
      Number.isFinite(longitude) &&
      latitude >= -90 &&
      latitude <= 90 &&
      longitude >= -180 &&
      longitude <= 180
    );
  }

  async placeMarker(
    latitude: number,
    longitude: number,
    description: string,
    sourceType: string,
  ): Promise<Marker> {
    if (this.selectedClassId === null) {
      throw new Error('select a marker class first');
    }
    if (!MapView.coordinatesValid(latitude, longitude)) {
      throw new Error('coordinates out of range');
    }
    const marker = await this.api.createMarker(this.mapId, {
      class_id: this.selectedClassId,
      latitude,
      longitude,
      description,
      source_type: sourceType,
    });
    this.markers.push(marker);
    return marker;
  }

  /** Provenance lines for a marker popup. */
  popupLines(marker: Marker): string[] {
    const p = marker.provenance;
    return [
      marker.description,
      `source: ${p.source_type} (reliability ${p.reliability.toFixed(2)})`,
      `confirmations: ${p.confirmations}, refutations: ${p.refutations}`,
      `reported: ${marker.timestamp}`,
    ];
  }
}
