/**
 * Designer wizard: associate a marker label with a knowledge-base concept
 * and mint the map's concept class.
 *
 * Steps move strictly forward once the current step's selection is made:
 *   enter-label -> pick-candidate -> pick-top-class -> confirm
 *
 * Submitting requires either a selected candidate or the explicit
 * "create without semantic link" fallback; there is no other path to the
 * POST. A 409 from the server surfaces the already-existing class.
 */

import { ApiClient, ApiError, Candidate, ConceptClass, RelationPreview } from './api.js';

export type WizardStep = 'enter-label' | 'pick-candidate' | 'pick-top-class' | 'confirm';

export const TOP_CLASSES = [
  'Person',
  'Organization',
  'Event',
  'Complaint',
  'ArtisticProduction',
  'Building',
  'CommercialEstablishment',
] as const;

const RELATION_PHRASES: Record<string, string> = {
  CapableOf: 'able to',
  PropertyOf: 'has property',
  EffectOf: 'effect',
  IsA: 'is a',
  UsedFor: 'used for',
  PartOf: 'part of',
  AtLocation: 'at',
  MotivatedByGoal: 'motivated by',
  Causes: 'causes',
  DefinedAs: 'defined as',
};

export function relationPhrase(preview: RelationPreview): string {
  const phrase = RELATION_PHRASES[preview.name] ?? preview.name.toLowerCase();
  return `${phrase}: ${preview.target_lemma}`;
}

export class WizardController {
  step: WizardStep = 'enter-label';
  label = '';
  language = 'en';
  candidates: Candidate[] = [];
  selectedCandidate: Candidate | null = null;
  unlinked = false;
  selectedTopClass: string | null = null;
  created: ConceptClass | null = null;
  error: string | null = null;
  existingClass: ConceptClass | null = null;

  private readonly previews = new Map<number, RelationPreview[]>();

  constructor(
    private readonly api: ApiClient,
    private readonly mapId: number,
  ) {}

  setLabel(label: string): void {
    this.label = label;
  }

  /** "Next" is enabled only when the current step's input is complete. */
  canProceed(): boolean {
    switch (this.step) {
      case 'enter-label':
        return this.label.trim().length > 0;
      case 'pick-candidate':
        return this.selectedCandidate !== null || this.unlinked;
      case 'pick-top-class':
        return this.selectedTopClass !== null;
      case 'confirm':
        return false;
    }
  }

  async next(): Promise<void> {
    if (!this.canProceed()) {
      throw new Error(`step ${this.step} is incomplete`);
    }
    this.error = null;
    if (this.step === 'enter-label') {
      const response = await this.api.characterize(this.label.trim(), this.language);
      this.candidates = response.candidates;
      this.step = 'pick-candidate';
      return;
    }
    if (this.step === 'pick-candidate') {
      this.step = 'pick-top-class';
      return;
    }
    if (this.step === 'pick-top-class') {
      this.step = 'confirm';
    }
  }

  selectCandidate(index: number): void {
    const candidate = this.candidates[index];
    if (candidate === undefined) {
      throw new Error(`no candidate at index ${index}`);
    }
    this.selectedCandidate = candidate;
    this.unlinked = false;
  }

  /** Fallback when nothing in the KB fits; the result is visibly unlinked. */
  chooseUnlinked(): void {
    this.selectedCandidate = null;
    this.unlinked = true;
  }

  selectTopClass(topClass: string): void {
    if (!(TOP_CLASSES as readonly string[]).includes(topClass)) {
      throw new Error(`unknown top class ${topClass}`);
    }
    this.selectedTopClass = topClass;
  }

  /** Lazily fetched "able to: ..." style previews for a candidate row. */
  async relationPreviews(conceptId: number): Promise<string[]> {
    let previews = this.previews.get(conceptId);
    if (previews === undefined) {
      previews = (await this.api.conceptRelations(conceptId)).relations;
      this.previews.set(conceptId, previews);
    }
    return previews.map(relationPhrase);
  }

  canSubmit(): boolean {
    return (
      this.step === 'confirm' &&
      this.selectedTopClass !== null &&
      (this.selectedCandidate !== null || this.unlinked)
    );
  }

  async submit(): Promise<ConceptClass> {
    if (!this.canSubmit()) {
      throw new Error('cannot submit: no candidate selected and unlinked not chosen');
    }
    try {
      this.created = await this.api.createConcept(
        this.mapId,
        this.label.trim(),
        this.selectedTopClass as string,
        this.selectedCandidate?.concept_id ?? null,
      );
      return this.created;
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        this.error = 'already exists';
        this.existingClass = await this.findExistingClass();
      } else {
        this.error = err instanceof Error ? err.message : String(err);
      }
      throw err;
    }
  }

  private async findExistingClass(): Promise<ConceptClass | null> {
    const normalized = this.label.trim().toLowerCase();
    const { concepts } = await this.api.listConcepts(this.mapId);
    return concepts.find((c) => c.label.trim().toLowerCase() === normalized) ?? null;
  }
}
