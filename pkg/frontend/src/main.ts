/**
 * Minimal browser wiring: a coordinate pane standing in for the slippy
 * map, the marker palette, the placement form, and the LOD widget panel.
 * All state comes from the JSON API; reloading the page rebuilds it.
 */

import { ApiClient, fetchTransport, LodResource, Viewport } from './api.js';
import { MapView } from './mapview.js';
import { LodWidget } from './widget.js';
import { WizardController } from './wizard.js';

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function renderResource(r: LodResource): string {
  const distance = r.distance_km === null ? '' : ` — ${r.distance_km.toFixed(1)} km`;
  const badge = r.unlocated ? ' (no location)' : distance;
  return `<li><a href="${r.uri}">${r.label}</a> <small>[${r.source}]${badge}</small></li>`;
}

export async function boot(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const mapId = Number(params.get('map') ?? '1');
  const account = Number(params.get('account') ?? '1');
  const api = new ApiClient(fetchTransport(''), account);

  const widget = new LodWidget(api, {
    onRender: (w) => {
      el('widget-state').textContent = w.panel;
      el('degraded').textContent =
        w.degradedSources.length > 0 ? `sources degraded: ${w.degradedSources.join(', ')}` : '';
      const panel = el('widget-groups');
      if (w.panel === 'error') {
        el('widget-error').textContent = `${w.errorMessage} — results below may be stale`; // keep old groups
      } else {
        el('widget-error').textContent = '';
      }
      panel.innerHTML = w.groups
        .map(
          (g) =>
            `<h4>${g.label}</h4><ul>${g.resources.map(renderResource).join('')}</ul>`,
        )
        .join('');
      if (w.isEmpty) panel.innerHTML = `<p>${w.emptyNotice()}</p>`;
    },
  });
  const view = new MapView(api, mapId, widget);
  await view.loadFromServer();

  const renderMarkers = () => {
    el('markers').innerHTML = view.markers
      .map((m) => `<li>#${m.id} (${m.latitude.toFixed(3)}, ${m.longitude.toFixed(3)}) ${view.popupLines(m).join(' | ')}</li>`)
      .join('');
  };
  const renderPalette = () => {
    el('palette').innerHTML = view.palette
      .map(
        (c) =>
          `<option value="${c.id}">${c.label}${c.kb_concept_id === null ? ' (unlinked)' : ''}</option>`,
      )
      .join('');
  };
  renderPalette();
  renderMarkers();

  el<HTMLSelectElement>('palette').addEventListener('change', (event) => {
    view.selectClass(Number((event.target as HTMLSelectElement).value));
  });

  const viewportInputs = ['west', 'south', 'east', 'north'].map((k) => el<HTMLInputElement>(k));
  const readViewport = (): Viewport => {
    const [west, south, east, north] = viewportInputs.map((i) => Number(i.value)) as [
      number, number, number, number,
    ];
    return { west, south, east, north };
  };
  viewportInputs.forEach((input) =>
    input.addEventListener('input', () => view.setViewport(readViewport())),
  );
  el('retry').addEventListener('click', () => widget.retry());

  el('place').addEventListener('click', () => {
    const lat = Number(el<HTMLInputElement>('lat').value);
    const lon = Number(el<HTMLInputElement>('lon').value);
    if (!MapView.coordinatesValid(lat, lon)) {
      el('place-error').textContent = 'coordinates out of range';
      return;
    }
    void view
      .placeMarker(
        lat,
        lon,
        el<HTMLInputElement>('description').value,
        el<HTMLSelectElement>('source-type').value,
      )
      .then(renderMarkers)
      .catch((err) => {
        el('place-error').textContent = String(err);
      });
  });

  // designer wizard
  const wizard = new WizardController(api, mapId);
  el('wizard-next').addEventListener('click', () => {
    void wizard.next().then(async () => {
      el('wizard-step').textContent = wizard.step;
      if (wizard.step === 'pick-candidate') {
        const rows = await Promise.all(
          wizard.candidates.map(async (c, i) => {
            const preview = (await wizard.relationPreviews(c.concept_id)).slice(0, 3);
            return `<li><label><input type="radio" name="cand" value="${i}"> ${c.lemma} (${c.score.toFixed(2)})${preview.length ? ` — ${preview.join('; ')}` : ''}</label></li>`;
          }),
        );
        el('candidates').innerHTML =
          rows.join('') +
          '<li><label><input type="radio" name="cand" value="unlinked"> create without semantic link (unlinked)</label></li>';
        el('candidates').addEventListener('change', (event) => {
          const value = (event.target as HTMLInputElement).value;
          if (value === 'unlinked') wizard.chooseUnlinked();
          else wizard.selectCandidate(Number(value));
        });
      }
    });
  });
  el<HTMLInputElement>('wizard-label').addEventListener('input', (event) => {
    wizard.setLabel((event.target as HTMLInputElement).value);
    el<HTMLButtonElement>('wizard-next').disabled = !wizard.canProceed();
  });
  el<HTMLSelectElement>('wizard-topclass').addEventListener('change', (event) => {
    wizard.selectTopClass((event.target as HTMLSelectElement).value);
  });
  el('wizard-submit').addEventListener('click', () => {
    void wizard
      .submit()
      .then((created) => {
        view.addToPalette(created);
        renderPalette();
        el('wizard-result').textContent = `created #${created.id} -> ${created.class_iri}`;
      })
      .catch(() => {
        el('wizard-result').textContent =
          wizard.error === 'already exists' && wizard.existingClass
            ? `already exists: #${wizard.existingClass.id} ${wizard.existingClass.class_iri}`
            : `error: ${wizard.error}`;
      });
  });
}

if (typeof document !== 'undefined' && document.getElementById('semaps-app')) {
  void boot();
}
