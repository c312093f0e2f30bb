// Application bootstrap: fetch metadata, build the locked map and panels,
// then keep overlay, legend, and controls in sync with the view state.

import L from "leaflet";
import "leaflet/dist/leaflet.css";

import { ApiFrame, ApiMeta, fetchFrame, fetchMeta } from "./api";
import { buildLayerPicker, buildTimeSlider, buildVariablePicker, setLoading, showError } from "./controls";
import { renderLegend } from "./legend";
import { BASE_LAYERS, createLockedMap, createOverlay, renderFrame } from "./map";
import {
  ViewState,
  frameArrived,
  frameFailed,
  frameMatchesView,
  initialState,
  selectBaseLayer,
  selectTime,
  selectVariable,
} from "./state";
import "./style.css";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

async function boot(): Promise<void> {
  const meta: ApiMeta = await fetchMeta();
  let state: ViewState = initialState(meta);

  const map = createLockedMap(el("map"), meta);
  let tiles = L.tileLayer(BASE_LAYERS.streets.url, {
    attribution: BASE_LAYERS.streets.attribution,
  }).addTo(map);
  const overlay = createOverlay(map);

  const legendEl = el("legend");
  const loadingEl = el("loading");
  const errorEl = el("error");

  renderLegend(legendEl, state.legend);

  function sync(next: ViewState | null): void {
    if (!next) return;
    state = next;
    renderLegend(legendEl, state.legend);
    setLoading(loadingEl, state.loading);
    showError(errorEl, state.error);
  }

  async function loadFrame(): Promise<void> {
    const generation = state.generation;
    const timestamp = meta.timestamps[state.timeIndex];
    try {
      const frame: ApiFrame = await fetchFrame(state.featureId, timestamp);
      if (generation !== state.generation) return; // superseded selection
      if (!frameMatchesView(state, meta, frame)) {
        sync(frameFailed(state, generation, "frame does not match the current selection"));
        return;
      }
      renderFrame(overlay, meta, frame, state.legend);
      sync(frameArrived(state, generation));
    } catch (err) {
      sync(frameFailed(state, generation, err instanceof Error ? err.message : String(err)));
    }
  }

  buildVariablePicker(el<HTMLSelectElement>("variable"), meta, (featureId) => {
    sync(selectVariable(state, meta, featureId)); // legend updates here, pre-render
    void loadFrame();
  });
  buildTimeSlider(el<HTMLInputElement>("time"), el("time-label"), meta, (index) => {
    sync(selectTime(state, meta, index));
    void loadFrame();
  });
  buildLayerPicker(el("layers"), (layer) => {
    sync(selectBaseLayer(state, layer));
    map.removeLayer(tiles);
    tiles = L.tileLayer(BASE_LAYERS[layer].url, {
      attribution: BASE_LAYERS[layer].attribution,
    }).addTo(map);
  });

  sync(selectTime(state, meta, 0));
  await loadFrame();
}

boot().catch((err) => {
  const banner = document.getElementById("error");
  if (banner) {
    banner.textContent = `failed to start: ${err instanceof Error ? err.message : err}`;
    banner.classList.add("visible");
  }
});
