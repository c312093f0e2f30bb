// Leaflet map locked to the dataset bounds, plus the circle-grid overlay.

import L from "leaflet";

import { ApiFrame, ApiMeta, variableById } from "./api";
import { colormap, normalizeValue } from "./colormap";
import { cellCenter, cellOf, formatCoord, formatValue } from "./format";
import { LegendRange, BaseLayer } from "./state";

export const BASE_LAYERS: Record<BaseLayer, { url: string; attribution: string }> = {
  streets: {
    url: "https://{s}.tile.openstreetmap.org/{z}/{x}/{y}.png",
    attribution: "&copy; OpenStreetMap contributors",
  },
  satellite: {
    url: "https://server.arcgisonline.com/ArcGIS/rest/services/World_Imagery/MapServer/tile/{z}/{y}/{x}",
    attribution: "Imagery &copy; Esri",
  },
  topographic: {
    url: "https://{s}.tile.opentopomap.org/{z}/{x}/{y}.png",
    attribution: "&copy; OpenTopoMap (CC-BY-SA)",
  },
};

export function datasetBounds(meta: ApiMeta): L.LatLngBounds {
  return L.latLngBounds(
    [meta.grid.lat_min, meta.grid.lon_min],
    [meta.grid.lat_max, meta.grid.lon_max],
  );
}

/** Create a map with every user interaction disabled and the viewport
 * pinned to the dataset bounds: pan, zoom, drag, and keyboard navigation
 * are all no-ops afterwards. */
export function createLockedMap(container: HTMLElement, meta: ApiMeta): L.Map {
  const map = L.map(container, {
    zoomControl: false,
    dragging: false,
    scrollWheelZoom: false,
    doubleClickZoom: false,
    boxZoom: false,
    keyboard: false,
    touchZoom: false,
    attributionControl: true,
  });
  const bounds = datasetBounds(meta);
  map.fitBounds(bounds);
  lockViewport(map, bounds);
  return map;
}

export function lockViewport(map: L.Map, bounds: L.LatLngBounds): void {
  const zoom = map.getZoom();
  map.setMinZoom(zoom);
  map.setMaxZoom(zoom);
  map.setMaxBounds(bounds);
}

export interface Overlay {
  layer: L.LayerGroup;
  renderer: L.Renderer;
}

function canvas2dAvailable(): boolean {
  try {
    return document.createElement("canvas").getContext("2d") != null;
  } catch {
    return false;
  }
}

export function createOverlay(map: L.Map): Overlay {
  // Canvas draws 10k markers far faster; fall back to SVG where the
  // environment has no working 2D context.
  const renderer = canvas2dAvailable() ? L.canvas({ padding: 0.1 }) : L.svg({ padding: 0.1 });
  const layer = L.layerGroup().addTo(map);
  return { layer, renderer };
}

function popupHtml(meta: ApiMeta, frame: ApiFrame, index: number): string {
  const v = variableById(meta, frame.feature_id);
  const { row, col } = cellOf(meta.grid, index);
  const [lat, lon] = cellCenter(meta.grid, row, col);
  const value = frame.values[index];
  return [
    `<div class="popup">`,
    `<div class="popup-coords">${formatCoord(lat, lon)} &middot; grid [${row}, ${col}] (#${index})</div>`,
    `<div class="popup-time">${frame.timestamp}</div>`,
    `<div class="popup-value">${formatValue(value)} ${v.unit}</div>`,
    `<div class="popup-name">${v.name}</div>`,
    `<div class="popup-desc">${v.description}</div>`,
    `</div>`,
  ].join("");
}

/** Draw one colored circle per grid intersection. The same content is shown
 * on hover (tooltip) and click (popup). */
export function renderFrame(
  overlay: Overlay,
  meta: ApiMeta,
  frame: ApiFrame,
  legend: LegendRange,
): number {
  overlay.layer.clearLayers();
  const { rows, cols } = meta.grid;
  const radius = Math.max(2, Math.floor(320 / Math.max(rows, cols)));
  let drawn = 0;
  for (let r = 0; r < rows; r++) {
    for (let c = 0; c < cols; c++) {
      const idx = r * cols + c;
      const value = frame.values[idx];
      const color = colormap(normalizeValue(value, legend.min, legend.max));
      const [lat, lon] = cellCenter(meta.grid, r, c);
      const marker = L.circleMarker([lat, lon], {
        renderer: overlay.renderer,
        radius,
        stroke: false,
        fillColor: color,
        fillOpacity: 0.85,
      });
      const html = popupHtml(meta, frame, idx);
      marker.bindPopup(html, { closeButton: false });
      marker.bindTooltip(html, { direction: "top", sticky: true });
      marker.addTo(overlay.layer);
      drawn++;
    }
  }
  return drawn;
}

export { popupHtml };
