import { ApiFrame, ApiMeta } from "../src/api";

export function makeMeta(hours = 216, rows = 4, cols = 4): ApiMeta {
  const timestamps: string[] = [];
  const start = Date.UTC(2022, 8, 23, 0, 0);
  for (let h = 0; h < hours; h++) {
    const d = new Date(start + h * 3600_000);
    const pad = (n: number) => String(n).padStart(2, "0");
    timestamps.push(
      `${d.getUTCFullYear()}-${pad(d.getUTCMonth() + 1)}-${pad(d.getUTCDate())} ` +
        `${pad(d.getUTCHours())}:${pad(d.getUTCMinutes())}`,
    );
  }
  const groups: Record<number, string> = {
    1: "Moisture", 2: "Cloud", 3: "Moisture", 4: "Radiation", 5: "Momentum",
    6: "Temperature", 7: "Mass", 8: "Momentum", 9: "Momentum", 10: "Temperature",
    11: "Moisture", 12: "Moisture", 13: "Cloud", 14: "Cloud", 15: "Mass",
    16: "Moisture", 17: "Radiation", 18: "Radiation", 19: "Radiation",
  };
  const variables = [];
  const ranges: Record<string, { min: number; max: number }> = {};
  for (let id = 1; id <= 19; id++) {
    variables.push({
      feature_id: id,
      name: `Variable ${id}`,
      unit: id === 1 ? "mm/hour" : "unit" + id,
      group: groups[id],
      description: `Description of variable ${id}.`,
    });
    ranges[String(id)] = { min: id * 1.5, max: id * 1.5 + 10 };
  }
  return {
    grid: {
      rows,
      cols,
      spacing_km: 3.0,
      lat_min: 24.5,
      lat_max: 31.0,
      lon_min: -87.0,
      lon_max: -80.0,
      vertical_levels: 50,
    },
    variables,
    timestamps,
    ranges,
  };
}

export function makeFrame(meta: ApiMeta, featureId: number, timeIndex: number): ApiFrame {
  const n = meta.grid.rows * meta.grid.cols;
  const values = Array.from({ length: n }, (_, i) => 0.123456789 * (i + 1) + featureId);
  return {
    feature_id: featureId,
    timestamp: meta.timestamps[timeIndex],
    min: Math.min(...values),
    max: Math.max(...values),
    values,
  };
}

/** Give a jsdom element a fake layout size so leaflet can initialize. */
export function sizedContainer(width = 800, height = 600): HTMLElement {
  const el = document.createElement("div");
  Object.defineProperty(el, "clientWidth", { value: width, configurable: true });
  Object.defineProperty(el, "clientHeight", { value: height, configurable: true });
  document.body.appendChild(el);
  return el;
}
