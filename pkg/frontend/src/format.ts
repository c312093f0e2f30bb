// Display formatting and grid geometry shared by overlay and popups.

import { GridMeta } from "./api";

/** Exact value rendered to four significant digits (no trailing zeros). */
export function formatValue(v: number): string {
  if (!Number.isFinite(v)) return String(v);
  if (v === 0) return "0";
  return String(Number(v.toPrecision(4)));
}

/** Cell center interpolated over the bounds box; row 0 is the north edge. */
export function cellCenter(grid: GridMeta, row: number, col: number): [number, number] {
  const lat = grid.lat_max - ((row + 0.5) * (grid.lat_max - grid.lat_min)) / grid.rows;
  const lon = grid.lon_min + ((col + 0.5) * (grid.lon_max - grid.lon_min)) / grid.cols;
  return [lat, lon];
}

export function cellOf(grid: GridMeta, index: number): { row: number; col: number } {
  return { row: Math.floor(index / grid.cols), col: index % grid.cols };
}

export function formatCoord(lat: number, lon: number): string {
  const ns = lat >= 0 ? "N" : "S";
  const ew = lon >= 0 ? "E" : "W";
  return `${Math.abs(lat).toFixed(3)}°${ns}, ${Math.abs(lon).toFixed(3)}°${ew}`;
}
