// Dynamic legend: gradient bar plus range labels for the active variable.

import { ANCHORS, colormap } from "./colormap";
import { formatValue } from "./format";
import { LegendRange } from "./state";

export function legendGradientCss(): string {
  const stops: string[] = [];
  for (let i = 0; i <= 20; i++) {
    const t = i / 20;
    stops.push(`${colormap(t)} ${(t * 100).toFixed(0)}%`);
  }
  return `linear-gradient(to right, ${stops.join(", ")})`;
}

export function renderLegend(el: HTMLElement, legend: LegendRange): void {
  el.innerHTML = [
    `<div class="legend-label">${legend.label} (${legend.unit})</div>`,
    `<div class="legend-bar" style="background: ${legendGradientCss()}"></div>`,
    `<div class="legend-range">`,
    `<span class="legend-min">${formatValue(legend.min)}</span>`,
    `<span class="legend-max">${formatValue(legend.max)}</span>`,
    `</div>`,
  ].join("");
}

export { ANCHORS };
