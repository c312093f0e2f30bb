// Perceptual colormap: piecewise-linear interpolation in Oklab through
// fixed anchors from deep blue through white, yellow, and orange to dark
// red. Anchor inputs return the anchor hex exactly.

export interface Anchor {
  t: number;
  hex: string;
}

export const ANCHORS: Anchor[] = [
  { t: 0.0, hex: "#08306B" }, // deep blue
  { t: 0.35, hex: "#FFFFFF" }, // white
  { t: 0.55, hex: "#FFEE58" }, // yellow
  { t: 0.75, hex: "#FB8C00" }, // orange
  { t: 1.0, hex: "#7F0000" }, // dark red
];

type Vec3 = [number, number, number];

function hexToRgb(hex: string): Vec3 {
  const n = parseInt(hex.slice(1), 16);
  return [(n >> 16) & 0xff, (n >> 8) & 0xff, n & 0xff];
}

function rgbToHex([r, g, b]: Vec3): string {
  const c = (v: number) => Math.min(255, Math.max(0, Math.round(v))).toString(16).padStart(2, "0");
  return `#${c(r)}${c(g)}${c(b)}`.toUpperCase();
}

function srgbToLinear(c: number): number {
  const x = c / 255;
  return x <= 0.04045 ? x / 12.92 : Math.pow((x + 0.055) / 1.055, 2.4);
}

function linearToSrgb(x: number): number {
  const c = x <= 0.0031308 ? 12.92 * x : 1.055 * Math.pow(x, 1 / 2.4) - 0.055;
  return 255 * c;
}

function rgbToOklab([r8, g8, b8]: Vec3): Vec3 {
  const r = srgbToLinear(r8);
  const g = srgbToLinear(g8);
  const b = srgbToLinear(b8);
  const l = Math.cbrt(0.4122214708 * r + 0.5363325363 * g + 0.0514459929 * b);
  const m = Math.cbrt(0.2119034982 * r + 0.6806995451 * g + 0.1073969566 * b);
  const s = Math.cbrt(0.0883024619 * r + 0.2817188376 * g + 0.6299787005 * b);
  return [
    0.2104542553 * l + 0.793617785 * m - 0.0040720468 * s,
    1.9779984951 * l - 2.428592205 * m + 0.4505937099 * s,
    0.0259040371 * l + 0.7827717662 * m - 0.808675766 * s,
  ];
}

function oklabToRgb([L, a, b]: Vec3): Vec3 {
  const l = Math.pow(L + 0.3963377774 * a + 0.2158037573 * b, 3);
  const m = Math.pow(L - 0.1055613458 * a - 0.0638541728 * b, 3);
  const s = Math.pow(L - 0.0894841775 * a - 1.291485548 * b, 3);
  return [
    linearToSrgb(4.0767416621 * l - 3.3077115913 * m + 0.2309699292 * s),
    linearToSrgb(-1.2684380046 * l + 2.6097574011 * m - 0.3413193965 * s),
    linearToSrgb(-0.0041960863 * l - 0.7034186147 * m + 1.7076147010 * s),
  ];
}

const ANCHOR_LAB: Vec3[] = ANCHORS.map((a) => rgbToOklab(hexToRgb(a.hex)));

export function clamp01(t: number): number {
  if (Number.isNaN(t)) return 0;
  return Math.min(1, Math.max(0, t));
}

/** Cumulative position along the anchor path: segment index plus local
 * fraction. Strictly increasing in t, used to verify monotone progression. */
export function pathPosition(t: number): number {
  const x = clamp01(t);
  for (let i = 0; i < ANCHORS.length - 1; i++) {
    const a = ANCHORS[i];
    const b = ANCHORS[i + 1];
    if (x <= b.t || i === ANCHORS.length - 2) {
      return i + (x - a.t) / (b.t - a.t);
    }
  }
  return ANCHORS.length - 1;
}

export function colormap(t: number): string {
  const x = clamp01(t);
  for (const a of ANCHORS) {
    if (x === a.t) return a.hex; // anchors are exact, no float drift
  }
  const pos = pathPosition(x);
  const i = Math.min(Math.floor(pos), ANCHORS.length - 2);
  const s = pos - i;
  const la = ANCHOR_LAB[i];
  const lb = ANCHOR_LAB[i + 1];
  const lab: Vec3 = [
    la[0] + s * (lb[0] - la[0]),
    la[1] + s * (lb[1] - la[1]),
    la[2] + s * (lb[2] - la[2]),
  ];
  return rgbToHex(oklabToRgb(lab));
}

/** Normalize a value against a legend range; degenerate ranges map to 0. */
export function normalizeValue(value: number, min: number, max: number): number {
  if (max <= min) return 0;
  return clamp01((value - min) / (max - min));
}
