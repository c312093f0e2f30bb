// View state and its pure transitions. Frame fetches are tagged with a
// generation counter so stale responses for superseded selections are
// dropped; the legend always reflects the selected variable immediately,
// before any frame arrives.

import { ApiMeta, variableById } from "./api";

export type BaseLayer = "streets" | "satellite" | "topographic";

export interface LegendRange {
  min: number;
  max: number;
  unit: string;
  label: string;
}

export interface ViewState {
  featureId: number;
  timeIndex: number;
  baseLayer: BaseLayer;
  legend: LegendRange;
  loading: boolean;
  error: string | null;
  generation: number;
}

export function initialState(meta: ApiMeta, featureId = 1): ViewState {
  return {
    featureId,
    timeIndex: 0,
    baseLayer: "streets",
    legend: legendFor(meta, featureId),
    loading: false,
    error: null,
    generation: 0,
  };
}

export function legendFor(meta: ApiMeta, featureId: number): LegendRange {
  const v = variableById(meta, featureId);
  const range = meta.ranges[String(featureId)];
  if (!range) throw new Error(`no served range for variable ${featureId}`);
  return { min: range.min, max: range.max, unit: v.unit, label: v.name };
}

/** Switch variable: the legend range and unit update in this transition,
 * ahead of the asynchronous frame render. */
export function selectVariable(state: ViewState, meta: ApiMeta, featureId: number): ViewState {
  return {
    ...state,
    featureId,
    legend: legendFor(meta, featureId),
    loading: true,
    error: null,
    generation: state.generation + 1,
  };
}

export function selectTime(state: ViewState, meta: ApiMeta, timeIndex: number): ViewState {
  const clamped = Math.min(meta.timestamps.length - 1, Math.max(0, Math.round(timeIndex)));
  return {
    ...state,
    timeIndex: clamped,
    loading: true,
    error: null,
    generation: state.generation + 1,
  };
}

export function selectBaseLayer(state: ViewState, layer: BaseLayer): ViewState {
  return { ...state, baseLayer: layer };
}

/** A frame arrived for `generation`; null means it is stale and must be
 * discarded (the previous overlay stays). */
export function frameArrived(state: ViewState, generation: number): ViewState | null {
  if (generation !== state.generation) return null;
  return { ...state, loading: false, error: null };
}

/** A fetch failed: surface the message, keep the previous overlay. */
export function frameFailed(state: ViewState, generation: number, message: string): ViewState | null {
  if (generation !== state.generation) return null;
  return { ...state, loading: false, error: message };
}

/** A frame may only render if it matches the current selection. */
export function frameMatchesView(
  state: ViewState,
  meta: ApiMeta,
  frame: { feature_id: number; timestamp: string },
): boolean {
  return frame.feature_id === state.featureId && frame.timestamp === meta.timestamps[state.timeIndex];
}
