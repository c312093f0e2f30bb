import { describe, expect, it } from "vitest";

import {
  frameArrived,
  frameFailed,
  frameMatchesView,
  initialState,
  selectTime,
  selectVariable,
} from "../src/state";
import { makeFrame, makeMeta } from "./helpers";

describe("view state", () => {
  const meta = makeMeta(216);

  it("starts on variable 1 with its served legend range", () => {
    const s = initialState(meta);
    expect(s.featureId).toBe(1);
    expect(s.legend).toEqual({ min: 1.5, max: 11.5, unit: "mm/hour", label: "Variable 1" });
  });

  it("updates legend range and unit on variable switch, before any frame", () => {
    const s0 = initialState(meta);
    const s1 = selectVariable(s0, meta, 6);
    // legend already matches the new variable while loading is still true
    expect(s1.loading).toBe(true);
    expect(s1.legend.min).toBe(9);
    expect(s1.legend.max).toBe(19);
    expect(s1.legend.unit).toBe("unit6");
    expect(s1.legend.label).toBe("Variable 6");
  });

  it("clamps the time index to the served timestamp list", () => {
    const s0 = initialState(meta);
    expect(selectTime(s0, meta, 9999).timeIndex).toBe(215);
    expect(selectTime(s0, meta, -4).timeIndex).toBe(0);
  });

  it("drops stale frame responses via generation tags", () => {
    const s0 = initialState(meta);
    const s1 = selectVariable(s0, meta, 2);
    const s2 = selectVariable(s1, meta, 3);
    expect(frameArrived(s2, s1.generation)).toBeNull(); // superseded
    const done = frameArrived(s2, s2.generation);
    expect(done).not.toBeNull();
    expect(done!.loading).toBe(false);
  });

  it("keeps the previous overlay and surfaces a message on failure", () => {
    const s0 = selectVariable(initialState(meta), meta, 4);
    const failed = frameFailed(s0, s0.generation, "frame request failed (HTTP 404)");
    expect(failed).not.toBeNull();
    expect(failed!.error).toContain("404");
    expect(failed!.loading).toBe(false);
    // stale failures are ignored too
    expect(frameFailed(s0, s0.generation - 1, "old")).toBeNull();
  });

  it("refuses frames that do not match the current selection", () => {
    const s = selectTime(selectVariable(initialState(meta), meta, 2), meta, 10);
    expect(frameMatchesView(s, meta, makeFrame(meta, 2, 10))).toBe(true);
    expect(frameMatchesView(s, meta, makeFrame(meta, 3, 10))).toBe(false);
    expect(frameMatchesView(s, meta, makeFrame(meta, 2, 11))).toBe(false);
  });
});
