// @vitest-environment jsdom
import { describe, expect, it } from "vitest";

import { buildTimeSlider, buildVariablePicker, setLoading, showError } from "../src/controls";
import { makeMeta } from "./helpers";

describe("time slider", () => {
  it("traverses all 216 timestamps with display-format labels", () => {
    const meta = makeMeta(216);
    const slider = document.createElement("input");
    const label = document.createElement("span");
    const seen: number[] = [];
    buildTimeSlider(slider, label, meta, (i) => seen.push(i));

    expect(slider.min).toBe("0");
    expect(slider.max).toBe("215");
    expect(label.textContent).toBe("2022-09-23 00:00");

    slider.value = "215";
    slider.dispatchEvent(new Event("input"));
    expect(label.textContent).toBe("2022-10-01 23:00");
    expect(seen).toEqual([215]);

    // every position is reachable and labelled from the served list
    for (let i = 0; i < 216; i++) {
      slider.value = String(i);
      slider.dispatchEvent(new Event("input"));
      expect(label.textContent).toBe(meta.timestamps[i]);
    }
  });
});

describe("variable picker", () => {
  it("groups entries by served group with each variable exactly once", () => {
    const meta = makeMeta(24);
    const select = document.createElement("select");
    buildVariablePicker(select, meta, () => undefined);
    const groups = Array.from(select.querySelectorAll("optgroup")).map((g) => g.label);
    expect(new Set(groups)).toEqual(
      new Set(["Momentum", "Temperature", "Moisture", "Mass", "Cloud", "Radiation"]),
    );
    const options = Array.from(select.querySelectorAll("option")).map((o) => o.value);
    expect(options.length).toBe(19);
    expect(new Set(options).size).toBe(19);
  });

  it("reports the selected feature id", () => {
    const meta = makeMeta(24);
    const select = document.createElement("select");
    let picked = 0;
    buildVariablePicker(select, meta, (id) => (picked = id));
    select.value = "12";
    select.dispatchEvent(new Event("change"));
    expect(picked).toBe(12);
  });
});

describe("loading and error indicators", () => {
  it("toggles the loading bar", () => {
    const bar = document.createElement("div");
    setLoading(bar, true);
    expect(bar.classList.contains("visible")).toBe(true);
    setLoading(bar, false);
    expect(bar.classList.contains("visible")).toBe(false);
  });

  it("shows and clears error banners", () => {
    const banner = document.createElement("div");
    showError(banner, "frame request failed (HTTP 404)");
    expect(banner.classList.contains("visible")).toBe(true);
    expect(banner.textContent).toContain("404");
    showError(banner, null);
    expect(banner.classList.contains("visible")).toBe(false);
  });
});
