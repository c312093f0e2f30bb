// Control panels: grouped variable picker, time slider, base layer switch,
// loading bar, and the error banner.

import { ApiMeta } from "./api";
import { BaseLayer } from "./state";

export function buildVariablePicker(
  select: HTMLSelectElement,
  meta: ApiMeta,
  onChange: (featureId: number) => void,
): void {
  select.innerHTML = "";
  const groups = new Map<string, typeof meta.variables>();
  for (const v of meta.variables) {
    const list = groups.get(v.group) ?? [];
    list.push(v);
    groups.set(v.group, list);
  }
  for (const [group, vars] of groups) {
    const og = document.createElement("optgroup");
    og.label = group;
    for (const v of vars) {
      const opt = document.createElement("option");
      opt.value = String(v.feature_id);
      opt.textContent = `${v.name} (${v.unit})`;
      og.appendChild(opt);
    }
    select.appendChild(og);
  }
  select.addEventListener("change", () => onChange(Number(select.value)));
}

export function buildTimeSlider(
  slider: HTMLInputElement,
  label: HTMLElement,
  meta: ApiMeta,
  onChange: (index: number) => void,
): void {
  slider.min = "0";
  slider.max = String(meta.timestamps.length - 1);
  slider.step = "1";
  slider.value = "0";
  label.textContent = meta.timestamps[0];
  slider.addEventListener("input", () => {
    const idx = Number(slider.value);
    label.textContent = meta.timestamps[idx];
    onChange(idx);
  });
}

export function buildLayerPicker(
  container: HTMLElement,
  onChange: (layer: BaseLayer) => void,
): void {
  const layers: { id: BaseLayer; name: string }[] = [
    { id: "streets", name: "Streets" },
    { id: "satellite", name: "Satellite" },
    { id: "topographic", name: "Topographic" },
  ];
  container.innerHTML = "";
  for (const { id, name } of layers) {
    const btn = document.createElement("button");
    btn.className = "layer-btn" + (id === "streets" ? " active" : "");
    btn.dataset.layer = id;
    btn.textContent = name;
    btn.addEventListener("click", () => {
      container.querySelectorAll(".layer-btn").forEach((b) => b.classList.remove("active"));
      btn.classList.add("active");
      onChange(id);
    });
    container.appendChild(btn);
  }
}

export function setLoading(bar: HTMLElement, loading: boolean): void {
  bar.classList.toggle("visible", loading);
}

export function showError(banner: HTMLElement, message: string | null): void {
  if (message) {
    banner.textContent = message;
    banner.classList.add("visible");
  } else {
    banner.textContent = "";
    banner.classList.remove("visible");
  }
}
