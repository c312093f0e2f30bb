// Typed client for the read-only dataset service.

export interface GridMeta {
  rows: number;
  cols: number;
  spacing_km: number;
  lat_min: number;
  lat_max: number;
  lon_min: number;
  lon_max: number;
  vertical_levels: number;
}

export interface VariableMeta {
  feature_id: number;
  name: string;
  unit: string;
  group: string;
  description: string;
}

export interface ApiMeta {
  grid: GridMeta;
  variables: VariableMeta[];
  timestamps: string[];
  ranges: Record<string, { min: number; max: number }>;
}

export interface ApiFrame {
  feature_id: number;
  timestamp: string;
  min: number;
  max: number;
  values: number[];
}

export async function fetchMeta(base = ""): Promise<ApiMeta> {
  const resp = await fetch(`${base}/api/meta`);
  if (!resp.ok) throw new Error(`meta request failed: HTTP ${resp.status}`);
  return (await resp.json()) as ApiMeta;
}

export async function fetchFrame(featureId: number, timestamp: string, base = ""): Promise<ApiFrame> {
  const url = `${base}/api/frame?var=${featureId}&t=${encodeURIComponent(timestamp)}`;
  const resp = await fetch(url);
  if (!resp.ok) {
    let detail = `HTTP ${resp.status}`;
    try {
      const body = await resp.json();
      if (body && body.detail) detail = `${body.error}: ${body.detail}`;
    } catch {
      // not JSON: keep the status text
    }
    throw new Error(`frame request failed (${detail})`);
  }
  return (await resp.json()) as ApiFrame;
}

export function variableById(meta: ApiMeta, featureId: number): VariableMeta {
  const v = meta.variables.find((x) => x.feature_id === featureId);
  if (!v) throw new Error(`variable ${featureId} not in metadata`);
  return v;
}
