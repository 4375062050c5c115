/**
 * Explorer view state and its URL encoding.
 *
 * Everything needed to reconstruct a shared view round-trips through
 * query parameters; transient hover state stays out of the URL.
 */

import { DEFAULT_CONFIG, DesignConfig } from "./types";

export interface ExplorerState {
  datasetId: string | null;
  config: DesignConfig;
  selectedClasses: number[]; // class filter, ascending
  drawOrder: number[] | null; // hatching paint order, back to front
  zoom: number;
  panX: number;
  panY: number;
  hoveredClass: number | null; // transient, not URL-encoded
  hoveredBin: number | null; // transient, not URL-encoded
}

export function initialState(): ExplorerState {
  return {
    datasetId: null,
    config: { ...DEFAULT_CONFIG },
    selectedClasses: [],
    drawOrder: null,
    zoom: 1,
    panX: 0,
    panY: 0,
    hoveredClass: null,
    hoveredBin: null,
  };
}

const NUMERIC_KEYS = [
  "bins_x",
  "seed",
  "panel_size",
  "fragment_grid",
  "sample_budget",
] as const;

export function encodeState(state: ExplorerState): string {
  const params = new URLSearchParams();
  if (state.datasetId) params.set("ds", state.datasetId);
  const config = state.config;
  params.set("shape", config.shape);
  params.set("norm", config.normalization);
  params.set("scale", config.scale);
  params.set("comp", config.composition);
  params.set("bg", config.background);
  params.set("glyph", config.glyph);
  params.set("bounds", config.boundaries ? "1" : "0");
  for (const key of NUMERIC_KEYS) params.set(key, String(config[key]));
  if (config.quantization !== null) params.set("quant", String(config.quantization));
  if (state.selectedClasses.length) params.set("sel", state.selectedClasses.join("."));
  if (state.drawOrder) params.set("order", state.drawOrder.join("."));
  if (state.zoom !== 1) params.set("zoom", String(state.zoom));
  if (state.panX !== 0) params.set("px", String(state.panX));
  if (state.panY !== 0) params.set("py", String(state.panY));
  return params.toString();
}

export function decodeState(query: string): ExplorerState {
  const params = new URLSearchParams(query);
  const state = initialState();
  state.datasetId = params.get("ds");
  const config = state.config;
  const pick = <T extends string>(key: string, fallback: T): T =>
    (params.get(key) as T) ?? fallback;
  config.shape = pick("shape", config.shape);
  config.normalization = pick("norm", config.normalization);
  config.scale = pick("scale", config.scale);
  config.composition = pick("comp", config.composition);
  config.background = pick("bg", config.background);
  config.glyph = pick("glyph", config.glyph);
  if (params.has("bounds")) config.boundaries = params.get("bounds") === "1";
  for (const key of NUMERIC_KEYS) {
    const raw = params.get(key);
    if (raw !== null && Number.isFinite(Number(raw))) config[key] = Number(raw);
  }
  config.quantization = params.has("quant") ? Number(params.get("quant")) : null;
  const parseList = (raw: string | null): number[] =>
    raw === null || raw === ""
      ? []
      : raw
          .split(".")
          .map(Number)
          .filter((n) => Number.isInteger(n));
  state.selectedClasses = parseList(params.get("sel"));
  state.drawOrder = params.has("order") ? parseList(params.get("order")) : null;
  if (params.has("zoom")) state.zoom = Number(params.get("zoom"));
  if (params.has("px")) state.panX = Number(params.get("px"));
  if (params.has("py")) state.panY = Number(params.get("py"));
  return state;
}
