/** Wire types shared with the binplot service (see docs/scene_schema.md). */

export type ShapeKind = "rect" | "hex" | "tri";
export type Normalization = "bin-internal" | "class-internal" | "global";
export type Scale = "linear" | "log";
export type Composition = "superimposed" | "juxtaposed";
export type Background =
  | "none"
  | "luminance"
  | "majority"
  | "blend"
  | "weave"
  | "attribute-blocks"
  | "hatching";
export type Glyph =
  | "none"
  | "pie"
  | "donut"
  | "area-pie"
  | "grouped-bar"
  | "stacked-bar"
  | "points";

export const SHAPES: ShapeKind[] = ["rect", "hex", "tri"];
export const NORMALIZATIONS: Normalization[] = ["bin-internal", "class-internal", "global"];
export const SCALES: Scale[] = ["linear", "log"];
export const COMPOSITIONS: Composition[] = ["superimposed", "juxtaposed"];
export const BACKGROUNDS: Background[] = [
  "none",
  "luminance",
  "majority",
  "blend",
  "weave",
  "attribute-blocks",
  "hatching",
];
export const GLYPHS: Glyph[] = [
  "none",
  "pie",
  "donut",
  "area-pie",
  "grouped-bar",
  "stacked-bar",
  "points",
];

export interface DesignConfig {
  shape: ShapeKind;
  bins_x: number;
  boundaries: boolean;
  normalization: Normalization;
  scale: Scale;
  composition: Composition;
  background: Background;
  glyph: Glyph;
  seed: number;
  panel_size: number;
  quantization: number | null;
  fragment_grid: number;
  sample_budget: number;
  hatch_draw_order?: number[];
}

export const DEFAULT_CONFIG: DesignConfig = {
  shape: "hex",
  bins_x: 20,
  boundaries: true,
  normalization: "global",
  scale: "linear",
  composition: "superimposed",
  background: "luminance",
  glyph: "none",
  seed: 0,
  panel_size: 420,
  quantization: null,
  fragment_grid: 8,
  sample_budget: 10,
};

export type Color = [number, number, number];

export interface ClassMeta {
  id: number;
  label: string;
}

export interface DatasetMeta {
  id: string;
  name: string;
  point_count: number;
  classes: ClassMeta[];
  domain: { x_min: number; x_max: number; y_min: number; y_max: number };
}

export interface SummaryBin {
  index: number;
  counts: number[];
  total: number;
  intensity: number[];
}

export interface SummaryPayload {
  dataset_id: string;
  shape: ShapeKind;
  bins_x: number;
  normalization: Normalization;
  scale: Scale;
  grid_rows: number;
  grid_cols: number;
  bin_count: number;
  classes: ClassMeta[];
  class_totals: number[];
  grand_total: number;
  bins: SummaryBin[];
}

export interface PointsPayload {
  dataset_id: string;
  bins: Record<string, [number, number, number][]>;
}

export interface AxisTick {
  value: number;
  px: number;
  label: string;
}

export type FillJson =
  | { kind: "solid"; color: Color }
  | { kind: "fragments"; side: number; colors: Color[] }
  | { kind: "blocks"; rows: number; cols: number; colors: Color[] }
  | {
      kind: "strokes";
      layers: { class_id: number; angle_deg: number; spacing: number; color: Color }[];
    };

export type GlyphJson =
  | {
      kind: "pie";
      center: [number, number];
      outer_radius: number;
      inner_radius: number;
      slices: { class_id: number; start_deg: number; end_deg: number; color: Color }[];
    }
  | {
      kind: "bars";
      variant: "grouped" | "stacked";
      baseline_y: number;
      bars: { class_id: number; x: number; y: number; width: number; height: number; color: Color }[];
    }
  | {
      kind: "points";
      discs: { class_id: number; x: number; y: number; radius: number; color: Color }[];
    };

export interface PanelJson {
  index: number;
  class_id: number | null;
  title: string;
  viewport: [number, number, number, number];
  domain: { x_min: number; x_max: number; y_min: number; y_max: number };
  px_per_unit: number;
  lattice: {
    shape: ShapeKind;
    bins_x: number;
    grid_rows: number;
    grid_cols: number;
    bin_count: number;
  };
  bin_polygons: [number, number][][];
  boundaries: boolean;
  fills: { bin: number; fill: FillJson }[];
  glyphs: { bin: number; geometry: GlyphJson }[];
  x_ticks: AxisTick[];
  y_ticks: AxisTick[];
}

export interface SceneJson {
  width: number;
  height: number;
  meta: {
    design: Record<string, unknown>;
    class_count: number;
    point_count: number;
    homogeneous_panels: boolean;
  };
  legend: { class_id: number; label: string; color: Color }[];
  panels: PanelJson[];
}
