/**
 * Explorer app wiring: dataset upload, design controls with live rule
 * feedback, scene rendering, class/bin interactions, zoom detail
 * switch, and URL-shareable view state.
 */

import { ApiClient, ValidationError } from "./api";
import {
  DETAIL_THRESHOLD_PX,
  binTooltip,
  linkedHighlightPanels,
  projectedCellPx,
  promoteToTop,
  shouldShowDetail,
  toggleClassFilter,
  visibleBins,
} from "./interactions";
import { disabledOptions, validateDesign } from "./rules";
import {
  applyBinOutlines,
  applyClassFilter,
  applyClassHighlight,
  cssColor,
  renderScene,
} from "./scene_render";
import { ExplorerState, decodeState, encodeState, initialState } from "./state";
import {
  BACKGROUNDS,
  COMPOSITIONS,
  DatasetMeta,
  GLYPHS,
  NORMALIZATIONS,
  SCALES,
  SHAPES,
  SceneJson,
  SummaryPayload,
} from "./types";

const api = new ApiClient("");

interface App {
  state: ExplorerState;
  dataset: DatasetMeta | null;
  scene: SceneJson | null;
  summary: SummaryPayload | null;
  root: HTMLElement;
  plot: HTMLElement;
  controls: HTMLElement;
  status: HTMLElement;
  tooltip: HTMLElement;
}

function syncUrl(app: App): void {
  const query = encodeState(app.state);
  history.replaceState(null, "", query ? `?${query}` : location.pathname);
}

async function refreshScene(app: App): Promise<void> {
  if (!app.dataset) return;
  const config = { ...app.state.config };
  if (app.state.drawOrder) config.hatch_draw_order = app.state.drawOrder;
  const violations = validateDesign(config);
  if (violations.length) {
    app.status.textContent = violations.map((v) => v.reason).join(" | ");
    return;
  }
  app.status.textContent = "rendering…";
  try {
    const [scene, summary] = await Promise.all([
      api.scene(app.dataset.id, config),
      api.summary(app.dataset.id, {
        shape: config.shape,
        bins_x: config.bins_x,
        normalization: config.normalization,
        scale: config.scale,
      }),
    ]);
    app.scene = scene;
    app.summary = summary;
    drawScene(app);
    app.status.textContent = `${app.dataset.point_count} points, ${scene.panels[0].lattice.bin_count} bins`;
  } catch (err) {
    if (err instanceof DOMException && err.name === "AbortError") return;
    app.status.textContent = err instanceof ValidationError ? err.message : String(err);
  }
}

function drawScene(app: App): void {
  if (!app.scene) return;
  app.plot.replaceChildren();
  const svg = renderScene(app.scene, document);
  const zoomLayer = document.createElementNS("http://www.w3.org/2000/svg", "g");
  while (svg.firstChild) zoomLayer.appendChild(svg.firstChild);
  svg.appendChild(zoomLayer);
  zoomLayer.setAttribute(
    "transform",
    `translate(${app.state.panX},${app.state.panY}) scale(${app.state.zoom})`,
  );
  app.plot.appendChild(svg);
  applyClassFilter(svg, app.state.selectedClasses);
  applyClassHighlight(svg, app.state.hoveredClass);
  wireSvgInteractions(app, svg);
  void maybeShowDetail(app, svg);
}

function wireSvgInteractions(app: App, svg: SVGSVGElement): void {
  svg.querySelectorAll<SVGElement>(".bin-target").forEach((target) => {
    target.addEventListener("mousemove", (event) => {
      const bin = Number(target.getAttribute("data-bin"));
      const panel = Number(target.getAttribute("data-panel"));
      app.state.hoveredBin = bin;
      if (app.summary) {
        app.tooltip.textContent = binTooltip(app.summary, bin);
        app.tooltip.style.display = "block";
        app.tooltip.style.left = `${(event as MouseEvent).pageX + 12}px`;
        app.tooltip.style.top = `${(event as MouseEvent).pageY + 12}px`;
      }
      if (app.scene) {
        applyBinOutlines(svg, bin, linkedHighlightPanels(app.scene, bin, panel));
      }
    });
    target.addEventListener("mouseleave", () => {
      app.state.hoveredBin = null;
      app.tooltip.style.display = "none";
      applyBinOutlines(svg, null, []);
    });
  });
  svg.querySelectorAll<SVGElement>(".legend-entry").forEach((entry) => {
    const classId = Number(entry.getAttribute("data-class"));
    entry.addEventListener("mouseenter", () => {
      app.state.hoveredClass = classId;
      applyClassHighlight(svg, classId);
    });
    entry.addEventListener("mouseleave", () => {
      app.state.hoveredClass = null;
      applyClassHighlight(svg, null);
    });
    entry.addEventListener("click", () => {
      app.state.selectedClasses = toggleClassFilter(app.state.selectedClasses, classId);
      applyClassFilter(svg, app.state.selectedClasses);
      if (app.state.config.background === "hatching" && app.scene) {
        const k = app.scene.meta.class_count;
        const order = app.state.drawOrder ?? [...Array(k).keys()];
        app.state.drawOrder = promoteToTop(order, classId);
        void refreshScene(app);
      }
      syncUrl(app);
    });
  });
  svg.addEventListener("wheel", (event) => {
    event.preventDefault();
    const factor = (event as WheelEvent).deltaY < 0 ? 1.2 : 1 / 1.2;
    app.state.zoom = Math.min(40, Math.max(1, app.state.zoom * factor));
    syncUrl(app);
    drawScene(app);
  });
}

async function maybeShowDetail(app: App, svg: SVGSVGElement): Promise<void> {
  if (!app.scene || !app.dataset || app.state.config.glyph === "points") return;
  const panel = app.scene.panels[0];
  const cellData = panel.domain.x_max === panel.domain.x_min
    ? 1
    : (panel.domain.x_max - panel.domain.x_min) / panel.lattice.bins_x;
  const cellPx = projectedCellPx(panel.px_per_unit, cellData, app.state.zoom);
  const overlayId = "detail-overlay";
  svg.querySelector(`#${overlayId}`)?.remove();
  if (!shouldShowDetail(cellPx, DETAIL_THRESHOLD_PX)) return;
  const [vx, vy, vw, vh] = panel.viewport;
  const view = {
    x0: -app.state.panX / app.state.zoom - vx,
    y0: -app.state.panY / app.state.zoom - vy,
    x1: (-app.state.panX + vw) / app.state.zoom,
    y1: (-app.state.panY + vh) / app.state.zoom,
  };
  const bins = visibleBins(app.scene, 0, view).slice(0, 64);
  const payload = await api.points(app.dataset.id, {
    shape: app.state.config.shape,
    bins_x: app.state.config.bins_x,
    bins,
  });
  const overlay = document.createElementNS("http://www.w3.org/2000/svg", "g");
  overlay.setAttribute("id", overlayId);
  const colorOf = new Map(app.scene.legend.map((e) => [e.class_id, cssColor(e.color)]));
  const scale = panel.px_per_unit;
  for (const pts of Object.values(payload.bins)) {
    for (const [x, y, c] of pts) {
      const circle = document.createElementNS("http://www.w3.org/2000/svg", "circle");
      circle.setAttribute("cx", String(vx + (x - panel.domain.x_min) * scale));
      circle.setAttribute("cy", String(vy + vh - (y - panel.domain.y_min) * scale));
      circle.setAttribute("r", String(2 / app.state.zoom));
      circle.setAttribute("fill", colorOf.get(c) ?? "#000000");
      circle.setAttribute("class", `class-${c}`);
      overlay.appendChild(circle);
    }
  }
  (svg.firstElementChild?.tagName === "g" ? svg.firstElementChild : svg).appendChild(overlay);
}

function buildControls(app: App): void {
  app.controls.replaceChildren();
  const config = app.state.config;
  const addSelect = <T extends string>(
    label: string,
    values: readonly T[],
    current: T,
    disabled: Map<string, string>,
    onChange: (value: T) => void,
  ) => {
    const wrap = document.createElement("label");
    wrap.className = "control";
    wrap.textContent = label;
    const select = document.createElement("select");
    for (const value of values) {
      const option = document.createElement("option");
      option.value = value;
      option.textContent = value;
      option.selected = value === current;
      const reason = disabled.get(value);
      if (reason) {
        option.disabled = true;
        option.title = reason;
      }
      select.appendChild(option);
    }
    select.addEventListener("change", () => onChange(select.value as T));
    wrap.appendChild(select);
    app.controls.appendChild(wrap);
  };
  const addNumber = (label: string, value: number, min: number, onChange: (v: number) => void) => {
    const wrap = document.createElement("label");
    wrap.className = "control";
    wrap.textContent = label;
    const input = document.createElement("input");
    input.type = "number";
    input.min = String(min);
    input.value = String(value);
    input.addEventListener("change", () => onChange(Number(input.value)));
    wrap.appendChild(input);
    app.controls.appendChild(wrap);
  };

  const off = disabledOptions(config);
  const update = (mutate: () => void) => {
    mutate();
    buildControls(app);
    syncUrl(app);
    void refreshScene(app);
  };
  addSelect("shape", SHAPES, config.shape, new Map(), (v) => update(() => (config.shape = v)));
  addNumber("bins x", config.bins_x, 1, (v) => update(() => (config.bins_x = Math.max(1, v))));
  addSelect("normalization", NORMALIZATIONS, config.normalization, off.normalization, (v) =>
    update(() => (config.normalization = v)),
  );
  addSelect("scale", SCALES, config.scale, new Map(), (v) => update(() => (config.scale = v)));
  addSelect("composition", COMPOSITIONS, config.composition, off.composition, (v) =>
    update(() => (config.composition = v)),
  );
  addSelect("background", BACKGROUNDS, config.background, off.background, (v) =>
    update(() => (config.background = v)),
  );
  addSelect("glyph", GLYPHS, config.glyph, off.glyph, (v) => update(() => (config.glyph = v)));
  addSelect(
    "boundaries",
    ["on", "off"] as const,
    config.boundaries ? "on" : "off",
    new Map(
      [...off.boundaries].map(([k, v]) => [k === "true" ? "on" : "off", v] as [string, string]),
    ),
    (v) => update(() => (config.boundaries = v === "on")),
  );
  addNumber("seed", config.seed, 0, (v) => update(() => (config.seed = v)));
  addNumber("panel px", config.panel_size, 80, (v) => update(() => (config.panel_size = v)));
  addNumber("fragments", config.fragment_grid, 2, (v) => update(() => (config.fragment_grid = v)));
  addNumber("samples", config.sample_budget, 1, (v) => update(() => (config.sample_budget = v)));

  const exportBtn = document.createElement("button");
  exportBtn.textContent = "download SVG";
  exportBtn.addEventListener("click", async () => {
    if (!app.dataset) return;
    const svgText = await api.renderSvg(app.dataset.id, config);
    const blob = new Blob([svgText], { type: "image/svg+xml" });
    const a = document.createElement("a");
    a.href = URL.createObjectURL(blob);
    a.download = "binplot.svg";
    a.click();
  });
  app.controls.appendChild(exportBtn);
}

function wireUpload(app: App): void {
  const input = document.querySelector<HTMLInputElement>("#csv-upload");
  if (!input) return;
  input.addEventListener("change", async () => {
    const file = input.files?.[0];
    if (!file) return;
    try {
      app.dataset = await api.uploadDataset(await file.text());
      app.state.datasetId = app.dataset.id;
      app.state.zoom = 1;
      app.state.panX = 0;
      app.state.panY = 0;
      syncUrl(app);
      await refreshScene(app);
    } catch (err) {
      app.status.textContent = String(err);
    }
  });
}

export async function start(): Promise<void> {
  const root = document.querySelector<HTMLElement>("#app");
  if (!root) return;
  const app: App = {
    state: location.search ? decodeState(location.search.slice(1)) : initialState(),
    dataset: null,
    scene: null,
    summary: null,
    root,
    plot: root.querySelector("#plot") as HTMLElement,
    controls: root.querySelector("#controls") as HTMLElement,
    status: root.querySelector("#status") as HTMLElement,
    tooltip: root.querySelector("#tooltip") as HTMLElement,
  };
  buildControls(app);
  wireUpload(app);
  if (app.state.datasetId) {
    try {
      const listing = await fetch("/datasets").then((r) => r.json());
      app.dataset =
        listing.datasets.find((d: DatasetMeta) => d.id === app.state.datasetId) ?? null;
      if (app.dataset) await refreshScene(app);
    } catch {
      /* service not reachable yet; upload will retry */
    }
  }
}

if (typeof window !== "undefined" && typeof document !== "undefined" && document.querySelector("#app")) {
  void start();
}
