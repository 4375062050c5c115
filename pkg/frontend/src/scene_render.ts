/**
 * Client-side rendering of the service's scene JSON into SVG DOM.
 *
 * Mirrors the server renderer's geometry so exports match what is on
 * screen, but adds interaction hooks: every bin gets a hover target
 * carrying data-panel/data-bin, and per-class marks carry
 * class="class-<id>" so one class can be restyled everywhere.
 */

import { Color, FillJson, GlyphJson, PanelJson, SceneJson } from "./types";

const SVG_NS = "http://www.w3.org/2000/svg";
const WHITE = "#ffffff";

export function cssColor([r, g, b]: Color): string {
  const hex = (v: number) => v.toString(16).padStart(2, "0");
  return `#${hex(r)}${hex(g)}${hex(b)}`;
}

function el<K extends keyof SVGElementTagNameMap>(
  doc: Document,
  tag: K,
  attrs: Record<string, string> = {},
): SVGElementTagNameMap[K] {
  const node = doc.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  return node;
}

function pointsAttr(poly: [number, number][], dx: number, dy: number): string {
  return poly.map(([x, y]) => `${(x + dx).toFixed(3)},${(y + dy).toFixed(3)}`).join(" ");
}

function polar(cx: number, cy: number, r: number, deg: number): [number, number] {
  const rad = (deg * Math.PI) / 180;
  return [cx + r * Math.sin(rad), cy - r * Math.cos(rad)];
}

export function renderScene(scene: SceneJson, doc: Document): SVGSVGElement {
  const svg = el(doc, "svg", {
    width: String(scene.width),
    height: String(scene.height),
    viewBox: `0 0 ${scene.width} ${scene.height}`,
  });
  svg.appendChild(
    el(doc, "rect", {
      x: "0",
      y: "0",
      width: String(scene.width),
      height: String(scene.height),
      fill: WHITE,
    }),
  );
  const defs = el(doc, "defs");
  svg.appendChild(defs);
  for (const panel of scene.panels) {
    svg.appendChild(renderPanel(panel, doc, defs));
  }
  svg.appendChild(renderLegend(scene, doc));
  return svg;
}

function renderPanel(panel: PanelJson, doc: Document, defs: SVGElement): SVGGElement {
  const [vx, vy, vw, vh] = panel.viewport;
  const group = el(doc, "g", { id: `panel-${panel.index}` });

  const fills = el(doc, "g", { id: `p${panel.index}-fills` });
  for (const { bin, fill } of panel.fills) {
    fills.appendChild(renderFill(panel, bin, fill, doc, defs));
  }
  group.appendChild(fills);

  if (panel.boundaries) {
    const boundaries = el(doc, "g", {
      id: `p${panel.index}-boundaries`,
      fill: "none",
      stroke: "#555555",
      "stroke-width": "0.6",
    });
    panel.bin_polygons.forEach((poly, bin) => {
      boundaries.appendChild(
        el(doc, "polygon", {
          id: `p${panel.index}-bin-${bin}-outline`,
          points: pointsAttr(poly, vx, vy),
        }),
      );
    });
    group.appendChild(boundaries);
  }

  if (panel.glyphs.length) {
    const glyphs = el(doc, "g", { id: `p${panel.index}-glyphs` });
    for (const { bin, geometry } of panel.glyphs) {
      glyphs.appendChild(renderGlyph(panel.index, bin, geometry, doc, vx, vy));
    }
    group.appendChild(glyphs);
  }

  // transparent hover targets on top, one per bin
  const targets = el(doc, "g", { id: `p${panel.index}-targets` });
  panel.bin_polygons.forEach((poly, bin) => {
    const target = el(doc, "polygon", {
      points: pointsAttr(poly, vx, vy),
      fill: "transparent",
      stroke: "none",
      "data-panel": String(panel.index),
      "data-bin": String(bin),
    });
    target.setAttribute("class", "bin-target");
    targets.appendChild(target);
  });
  group.appendChild(targets);

  group.appendChild(renderAxes(panel, doc));
  if (panel.title) {
    const title = el(doc, "text", {
      x: String(vx + vw / 2),
      y: String(vy - 8),
      "text-anchor": "middle",
      "font-size": "12",
      fill: "#333333",
    });
    title.textContent = panel.title;
    group.appendChild(title);
  }
  void vh;
  return group;
}

function renderFill(
  panel: PanelJson,
  bin: number,
  fill: FillJson,
  doc: Document,
  defs: SVGElement,
): SVGElement {
  const [vx, vy] = panel.viewport;
  const poly = panel.bin_polygons[bin];
  const eid = `p${panel.index}-bin-${bin}`;
  if (fill.kind === "solid") {
    return el(doc, "polygon", {
      id: eid,
      points: pointsAttr(poly, vx, vy),
      fill: cssColor(fill.color),
    });
  }
  const xs = poly.map((p) => p[0] + vx);
  const ys = poly.map((p) => p[1] + vy);
  const x0 = Math.min(...xs);
  const x1 = Math.max(...xs);
  const y0 = Math.min(...ys);
  const y1 = Math.max(...ys);
  const clip = el(doc, "clipPath", { id: `${eid}-clip` });
  clip.appendChild(el(doc, "polygon", { points: pointsAttr(poly, vx, vy) }));
  defs.appendChild(clip);
  const group = el(doc, "g", { id: eid, "clip-path": `url(#${eid}-clip)` });

  if (fill.kind === "fragments" || fill.kind === "blocks") {
    const cols = fill.kind === "fragments" ? fill.side : fill.cols;
    const rows = fill.kind === "fragments" ? fill.side : fill.rows;
    const cw = (x1 - x0) / cols;
    const ch = (y1 - y0) / rows;
    fill.colors.forEach((color, i) => {
      if (color[0] === 255 && color[1] === 255 && color[2] === 255) return;
      const r = Math.floor(i / cols);
      const c = i % cols;
      const attrs: Record<string, string> = {
        x: (x0 + c * cw).toFixed(3),
        y: (y0 + r * ch).toFixed(3),
        width: cw.toFixed(3),
        height: ch.toFixed(3),
        fill: cssColor(color),
      };
      const rect = el(doc, "rect", attrs);
      if (fill.kind === "blocks") rect.setAttribute("class", `class-${i}`);
      group.appendChild(rect);
    });
    return group;
  }
  // strokes
  const cx = (x0 + x1) / 2;
  const cy = (y0 + y1) / 2;
  const diag = Math.hypot(x1 - x0, y1 - y0);
  for (const layer of fill.layers) {
    const rad = (layer.angle_deg * Math.PI) / 180;
    const dx = Math.cos(rad);
    const dy = -Math.sin(rad);
    const nx = Math.sin(rad);
    const ny = Math.cos(rad);
    const half = diag / 2 + layer.spacing;
    const kMax = Math.ceil(diag / (2 * layer.spacing)) + 1;
    const layerGroup = el(doc, "g", {
      stroke: cssColor(layer.color),
      "stroke-width": "1",
    });
    layerGroup.setAttribute("class", `class-${layer.class_id}`);
    for (let k = -kMax; k <= kMax; k += 1) {
      const px = cx + k * layer.spacing * nx;
      const py = cy + k * layer.spacing * ny;
      layerGroup.appendChild(
        el(doc, "line", {
          x1: (px - half * dx).toFixed(3),
          y1: (py - half * dy).toFixed(3),
          x2: (px + half * dx).toFixed(3),
          y2: (py + half * dy).toFixed(3),
        }),
      );
    }
    group.appendChild(layerGroup);
  }
  return group;
}

function renderGlyph(
  panelIndex: number,
  bin: number,
  geo: GlyphJson,
  doc: Document,
  vx: number,
  vy: number,
): SVGElement {
  const eid = `p${panelIndex}-bin-${bin}-glyph`;
  const group = el(doc, "g", { id: eid });
  if (geo.kind === "pie") {
    const cx = geo.center[0] + vx;
    const cy = geo.center[1] + vy;
    for (const slice of geo.slices) {
      const path = el(doc, "path", {
        d: slicePath(cx, cy, geo.outer_radius, geo.inner_radius, slice.start_deg, slice.end_deg),
        fill: cssColor(slice.color),
      });
      path.setAttribute("class", `class-${slice.class_id}`);
      group.appendChild(path);
    }
    return group;
  }
  if (geo.kind === "bars") {
    for (const bar of geo.bars) {
      if (bar.height <= 0) continue;
      const rect = el(doc, "rect", {
        x: (bar.x + vx).toFixed(3),
        y: (bar.y + vy).toFixed(3),
        width: bar.width.toFixed(3),
        height: bar.height.toFixed(3),
        fill: cssColor(bar.color),
      });
      rect.setAttribute("class", `class-${bar.class_id}`);
      group.appendChild(rect);
    }
    return group;
  }
  for (const disc of geo.discs) {
    const circle = el(doc, "circle", {
      cx: (disc.x + vx).toFixed(3),
      cy: (disc.y + vy).toFixed(3),
      r: disc.radius.toFixed(3),
      fill: cssColor(disc.color),
    });
    circle.setAttribute("class", `class-${disc.class_id}`);
    group.appendChild(circle);
  }
  return group;
}

function slicePath(
  cx: number,
  cy: number,
  ro: number,
  ri: number,
  a0: number,
  a1: number,
): string {
  const span = a1 - a0;
  const f = (v: number) => v.toFixed(3);
  if (span >= 360 - 1e-9) {
    let d =
      `M ${f(cx)} ${f(cy - ro)} A ${f(ro)} ${f(ro)} 0 1 1 ${f(cx)} ${f(cy + ro)} ` +
      `A ${f(ro)} ${f(ro)} 0 1 1 ${f(cx)} ${f(cy - ro)} Z`;
    if (ri > 0) {
      d +=
        ` M ${f(cx)} ${f(cy - ri)} A ${f(ri)} ${f(ri)} 0 1 0 ${f(cx)} ${f(cy + ri)} ` +
        `A ${f(ri)} ${f(ri)} 0 1 0 ${f(cx)} ${f(cy - ri)} Z`;
    }
    return d;
  }
  const large = span > 180 ? 1 : 0;
  const [ox0, oy0] = polar(cx, cy, ro, a0);
  const [ox1, oy1] = polar(cx, cy, ro, a1);
  if (ri <= 0) {
    return `M ${f(cx)} ${f(cy)} L ${f(ox0)} ${f(oy0)} A ${f(ro)} ${f(ro)} 0 ${large} 1 ${f(ox1)} ${f(oy1)} Z`;
  }
  const [ix0, iy0] = polar(cx, cy, ri, a0);
  const [ix1, iy1] = polar(cx, cy, ri, a1);
  return (
    `M ${f(ix0)} ${f(iy0)} L ${f(ox0)} ${f(oy0)} A ${f(ro)} ${f(ro)} 0 ${large} 1 ${f(ox1)} ${f(oy1)} ` +
    `L ${f(ix1)} ${f(iy1)} A ${f(ri)} ${f(ri)} 0 ${large} 0 ${f(ix0)} ${f(iy0)} Z`
  );
}

function renderAxes(panel: PanelJson, doc: Document): SVGGElement {
  const [vx, vy, vw, vh] = panel.viewport;
  const group = el(doc, "g", {
    id: `p${panel.index}-axes`,
    "font-size": "10",
    fill: "#333333",
  });
  const axisY = vy + vh;
  group.appendChild(
    el(doc, "line", {
      x1: String(vx),
      y1: String(axisY),
      x2: String(vx + vw),
      y2: String(axisY),
      stroke: "#333333",
    }),
  );
  group.appendChild(
    el(doc, "line", {
      x1: String(vx),
      y1: String(vy),
      x2: String(vx),
      y2: String(axisY),
      stroke: "#333333",
    }),
  );
  for (const tick of panel.x_ticks) {
    const x = vx + tick.px;
    const label = el(doc, "text", {
      x: String(x),
      y: String(axisY + 15),
      "text-anchor": "middle",
    });
    label.textContent = tick.label;
    group.appendChild(label);
  }
  for (const tick of panel.y_ticks) {
    const label = el(doc, "text", {
      x: String(vx - 6),
      y: String(vy + tick.px + 3),
      "text-anchor": "end",
    });
    label.textContent = tick.label;
    group.appendChild(label);
  }
  return group;
}

function renderLegend(scene: SceneJson, doc: Document): SVGGElement {
  const group = el(doc, "g", { id: "legend", "font-size": "11" });
  const x = scene.width - 124;
  let y = 24;
  for (const entry of scene.legend) {
    const item = el(doc, "g", { id: `legend-class-${entry.class_id}` });
    item.setAttribute("class", `class-${entry.class_id} legend-entry`);
    item.setAttribute("data-class", String(entry.class_id));
    item.appendChild(
      el(doc, "rect", {
        x: String(x),
        y: String(y - 9),
        width: "12",
        height: "12",
        fill: cssColor(entry.color),
      }),
    );
    const label = el(doc, "text", { x: String(x + 17), y: String(y + 1), fill: "#333333" });
    label.textContent = entry.label;
    item.appendChild(label);
    group.appendChild(item);
    y += 18;
  }
  return group;
}

/** Dim every class-<c> mark except the hovered class; null restores all. */
export function applyClassHighlight(root: SVGElement, hovered: number | null): void {
  const marks = root.querySelectorAll<SVGElement>("[class*='class-']");
  marks.forEach((mark) => {
    const match = /(?:^|\s)class-(\d+)(?:\s|$)/.exec(mark.getAttribute("class") ?? "");
    if (!match) return;
    const classId = Number(match[1]);
    mark.setAttribute("opacity", hovered === null || classId === hovered ? "1" : "0.25");
  });
}

/** Show/hide class marks according to the filter set (empty = all). */
export function applyClassFilter(root: SVGElement, selected: number[]): void {
  const marks = root.querySelectorAll<SVGElement>("[class*='class-']");
  marks.forEach((mark) => {
    const match = /(?:^|\s)class-(\d+)(?:\s|$)/.exec(mark.getAttribute("class") ?? "");
    if (!match) return;
    if (mark.getAttribute("class")?.includes("legend-entry")) return;
    const classId = Number(match[1]);
    const visible = selected.length === 0 || selected.includes(classId);
    mark.setAttribute("display", visible ? "inline" : "none");
  });
}

/** Outline one bin index in the given panels (linked highlighting). */
export function applyBinOutlines(root: SVGElement, bin: number | null, panels: number[]): void {
  root.querySelectorAll<SVGElement>(".linked-outline").forEach((node) => node.remove());
  if (bin === null) return;
  for (const panelIndex of panels) {
    const target = root.querySelector<SVGElement>(
      `polygon[data-panel='${panelIndex}'][data-bin='${bin}']`,
    );
    if (!target) continue;
    const outline = target.cloneNode(false) as SVGElement;
    outline.setAttribute("class", "linked-outline");
    outline.setAttribute("fill", "none");
    outline.setAttribute("stroke", "#111111");
    outline.setAttribute("stroke-width", "2");
    outline.removeAttribute("data-panel");
    outline.removeAttribute("data-bin");
    target.parentElement?.appendChild(outline);
  }
}
