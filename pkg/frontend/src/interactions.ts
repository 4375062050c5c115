/**
 * Interaction logic: class hover/filter, hatching draw order, bin
 * tooltips, linked highlighting, and the zoom detail switch.  Pure
 * functions so every behavior is unit-testable without a browser.
 */

import { SceneJson, SummaryPayload } from "./types";

/** Move a class to the end of the paint order so it draws on top. */
export function promoteToTop(order: number[], classId: number): number[] {
  const rest = order.filter((c) => c !== classId);
  return [...rest, classId];
}

/** Toggle a class in the filter set, keeping it sorted. */
export function toggleClassFilter(selected: number[], classId: number): number[] {
  const set = new Set(selected);
  if (set.has(classId)) {
    set.delete(classId);
  } else {
    set.add(classId);
  }
  return [...set].sort((a, b) => a - b);
}

/** Classes to desaturate while one class is hovered (all the others). */
export function desaturatedClasses(classCount: number, hovered: number | null): number[] {
  if (hovered === null) return [];
  const out: number[] = [];
  for (let c = 0; c < classCount; c += 1) {
    if (c !== hovered) out.push(c);
  }
  return out;
}

/** Whether a class's marks stay visible under the current filter. */
export function classVisible(selected: number[], classId: number): boolean {
  return selected.length === 0 || selected.includes(classId);
}

/** Tooltip lines for a hovered bin: raw per-class counts from the summary. */
export function binTooltip(summary: SummaryPayload, bin: number): string {
  const record = summary.bins[bin];
  if (!record || record.total === 0) {
    return "0 items";
  }
  const lines: string[] = [];
  for (const cls of summary.classes) {
    const n = record.counts[cls.id];
    if (n > 0) lines.push(`${cls.label}: ${n}`);
  }
  lines.push(`total: ${record.total}`);
  return lines.join("\n");
}

/**
 * Panels in which the hovered bin should be outlined.  Homogeneous
 * juxtaposed lattices share bin indices, so the same index lights up in
 * every panel; heterogeneous panels only highlight locally.
 */
export function linkedHighlightPanels(scene: SceneJson, bin: number, sourcePanel: number): number[] {
  if (!scene.meta.homogeneous_panels) {
    return [sourcePanel];
  }
  return scene.panels.filter((p) => bin < p.lattice.bin_count).map((p) => p.index);
}

export const DETAIL_THRESHOLD_PX = 120;

/** Projected on-screen size of one cell at the current zoom. */
export function projectedCellPx(pxPerUnit: number, cellWidthData: number, zoom: number): number {
  return pxPerUnit * cellWidthData * zoom;
}

/** Switch to the raw-point detail view once cells are big enough. */
export function shouldShowDetail(cellPx: number, threshold: number = DETAIL_THRESHOLD_PX): boolean {
  return cellPx >= threshold;
}

/** Bins whose polygons intersect the visible region, for detail fetches. */
export function visibleBins(
  scene: SceneJson,
  panelIndex: number,
  view: { x0: number; y0: number; x1: number; y1: number },
): number[] {
  const panel = scene.panels[panelIndex];
  const out: number[] = [];
  panel.bin_polygons.forEach((poly, bin) => {
    let minX = Infinity;
    let minY = Infinity;
    let maxX = -Infinity;
    let maxY = -Infinity;
    for (const [x, y] of poly) {
      minX = Math.min(minX, x);
      minY = Math.min(minY, y);
      maxX = Math.max(maxX, x);
      maxY = Math.max(maxY, y);
    }
    if (maxX >= view.x0 && minX <= view.x1 && maxY >= view.y0 && minY <= view.y1) {
      out.push(bin);
    }
  });
  return out;
}
