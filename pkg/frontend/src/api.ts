/**
 * Thin client over the binplot service.  Scene and summary requests
 * cancel any in-flight predecessor of the same kind, so rapid control
 * changes never apply stale responses.
 */

import {
  DatasetMeta,
  DesignConfig,
  PointsPayload,
  SceneJson,
  ShapeKind,
  SummaryPayload,
} from "./types";
import { Violation } from "./rules";

export class ValidationError extends Error {
  violations: Violation[];

  constructor(violations: Violation[]) {
    super(violations.map((v) => `${v.rule}: ${v.reason}`).join("; "));
    this.violations = violations;
  }
}

export class ApiClient {
  private base: string;
  private inflight = new Map<string, AbortController>();

  constructor(base: string = "") {
    this.base = base.replace(/\/$/, "");
  }

  private controllerFor(key: string): AbortController {
    this.inflight.get(key)?.abort();
    const controller = new AbortController();
    this.inflight.set(key, controller);
    return controller;
  }

  async uploadDataset(
    csv: string,
    columns: { x?: string; y?: string; class?: string } = {},
  ): Promise<DatasetMeta> {
    const params = new URLSearchParams();
    if (columns.x) params.set("x_col", columns.x);
    if (columns.y) params.set("y_col", columns.y);
    if (columns.class) params.set("class_col", columns.class);
    const resp = await fetch(`${this.base}/datasets?${params}`, {
      method: "POST",
      body: csv,
      headers: { "Content-Type": "text/csv" },
    });
    if (!resp.ok) {
      throw new Error((await resp.json()).detail ?? `upload failed (${resp.status})`);
    }
    return resp.json();
  }

  async summary(
    datasetId: string,
    params: { shape: ShapeKind; bins_x: number; normalization: string; scale: string },
  ): Promise<SummaryPayload> {
    const query = new URLSearchParams({
      shape: params.shape,
      bins_x: String(params.bins_x),
      normalization: params.normalization,
      scale: params.scale,
    });
    const controller = this.controllerFor("summary");
    const resp = await fetch(`${this.base}/datasets/${datasetId}/summary?${query}`, {
      signal: controller.signal,
    });
    if (!resp.ok) throw new Error(`summary failed (${resp.status})`);
    return resp.json();
  }

  async scene(datasetId: string, config: DesignConfig): Promise<SceneJson> {
    const controller = this.controllerFor("scene");
    const resp = await fetch(`${this.base}/scene`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ dataset_id: datasetId, config }),
      signal: controller.signal,
    });
    if (resp.status === 422) {
      const payload = await resp.json();
      throw new ValidationError(payload.violations ?? []);
    }
    if (!resp.ok) throw new Error(`scene failed (${resp.status})`);
    return resp.json();
  }

  async renderSvg(datasetId: string, config: DesignConfig): Promise<string> {
    const resp = await fetch(`${this.base}/render`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ dataset_id: datasetId, config }),
    });
    if (resp.status === 422) {
      const payload = await resp.json();
      throw new ValidationError(payload.violations ?? []);
    }
    if (!resp.ok) throw new Error(`render failed (${resp.status})`);
    return resp.text();
  }

  async points(
    datasetId: string,
    params: { shape: ShapeKind; bins_x: number; bins: number[] },
  ): Promise<PointsPayload> {
    const query = new URLSearchParams({
      shape: params.shape,
      bins_x: String(params.bins_x),
      bins: params.bins.join(","),
    });
    const controller = this.controllerFor("points");
    const resp = await fetch(`${this.base}/datasets/${datasetId}/points?${query}`, {
      signal: controller.signal,
    });
    if (!resp.ok) throw new Error(`points failed (${resp.status})`);
    return resp.json();
  }
}
