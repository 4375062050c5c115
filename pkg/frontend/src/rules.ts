/**
 * Client-side mirror of the service's design combination rules.
 *
 * The controls use these to disable illegal options before a request is
 * ever made; the server remains authoritative and re-validates.
 */

import { DesignConfig } from "./types";

export interface Violation {
  rule: string;
  reason: string;
}

type RuleInput = Pick<
  DesignConfig,
  "composition" | "normalization" | "background" | "glyph" | "boundaries"
>;

const PIE_GLYPHS = new Set(["pie", "donut", "area-pie"]);
const FULL_AREA = new Set(["attribute-blocks", "hatching"]);

export function validateDesign(config: RuleInput): Violation[] {
  const out: Violation[] = [];
  if (PIE_GLYPHS.has(config.glyph) && config.normalization !== "bin-internal") {
    out.push({
      rule: "pie-requires-bin-internal",
      reason:
        "pie glyphs read as part-whole shares of one bin, which only " +
        "bin-internal normalization provides",
    });
  }
  if (config.composition === "juxtaposed" && config.normalization === "bin-internal") {
    out.push({
      rule: "juxtaposed-requires-class-or-global",
      reason:
        "side-by-side per-class panels only compare under class-internal " +
        "or global normalization",
    });
  }
  if (config.background === "weave") {
    if (config.normalization === "class-internal") {
      out.push({
        rule: "weave-normalization",
        reason:
          "woven fragments carry a part-whole reading that class-internal " +
          "normalization would contradict",
      });
    }
    if (config.glyph !== "none") {
      out.push({
        rule: "weave-covers-bins",
        reason:
          "glyphs would cover the fragment pattern that weaving needs to stay readable",
      });
    }
  }
  if (FULL_AREA.has(config.background) && config.glyph !== "none") {
    out.push({
      rule: "full-area-fills-exclude-glyphs",
      reason: `${config.background} occupies the entire bin area and cannot share it with glyphs`,
    });
  }
  if (
    !config.boundaries &&
    (config.background === "none" || config.background === "luminance") &&
    config.glyph === "none"
  ) {
    out.push({
      rule: "boundaryless-needs-glyphs",
      reason:
        "without boundaries a bin must contain glyphs to communicate its class distribution",
    });
  }
  return out;
}

export function isLegal(config: RuleInput): boolean {
  return validateDesign(config).length === 0;
}

/**
 * Reason a candidate value should be greyed out for one control, or null
 * when choosing it keeps the design legal.  A value is only disabled when
 * it breaks a currently-legal design, so an already-conflicted draft
 * still lets the user move every control.
 */
export function disabledReason<K extends keyof RuleInput>(
  config: RuleInput,
  field: K,
  value: RuleInput[K],
): string | null {
  const candidate = { ...config, [field]: value };
  const violations = validateDesign(candidate);
  if (violations.length === 0) {
    return null;
  }
  if (!isLegal(config)) {
    return null;
  }
  return violations.map((v) => v.reason).join("; ");
}

/** Disabled options per control for the current draft. */
export function disabledOptions(config: RuleInput): {
  normalization: Map<string, string>;
  composition: Map<string, string>;
  background: Map<string, string>;
  glyph: Map<string, string>;
  boundaries: Map<string, string>;
} {
  const collect = <K extends keyof RuleInput>(field: K, values: readonly RuleInput[K][]) => {
    const out = new Map<string, string>();
    for (const value of values) {
      const reason = disabledReason(config, field, value);
      if (reason !== null) {
        out.set(String(value), reason);
      }
    }
    return out;
  };
  return {
    normalization: collect("normalization", ["bin-internal", "class-internal", "global"] as const),
    composition: collect("composition", ["superimposed", "juxtaposed"] as const),
    background: collect("background", [
      "none",
      "luminance",
      "majority",
      "blend",
      "weave",
      "attribute-blocks",
      "hatching",
    ] as const),
    glyph: collect("glyph", [
      "none",
      "pie",
      "donut",
      "area-pie",
      "grouped-bar",
      "stacked-bar",
      "points",
    ] as const),
    boundaries: collect("boundaries", [true, false] as const),
  };
}
