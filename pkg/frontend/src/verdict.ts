// Verdict presentation: screen table rows, tree-path lines, badge text.
// Pure functions from API payloads to display structures; values are
// passed through verbatim so the service stays the single source of truth.

import { badgeColor, badgeLabel } from "./lights";
import { ScreenResponse, TreeStep } from "./types";

export const SCREEN_ORDER = [
  "cv", "spd", "diffp", "rd", "rdalt", "rdnor", "skew", "kstest",
] as const;

export interface ScreenRowView {
  name: string;
  value: string;
}

export function screenRows(response: ScreenResponse): ScreenRowView[] {
  return SCREEN_ORDER.map((name) => {
    const v = response.screens[name];
    return { name, value: v === null || v === undefined ? "undefined" : formatNumber(v) };
  });
}

export function formatNumber(v: number): string {
  if (v === 0) return "0";
  const magnitude = Math.abs(v);
  if (magnitude >= 1000 || magnitude < 0.001) return v.toExponential(3);
  return v.toPrecision(4);
}

export function treePathLines(steps: TreeStep[]): string[] {
  const lines: string[] = [];
  for (const step of steps) {
    if (step.test) {
      lines.push(`${step.test} ${step.taken} (value ${formatNumber(step.value ?? NaN)})`);
    } else if (step.leaf_class !== undefined) {
      lines.push(`-> ${step.leaf_class} (p=${formatNumber(step.leaf_probability ?? NaN)}, n=${step.samples})`);
    }
  }
  return lines;
}

export interface VerdictView {
  badge: { color: string; label: string };
  probabilityText: string;
  screenTable: ScreenRowView[];
  treePath: string[] | null;
  modelId: string;
  canEscalate: boolean;
}

export function buildVerdictView(response: ScreenResponse): VerdictView {
  return {
    badge: { color: badgeColor(response.light), label: badgeLabel(response.light) },
    probabilityText: `${(response.probability * 100).toFixed(1)}%`,
    screenTable: screenRows(response),
    treePath: response.tree_path ? treePathLines(response.tree_path.steps) : null,
    modelId: response.model_id,
    canEscalate: response.light !== "green" && !!response.tender_id,
  };
}
