// Traffic-light badge mapping. The verdict itself always comes from the
// API; this only translates it into presentation.

import { LightName } from "./types";

export type BadgeColor = "green" | "amber" | "red";

export function badgeColor(light: LightName): BadgeColor {
  switch (light) {
    case "green":
      return "green";
    case "suspicious":
      return "amber";
    case "very_suspicious":
      return "red";
  }
}

export function badgeLabel(light: LightName): string {
  switch (light) {
    case "green":
      return "No indication";
    case "suspicious":
      return "Suspicious";
    case "very_suspicious":
      return "Very suspicious";
  }
}
