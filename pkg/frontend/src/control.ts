/** Control draft validation against the slider ranges (client-side gate). */

import { ControlDraft, DRAFT_LIMITS } from "./types.js";

export interface FieldSpec {
  key: keyof ControlDraft;
  label: string;
  min: number;
  max: number;
  step: number;
  unit: string;
}

export const FIELD_SPECS: FieldSpec[] = [
  { key: "theta_left_deg", label: "Twist left", ...DRAFT_LIMITS.theta_deg, step: 1, unit: "deg" },
  { key: "theta_right_deg", label: "Twist right", ...DRAFT_LIMITS.theta_deg, step: 1, unit: "deg" },
  { key: "pressure_left_mpa", label: "Pressure left", ...DRAFT_LIMITS.pressure_mpa, step: 0.005, unit: "MPa" },
  { key: "pressure_right_mpa", label: "Pressure right", ...DRAFT_LIMITS.pressure_mpa, step: 0.005, unit: "MPa" },
  { key: "thread_length_left_mm", label: "Thread left", ...DRAFT_LIMITS.thread_length_mm, step: 1, unit: "mm" },
  { key: "thread_length_right_mm", label: "Thread right", ...DRAFT_LIMITS.thread_length_mm, step: 1, unit: "mm" },
];

/** First validation problem of a draft, or null when it may be submitted. */
export function draftError(draft: ControlDraft): string | null {
  for (const spec of FIELD_SPECS) {
    const value = draft[spec.key];
    if (typeof value !== "number" || !Number.isFinite(value)) {
      return `${spec.label}: not a number`;
    }
    if (value < spec.min || value > spec.max) {
      return `${spec.label}: ${value} ${spec.unit} outside [${spec.min}, ${spec.max}] ${spec.unit}`;
    }
  }
  return null;
}
