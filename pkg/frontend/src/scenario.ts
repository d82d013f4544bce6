/**
 * The six-step grab-and-pour script for operator-paced playback.
 *
 * The console never auto-advances: each press of "next step" submits one
 * step and moves the cursor, mirroring manual teleoperation.  Values
 * duplicate the service-side script (deg / MPa / mm).
 */

import type { ControlDraft } from "./types.js";

export interface ScenarioStep {
  label: string;
  control: ControlDraft;
}

const POUR_TWIST_DEG = -30;

const at = (overrides: Partial<ControlDraft>): ControlDraft => ({
  theta_left_deg: 0,
  theta_right_deg: 0,
  pressure_left_mpa: 0,
  pressure_right_mpa: 0,
  thread_length_left_mm: 300,
  thread_length_right_mm: 300,
  ...overrides,
});

export const GRAB_POUR_STEPS: ScenarioStep[] = [
  {
    label: "approach",
    control: at({ theta_left_deg: -90, theta_right_deg: -90, pressure_left_mpa: 0.1, pressure_right_mpa: 0.1 }),
  },
  {
    label: "align",
    control: at({ theta_left_deg: -90, theta_right_deg: 10, pressure_left_mpa: 0.1, pressure_right_mpa: 0.1 }),
  },
  {
    label: "embrace",
    control: at({ theta_left_deg: -90, theta_right_deg: 10, pressure_left_mpa: 0.2, pressure_right_mpa: 0.2 }),
  },
  {
    label: "grab",
    control: at({ theta_left_deg: -90, theta_right_deg: 10, pressure_left_mpa: 0.25, pressure_right_mpa: 0.2 }),
  },
  {
    label: "lift",
    control: at({ theta_left_deg: -90, theta_right_deg: 10, pressure_left_mpa: 0.25, pressure_right_mpa: 0.1 }),
  },
  {
    label: "pour",
    control: at({
      theta_left_deg: -90 + POUR_TWIST_DEG,
      theta_right_deg: 10 + POUR_TWIST_DEG,
      pressure_left_mpa: 0.3,
      pressure_right_mpa: 0.1,
    }),
  },
];

/** The step a cursor points at, or null when the playback is finished. */
export function stepAt(cursor: number): ScenarioStep | null {
  if (cursor < 0 || cursor >= GRAB_POUR_STEPS.length) return null;
  return GRAB_POUR_STEPS[cursor];
}
