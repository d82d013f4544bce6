/** Wire types of the teleoperation service (units: deg, MPa, mm). */

export interface WireControl {
  theta_left_deg: number;
  theta_right_deg: number;
  pressure_left_mpa: number;
  pressure_right_mpa: number;
  thread_length_left_mm: number;
  thread_length_right_mm: number;
}

/** One state frame as streamed over /stream or returned by GET /state. */
export interface StateFrame {
  seq: number;
  status: "idle" | "solving";
  converged: boolean;
  pattern: string;
  control: WireControl;
  tip_mm: [number, number, number];
  winding_angle_deg: number;
  /** [tube][node][xyz], two tubes, N+1 nodes each. */
  centerlines_mm: number[][][];
}

export interface ControlDraft extends WireControl {}

export const DRAFT_LIMITS = {
  theta_deg: { min: -180, max: 180 },
  pressure_mpa: { min: 0, max: 0.3 },
  thread_length_mm: { min: 0, max: 450 },
} as const;

export type ConnectionStatus = "connecting" | "open" | "closed";

export interface ConsoleState {
  frame: StateFrame | null;
  draft: ControlDraft;
  connection: ConnectionStatus;
  /** true while a submitted control waits for its acknowledgment */
  submitting: boolean;
  /** inline validation or transport error shown next to the submit button */
  submitError: string | null;
  /** true when the last submit failed on transport and may be retried */
  canRetry: boolean;
  /** banner text for dropped frames and similar soft errors */
  warning: string | null;
  /** index of the next scenario step to send (0..6); 6 = done */
  scenarioCursor: number;
  /** tip trace of everything rendered so far, world mm */
  tipTrace: [number, number, number][];
}

export function initialDraft(): ControlDraft {
  return {
    theta_left_deg: 0,
    theta_right_deg: 0,
    pressure_left_mpa: 0,
    pressure_right_mpa: 0,
    thread_length_left_mm: 300,
    thread_length_right_mm: 300,
  };
}

export function initialConsoleState(): ConsoleState {
  return {
    frame: null,
    draft: initialDraft(),
    connection: "connecting",
    submitting: false,
    submitError: null,
    canRetry: false,
    warning: null,
    scenarioCursor: 0,
    tipTrace: [],
  };
}
