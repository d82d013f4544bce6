/**
 * Console state reducer: user input, network events and stream frames all
 * serialize through this single pure function, so every invariant (frame
 * ordering, no auto-submit, submit disabled until acknowledged) lives in
 * one testable place.
 */

import { draftError } from "./control.js";
import { parseFrame, shouldReplace } from "./frames.js";
import { GRAB_POUR_STEPS, stepAt } from "./scenario.js";
import type { ConsoleState, ControlDraft } from "./types.js";

export type ConsoleEvent =
  | { kind: "message"; raw: unknown }
  | { kind: "connection"; status: "connecting" | "open" | "closed" }
  | { kind: "edit-draft"; patch: Partial<ControlDraft> }
  | { kind: "submit" }
  | { kind: "submit-accepted" }
  | { kind: "submit-rejected"; error: string }
  | { kind: "submit-transport-failure"; error: string }
  | { kind: "scenario-next" }
  | { kind: "scenario-reset" }
  | { kind: "dismiss-warning" };

const TRACE_LIMIT = 600;

export function reduce(state: ConsoleState, event: ConsoleEvent): ConsoleState {
  switch (event.kind) {
    case "message": {
      const { frame, error } = parseFrame(event.raw);
      if (!frame) {
        // dropped, previous pose retained, warning surfaced
        return { ...state, warning: `dropped frame: ${error}` };
      }
      if (!shouldReplace(state.frame, frame)) {
        return state; // out-of-order frame discarded silently
      }
      const tipTrace =
        state.tipTrace.length > 0 &&
        sameTip(state.tipTrace[state.tipTrace.length - 1], frame.tip_mm)
          ? state.tipTrace
          : [...state.tipTrace.slice(-(TRACE_LIMIT - 1)), frame.tip_mm];
      return { ...state, frame, tipTrace };
    }
    case "connection":
      return { ...state, connection: event.status };
    case "edit-draft":
      // editing never submits; it only updates the draft and its validation
      return {
        ...state,
        draft: { ...state.draft, ...event.patch },
        submitError: draftError({ ...state.draft, ...event.patch }),
        canRetry: false,
      };
    case "submit": {
      const error = draftError(state.draft);
      if (error) {
        // blocked client-side: nothing leaves the console
        return { ...state, submitError: error, canRetry: false };
      }
      if (state.submitting) return state;
      return { ...state, submitting: true, submitError: null, canRetry: false };
    }
    case "submit-accepted":
      return { ...state, submitting: false, submitError: null, canRetry: false };
    case "submit-rejected":
      return { ...state, submitting: false, submitError: event.error, canRetry: false };
    case "submit-transport-failure":
      return { ...state, submitting: false, submitError: event.error, canRetry: true };
    case "scenario-next": {
      const step = stepAt(state.scenarioCursor);
      if (!step) return state;
      // loads the step into the draft; the caller still has to submit
      return {
        ...state,
        draft: { ...step.control },
        submitError: null,
        scenarioCursor: state.scenarioCursor + 1,
      };
    }
    case "scenario-reset":
      return { ...state, scenarioCursor: 0 };
    case "dismiss-warning":
      return { ...state, warning: null };
  }
}

export function scenarioProgress(state: ConsoleState): string {
  if (state.scenarioCursor === 0) return `scenario: ready (${GRAB_POUR_STEPS.length} steps)`;
  if (state.scenarioCursor >= GRAB_POUR_STEPS.length) return "scenario: finished";
  return `scenario: step ${state.scenarioCursor}/${GRAB_POUR_STEPS.length} loaded`;
}

function sameTip(a: [number, number, number], b: [number, number, number]): boolean {
  return a[0] === b[0] && a[1] === b[1] && a[2] === b[2];
}
