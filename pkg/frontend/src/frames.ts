/** Frame validation and ordering: the console never trusts a raw message. */

import type { StateFrame } from "./types.js";

const isFiniteNumber = (v: unknown): v is number =>
  typeof v === "number" && Number.isFinite(v);

function isVec3(v: unknown): v is [number, number, number] {
  return Array.isArray(v) && v.length === 3 && v.every(isFiniteNumber);
}

function isCenterlines(v: unknown): v is number[][][] {
  if (!Array.isArray(v) || v.length !== 2) return false;
  return v.every(
    (tube) =>
      Array.isArray(tube) &&
      tube.length >= 2 &&
      tube.every((node) => isVec3(node)),
  );
}

/**
 * Parse and validate one streamed message.  Returns the frame, or an error
 * string describing why it was dropped; malformed input must never throw.
 */
export function parseFrame(raw: unknown): { frame?: StateFrame; error?: string } {
  let doc: any = raw;
  if (typeof raw === "string") {
    try {
      doc = JSON.parse(raw);
    } catch {
      return { error: "frame is not valid JSON" };
    }
  }
  if (typeof doc !== "object" || doc === null) return { error: "frame is not an object" };
  if (!isFiniteNumber(doc.seq)) return { error: "frame has no sequence number" };
  if (doc.status !== "idle" && doc.status !== "solving") return { error: "frame has no status" };
  if (typeof doc.pattern !== "string") return { error: "frame has no pattern label" };
  if (!isVec3(doc.tip_mm)) return { error: "frame has no tip" };
  if (!isCenterlines(doc.centerlines_mm)) return { error: "frame has no centerlines" };
  if (typeof doc.control !== "object" || doc.control === null)
    return { error: "frame has no control echo" };
  return { frame: doc as StateFrame };
}

/**
 * Ordering rule: the rendered pose always corresponds to the highest
 * sequence number received; anything older or equal is discarded.
 */
export function shouldReplace(current: StateFrame | null, incoming: StateFrame): boolean {
  return current === null || incoming.seq > current.seq;
}
