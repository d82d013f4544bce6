import { describe, expect, it } from "vitest";

import { parseFrame, shouldReplace } from "../src/frames.js";
import type { StateFrame } from "../src/types.js";

export function makeFrame(seq: number, overrides: Partial<StateFrame> = {}): StateFrame {
  return {
    seq,
    status: "idle",
    converged: true,
    pattern: "C-shaped",
    control: {
      theta_left_deg: 0,
      theta_right_deg: 0,
      pressure_left_mpa: 0.1,
      pressure_right_mpa: 0.1,
      thread_length_left_mm: 300,
      thread_length_right_mm: 300,
    },
    tip_mm: [0, 130, 250],
    winding_angle_deg: 0,
    centerlines_mm: [
      [[-19, 0, 0], [-18, 0, 150], [-7.5, 0, 300]],
      [[19, 0, 0], [18, 0, 150], [7.5, 0, 300]],
    ],
    ...overrides,
  };
}

describe("parseFrame", () => {
  it("accepts a valid frame object and JSON text", () => {
    const frame = makeFrame(3);
    expect(parseFrame(frame).frame?.seq).toBe(3);
    expect(parseFrame(JSON.stringify(frame)).frame?.pattern).toBe("C-shaped");
  });

  it("drops malformed frames with a reason instead of throwing", () => {
    expect(parseFrame("{not json").error).toMatch(/JSON/);
    expect(parseFrame(null).error).toBeTruthy();
    expect(parseFrame({}).error).toMatch(/sequence/);
    const noCenterlines = { ...makeFrame(1) } as any;
    delete noCenterlines.centerlines_mm;
    expect(parseFrame(noCenterlines).error).toMatch(/centerlines/);
    const badTip = makeFrame(1, { tip_mm: [1, NaN, 2] as any });
    expect(parseFrame(badTip).error).toMatch(/tip/);
  });
});

describe("shouldReplace", () => {
  it("keeps only strictly newer frames", () => {
    const current = makeFrame(5);
    expect(shouldReplace(null, current)).toBe(true);
    expect(shouldReplace(current, makeFrame(6))).toBe(true);
    expect(shouldReplace(current, makeFrame(5))).toBe(false);
    expect(shouldReplace(current, makeFrame(4))).toBe(false);
  });
});
