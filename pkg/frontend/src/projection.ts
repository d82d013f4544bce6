/**
 * Orthographic 3-D projection for the centerline view.
 *
 * World axes: x right, y forward, z down.  The default view looks at the
 * rig from the front-right and can be orbited with yaw (about the world
 * vertical) and pitch.  Screen coordinates: u right, v down, origin at
 * the canvas center; the scale maps world mm to pixels.
 */

export interface ViewSettings {
  yawDeg: number;
  pitchDeg: number;
  scale: number; // px per mm
  centerMm: [number, number, number];
}

export const DEFAULT_VIEW: ViewSettings = {
  yawDeg: 25,
  pitchDeg: 15,
  scale: 1.1,
  centerMm: [0, 60, 160],
};

/** Project one world-mm point to canvas-centered pixels. */
export function project(p: [number, number, number], view: ViewSettings): [number, number] {
  const yaw = (view.yawDeg * Math.PI) / 180;
  const pitch = (view.pitchDeg * Math.PI) / 180;
  const x = p[0] - view.centerMm[0];
  const y = p[1] - view.centerMm[1];
  const z = p[2] - view.centerMm[2];
  // orbit about the vertical (z) axis, then tilt toward the viewer
  const xr = x * Math.cos(yaw) + y * Math.sin(yaw);
  const yr = -x * Math.sin(yaw) + y * Math.cos(yaw);
  const u = xr;
  const v = z * Math.cos(pitch) - yr * Math.sin(pitch);
  return [u * view.scale, v * view.scale];
}

export function projectPolyline(
  points: number[][],
  view: ViewSettings,
): [number, number][] {
  return points.map((p) => project(p as [number, number, number], view));
}

/** Points of a vertical cylinder outline (the bottle ghost), world mm. */
export function cylinderOutline(
  baseMm: [number, number, number],
  radiusMm: number,
  heightMm: number,
  axisSign: -1 | 1 = -1,
  segments = 24,
): number[][][] {
  const rings: number[][][] = [];
  for (const h of [0, heightMm]) {
    const ring: number[][] = [];
    for (let i = 0; i <= segments; i++) {
      const a = (2 * Math.PI * i) / segments;
      ring.push([
        baseMm[0] + radiusMm * Math.cos(a),
        baseMm[1] + radiusMm * Math.sin(a),
        baseMm[2] + axisSign * h,
      ]);
    }
    rings.push(ring);
  }
  // two vertical edges
  for (const a of [0, Math.PI]) {
    rings.push([
      [baseMm[0] + radiusMm * Math.cos(a), baseMm[1] + radiusMm * Math.sin(a), baseMm[2]],
      [
        baseMm[0] + radiusMm * Math.cos(a),
        baseMm[1] + radiusMm * Math.sin(a),
        baseMm[2] + axisSign * heightMm,
      ],
    ]);
  }
  return rings;
}
