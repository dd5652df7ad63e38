/** 3D cloud view: point sprites with an orbit camera, the illuminant
 * axis as a line segment, structure triangles as translucent fills.
 * Plain canvas 2D; the cloud is small (<= 30k points) so no WebGL is
 * needed.
 */

import {
  Vec3,
  add,
  cross,
  dot,
  normalize,
  scale,
  sub,
} from "./geometry.js";
import type { CameraPose } from "./state.js";
import type { CloudPayload, StructureJson } from "./protocol.js";

export interface Projected {
  x: number;
  y: number;
  depth: number;
}

export interface CameraBasis {
  right: Vec3;
  up: Vec3;
  forward: Vec3;
  eye: Vec3;
}

export function cameraBasis(pose: CameraPose): CameraBasis {
  const cp = Math.cos(pose.pitch);
  const forward: Vec3 = [
    cp * Math.cos(pose.yaw),
    Math.sin(pose.pitch),
    cp * Math.sin(pose.yaw),
  ];
  const eye = sub(pose.target, scale(forward, pose.distance));
  const worldUp: Vec3 = [0, 1, 0];
  const right = normalize(cross(forward, worldUp));
  const up = cross(right, forward);
  return { right, up, forward, eye };
}

export function project(
  p: Vec3,
  basis: CameraBasis,
  width: number,
  height: number,
  fovScale = 1.2,
): Projected | null {
  const rel = sub(p, basis.eye);
  const depth = dot(rel, basis.forward);
  if (depth <= 1e-6) return null; // behind the camera
  const s = (Math.min(width, height) * fovScale) / depth;
  return {
    x: width / 2 + dot(rel, basis.right) * s,
    y: height / 2 - dot(rel, basis.up) * s,
    depth,
  };
}

/** Pointer ray -> point on the camera-facing plane through `anchor`. */
export function pointerToPlane(
  px: number,
  py: number,
  anchor: Vec3,
  basis: CameraBasis,
  width: number,
  height: number,
  fovScale = 1.2,
): Vec3 {
  const depth = dot(sub(anchor, basis.eye), basis.forward);
  const s = (Math.min(width, height) * fovScale) / depth;
  const dx = (px - width / 2) / s;
  const dy = (height / 2 - py) / s;
  return add(
    add(basis.eye, scale(basis.forward, depth)),
    add(scale(basis.right, dx), scale(basis.up, dy)),
  );
}

export function orbit(pose: CameraPose, dYaw: number, dPitch: number): CameraPose {
  const limit = Math.PI / 2 - 0.05;
  return {
    ...pose,
    yaw: pose.yaw + dYaw,
    pitch: Math.min(Math.max(pose.pitch + dPitch, -limit), limit),
  };
}

export function drawCloud(
  ctx: CanvasRenderingContext2D,
  cloud: CloudPayload,
  structure: StructureJson | null,
  movedVertices: Vec3[] | null,
  pose: CameraPose,
): void {
  const { width, height } = ctx.canvas;
  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = "#111";
  ctx.fillRect(0, 0, width, height);
  const basis = cameraBasis(pose);

  for (let i = 0; i < cloud.count; i++) {
    const p = project(
      [cloud.positions[3 * i], cloud.positions[3 * i + 1], cloud.positions[3 * i + 2]],
      basis,
      width,
      height,
    );
    if (!p) continue;
    ctx.fillStyle = `rgb(${cloud.colors[3 * i]},${cloud.colors[3 * i + 1]},${cloud.colors[3 * i + 2]})`;
    ctx.fillRect(p.x, p.y, 2, 2);
  }

  if (!structure) return;
  const a = project(structure.axis.a, basis, width, height);
  const b = project(structure.axis.b, basis, width, height);
  const vertices = movedVertices ?? structure.colored;

  // translucent triangle fills: every triangle shares the axis segment
  for (const v of vertices) {
    const t = project(v, basis, width, height);
    if (!a || !b || !t) continue;
    ctx.beginPath();
    ctx.moveTo(a.x, a.y);
    ctx.lineTo(b.x, b.y);
    ctx.lineTo(t.x, t.y);
    ctx.closePath();
    ctx.fillStyle = "rgba(255,255,255,0.12)";
    ctx.fill();
  }
  if (a && b) {
    ctx.beginPath();
    ctx.moveTo(a.x, a.y);
    ctx.lineTo(b.x, b.y);
    ctx.strokeStyle = "#aaa";
    ctx.lineWidth = 1.5;
    ctx.stroke();
  }
  for (const v of vertices) {
    const t = project(v, basis, width, height);
    if (!t) continue;
    ctx.beginPath();
    ctx.arc(t.x, t.y, 6, 0, 2 * Math.PI);
    ctx.strokeStyle = "#fff";
    ctx.lineWidth = 2;
    ctx.stroke();
  }
}

/** Nearest handle within `radius` px of the pointer, or null. */
export function pickVertex(
  px: number,
  py: number,
  vertices: Vec3[],
  pose: CameraPose,
  width: number,
  height: number,
  radius = 10,
): number | null {
  const basis = cameraBasis(pose);
  let best: number | null = null;
  let bestDist = radius;
  vertices.forEach((v, i) => {
    const p = project(v, basis, width, height);
    if (!p) return;
    const d = Math.hypot(p.x - px, p.y - py);
    if (d < bestDist) {
      bestDist = d;
      best = i;
    }
  });
  return best;
}
