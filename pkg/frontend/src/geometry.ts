/** Small 3D vector and cylindrical-coordinate helpers.
 *
 * These exist for interaction geometry (drag constraints, camera
 * projection) only; all color math happens on the service.
 */

export type Vec3 = [number, number, number];

export const RADIAL_EPS = 1e-6;

export function add(a: Vec3, b: Vec3): Vec3 {
  return [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
}

export function sub(a: Vec3, b: Vec3): Vec3 {
  return [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
}

export function scale(a: Vec3, s: number): Vec3 {
  return [a[0] * s, a[1] * s, a[2] * s];
}

export function dot(a: Vec3, b: Vec3): number {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

export function cross(a: Vec3, b: Vec3): Vec3 {
  return [
    a[1] * b[2] - a[2] * b[1],
    a[2] * b[0] - a[0] * b[2],
    a[0] * b[1] - a[1] * b[0],
  ];
}

export function norm(a: Vec3): number {
  return Math.sqrt(dot(a, a));
}

export function normalize(a: Vec3): Vec3 {
  const n = norm(a);
  if (n === 0) throw new Error("cannot normalize a zero vector");
  return scale(a, 1 / n);
}

export interface AxisFrame {
  a: Vec3;
  b: Vec3;
  u: Vec3; // unit a -> b
  e0: Vec3; // theta = 0 reference, rejection of (1,0,0) from u
  w: Vec3; // u x e0
  length: number;
}

/** Frame matching the service's reference-direction convention. */
export function axisFrame(a: Vec3, b: Vec3): AxisFrame {
  const d = sub(b, a);
  const length = norm(d);
  if (length <= 1e-9) throw new Error("axis endpoints are coincident");
  const u = scale(d, 1 / length);
  let e0: Vec3 | null = null;
  for (const seed of [
    [1, 0, 0],
    [0, 1, 0],
  ] as Vec3[]) {
    const rej = sub(seed, scale(u, dot(seed, u)));
    if (norm(rej) >= 1e-6) {
      e0 = normalize(rej);
      break;
    }
  }
  if (!e0) throw new Error("no reference direction");
  return { a, b, u, e0, w: cross(u, e0), length };
}

export interface Cylindrical {
  theta: number;
  r: number;
  h: number;
}

export function toCylindrical(p: Vec3, frame: AxisFrame): Cylindrical {
  const rel = sub(p, frame.a);
  const h = dot(rel, frame.u) / frame.length;
  const perp = sub(rel, scale(frame.u, dot(rel, frame.u)));
  const x = dot(perp, frame.e0);
  const y = dot(perp, frame.w);
  const r = Math.hypot(x, y);
  return { theta: r < RADIAL_EPS ? 0 : Math.atan2(y, x), r, h };
}

export function fromCylindrical(c: Cylindrical, frame: AxisFrame): Vec3 {
  const radial = add(
    scale(frame.e0, c.r * Math.cos(c.theta)),
    scale(frame.w, c.r * Math.sin(c.theta)),
  );
  return add(add(frame.a, scale(frame.u, c.h * frame.length)), radial);
}
