/** Editor state machine: the fitted baseline, the working edit script,
 * selection and drag constraints.
 *
 * The baseline structure is never mutated by UI actions; every edit is
 * expressed as a script relative to it, matching the service contract
 * that previews are stateless re-renders of the baseline plus script.
 */

import {
  AxisFrame,
  RADIAL_EPS,
  Vec3,
  axisFrame,
  fromCylindrical,
  toCylindrical,
} from "./geometry.js";
import { EditScriptJson, StructureJson, identityScript } from "./protocol.js";

export const MAX_FILTER_SCALE = 4.0; // slider bound; service accepts up to 8

export type DragMode = "free" | "rotation" | "radial";

export interface CameraPose {
  yaw: number;
  pitch: number;
  distance: number;
  target: Vec3;
}

export interface EditorState {
  sessionId: string;
  baseline: StructureJson; // fitted structure, read-only
  script: EditScriptJson; // working edit, always locally valid
  selectedVertex: number | null;
  camera: CameraPose;
  previewPending: boolean;
}

export function defaultCamera(): CameraPose {
  return { yaw: 0.6, pitch: 0.4, distance: 3.0, target: [0.5, 0.5, 0.5] };
}

export function createEditorState(
  sessionId: string,
  baseline: StructureJson,
): EditorState {
  return {
    sessionId,
    baseline: deepFreezeStructure(baseline),
    script: identityScript(),
    selectedVertex: null,
    camera: defaultCamera(),
    previewPending: false,
  };
}

function deepFreezeStructure(s: StructureJson): StructureJson {
  s.colored.forEach((v) => Object.freeze(v));
  Object.freeze(s.colored);
  Object.freeze(s.axis.a);
  Object.freeze(s.axis.b);
  Object.freeze(s.axis);
  return Object.freeze(s);
}

/** Local validation run before any request leaves the editor. */
export function validateFitParams(k: number): string | null {
  if (!Number.isInteger(k) || k < 1) return "k must be a positive integer";
  if (k > 12) return "k must be at most 12";
  return null;
}

export function validateScript(
  script: EditScriptJson,
  baseline: StructureJson,
): string | null {
  if (
    !(script.filter_scale >= 0) ||
    script.filter_scale > MAX_FILTER_SCALE
  ) {
    return `filter_scale must be in [0, ${MAX_FILTER_SCALE}]`;
  }
  const frame = baselineFrame(script, baseline);
  for (const [key, pos] of Object.entries(script.vertex_moves)) {
    const idx = Number(key);
    if (!Number.isInteger(idx) || idx < 0 || idx >= baseline.colored.length) {
      return `vertex index ${key} out of range`;
    }
    if (toCylindrical(pos, frame).r < RADIAL_EPS) {
      return `vertex ${key} lies on the illuminant axis`;
    }
  }
  return null;
}

function baselineFrame(
  script: EditScriptJson,
  baseline: StructureJson,
): AxisFrame {
  const axis = script.axis_move ?? baseline.axis;
  return axisFrame(axis.a, axis.b);
}

/** Current position of a vertex: the scripted move, else the baseline. */
export function effectiveVertex(state: EditorState, idx: number): Vec3 {
  const moved = state.script.vertex_moves[String(idx)];
  return moved ?? state.baseline.colored[idx];
}

export interface DragResult {
  state: EditorState;
  onAxisWarning: boolean;
}

/** Apply a vertex drag under the given constraint mode.
 *
 * free: the target point as-is (caller intersects the pointer ray with a
 * camera-facing plane). rotation: constant (r, h), only theta follows.
 * radial: constant (theta, h), only r follows. A drag onto the axis
 * snaps to r = RADIAL_EPS and flags a warning.
 */
export function dragVertex(
  state: EditorState,
  idx: number,
  target: Vec3,
  mode: DragMode,
): DragResult {
  if (idx < 0 || idx >= state.baseline.colored.length) {
    throw new Error(`vertex index ${idx} out of range`);
  }
  const frame = baselineFrame(state.script, state.baseline);
  const start = toCylindrical(effectiveVertex(state, idx), frame);
  const t = toCylindrical(target, frame);

  let next: Vec3;
  let onAxisWarning = false;
  if (mode === "rotation") {
    next = fromCylindrical({ theta: t.theta, r: start.r, h: start.h }, frame);
  } else if (mode === "radial") {
    let r = t.r;
    if (r < RADIAL_EPS) {
      r = RADIAL_EPS;
      onAxisWarning = true;
    }
    next = fromCylindrical({ theta: start.theta, r, h: start.h }, frame);
  } else {
    if (t.r < RADIAL_EPS) {
      next = fromCylindrical({ theta: start.theta, r: RADIAL_EPS, h: t.h }, frame);
      onAxisWarning = true;
    } else {
      next = target;
    }
  }

  const script: EditScriptJson = {
    ...state.script,
    vertex_moves: { ...state.script.vertex_moves, [String(idx)]: next },
  };
  return {
    state: { ...state, script, selectedVertex: idx },
    onAxisWarning,
  };
}

export function setFilterScale(state: EditorState, value: number): EditorState {
  const clamped = Math.min(Math.max(value, 0), MAX_FILTER_SCALE);
  return { ...state, script: { ...state.script, filter_scale: clamped } };
}

/** Back to the baseline: identity script, nothing selected. */
export function resetEdits(state: EditorState): EditorState {
  return { ...state, script: identityScript(), selectedVertex: null };
}

export function scriptIsIdentity(script: EditScriptJson): boolean {
  return (
    Object.keys(script.vertex_moves).length === 0 &&
    script.axis_move === null &&
    script.filter_scale === 1.0
  );
}
