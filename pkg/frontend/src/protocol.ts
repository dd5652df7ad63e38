/** Typed client for the trichrome HTTP service.
 *
 * The fetch implementation is injectable so the protocol logic can be
 * tested without a browser or a running service.
 */

import type { Vec3 } from "./geometry.js";

export interface StructureJson {
  axis: { a: Vec3; b: Vec3 };
  colored: Vec3[];
}

export interface EditScriptJson {
  vertex_moves: Record<string, Vec3>;
  axis_move: { a: Vec3; b: Vec3 } | null;
  filter_scale: number;
}

export interface FitResponse {
  structure: StructureJson;
  report: { iterations: number; final_objective: number; converged: boolean };
}

export interface SessionInfo {
  id: string;
  width: number;
  height: number;
}

export interface CloudPayload {
  positions: Float32Array; // 3 * count, linear RGB coordinates
  colors: Uint8Array; // 3 * count, display sRGB
  count: number;
  structure: StructureJson | null;
}

export function identityScript(): EditScriptJson {
  return { vertex_moves: {}, axis_move: null, filter_scale: 1.0 };
}

export class ServiceError extends Error {
  constructor(
    public status: number,
    detail: string,
  ) {
    super(detail);
  }
}

/** Binary layout: u32 count | count * (3*f32 pos + 3*u8 col) | u8 flag |
 * flag=1: 6*f32 axis, u32 k, k*3*f32 vertices. Little-endian, packed. */
export function parseCloudPayload(buffer: ArrayBuffer): CloudPayload {
  const view = new DataView(buffer);
  let off = 0;
  const count = view.getUint32(off, true);
  off += 4;
  const positions = new Float32Array(3 * count);
  const colors = new Uint8Array(3 * count);
  for (let i = 0; i < count; i++) {
    positions[3 * i] = view.getFloat32(off, true);
    positions[3 * i + 1] = view.getFloat32(off + 4, true);
    positions[3 * i + 2] = view.getFloat32(off + 8, true);
    off += 12;
    colors[3 * i] = view.getUint8(off);
    colors[3 * i + 1] = view.getUint8(off + 1);
    colors[3 * i + 2] = view.getUint8(off + 2);
    off += 3;
  }
  const flag = view.getUint8(off);
  off += 1;
  let structure: StructureJson | null = null;
  if (flag === 1) {
    const axis: number[] = [];
    for (let i = 0; i < 6; i++) {
      axis.push(view.getFloat32(off, true));
      off += 4;
    }
    const k = view.getUint32(off, true);
    off += 4;
    const colored: Vec3[] = [];
    for (let i = 0; i < k; i++) {
      colored.push([
        view.getFloat32(off, true),
        view.getFloat32(off + 4, true),
        view.getFloat32(off + 8, true),
      ]);
      off += 12;
    }
    structure = {
      axis: { a: axis.slice(0, 3) as Vec3, b: axis.slice(3, 6) as Vec3 },
      colored,
    };
  }
  if (off !== buffer.byteLength) {
    throw new Error(`cloud payload size mismatch: ${off} != ${buffer.byteLength}`);
  }
  return { positions, colors, count, structure };
}

export type FetchLike = (
  url: string,
  init?: RequestInit,
) => Promise<Response>;

export class ServiceClient {
  constructor(
    private baseUrl: string,
    private fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async checked(url: string, init?: RequestInit): Promise<Response> {
    const resp = await this.fetchImpl(this.baseUrl + url, init);
    if (!resp.ok) {
      let detail = resp.statusText;
      try {
        const body = await resp.json();
        if (body && typeof body.detail === "string") detail = body.detail;
      } catch {
        /* non-JSON error body */
      }
      throw new ServiceError(resp.status, detail);
    }
    return resp;
  }

  async createSession(imageBytes: ArrayBuffer | Blob): Promise<SessionInfo> {
    const resp = await this.checked("/sessions", {
      method: "POST",
      body: imageBytes,
      headers: { "content-type": "image/png" },
    });
    return resp.json();
  }

  async fit(
    sessionId: string,
    params: { k: number; axis?: unknown; init?: number[] | "uniform"; stride?: number },
  ): Promise<FitResponse> {
    const resp = await this.checked(`/sessions/${sessionId}/fit`, {
      method: "POST",
      body: JSON.stringify(params),
      headers: { "content-type": "application/json" },
    });
    return resp.json();
  }

  async preview(
    sessionId: string,
    script: EditScriptJson,
    signal?: AbortSignal,
  ): Promise<Blob> {
    const resp = await this.checked(`/sessions/${sessionId}/preview`, {
      method: "POST",
      body: JSON.stringify(script),
      headers: { "content-type": "application/json" },
      signal,
    });
    return resp.blob();
  }

  async exportImage(sessionId: string, script: EditScriptJson): Promise<Blob> {
    const resp = await this.checked(`/sessions/${sessionId}/export`, {
      method: "POST",
      body: JSON.stringify(script),
      headers: { "content-type": "application/json" },
    });
    return resp.blob();
  }

  async cloud(sessionId: string, maxPoints = 30000): Promise<CloudPayload> {
    const resp = await this.checked(
      `/sessions/${sessionId}/cloud?max_points=${maxPoints}`,
    );
    return parseCloudPayload(await resp.arrayBuffer());
  }
}
