/** DOM wiring: side-by-side preview image and 3D cloud view, driving
 * the trichrome service. All color math happens server-side; this file
 * only routes events into the state machine and paints responses.
 */

import { Vec3 } from "./geometry.js";
import { PreviewScheduler } from "./preview.js";
import { CloudPayload, ServiceClient } from "./protocol.js";
import {
  DragMode,
  EditorState,
  createEditorState,
  dragVertex,
  effectiveVertex,
  resetEdits,
  setFilterScale,
  validateFitParams,
} from "./state.js";
import {
  cameraBasis,
  drawCloud,
  orbit,
  pickVertex,
  pointerToPlane,
} from "./viewer.js";

const $ = <T extends HTMLElement>(id: string): T =>
  document.getElementById(id) as T;

const serviceUrl =
  new URLSearchParams(location.search).get("service") ?? "http://127.0.0.1:8080";
const client = new ServiceClient(serviceUrl);

let state: EditorState | null = null;
let cloud: CloudPayload | null = null;
let scheduler: PreviewScheduler | null = null;
let dragIndex: number | null = null;
let orbiting = false;
let lastPointer: [number, number] = [0, 0];

const canvas = $<HTMLCanvasElement>("cloud-view");
const ctx = canvas.getContext("2d")!;
const previewImg = $<HTMLImageElement>("preview");
const banner = $<HTMLDivElement>("banner");

function showBanner(message: string): void {
  banner.querySelector("span")!.textContent = message;
  banner.style.display = "block";
}
$<HTMLButtonElement>("banner-close").onclick = () => {
  banner.style.display = "none";
};

function movedVertices(): Vec3[] | null {
  if (!state) return null;
  return state.baseline.colored.map((_, i) => effectiveVertex(state!, i));
}

function redraw(): void {
  if (!state || !cloud) return;
  drawCloud(ctx, cloud, state.baseline, movedVertices(), state.camera);
}

function requestPreview(): void {
  if (!state || !scheduler) return;
  scheduler.request(state.script);
}

$<HTMLButtonElement>("load").onclick = async () => {
  const fileInput = $<HTMLInputElement>("file");
  const k = Number($<HTMLInputElement>("k").value);
  const kError = validateFitParams(k);
  if (kError) {
    showBanner(kError);
    return;
  }
  const file = fileInput.files?.[0];
  if (!file) {
    showBanner("choose an image file first");
    return;
  }
  try {
    const session = await client.createSession(file);
    const fitResp = await client.fit(session.id, { k, axis: "gray" });
    state = createEditorState(session.id, fitResp.structure);
    cloud = await client.cloud(session.id);
    scheduler = new PreviewScheduler(
      (script, signal) => client.preview(state!.sessionId, script, signal),
      (image) => {
        previewImg.src = URL.createObjectURL(image);
      },
      (err) => showBanner(String(err)),
    );
    requestPreview();
    redraw();
  } catch (err) {
    showBanner(`${err} - is the service running at ${serviceUrl}?`);
  }
};

$<HTMLInputElement>("filter-scale").oninput = (ev) => {
  if (!state) return;
  state = setFilterScale(state, Number((ev.target as HTMLInputElement).value));
  requestPreview();
};

$<HTMLButtonElement>("reset").onclick = () => {
  if (!state) return;
  state = resetEdits(state);
  $<HTMLInputElement>("filter-scale").value = "1";
  requestPreview();
  redraw();
};

$<HTMLButtonElement>("export").onclick = async () => {
  if (!state) return;
  try {
    const blob = await client.exportImage(state.sessionId, state.script);
    const link = document.createElement("a");
    link.href = URL.createObjectURL(blob);
    link.download = "recolored.png";
    link.click();
  } catch (err) {
    showBanner(String(err));
  }
};

function currentDragMode(ev: PointerEvent): DragMode {
  if (ev.shiftKey) return "rotation";
  if (ev.ctrlKey || ev.metaKey) return "radial";
  return "free";
}

canvas.onpointerdown = (ev) => {
  if (!state) return;
  const rect = canvas.getBoundingClientRect();
  const px = ev.clientX - rect.left;
  const py = ev.clientY - rect.top;
  lastPointer = [px, py];
  const idx = pickVertex(
    px,
    py,
    movedVertices() ?? [],
    state.camera,
    canvas.width,
    canvas.height,
  );
  if (idx !== null) {
    dragIndex = idx;
  } else {
    orbiting = true;
  }
  canvas.setPointerCapture(ev.pointerId);
};

canvas.onpointermove = (ev) => {
  if (!state) return;
  const rect = canvas.getBoundingClientRect();
  const px = ev.clientX - rect.left;
  const py = ev.clientY - rect.top;
  const [lx, ly] = lastPointer;
  lastPointer = [px, py];
  if (dragIndex !== null) {
    const anchor = effectiveVertex(state, dragIndex);
    const target = pointerToPlane(
      px,
      py,
      anchor,
      cameraBasis(state.camera),
      canvas.width,
      canvas.height,
    );
    const result = dragVertex(state, dragIndex, target, currentDragMode(ev));
    state = result.state;
    if (result.onAxisWarning) showBanner("vertex snapped off the illuminant axis");
    requestPreview();
    redraw();
  } else if (orbiting) {
    state = {
      ...state,
      camera: orbit(state.camera, (px - lx) * 0.01, (py - ly) * 0.01),
    };
    redraw();
  }
};

canvas.onpointerup = () => {
  // release without motion sends nothing: previews were only requested
  // from move events
  dragIndex = null;
  orbiting = false;
};

canvas.onwheel = (ev) => {
  if (!state) return;
  ev.preventDefault();
  const factor = ev.deltaY > 0 ? 1.1 : 0.9;
  state = {
    ...state,
    camera: { ...state.camera, distance: state.camera.distance * factor },
  };
  redraw();
};

previewImg.alt = "preview appears after load + fit";
