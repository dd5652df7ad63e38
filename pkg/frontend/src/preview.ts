/** Latest-wins preview scheduling.
 *
 * Drag interactions emit scripts faster than the service round trip. At
 * most one request is in flight; while it runs, newer scripts overwrite
 * each other and only the newest is sent afterwards. In-flight requests
 * are aborted when superseded, so the last delivered image always
 * corresponds to the last requested script.
 */

import type { EditScriptJson } from "./protocol.js";

export type PreviewFn = (
  script: EditScriptJson,
  signal: AbortSignal,
) => Promise<Blob>;

export class PreviewScheduler {
  private inFlight: AbortController | null = null;
  private queued: EditScriptJson | null = null;
  private seq = 0;

  constructor(
    private previewFn: PreviewFn,
    private onImage: (image: Blob, script: EditScriptJson) => void,
    private onError: (err: unknown) => void = () => {},
  ) {}

  get pending(): boolean {
    return this.inFlight !== null || this.queued !== null;
  }

  /** Request a preview for `script`; superseded requests never deliver. */
  request(script: EditScriptJson): void {
    if (this.inFlight) {
      this.queued = script;
      this.inFlight.abort();
      return;
    }
    void this.run(script);
  }

  private async run(script: EditScriptJson): Promise<void> {
    const controller = new AbortController();
    this.inFlight = controller;
    const ticket = ++this.seq;
    try {
      const image = await this.previewFn(script, controller.signal);
      if (ticket === this.seq && !controller.signal.aborted) {
        this.onImage(image, script);
      }
    } catch (err) {
      if (!controller.signal.aborted) this.onError(err);
    } finally {
      if (this.inFlight === controller) this.inFlight = null;
      const next = this.queued;
      this.queued = null;
      if (next !== null) void this.run(next);
    }
  }
}
