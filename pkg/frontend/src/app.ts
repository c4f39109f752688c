// Application wiring: upload, channel tabs, the two linked diagrams,
// selection mask overlay, edit panel, and log download.

import { ApiClient, StaleRevisionError } from "./api";
import { DiagramView } from "./diagram_view";
import { EditPanel } from "./edit_panel";
import { tintMask } from "./overlay";
import * as state from "./state";
import { CHANNELS, ChannelName, DiagramKind, RectDto } from "./types";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

export class App {
  private ui = state.initialState();
  private api: ApiClient;
  private view: DiagramView;
  private panel: EditPanel;
  private status = el<HTMLSpanElement>("status");
  private preview = el<HTMLImageElement>("preview");
  private overlay = el<HTMLCanvasElement>("mask-overlay");
  private hasSession = false;

  constructor(base: string) {
    this.api = new ApiClient(base);
    this.view = new DiagramView(el<HTMLCanvasElement>("diagram"));
    this.panel = new EditPanel(el<HTMLDivElement>("edit-panel"));

    el<HTMLInputElement>("file-input").addEventListener("change", (ev) => {
      const input = ev.target as HTMLInputElement;
      const file = input.files?.[0];
      if (file) {
        void this.upload(file);
      }
    });

    const tabs = el<HTMLDivElement>("channel-tabs");
    for (const channel of CHANNELS) {
      const b = document.createElement("button");
      b.textContent = channel;
      b.dataset.channel = channel;
      b.addEventListener("click", () => void this.setChannel(channel));
      tabs.appendChild(b);
    }
    el<HTMLButtonElement>("kind-pd").addEventListener("click", () => void this.setDiagram("pd"));
    el<HTMLButtonElement>("kind-pv").addEventListener("click", () => void this.setDiagram("pv"));
    el<HTMLButtonElement>("download-log").addEventListener("click", () => void this.downloadLog());

    this.view.brushed((rect) => void this.brush(rect));
    this.panel.picked((op) => {
      this.ui = state.withOp(this.ui, op);
      this.sync();
    });
    this.panel.scaled((value) => {
      this.ui = state.withScale(this.ui, value);
      this.sync();
    });
    this.panel.submitted(() => void this.applyEdit());
    this.sync();
  }

  private note(text: string): void {
    this.status.textContent = text;
  }

  private async upload(file: File): Promise<void> {
    try {
      const info = await this.api.uploadImage(await file.arrayBuffer());
      this.hasSession = true;
      this.ui = state.afterUpload(this.ui, info.revision);
      this.note(`loaded ${info.width}×${info.height}, revision ${info.revision}`);
      await this.refresh();
    } catch (err) {
      this.note(`upload failed: ${(err as Error).message}`);
    }
  }

  private async setChannel(channel: ChannelName): Promise<void> {
    this.ui = state.withChannel(this.ui, channel);
    await this.refresh();
  }

  private async setDiagram(kind: DiagramKind): Promise<void> {
    this.ui = state.withDiagram(this.ui, kind);
    await this.refresh();
  }

  private async brush(rect: RectDto): Promise<void> {
    if (!this.hasSession || this.ui.busy) {
      return;
    }
    try {
      const resp = await this.api.select(
        this.ui.revision,
        this.ui.channel,
        this.ui.diagram,
        [rect],
      );
      this.ui = state.afterSelect(this.ui, resp.selected, resp.revision);
      this.note(
        resp.selected.length
          ? `${resp.selected.length} feature(s) selected`
          : "nothing inside the brush",
      );
      await this.drawMask();
      await this.refresh(false);
    } catch (err) {
      if (err instanceof StaleRevisionError) {
        await this.handleStale();
        return;
      }
      this.note(`selection failed: ${(err as Error).message}`);
    }
  }

  private async applyEdit(): Promise<void> {
    if (!state.controlsEnabled(this.ui)) {
      return;
    }
    this.ui = { ...this.ui, busy: true };
    this.sync();
    try {
      const resp = await this.api.edit(this.ui.revision, this.ui.op, this.ui.scale);
      this.ui = state.afterEdit(this.ui, resp.revision);
      this.note(`applied ${this.ui.op}, revision ${resp.revision}`);
      this.clearMask();
      await this.refresh();
    } catch (err) {
      if (err instanceof StaleRevisionError) {
        await this.handleStale();
        return;
      }
      this.note(`edit rejected: ${(err as Error).message}`);
    } finally {
      this.ui = { ...this.ui, busy: false };
      this.sync();
    }
  }

  private async handleStale(): Promise<void> {
    this.ui = state.afterStaleRevision(this.ui);
    this.note("session advanced elsewhere; diagrams refreshed");
    await this.refresh();
  }

  private async refresh(reloadPreview = true): Promise<void> {
    if (!this.hasSession) {
      this.sync();
      return;
    }
    try {
      const diagram = await this.api.diagram(this.ui.channel, this.ui.diagram);
      this.ui = state.afterRefresh(this.ui, diagram.revision);
      this.view.render(diagram.points, this.ui.diagram, this.ui.selection);
      if (reloadPreview) {
        this.preview.src = this.api.imageUrl(this.ui.revision);
        this.clearMask();
      }
    } catch (err) {
      this.note(`refresh failed: ${(err as Error).message}`);
    }
    this.sync();
  }

  private clearMask(): void {
    const ctx = this.overlay.getContext("2d");
    ctx?.clearRect(0, 0, this.overlay.width, this.overlay.height);
  }

  private async drawMask(): Promise<void> {
    const ctx = this.overlay.getContext("2d");
    if (!ctx) {
      return;
    }
    const key = this.ui.selection.join("-") || "none";
    const img = new Image();
    img.src = this.api.maskUrl(this.ui.revision, key);
    await img.decode();
    this.overlay.width = img.naturalWidth;
    this.overlay.height = img.naturalHeight;
    ctx.drawImage(img, 0, 0);
    const data = ctx.getImageData(0, 0, this.overlay.width, this.overlay.height);
    tintMask(data.data);
    ctx.putImageData(data, 0, 0);
  }

  private async downloadLog(): Promise<void> {
    if (!this.hasSession) {
      return;
    }
    const text = await this.api.log();
    const blob = new Blob([text], { type: "application/jsonl" });
    const a = document.createElement("a");
    a.href = URL.createObjectURL(blob);
    a.download = "session.script";
    a.click();
    URL.revokeObjectURL(a.href);
  }

  private sync(): void {
    this.panel.render(this.ui.op, this.ui.scale, state.controlsEnabled(this.ui));
    document
      .querySelectorAll<HTMLButtonElement>("#channel-tabs button")
      .forEach((b) => b.classList.toggle("active", b.dataset.channel === this.ui.channel));
    el<HTMLButtonElement>("kind-pd").classList.toggle("active", this.ui.diagram === "pd");
    el<HTMLButtonElement>("kind-pv").classList.toggle("active", this.ui.diagram === "pv");
  }
}

declare global {
  interface Window {
    topoeditApp?: App;
  }
}

if (typeof document !== "undefined" && document.getElementById("diagram")) {
  const base = new URLSearchParams(window.location.search).get("api") ?? "http://127.0.0.1:7230";
  window.topoeditApp = new App(base);
}
