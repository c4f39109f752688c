// Edit-type selector and scale slider. The button glyphs sketch what each
// transfer function does to a feature: contrast pulls birth and death
// apart, denoise pulls them together, brightness moves both, gamma bends
// values between fixed endpoints.

import { SLIDERS, validScale } from "./constraints";
import { EditKind } from "./types";

const OPS: { kind: EditKind; glyph: string; title: string }[] = [
  { kind: "contrast", glyph: "←→", title: "contrast: stretch from the saddle (s≥1)" },
  { kind: "denoise", glyph: "→←", title: "denoise: collapse toward the saddle (0≤s≤1)" },
  { kind: "brightness", glyph: "↕", title: "brightness: shift the region (−255≤s≤255)" },
  { kind: "gamma", glyph: "○", title: "gamma: remap between birth and death (γ>0)" },
];

export class EditPanel {
  private buttons = new Map<EditKind, HTMLButtonElement>();
  private slider: HTMLInputElement;
  private readout: HTMLSpanElement;
  private bounds: HTMLSpanElement;
  private submit: HTMLButtonElement;
  private onPick: (op: EditKind) => void = () => undefined;
  private onScale: (value: number) => void = () => undefined;
  private onSubmit: () => void = () => undefined;

  constructor(root: HTMLElement) {
    const buttonRow = document.createElement("div");
    buttonRow.className = "op-buttons";
    for (const { kind, glyph, title } of OPS) {
      const b = document.createElement("button");
      b.textContent = glyph;
      b.title = title;
      b.dataset.op = kind;
      b.addEventListener("click", () => this.onPick(kind));
      this.buttons.set(kind, b);
      buttonRow.appendChild(b);
    }
    root.appendChild(buttonRow);

    const sliderRow = document.createElement("div");
    sliderRow.className = "slider-row";
    this.slider = document.createElement("input");
    this.slider.type = "range";
    this.slider.addEventListener("input", () => this.onScale(Number(this.slider.value)));
    this.readout = document.createElement("span");
    this.readout.className = "scale-readout";
    this.bounds = document.createElement("span");
    this.bounds.className = "scale-bounds";
    sliderRow.append(this.slider, this.readout, this.bounds);
    root.appendChild(sliderRow);

    this.submit = document.createElement("button");
    this.submit.className = "apply";
    this.submit.textContent = "apply";
    this.submit.addEventListener("click", () => {
      // belt and braces: never let an invalid scale reach the server
      if (validScale(this.activeOp, Number(this.slider.value))) {
        this.onSubmit();
      }
    });
    root.appendChild(this.submit);
  }

  private activeOp: EditKind = "contrast";

  picked(handler: (op: EditKind) => void): void {
    this.onPick = handler;
  }

  scaled(handler: (value: number) => void): void {
    this.onScale = handler;
  }

  submitted(handler: () => void): void {
    this.onSubmit = handler;
  }

  render(op: EditKind, scale: number, enabled: boolean): void {
    this.activeOp = op;
    for (const [kind, button] of this.buttons) {
      button.classList.toggle("active", kind === op);
      button.disabled = !enabled;
    }
    const spec = SLIDERS[op];
    this.slider.min = String(spec.min);
    this.slider.max = String(spec.max);
    this.slider.step = String(spec.step);
    this.slider.value = String(scale);
    this.slider.disabled = !enabled;
    this.submit.disabled = !enabled || !validScale(op, scale);
    this.readout.textContent = scale.toFixed(2);
    this.bounds.textContent = spec.label;
  }
}
