// Client-side mirror of the server's transfer-function scale bounds.
// validScale must accept exactly what the server accepts, so that the UI
// can never produce a 400 from the edit endpoint.

import { EditKind } from "./types";

export interface SliderSpec {
  /** inclusive slider range offered by the UI (a subset of what is valid) */
  min: number;
  max: number;
  step: number;
  initial: number;
  /** smallest value the UI may submit (gamma must stay strictly above 0) */
  floor: number;
  label: string;
}

export const SLIDERS: Record<EditKind, SliderSpec> = {
  contrast: { min: 1, max: 4, step: 0.05, initial: 1.5, floor: 1, label: "s ≥ 1" },
  denoise: { min: 0, max: 1, step: 0.05, initial: 0.5, floor: 0, label: "0 ≤ s ≤ 1" },
  brightness: { min: -255, max: 255, step: 1, initial: 15, floor: -255, label: "−255 ≤ s ≤ 255" },
  gamma: { min: 0.1, max: 8, step: 0.1, initial: 2, floor: 0.1, label: "γ > 0" },
};

/** Exactly the server's acceptance rule for an edit scale. */
export function validScale(kind: EditKind, value: number): boolean {
  if (!Number.isFinite(value)) {
    return false;
  }
  switch (kind) {
    case "contrast":
      return value >= 1;
    case "denoise":
      return value >= 0 && value <= 1;
    case "brightness":
      return value >= -255 && value <= 255;
    case "gamma":
      return value > 0;
  }
}

/** Pull an arbitrary slider reading into the op's valid range. */
export function clampScale(kind: EditKind, value: number): number {
  const spec = SLIDERS[kind];
  if (!Number.isFinite(value)) {
    return spec.initial;
  }
  const clamped = Math.min(spec.max, Math.max(spec.floor, value));
  return validScale(kind, clamped) ? clamped : spec.initial;
}
