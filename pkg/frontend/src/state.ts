// UI state and its transitions. All mutation flows through the server's
// revision protocol: nothing here is optimistic, the state only advances
// when a committed revision comes back.

import { clampScale, SLIDERS } from "./constraints";
import { ChannelName, DiagramKind, EditKind } from "./types";

export interface UiState {
  channel: ChannelName;
  diagram: DiagramKind;
  revision: number;
  /** resolved, inclusion-filtered pair ids from the last /select */
  selection: number[];
  op: EditKind;
  scale: number;
  /** a request hit a stale revision; diagrams need a refresh */
  stale: boolean;
  busy: boolean;
}

export function initialState(): UiState {
  return {
    channel: "brightness",
    diagram: "pv",
    revision: 0,
    selection: [],
    op: "contrast",
    scale: SLIDERS.contrast.initial,
    stale: false,
    busy: false,
  };
}

/** Edit controls unlock only once a non-empty selection is resolved. */
export function controlsEnabled(s: UiState): boolean {
  return s.selection.length > 0 && !s.busy && !s.stale;
}

export function withChannel(s: UiState, channel: ChannelName): UiState {
  // selections are bound to one channel; switching drops them
  return { ...s, channel, selection: [] };
}

export function withDiagram(s: UiState, diagram: DiagramKind): UiState {
  return { ...s, diagram };
}

export function withOp(s: UiState, op: EditKind): UiState {
  // keep the slider inside the new op's bounds
  return { ...s, op, scale: clampScale(op, s.scale) };
}

export function withScale(s: UiState, raw: number): UiState {
  return { ...s, scale: clampScale(s.op, raw) };
}

export function afterUpload(s: UiState, revision: number): UiState {
  return { ...s, revision, selection: [], stale: false, busy: false };
}

export function afterSelect(s: UiState, ids: number[], revision: number): UiState {
  return { ...s, selection: [...ids], revision, stale: false };
}

export function afterEdit(s: UiState, revision: number): UiState {
  // pair ids are revision-scoped: a committed edit invalidates them
  return { ...s, revision, selection: [] };
}

export function afterStaleRevision(s: UiState): UiState {
  return { ...s, selection: [], stale: true };
}

export function afterRefresh(s: UiState, revision: number): UiState {
  return { ...s, revision, stale: false };
}
