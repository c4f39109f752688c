// Wire types for the topoedit session API.

export type ChannelName = "red" | "green" | "blue" | "saturation" | "brightness";

export const CHANNELS: ChannelName[] = ["red", "green", "blue", "saturation", "brightness"];

export type DiagramKind = "pd" | "pv";

export type EditKind = "contrast" | "denoise" | "brightness" | "gamma";

export type FeatureKind = "join" | "split" | "global";

export interface DiagramPointDto {
  pair: number;
  x: number;
  y: number;
  kind: FeatureKind;
}

export interface DiagramDto {
  revision: number;
  channel: ChannelName;
  kind: DiagramKind;
  points: DiagramPointDto[];
}

/** Brush rectangle in diagram data coordinates, bounds exclusive. */
export interface RectDto {
  x: [number, number];
  y: [number, number];
}

export interface SessionInfo {
  revision: number;
  width: number;
  height: number;
}

export interface SelectResponse {
  revision: number;
  selected: number[];
  mask_url: string;
}

export interface EditResponse {
  revision: number;
}
