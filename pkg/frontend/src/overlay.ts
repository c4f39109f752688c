// Mask overlay coloring: turn the server's black/white mask into a
// translucent tint so the preview stays visible underneath. Operates on
// raw RGBA so it is testable without a canvas.

export interface Rgba {
  r: number;
  g: number;
  b: number;
  a: number;
}

export const SELECTION_TINT: Rgba = { r: 243, g: 110, b: 33, a: 110 };

/**
 * In-place: selected (bright) mask pixels become the tint, the rest become
 * fully transparent. ``data`` is RGBA, length 4 * pixel count.
 */
export function tintMask(data: Uint8ClampedArray, tint: Rgba = SELECTION_TINT): Uint8ClampedArray {
  for (let i = 0; i < data.length; i += 4) {
    const selected = data[i] > 127;
    if (selected) {
      data[i] = tint.r;
      data[i + 1] = tint.g;
      data[i + 2] = tint.b;
      data[i + 3] = tint.a;
    } else {
      data[i + 3] = 0;
    }
  }
  return data;
}
