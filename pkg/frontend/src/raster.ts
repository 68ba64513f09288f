/** Software RGBA surface with the handful of primitives the figures need. */

import { GLYPH_HEIGHT, GLYPH_WIDTH, glyphRows } from "./font.js";

export type Color = [number, number, number, number?];

export class Raster {
  readonly width: number;
  readonly height: number;
  readonly data: Uint8ClampedArray;

  constructor(width: number, height: number, background: Color = [255, 255, 255]) {
    this.width = width;
    this.height = height;
    this.data = new Uint8ClampedArray(width * height * 4);
    this.fill(background);
  }

  fill(color: Color): void {
    const [r, g, b, a = 255] = color;
    for (let i = 0; i < this.data.length; i += 4) {
      this.data[i] = r;
      this.data[i + 1] = g;
      this.data[i + 2] = b;
      this.data[i + 3] = a;
    }
  }

  set(x: number, y: number, color: Color): void {
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) {
      return;
    }
    const i = (y * this.width + x) * 4;
    const [r, g, b, a = 255] = color;
    this.data[i] = r;
    this.data[i + 1] = g;
    this.data[i + 2] = b;
    this.data[i + 3] = a;
  }

  get(x: number, y: number): Color {
    const i = (y * this.width + x) * 4;
    return [this.data[i], this.data[i + 1], this.data[i + 2], this.data[i + 3]];
  }

  fillRect(x0: number, y0: number, w: number, h: number, color: Color): void {
    const x1 = Math.min(this.width, Math.max(0, x0 + w));
    const y1 = Math.min(this.height, Math.max(0, y0 + h));
    for (let y = Math.max(0, y0); y < y1; y++) {
      for (let x = Math.max(0, x0); x < x1; x++) {
        this.set(x, y, color);
      }
    }
  }

  frame(x0: number, y0: number, w: number, h: number, color: Color): void {
    this.fillRect(x0, y0, w, 1, color);
    this.fillRect(x0, y0 + h - 1, w, 1, color);
    this.fillRect(x0, y0, 1, h, color);
    this.fillRect(x0 + w - 1, y0, 1, h, color);
  }

  /** Bresenham segment, with a square pen of the given thickness. */
  line(x0: number, y0: number, x1: number, y1: number, color: Color, thickness = 1): void {
    let x = Math.round(x0);
    let y = Math.round(y0);
    const xe = Math.round(x1);
    const ye = Math.round(y1);
    const dx = Math.abs(xe - x);
    const dy = -Math.abs(ye - y);
    const sx = x < xe ? 1 : -1;
    const sy = y < ye ? 1 : -1;
    let err = dx + dy;
    const pad = Math.floor(thickness / 2);
    for (;;) {
      if (thickness === 1) {
        this.set(x, y, color);
      } else {
        this.fillRect(x - pad, y - pad, thickness, thickness, color);
      }
      if (x === xe && y === ye) {
        break;
      }
      const e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x += sx;
      }
      if (e2 <= dx) {
        err += dx;
        y += sy;
      }
    }
  }

  text(x: number, y: number, message: string, color: Color, scale = 1): void {
    let cx = x;
    for (const ch of message) {
      const rows = glyphRows(ch);
      for (let gy = 0; gy < GLYPH_HEIGHT; gy++) {
        for (let gx = 0; gx < GLYPH_WIDTH; gx++) {
          if (rows[gy] & (1 << gx)) {
            this.fillRect(cx + gx * scale, y + gy * scale, scale, scale, color);
          }
        }
      }
      cx += (GLYPH_WIDTH + 1) * scale;
    }
  }

  /** Vertical text running bottom-to-top (for y-axis labels). */
  textVertical(x: number, y: number, message: string, color: Color, scale = 1): void {
    let cy = y;
    for (const ch of message) {
      const rows = glyphRows(ch);
      for (let gy = 0; gy < GLYPH_HEIGHT; gy++) {
        for (let gx = 0; gx < GLYPH_WIDTH; gx++) {
          if (rows[gy] & (1 << gx)) {
            // rotate 90 degrees counterclockwise
            this.fillRect(x + gy * scale, cy - gx * scale, scale, scale, color);
          }
        }
      }
      cy -= (GLYPH_WIDTH + 1) * scale;
    }
  }
}

export function textWidth(message: string, scale = 1): number {
  return message.length * (GLYPH_WIDTH + 1) * scale - scale;
}

export const BLACK: Color = [0, 0, 0];
export const GREY: Color = [120, 120, 120];
export const LIGHT_GREY: Color = [210, 210, 210];

/** Distinguishable default palette for line charts. */
export const SERIES_COLORS: Color[] = [
  [31, 119, 180],
  [44, 160, 44],
  [214, 39, 40],
  [255, 127, 14],
  [148, 103, 189],
  [23, 190, 207],
];
