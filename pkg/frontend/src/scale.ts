/** Linear and logarithmic axis scales with tick generation. */

export interface Tick {
  value: number;
  label: string;
}

export interface Scale {
  toPixel(value: number): number;
  ticks(maxCount?: number): Tick[];
}

export function formatTick(value: number): string {
  if (value === 0) {
    return "0";
  }
  const magnitude = Math.abs(value);
  if (magnitude >= 1e4 || magnitude < 1e-3) {
    const exp = Math.floor(Math.log10(magnitude));
    const mantissa = value / 10 ** exp;
    const m = Number(mantissa.toPrecision(3));
    return m === 1 ? `1e${exp}` : `${m}e${exp}`;
  }
  return String(Number(value.toPrecision(4)));
}

export function linearScale(
  lo: number,
  hi: number,
  pxLo: number,
  pxHi: number,
): Scale {
  const span = hi > lo ? hi - lo : 1.0;
  return {
    toPixel: (v) => pxLo + ((v - lo) / span) * (pxHi - pxLo),
    ticks: (maxCount = 6) => {
      const rawStep = span / Math.max(1, maxCount - 1);
      const mag = 10 ** Math.floor(Math.log10(rawStep));
      const step = [1, 2, 2.5, 5, 10].map((m) => m * mag).find((s) => span / s <= maxCount - 1) ?? mag * 10;
      const first = Math.ceil(lo / step) * step;
      const out: Tick[] = [];
      for (let v = first; v <= hi + 1e-9 * span; v += step) {
        const rounded = Math.abs(v) < step / 1e6 ? 0 : v;
        out.push({ value: rounded, label: formatTick(rounded) });
      }
      return out;
    },
  };
}

export function logScale(lo: number, hi: number, pxLo: number, pxHi: number): Scale {
  if (lo <= 0 || hi <= 0) {
    throw new Error("log scale requires positive bounds");
  }
  const la = Math.log10(lo);
  const lb = Math.log10(hi);
  const span = lb > la ? lb - la : 1.0;
  return {
    toPixel: (v) => pxLo + ((Math.log10(v) - la) / span) * (pxHi - pxLo),
    ticks: (maxCount = 6) => {
      const first = Math.ceil(la - 1e-9);
      const last = Math.floor(lb + 1e-9);
      const decades: number[] = [];
      for (let e = first; e <= last; e++) {
        decades.push(e);
      }
      const stride = Math.max(1, Math.ceil(decades.length / maxCount));
      return decades
        .filter((_, i) => i % stride === 0)
        .map((e) => ({ value: 10 ** e, label: formatTick(10 ** e) }));
    },
  };
}
