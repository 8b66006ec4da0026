/** Deterministic axis scales and tick generation (no locale, no Date). */

export interface Scale {
  toPx(value: number): number;
  ticks: number[];
}

function niceStep(span: number, target: number): number {
  const raw = span / Math.max(1, target);
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  for (const m of [1, 2, 5, 10]) {
    if (raw <= m * mag) return m * mag;
  }
  return 10 * mag;
}

export function linearTicks(lo: number, hi: number, target = 6): number[] {
  if (!(hi > lo)) return [lo];
  const step = niceStep(hi - lo, target);
  const first = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let v = first; v <= hi + 1e-12 * step; v += step) {
    ticks.push(Math.abs(v) < 1e-12 * step ? 0 : v);
  }
  return ticks;
}

export function logTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  const eLo = Math.ceil(Math.log10(lo) - 1e-12);
  const eHi = Math.floor(Math.log10(hi) + 1e-12);
  for (let e = eLo; e <= eHi; e++) ticks.push(Math.pow(10, e));
  if (ticks.length === 0) ticks.push(lo, hi);
  return ticks;
}

export function linearScale(lo: number, hi: number, pxLo: number, pxHi: number): Scale {
  const span = hi - lo || 1;
  return {
    toPx: (v) => pxLo + ((v - lo) / span) * (pxHi - pxLo),
    ticks: linearTicks(lo, hi),
  };
}

export function logScale(lo: number, hi: number, pxLo: number, pxHi: number): Scale {
  if (lo <= 0) throw new Error(`log scale needs positive domain, got [${lo}, ${hi}]`);
  const la = Math.log10(lo);
  const span = Math.log10(hi) - la || 1;
  return {
    toPx: (v) => pxLo + ((Math.log10(v) - la) / span) * (pxHi - pxLo),
    ticks: logTicks(lo, hi),
  };
}

/** Fixed-precision number for axis labels: trims trailing zeros. */
export function fmt(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(1).replace("e+", "e").replace("e-", "e-");
  return String(parseFloat(v.toPrecision(6)));
}
