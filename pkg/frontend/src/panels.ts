import { basename } from "node:path";
import { ResultRow, SeriesPoint, parseResultsCsv, parseTimeseriesCsv } from "./csv.js";
import { FigureSpec } from "./spec.js";
import { Scale, fmt, linearScale, logScale } from "./scale.js";
import { HEIGHT, MARGIN, MarkerShape, PALETTE, WIDTH, document as svgDoc,
         el, marker, polygon, polyline, text } from "./svg.js";

export interface PanelMeta {
  kind: string;
  nSeries: number;
  unitLineDrawn: boolean;
  /** per series key: whether the ensemble-mean curve crosses gamma = 1 */
  seriesCrossUnit: Record<string, boolean>;
}

export interface PanelResult {
  svg: string;
  meta: PanelMeta;
}

export interface NamedInput {
  path: string;
  text: string;
}

const PLOT = {
  x0: MARGIN.left,
  x1: WIDTH - MARGIN.right,
  y0: HEIGHT - MARGIN.bottom,   // y pixel origin (bottom)
  y1: MARGIN.top,
};

function axes(x: Scale, y: Scale, xLabel: string, yLabel: string,
              title: string | undefined,
              xFmt: (v: number) => string = fmt): string[] {
  const parts: string[] = [];
  for (const t of x.ticks) {
    const xp = x.toPx(t);
    parts.push(polyline([[xp, PLOT.y0], [xp, PLOT.y1]],
                        { stroke: "#dddddd", "stroke-width": 1 }));
    parts.push(text(xp, PLOT.y0 + 22, xFmt(t)));
  }
  for (const t of y.ticks) {
    const yp = y.toPx(t);
    parts.push(polyline([[PLOT.x0, yp], [PLOT.x1, yp]],
                        { stroke: "#dddddd", "stroke-width": 1 }));
    parts.push(text(PLOT.x0 - 10, yp + 5, fmt(t), "end"));
  }
  parts.push(polyline([[PLOT.x0, PLOT.y1], [PLOT.x0, PLOT.y0], [PLOT.x1, PLOT.y0]],
                      { stroke: "black", "stroke-width": 1.5 }));
  parts.push(text((PLOT.x0 + PLOT.x1) / 2, HEIGHT - 14, xLabel));
  parts.push(`<text x="20" y="${(PLOT.y0 + PLOT.y1) / 2}" text-anchor="middle" ` +
             `font-family="DejaVu Sans, sans-serif" font-size="14" ` +
             `transform="rotate(-90 20 ${(PLOT.y0 + PLOT.y1) / 2})">${yLabel}</text>`);
  if (title) parts.push(text((PLOT.x0 + PLOT.x1) / 2, 24, title, "middle", 16));
  return parts;
}

function unitLine(x: Scale, y: Scale): string {
  return polyline([[PLOT.x0, y.toPx(1)], [PLOT.x1, y.toPx(1)]],
                  { stroke: "black", "stroke-width": 1.5,
                    "stroke-dasharray": "8 5" });
}

interface RatePoint {
  x: number;
  mean: number;
  std: number;
}

function dedupEnsemble(rows: ResultRow[], xOf: (r: ResultRow) => number): RatePoint[] {
  const seen = new Map<number, RatePoint>();
  for (const row of rows) {
    if (row.error !== "" || row.ensembleMean === null) continue;
    if (!seen.has(xOf(row))) {
      seen.set(xOf(row), { x: xOf(row), mean: row.ensembleMean,
                           std: row.ensembleStd ?? 0 });
    }
  }
  return [...seen.values()].sort((a, b) => a.x - b.x);
}

function seriesKey(row: ResultRow): string {
  if (row.observable !== "Iel") return row.observable;
  const theta = row.theta ?? 0;
  if (Math.abs(theta) < 1e-9) return "I_el forward";
  return `I_el theta=${fmt(theta)}`;
}

const SHAPES: Record<string, MarkerShape> = {
  Ne: "square", Lambda: "cross", Pel: "diamond", "I_el forward": "triangle",
};

function legend(entries: Array<[string, string, MarkerShape]>): string[] {
  const parts: string[] = [];
  entries.forEach(([label, color, shape], i) => {
    const yp = PLOT.y1 + 16 + 22 * i;
    const xp = PLOT.x0 + 16;
    parts.push(marker(xp, yp - 4, shape, color, 5));
    parts.push(text(xp + 12, yp, label, "start", 13));
  });
  return parts;
}

function buildAngular(spec: FigureSpec, inputs: NamedInput[]): PanelResult {
  const rows = parseResultsCsv(inputs[0].text, inputs[0].path);
  const iel = rows.filter((r) => r.observable === "Iel");
  const points = dedupEnsemble(iel, (r) => r.theta ?? 0);
  if (points.length === 0) {
    throw new Error(`${inputs[0].path}: no angular intensity rows to plot`);
  }
  const neRows = dedupEnsemble(rows.filter((r) => r.observable === "Ne"),
                               () => 0);
  const lo = Math.min(0.0, ...points.map((p) => p.mean - p.std));
  const hi = Math.max(1.1, ...points.map((p) => p.mean + p.std));
  const x = linearScale(0, Math.max(Math.PI, ...points.map((p) => p.x)),
                        PLOT.x0, PLOT.x1);
  x.ticks = [0, Math.PI / 4, Math.PI / 2, (3 * Math.PI) / 4, Math.PI];
  const y = linearScale(lo, hi * 1.05, PLOT.y0, PLOT.y1);
  const piFrac = (v: number) => {
    const frac = v / Math.PI;
    return frac === 0 ? "0" : frac === 1 ? "pi" : `${fmt(frac)}pi`;
  };

  const body = axes(x, y, "detection angle theta (rad)",
                    "decay rate / single-atom rate", spec.title, piFrac);
  const color = PALETTE[0];
  for (const p of points) {
    const xp = x.toPx(p.x);
    body.push(polyline([[xp, y.toPx(p.mean - p.std)], [xp, y.toPx(p.mean + p.std)]],
                       { stroke: color, "stroke-width": 1.5 }));
    body.push(marker(xp, y.toPx(p.mean), "circle", color));
  }
  const legendEntries: Array<[string, string, MarkerShape]> =
    [["I_el(theta)", color, "circle"]];
  if (neRows.length > 0) {
    body.push(polyline([[PLOT.x0, y.toPx(neRows[0].mean)],
                        [PLOT.x1, y.toPx(neRows[0].mean)]],
                       { stroke: PALETTE[2], "stroke-width": 2 }));
    legendEntries.push(["N_e (angle-independent)", PALETTE[2], "square"]);
  }
  body.push(unitLine(x, y));
  body.push(...legend(legendEntries));
  return {
    svg: svgDoc(body),
    meta: {
      kind: "angular", nSeries: 1 + (neRows.length > 0 ? 1 : 0),
      unitLineDrawn: true,
      seriesCrossUnit: { "I_el(theta)": points.some((p) => p.mean < 1)
        && points.some((p) => p.mean > 1) },
    },
  };
}

function buildOmegaSweep(spec: FigureSpec, inputs: NamedInput[]): PanelResult {
  const rows = parseResultsCsv(inputs[0].text, inputs[0].path);
  const keys = [...new Set(rows.filter((r) => r.error === "")
    .map(seriesKey))].sort();
  if (keys.length === 0) {
    throw new Error(`${inputs[0].path}: empty result table, nothing to plot`);
  }
  const byKey = new Map<string, RatePoint[]>();
  for (const key of keys) {
    const pts = dedupEnsemble(rows.filter((r) => seriesKey(r) === key),
                              (r) => r.omega);
    if (pts.length > 0) byKey.set(key, pts);
  }
  const all = [...byKey.values()].flat();
  const omegas = all.map((p) => p.x);
  const useLog = spec.logX ?? true;
  const x = useLog
    ? logScale(Math.min(...omegas) / 1.3, Math.max(...omegas) * 1.3, PLOT.x0, PLOT.x1)
    : linearScale(Math.min(...omegas), Math.max(...omegas), PLOT.x0, PLOT.x1);
  const lo = Math.min(0, ...all.map((p) => p.mean - p.std));
  const hi = Math.max(1.1, ...all.map((p) => p.mean + p.std));
  const y = linearScale(lo, hi * 1.05, PLOT.y0, PLOT.y1);

  const body = axes(x, y, "drive Rabi frequency / Gamma",
                    "decay rate / single-atom rate", spec.title);
  const crossing: Record<string, boolean> = {};
  const legendEntries: Array<[string, string, MarkerShape]> = [];
  let colorIdx = 0;
  for (const [key, pts] of byKey) {
    const color = PALETTE[colorIdx % PALETTE.length];
    const shape = SHAPES[key] ?? "circle";
    colorIdx += 1;
    // one-sigma ensemble band
    const upper = pts.map((p): [number, number] => [x.toPx(p.x), y.toPx(p.mean + p.std)]);
    const lower = pts.map((p): [number, number] => [x.toPx(p.x), y.toPx(p.mean - p.std)])
      .reverse();
    body.push(polygon([...upper, ...lower],
                      { fill: color, "fill-opacity": "0.15", stroke: "none" }));
    body.push(polyline(pts.map((p) => [x.toPx(p.x), y.toPx(p.mean)]),
                       { stroke: color, "stroke-width": 2,
                         "stroke-dasharray": "3 3" }));
    for (const p of pts) body.push(marker(x.toPx(p.x), y.toPx(p.mean), shape, color));
    crossing[key] = pts.some((p) => p.mean < 1) && pts.some((p) => p.mean > 1);
    legendEntries.push([key, color, shape]);
  }
  body.push(unitLine(x, y));
  body.push(...legend(legendEntries));
  return {
    svg: svgDoc(body),
    meta: { kind: "omega-sweep", nSeries: byKey.size, unitLineDrawn: true,
            seriesCrossUnit: crossing },
  };
}

function traceKey(p: SeriesPoint): string | null {
  if (p.observable === "Ne" || p.observable === "Pel" || p.observable === "Pin") {
    return p.observable;
  }
  if (p.observable === "Iel") {
    return `I_el theta=${fmt(p.theta ?? 0)}`;
  }
  return null;  // Lambda and the power ratio are omitted to keep panels readable
}

function buildTimetrace(spec: FigureSpec, inputs: NamedInput[]): PanelResult {
  const series = new Map<string, Array<[number, number]>>();
  for (const input of inputs) {
    const points = parseTimeseriesCsv(input.text, input.path);
    const stem = inputs.length > 1
      ? basename(input.path).replace(/\.csv$/, "") + " " : "";
    for (const p of points) {
      if (p.phase !== "decay") continue;
      const key = traceKey(p);
      if (key === null) continue;
      const full = stem + key;
      if (!series.has(full)) series.set(full, []);
      series.get(full)!.push([p.t, p.valueNormalized]);
    }
  }
  if (series.size === 0) {
    throw new Error("no decay-phase series found in timetrace inputs");
  }
  let tMax = 0;
  let vMax = 1.0;
  for (const pts of series.values()) {
    pts.sort((a, b) => a[0] - b[0]);
    tMax = Math.max(tMax, pts[pts.length - 1][0]);
    for (const [, v] of pts) vMax = Math.max(vMax, v);
  }
  const x = linearScale(0, tMax, PLOT.x0, PLOT.x1);
  const y = linearScale(0, vMax * 1.05, PLOT.y0, PLOT.y1);
  const body = axes(x, y, "time after switch-off (1/Gamma)",
                    "signal / steady-state value", spec.title);

  // single-atom reference exp(-t), dashed black
  const ref: Array<[number, number]> = [];
  for (let i = 0; i <= 120; i++) {
    const t = (tMax * i) / 120;
    ref.push([x.toPx(t), y.toPx(Math.exp(-t))]);
  }
  body.push(polyline(ref, { stroke: "black", "stroke-width": 1.5,
                            "stroke-dasharray": "8 5" }));

  const legendEntries: Array<[string, string, MarkerShape]> = [];
  let colorIdx = 0;
  for (const [key, pts] of series) {
    const color = PALETTE[colorIdx % PALETTE.length];
    colorIdx += 1;
    body.push(polyline(pts.map(([t, v]) => [x.toPx(t), y.toPx(v)]),
                       { stroke: color, "stroke-width": 2 }));
    legendEntries.push([key, color, "circle"]);
  }
  legendEntries.push(["single-atom exp(-t)", "black", "cross"]);
  body.push(...legend(legendEntries));
  return {
    svg: svgDoc(body),
    meta: { kind: "timetrace", nSeries: series.size, unitLineDrawn: true,
            seriesCrossUnit: {} },
  };
}

export function buildPanel(spec: FigureSpec, inputs: NamedInput[]): PanelResult {
  switch (spec.kind) {
    case "angular":
      return buildAngular(spec, inputs);
    case "omega-sweep":
      return buildOmegaSweep(spec, inputs);
    case "timetrace":
      return buildTimetrace(spec, inputs);
  }
}
