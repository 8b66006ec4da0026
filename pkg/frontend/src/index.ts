export { FigureSpec, figureSpecSchema, loadSpec, parseSpec } from "./spec.js";
export { ResultRow, SeriesPoint, parseResultsCsv, parseTimeseriesCsv } from "./csv.js";
export { buildPanel, NamedInput, PanelMeta, PanelResult } from "./panels.js";
export { svgToPng } from "./render.js";
export { renderSpec, run } from "./cli.js";
export { fmt, linearScale, linearTicks, logScale, logTicks } from "./scale.js";
