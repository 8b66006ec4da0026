/** Minimal deterministic SVG assembly: plain strings, fixed fonts, no RNG. */

export const WIDTH = 800;
export const HEIGHT = 560;
export const MARGIN = { left: 78, right: 24, top: 46, bottom: 62 };
export const FONT = "DejaVu Sans, sans-serif";

export function px(v: number): string {
  // fixed two-decimal pixel grid keeps output byte-stable across platforms
  return v.toFixed(2);
}

export function el(tag: string, attrs: Record<string, string | number>,
                   children: string[] = []): string {
  const a = Object.entries(attrs)
    .map(([k, v]) => `${k}="${typeof v === "number" ? px(v) : v}"`)
    .join(" ");
  if (children.length === 0) return `<${tag} ${a}/>`;
  return `<${tag} ${a}>${children.join("")}</${tag}>`;
}

export function text(x: number, y: number, s: string,
                     anchor: "start" | "middle" | "end" = "middle",
                     size = 14): string {
  const esc = s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
  return `<text x="${px(x)}" y="${px(y)}" text-anchor="${anchor}" ` +
         `font-family="${FONT}" font-size="${size}">${esc}</text>`;
}

export function polyline(points: Array<[number, number]>,
                         attrs: Record<string, string | number>): string {
  const pts = points.map(([x, y]) => `${px(x)},${px(y)}`).join(" ");
  return el("polyline", { points: pts, fill: "none", ...attrs });
}

export function polygon(points: Array<[number, number]>,
                        attrs: Record<string, string | number>): string {
  const pts = points.map(([x, y]) => `${px(x)},${px(y)}`).join(" ");
  return el("polygon", { points: pts, ...attrs });
}

export type MarkerShape = "circle" | "square" | "triangle" | "diamond" | "cross";

export function marker(x: number, y: number, shape: MarkerShape, color: string,
                       size = 5): string {
  switch (shape) {
    case "circle":
      return el("circle", { cx: x, cy: y, r: size, fill: color });
    case "square":
      return el("rect", { x: x - size, y: y - size, width: 2 * size,
                          height: 2 * size, fill: color });
    case "triangle":
      return polygon([[x, y - size], [x - size, y + size], [x + size, y + size]],
                     { fill: color });
    case "diamond":
      return polygon([[x, y - size], [x + size, y], [x, y + size], [x - size, y]],
                     { fill: color });
    case "cross":
      return polyline([[x - size, y - size], [x + size, y + size]],
                      { stroke: color, "stroke-width": 2 }) +
             polyline([[x - size, y + size], [x + size, y - size]],
                      { stroke: color, "stroke-width": 2 });
  }
}

export function document(body: string[]): string {
  return `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" ` +
         `height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">` +
         `<rect x="0" y="0" width="${WIDTH}" height="${HEIGHT}" fill="white"/>` +
         body.join("") + `</svg>`;
}

export const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#bca700", "#9467bd",
                        "#8c564b", "#e377c2", "#17becf"];
