import { existsSync, mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";
import { run } from "../src/cli.js";
import { svgToPng } from "../src/render.js";

const FIXTURES = join(__dirname, "fixtures");

function writeSpec(dir: string, body: object): string {
  const path = join(dir, "spec.json");
  writeFileSync(path, JSON.stringify(body));
  return path;
}

describe("svg rasterization", () => {
  it("produces a PNG buffer deterministically", () => {
    const svg = `<svg xmlns="http://www.w3.org/2000/svg" width="40" height="40">` +
      `<rect x="0" y="0" width="40" height="40" fill="white"/>` +
      `<circle cx="20" cy="20" r="10" fill="#1f77b4"/></svg>`;
    const a = svgToPng(svg);
    const b = svgToPng(svg);
    expect(a.subarray(0, 8)).toEqual(
      Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]));
    expect(a.equals(b)).toBe(true);
  });
});

describe("superdecay-fig CLI", () => {
  it("renders all three panel kinds end to end", () => {
    const dir = mkdtempSync(join(tmpdir(), "fig-"));
    const cases: Array<[string, string[]]> = [
      ["angular", ["angular_results.csv"]],
      ["omega-sweep", ["sweep_results.csv"]],
      ["timetrace", ["trace_weak.csv", "trace_strong.csv"]],
    ];
    for (const [kind, names] of cases) {
      const output = join(dir, kind);
      const specPath = writeSpec(dir, {
        kind, inputs: names.map((n) => join(FIXTURES, n)), output,
      });
      expect(run(["--spec", specPath])).toBe(0);
      expect(existsSync(`${output}.svg`)).toBe(true);
      expect(existsSync(`${output}.png`)).toBe(true);
      const svg = readFileSync(`${output}.svg`, "utf-8");
      expect(svg).toContain("stroke-dasharray");  // reference line present
    }
  });

  it("fails cleanly on a malformed spec without writing files", () => {
    const dir = mkdtempSync(join(tmpdir(), "fig-"));
    const output = join(dir, "nope");
    const specPath = writeSpec(dir, { kind: "angular", inputs: [], output });
    expect(run(["--spec", specPath])).toBe(1);
    expect(existsSync(`${output}.svg`)).toBe(false);
    expect(existsSync(`${output}.png`)).toBe(false);
  });

  it("fails cleanly when an input CSV is missing", () => {
    const dir = mkdtempSync(join(tmpdir(), "fig-"));
    const output = join(dir, "nope");
    const specPath = writeSpec(dir, {
      kind: "omega-sweep", inputs: [join(dir, "ghost.csv")], output,
    });
    expect(run(["--spec", specPath])).toBe(1);
    expect(existsSync(`${output}.svg`)).toBe(false);
  });

  it("rejects unknown spec keys", () => {
    const dir = mkdtempSync(join(tmpdir(), "fig-"));
    const specPath = writeSpec(dir, {
      kind: "angular", inputs: [join(FIXTURES, "angular_results.csv")],
      output: join(dir, "x"), dpi: 300,
    });
    expect(run(["--spec", specPath])).toBe(1);
  });

  it("requires --spec", () => {
    expect(run([])).toBe(2);
  });
});
