import { readFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";
import { parseResultsCsv, parseTimeseriesCsv } from "../src/csv.js";

const FIXTURES = join(__dirname, "fixtures");
const read = (name: string) => readFileSync(join(FIXTURES, name), "utf-8");

describe("results.csv parsing", () => {
  it("parses the sweep fixture", () => {
    const rows = parseResultsCsv(read("sweep_results.csv"), "sweep_results.csv");
    expect(rows.length).toBeGreaterThan(50);
    const omegas = [...new Set(rows.map((r) => r.omega))].sort((a, b) => a - b);
    expect(omegas[0]).toBeCloseTo(0.05);
    expect(omegas[omegas.length - 1]).toBeCloseTo(10.0);
    const observables = new Set(rows.map((r) => r.observable));
    for (const name of ["Ne", "Lambda", "Pel", "Iel"]) {
      expect(observables).toContain(name);
    }
  });

  it("keeps ensemble statistics as numbers", () => {
    const rows = parseResultsCsv(read("sweep_results.csv"), "x");
    const ok = rows.filter((r) => r.error === "");
    expect(ok.every((r) => typeof r.ensembleMean === "number")).toBe(true);
    expect(ok.every((r) => (r.ensembleStd ?? -1) >= 0)).toBe(true);
  });

  it("names a missing column", () => {
    expect(() => parseResultsCsv("omega,observable\n1.0,Ne\n", "bad.csv"))
      .toThrow(/bad\.csv: missing required column 'theta'/);
  });
});

describe("timeseries parsing", () => {
  it("parses decay traces with normalized values", () => {
    const pts = parseTimeseriesCsv(read("trace_weak.csv"), "trace_weak.csv");
    expect(pts.length).toBeGreaterThan(100);
    expect(pts.every((p) => p.phase === "decay")).toBe(true);
    const ne = pts.filter((p) => p.observable === "Ne");
    expect(ne[0].valueNormalized).toBeCloseTo(1.0, 12);
  });

  it("names a missing column", () => {
    expect(() => parseTimeseriesCsv("t,phase\n0.0,decay\n", "ts.csv"))
      .toThrow(/ts\.csv: missing required column 'observable'/);
  });
});
