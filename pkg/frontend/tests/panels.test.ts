import { readFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";
import { buildPanel } from "../src/panels.js";
import { FigureSpec } from "../src/spec.js";

const FIXTURES = join(__dirname, "fixtures");
const input = (name: string) => ({
  path: join(FIXTURES, name),
  text: readFileSync(join(FIXTURES, name), "utf-8"),
});

const spec = (kind: FigureSpec["kind"], names: string[]): FigureSpec => ({
  kind,
  inputs: names.map((n) => join(FIXTURES, n)),
  output: "unused",
});

describe("angular panel", () => {
  it("renders with the unit reference line", () => {
    const panel = buildPanel(spec("angular", ["angular_results.csv"]),
                             [input("angular_results.csv")]);
    expect(panel.meta.unitLineDrawn).toBe(true);
    expect(panel.svg).toContain("stroke-dasharray");
    expect(panel.svg.startsWith("<svg")).toBe(true);
  });

  it("errors on an empty table and produces no svg", () => {
    const header = readFileSync(join(FIXTURES, "angular_results.csv"), "utf-8")
      .split("\n")[0];
    expect(() => buildPanel(spec("angular", ["empty.csv"]),
                            [{ path: "empty.csv", text: header + "\n" }]))
      .toThrow(/no angular intensity rows/);
  });

  it("ignores error rows", () => {
    // the fixture contains one isolated fit-failure row; the panel must
    // render from the remaining ensemble without picking up nulls
    const panel = buildPanel(spec("angular", ["angular_results.csv"]),
                             [input("angular_results.csv")]);
    expect(panel.svg).not.toContain("NaN");
  });
});

describe("omega-sweep panel", () => {
  it("shows the off-axis series crossing the unit rate", () => {
    const panel = buildPanel(spec("omega-sweep", ["sweep_results.csv"]),
                             [input("sweep_results.csv")]);
    expect(panel.meta.unitLineDrawn).toBe(true);
    const offAxis = Object.keys(panel.meta.seriesCrossUnit)
      .find((k) => k.startsWith("I_el theta="));
    expect(offAxis).toBeDefined();
    expect(panel.meta.seriesCrossUnit[offAxis!]).toBe(true);
    // forward light never crosses: superradiant throughout
    expect(panel.meta.seriesCrossUnit["I_el forward"]).toBe(false);
  });

  it("draws one band and one marker set per observable", () => {
    const panel = buildPanel(spec("omega-sweep", ["sweep_results.csv"]),
                             [input("sweep_results.csv")]);
    expect(panel.meta.nSeries).toBe(5); // Ne, Lambda, Pel, forward, off-axis
    expect((panel.svg.match(/fill-opacity="0.15"/g) ?? []).length).toBe(5);
  });

  it("is byte-stable for identical input", () => {
    const a = buildPanel(spec("omega-sweep", ["sweep_results.csv"]),
                         [input("sweep_results.csv")]);
    const b = buildPanel(spec("omega-sweep", ["sweep_results.csv"]),
                         [input("sweep_results.csv")]);
    expect(a.svg).toBe(b.svg);
  });

  it("collapses onto the reference line for single-atom data", () => {
    const header = "n_atoms,b0,detuning,omega,config_index,seed,observable," +
      "theta,phi,gamma,rss,n_points,t_fit,converged,ensemble_mean," +
      "ensemble_std,ensemble_count,error";
    const rows = [0.1, 1.0, 10.0].map((w) =>
      `1,1.0,0.0,${w},0,1,Ne,,,1.0,0.0,76,0.75,True,1.0,0.0,1,`);
    const text = header + "\n" + rows.join("\n") + "\n";
    const panel = buildPanel(spec("omega-sweep", ["x.csv"]),
                             [{ path: "x.csv", text }]);
    expect(panel.meta.seriesCrossUnit.Ne).toBe(false);
    // series sits exactly on the unit reference: identical y pixels
    const unit = panel.svg.match(
      /points="[\d.]+,([\d.]+) [\d.]+,\1" fill="none" stroke="black" stroke-width="1.50" stroke-dasharray="8 5"/);
    expect(unit).not.toBeNull();
    const series = panel.svg.match(
      /points="([^"]+)" fill="none" stroke="#1f77b4" stroke-width="2.00" stroke-dasharray="3 3"/);
    expect(series).not.toBeNull();
    const ys = new Set(series![1].split(" ").map((p) => p.split(",")[1]));
    expect(ys.size).toBe(1);
    expect([...ys][0]).toBe(unit![1]);
  });
});

describe("timetrace panel", () => {
  it("renders traces for both drives with the single-atom reference", () => {
    const panel = buildPanel(
      spec("timetrace", ["trace_weak.csv", "trace_strong.csv"]),
      [input("trace_weak.csv"), input("trace_strong.csv")]);
    expect(panel.meta.unitLineDrawn).toBe(true);
    expect(panel.meta.nSeries).toBeGreaterThanOrEqual(6);
    expect(panel.svg).toContain("trace_weak");
    expect(panel.svg).toContain("trace_strong");
  });

  it("errors when no decay samples are present", () => {
    const text = "t,phase,observable,theta,phi,value,value_normalized\n" +
      "0.0,drive,Ne,,,1.0,1.0\n";
    expect(() => buildPanel(spec("timetrace", ["x.csv"]),
                            [{ path: "x.csv", text }]))
      .toThrow(/no decay-phase series/);
  });
});
