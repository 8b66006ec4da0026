import Papa from "papaparse";

/** One row of the sweep result table (results.csv contract). */
export interface ResultRow {
  omega: number;
  observable: string;
  theta: number | null;
  phi: number | null;
  configIndex: number;
  gamma: number | null;
  ensembleMean: number | null;
  ensembleStd: number | null;
  error: string;
}

/** One sample of a decay time-series file (timeseries CSV contract). */
export interface SeriesPoint {
  t: number;
  phase: string;
  observable: string;
  theta: number | null;
  value: number;
  valueNormalized: number;
}

function parseRows(text: string, source: string, required: string[]) {
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0];
    throw new Error(`${source}: CSV parse error at row ${e.row}: ${e.message}`);
  }
  const fields = parsed.meta.fields ?? [];
  for (const col of required) {
    if (!fields.includes(col)) {
      throw new Error(`${source}: missing required column '${col}'`);
    }
  }
  return parsed.data;
}

const num = (s: string | undefined): number | null =>
  s === undefined || s === "" ? null : Number(s);

export function parseResultsCsv(text: string, source: string): ResultRow[] {
  const rows = parseRows(text, source, [
    "omega", "observable", "theta", "phi", "config_index", "gamma",
    "ensemble_mean", "ensemble_std", "error",
  ]);
  return rows.map((r) => ({
    omega: Number(r.omega),
    observable: r.observable,
    theta: num(r.theta),
    phi: num(r.phi),
    configIndex: Number(r.config_index),
    gamma: num(r.gamma),
    ensembleMean: num(r.ensemble_mean),
    ensembleStd: num(r.ensemble_std),
    error: r.error ?? "",
  }));
}

export function parseTimeseriesCsv(text: string, source: string): SeriesPoint[] {
  const rows = parseRows(text, source, [
    "t", "phase", "observable", "theta", "phi", "value", "value_normalized",
  ]);
  return rows.map((r) => ({
    t: Number(r.t),
    phase: r.phase,
    observable: r.observable,
    theta: num(r.theta),
    value: Number(r.value),
    valueNormalized: Number(r.value_normalized),
  }));
}
