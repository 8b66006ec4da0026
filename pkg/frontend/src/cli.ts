#!/usr/bin/env node
/**
 * superdecay-fig --spec <file.json>
 *
 * Renders one figure panel (angular scan, drive-strength sweep, or decay
 * time trace) from sweep CSV outputs to <output>.svg and <output>.png.
 * Nothing is written if the inputs are empty or malformed.
 */

import { readFileSync, renameSync, writeFileSync } from "node:fs";
import { buildPanel, NamedInput, PanelResult } from "./panels.js";
import { svgToPng } from "./render.js";
import { FigureSpec, loadSpec } from "./spec.js";

export function renderSpec(spec: FigureSpec): PanelResult {
  const inputs: NamedInput[] = spec.inputs.map((path) => {
    try {
      return { path, text: readFileSync(path, "utf-8") };
    } catch (err) {
      throw new Error(`cannot read input ${path}: ${(err as Error).message}`);
    }
  });
  return buildPanel(spec, inputs);
}

function atomicWrite(path: string, data: string | Buffer): void {
  const tmp = `${path}.tmp-${process.pid}`;
  writeFileSync(tmp, data);
  renameSync(tmp, path);
}

export function run(argv: string[]): number {
  const idx = argv.indexOf("--spec");
  if (idx === -1 || idx + 1 >= argv.length) {
    process.stderr.write("usage: superdecay-fig --spec <file.json>\n");
    return 2;
  }
  try {
    const spec = loadSpec(argv[idx + 1]);
    const panel = renderSpec(spec);
    atomicWrite(`${spec.output}.svg`, panel.svg);
    atomicWrite(`${spec.output}.png`, svgToPng(panel.svg));
    process.stdout.write(
      `wrote ${spec.output}.svg and ${spec.output}.png ` +
      `(${panel.meta.kind}, ${panel.meta.nSeries} series)\n`);
    return 0;
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n`);
    return 1;
  }
}

const isMain = process.argv[1] !== undefined &&
  import.meta.url.endsWith(process.argv[1].split("/").pop() ?? "");
if (isMain) {
  process.exit(run(process.argv.slice(2)));
}
