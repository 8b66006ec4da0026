import { readFileSync } from "node:fs";
import { z } from "zod";

export const figureSpecSchema = z.strictObject({
  kind: z.enum(["angular", "omega-sweep", "timetrace"]),
  inputs: z.array(z.string()).min(1),
  output: z.string().min(1),
  title: z.string().optional(),
  // x-axis scale for omega sweeps; log is the natural choice and the default
  logX: z.boolean().optional(),
});

export type FigureSpec = z.infer<typeof figureSpecSchema>;

export function parseSpec(json: unknown, source: string): FigureSpec {
  const result = figureSpecSchema.safeParse(json);
  if (!result.success) {
    const issues = result.error.issues
      .map((i) => `${i.path.join(".") || "<root>"}: ${i.message}`)
      .join("; ");
    throw new Error(`invalid figure spec ${source}: ${issues}`);
  }
  return result.data;
}

export function loadSpec(path: string): FigureSpec {
  let raw: string;
  try {
    raw = readFileSync(path, "utf-8");
  } catch (err) {
    throw new Error(`cannot read figure spec ${path}: ${(err as Error).message}`);
  }
  let json: unknown;
  try {
    json = JSON.parse(raw);
  } catch (err) {
    throw new Error(`figure spec ${path} is not valid JSON: ${(err as Error).message}`);
  }
  return parseSpec(json, path);
}
