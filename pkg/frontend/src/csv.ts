import { readFileSync } from "node:fs";
import { basename } from "node:path";
import Papa from "papaparse";

/** One row of a result table; empty cells become null. */
export interface ResultRow {
  sweep: number;
  analytic_ub: number | null;
  analytic_lb: number | null;
  mc_value: number | null;
  mc_stderr: number | null;
}

export interface ResultTable {
  /** series name: the file stem with the figure-id prefix stripped */
  name: string;
  path: string;
  rows: ResultRow[];
}

export const REQUIRED_COLUMNS = [
  "sweep",
  "analytic_ub",
  "analytic_lb",
  "mc_value",
  "mc_stderr",
] as const;

function toCell(
  path: string,
  line: number,
  column: string,
  value: string | undefined,
): number | null {
  const s = (value ?? "").trim();
  if (s === "") return null;
  const v = Number(s);
  if (!Number.isFinite(v)) {
    throw new Error(`${path}: line ${line}: ${column} is not a number: "${s}"`);
  }
  return v;
}

export function seriesName(path: string, figureId: string): string {
  const stem = basename(path).replace(/\.[^.]*$/, "");
  return stem.startsWith(figureId + "_")
    ? stem.slice(figureId.length + 1)
    : stem;
}

/** Parse one result CSV, checking the schema up front. */
export function parseResultCsv(path: string, figureId: string): ResultTable {
  const text = readFileSync(path, "utf8");
  const parsed = Papa.parse<Record<string, string>>(text, {
    header: true,
    skipEmptyLines: true,
  });
  const fields = parsed.meta.fields ?? [];
  const missing = REQUIRED_COLUMNS.filter((c) => !fields.includes(c));
  if (missing.length > 0) {
    throw new Error(`${path}: missing column(s): ${missing.join(", ")}`);
  }
  if (parsed.data.length === 0) {
    throw new Error(`${path}: no data rows`);
  }
  const rows: ResultRow[] = parsed.data.map((rec, i) => {
    const line = i + 2; // 1-based, after the header
    const sweep = toCell(path, line, "sweep", rec.sweep);
    if (sweep === null) {
      throw new Error(`${path}: line ${line}: sweep must not be empty`);
    }
    return {
      sweep,
      analytic_ub: toCell(path, line, "analytic_ub", rec.analytic_ub),
      analytic_lb: toCell(path, line, "analytic_lb", rec.analytic_lb),
      mc_value: toCell(path, line, "mc_value", rec.mc_value),
      mc_stderr: toCell(path, line, "mc_stderr", rec.mc_stderr),
    };
  });
  return { name: seriesName(path, figureId), path, rows };
}
