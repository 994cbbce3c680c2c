import { writeFileSync } from "node:fs";
import { parseArgs } from "node:util";

import { parseResultCsv } from "./csv.js";
import type { FigureDef } from "./style.js";
import { renderFigure } from "./style.js";
import { FIGURES as FIG2 } from "./figure2.js";
import { FIGURES as FIG3 } from "./figure3.js";
import { FIGURES as FIG4 } from "./figure4.js";
import { FIGURES as FIG5 } from "./figure5.js";
import { FIGURES as FIG6 } from "./figure6.js";

const ALL: FigureDef[] = [...FIG2, ...FIG3, ...FIG4, ...FIG5, ...FIG6];
export const BY_ID = new Map(ALL.map((f) => [f.id, f]));

const USAGE =
  "usage: plots <figure-id> --in <csv...> --out <file>\n" +
  "       plots --list\n" +
  `figure ids: ${[...BY_ID.keys()].join(", ")}`;

/** Entry point; returns the process exit code. */
export function run(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      allowPositionals: true,
      options: {
        in: { type: "string", multiple: true },
        out: { type: "string" },
        list: { type: "boolean", default: false },
      },
    });
  } catch (err) {
    console.error(err instanceof Error ? err.message : String(err));
    console.error(USAGE);
    return 1;
  }
  if (parsed.values.list) {
    for (const f of ALL) console.log(`${f.id}  ${f.title}`);
    return 0;
  }
  const figureId = parsed.positionals[0];
  const inputs = parsed.values.in ?? [];
  const out = parsed.values.out;
  if (!figureId || inputs.length === 0 || !out) {
    console.error(USAGE);
    return 1;
  }
  const def = BY_ID.get(figureId);
  if (!def) {
    console.error(`unknown figure id: ${figureId}`);
    console.error(USAGE);
    return 1;
  }
  try {
    const tables = inputs.map((p) => parseResultCsv(p, def.id));
    const svg = renderFigure(def, tables);
    writeFileSync(out, svg); // written only after a full successful render
    console.log(`${out}: ${def.id}, ${tables.length} series`);
    return 0;
  } catch (err) {
    console.error(err instanceof Error ? err.message : String(err));
    return 1;
  }
}
