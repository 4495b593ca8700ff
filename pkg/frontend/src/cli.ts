#!/usr/bin/env node
/** cpass-plot: render one sweep CSV into its figure. */

import { realpathSync } from "node:fs";
import { readFile, writeFile } from "node:fs/promises";
import { fileURLToPath } from "node:url";
import { parseArgs } from "node:util";

import { SchemaError } from "./csv.js";
import { renderFigure, SCHEMAS, type FigureKind } from "./figures.js";

const USAGE =
  "usage: cpass-plot --which a|b|c --in <csv> --out <png>\n" +
  "  a: capacity vs transmit power   (power sweep CSV)\n" +
  "  b: gains vs element count       (gain sweep CSV)\n" +
  "  c: capacity vs element count    (capacity sweep CSV)";

export async function main(argv: string[]): Promise<number> {
  let which: string | undefined;
  let input: string | undefined;
  let output: string | undefined;
  try {
    const parsed = parseArgs({
      args: argv,
      options: {
        which: { type: "string" },
        in: { type: "string" },
        out: { type: "string" },
        help: { type: "boolean", short: "h" },
      },
      allowPositionals: false,
    });
    if (parsed.values.help) {
      console.log(USAGE);
      return 0;
    }
    which = parsed.values.which;
    input = parsed.values.in;
    output = parsed.values.out;
  } catch (err) {
    console.error(`cpass-plot: ${(err as Error).message}`);
    console.error(USAGE);
    return 1;
  }

  if (!which || !input || !output) {
    console.error("cpass-plot: --which, --in, and --out are all required");
    console.error(USAGE);
    return 1;
  }
  if (!(which in SCHEMAS)) {
    console.error(`cpass-plot: --which must be a, b, or c, got "${which}"`);
    return 1;
  }

  let text: string;
  try {
    text = await readFile(input, "utf8");
  } catch (err) {
    console.error(`cpass-plot: cannot read ${input}: ${(err as Error).message}`);
    return 2;
  }

  let svg: string;
  try {
    svg = renderFigure(which as FigureKind, text);
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`cpass-plot: ${input}: ${err.message}`);
    } else {
      console.error(`cpass-plot: ${(err as Error).message}`);
    }
    return 1;
  }

  try {
    await writeFile(output, svg, "utf8");
  } catch (err) {
    console.error(`cpass-plot: cannot write ${output}: ${(err as Error).message}`);
    return 2;
  }
  return 0;
}

// argv[1] is the bin symlink when installed; resolve it before comparing
const invokedDirectly = (() => {
  const entry = process.argv[1];
  if (!entry) return false;
  try {
    return realpathSync(entry) === fileURLToPath(import.meta.url);
  } catch {
    return false;
  }
})();

if (invokedDirectly) {
  main(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
