#!/usr/bin/env node
/** att-nnsf-plot: regenerate experiment figures from simulation CSV logs. */

import { writeFileSync } from "fs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { parseRunCsv } from "./csv.js";
import { FIGURE_KINDS, FigureKind, render } from "./figures.js";

export function main(argv: string[]): number {
  const args = yargs(argv)
    .option("kind", {
      choices: FIGURE_KINDS,
      demandOption: true,
      describe: "figure kind to render",
    })
    .option("in", {
      type: "string",
      array: true,
      demandOption: true,
      describe: "input CSV path(s) from the simulation harness",
    })
    .option("out", {
      type: "string",
      demandOption: true,
      describe: "output SVG path",
    })
    .strict()
    .exitProcess(false)
    .parseSync();

  const tables = (args.in as string[]).map(parseRunCsv);
  const svg = render(args.kind as FigureKind, tables);
  writeFileSync(args.out as string, svg);
  console.log(`wrote ${args.out}`);
  return 0;
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  (process.argv[1].endsWith("cli.js") || process.argv[1].endsWith("att-nnsf-plot"));

if (invokedDirectly) {
  try {
    process.exit(main(hideBin(process.argv)));
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : String(err)}`);
    process.exit(1);
  }
}
