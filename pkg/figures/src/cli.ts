#!/usr/bin/env node
/**
 * figures --kind <kind> --in <summary.csv> --out <figure.svg>
 *
 * Kinds: trajectory_bands, mechanism_heatmap, balance_heatmap,
 * tradeoff_scatter, oracle_panels. Inputs are the simulation runner's
 * summary CSVs; output is a standalone SVG file.
 */

import { parseArgs } from "util";
import { FIGURE_KINDS, FigureKind, render } from "./figures.js";

export function main(argv: string[]): number {
  const { values } = parseArgs({
    args: argv,
    options: {
      kind: { type: "string" },
      in: { type: "string" },
      out: { type: "string" },
    },
  });
  const kind = values.kind as FigureKind | undefined;
  if (!kind || !values.in || !values.out) {
    console.error("usage: figures --kind <kind> --in <csv> --out <svg>");
    console.error(`kinds: ${FIGURE_KINDS.join(", ")}`);
    return 2;
  }
  if (!FIGURE_KINDS.includes(kind)) {
    console.error(`unknown kind '${kind}'; expected one of ${FIGURE_KINDS.join(", ")}`);
    return 2;
  }
  try {
    render({ kind, input: values.in, output: values.out });
  } catch (err) {
    console.error(err instanceof Error ? err.message : String(err));
    return 1;
  }
  console.log(`wrote ${values.out}`);
  return 0;
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
