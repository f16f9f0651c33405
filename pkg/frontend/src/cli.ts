#!/usr/bin/env node
/** render --panel ID --in CSV[,CSV] --out IMG [--bins N] [--deterministic] */

import { writeFileSync } from "node:fs";

import { Command, InvalidArgumentError } from "commander";

import { DataError } from "./csv.js";
import { PANEL_IDS, PanelId, renderPanel } from "./panels.js";

function parseBins(raw: string): number {
  const value = Number(raw);
  if (!Number.isInteger(value) || value < 1) {
    throw new InvalidArgumentError("expected a positive integer");
  }
  return value;
}

const program = new Command();
program
  .name("render")
  .description("Render a simulator CSV artifact into an SVG figure panel.")
  .requiredOption("--panel <id>", `panel id: ${PANEL_IDS.join(", ")}`)
  .requiredOption("--in <csv[,csv]>", "input path(s), comma separated")
  .requiredOption("--out <img>", "output SVG path")
  .option("--bins <n>", "histogram bin count", parseBins, 60)
  .option("--deterministic", "omit volatile metadata so re-renders are byte-identical", false)
  .exitOverride();

try {
  program.parse();
} catch {
  // commander already printed its usage message
  process.exit(2);
}

const opts = program.opts<{
  panel: string;
  in: string;
  out: string;
  bins: number;
  deterministic: boolean;
}>();

if (!(PANEL_IDS as string[]).includes(opts.panel)) {
  process.stderr.write(
    `render: unknown panel "${opts.panel}" (expected ${PANEL_IDS.join(", ")})\n`,
  );
  process.exit(2);
}

const inputs = opts.in.split(",").map((p) => p.trim()).filter((p) => p !== "");
if (inputs.length === 0) {
  process.stderr.write("render: --in needs at least one path\n");
  process.exit(2);
}

try {
  const svg = renderPanel({
    panel: opts.panel as PanelId,
    inputs,
    output: opts.out,
    bins: opts.bins,
    deterministic: opts.deterministic,
  });
  writeFileSync(opts.out, svg);
  process.stdout.write(`wrote ${opts.out}\n`);
} catch (error) {
  if (error instanceof DataError) {
    process.stderr.write(`render: ${error.message}\n`);
    process.exit(1);
  }
  throw error;
}
