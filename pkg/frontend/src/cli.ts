#!/usr/bin/env node
import { writeFileSync } from "fs";
import { PNG } from "pngjs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { renderHeatmap, RenderSpec, ValueColumn } from "./render";
import { loadGrid, SchemaError } from "./schema";

export function run(argv: string[]): number {
  const args = yargs(argv)
    .command("render", "render one sweep CSV to a PNG heatmap")
    .demandCommand(1)
    .option("in", { type: "string", demandOption: true, describe: "input sweep CSV" })
    .option("out", { type: "string", demandOption: true, describe: "output PNG path" })
    .option("value", {
      choices: ["nash", "delta_f"] as const,
      default: "delta_f" as ValueColumn,
      describe: "which column drives the color",
    })
    .option("clamp", {
      type: "number",
      default: 0.02,
      describe: "saturation magnitude for delta_f",
    })
    .option("overlay-thresholds", {
      type: "boolean",
      default: false,
      describe: "draw the participation-bound curves",
    })
    .option("fee", {
      type: "number",
      default: 0.003,
      describe: "pool fee used for the threshold overlays",
    })
    .option("contour", {
      type: "number",
      describe: "mark a dotted |delta_f| contour at this level",
    })
    .strict()
    .exitProcess(false)
    .parseSync();

  const spec: RenderSpec = {
    value: args.value,
    clamp: args.clamp,
    overlayThresholds: args["overlay-thresholds"],
    fee: args.fee,
    contourLevel: args.contour,
  };
  if (!(spec.clamp > 0)) {
    process.stderr.write(`clamp must be positive, got ${spec.clamp}\n`);
    return 1;
  }
  try {
    const grid = loadGrid(args.in);
    const png = renderHeatmap(grid, spec);
    writeFileSync(args.out, PNG.sync.write(png));
    process.stderr.write(
      `wrote ${png.width}x${png.height} ${args.value} heatmap to ${args.out}\n`
    );
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      process.stderr.write(`schema error in ${args.in}: ${err.message}\n`);
      return 1;
    }
    if (err instanceof Error && "code" in err && err.code === "ENOENT") {
      process.stderr.write(`cannot read ${args.in}: no such file\n`);
      return 1;
    }
    throw err;
  }
}

if (require.main === module) {
  process.exit(run(hideBin(process.argv)));
}
