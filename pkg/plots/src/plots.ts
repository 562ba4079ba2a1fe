#!/usr/bin/env node
import { readFileSync } from "fs";
import { dirname, resolve } from "path";
import { render } from "./render.js";

function usage(): never {
  process.stderr.write(
    "usage: plots render --spec <figure.json> | plots render --manifest <figures.json>\n",
  );
  process.exit(1);
}

export function main(argv: string[]): number {
  if (argv.length < 3 || argv[0] !== "render") {
    usage();
  }
  const flag = argv[1];
  const path = argv[2];
  try {
    if (flag === "--spec") {
      const spec = JSON.parse(readFileSync(path, "utf-8"));
      const out = render(spec);
      process.stdout.write(`${out}\n`);
      return 0;
    }
    if (flag === "--manifest") {
      // batch mode: a JSON list of figure-spec paths, rendered one per call
      const entries = JSON.parse(readFileSync(path, "utf-8"));
      if (!Array.isArray(entries)) {
        throw new Error("figures manifest must be a JSON list of spec paths");
      }
      const base = dirname(resolve(path));
      for (const entry of entries) {
        const specPath = resolve(base, String(entry));
        const spec = JSON.parse(readFileSync(specPath, "utf-8"));
        const out = render(spec);
        process.stdout.write(`${out}\n`);
      }
      return 0;
    }
    usage();
  } catch (err) {
    process.stderr.write(`plots: ${(err as Error).message}\n`);
    return 1;
  }
}

const invoked = process.argv[1] ?? "";
if (invoked.endsWith("plots.js") || invoked.endsWith("plots.ts")) {
  process.exit(main(process.argv.slice(2)));
}
