import { writeFileSync } from "fs";
import { readCsv, requireColumn, Table } from "./csv.js";
import { FigureSpec, effectiveAxes, validateSpec } from "./spec.js";
import { Series, renderHeatmap, renderLines } from "./svg.js";

function inputs(spec: FigureSpec): string[] {
  return Array.isArray(spec.input) ? spec.input : [spec.input];
}

/** Render one figure from its spec; returns the output path.  Inputs are
 * never mutated; a missing file, a missing column or empty data throws. */
export function render(rawSpec: unknown): string {
  const spec = validateSpec(rawSpec);
  const axes = effectiveAxes(spec);
  const paths = inputs(spec);
  const tables: [string, Table][] = paths.map((p) => [p, readCsv(p)]);
  const yCols = Array.isArray(spec.y) ? spec.y : [spec.y];

  let svg: string;
  if (spec.kind === "heatmap") {
    const [path, table] = tables[0];
    const xs = requireColumn(table, spec.x, path);
    const ys = requireColumn(table, spec.y2!, path);
    const vals = requireColumn(table, spec.value!, path);
    svg = renderHeatmap(spec.width!, spec.height!, xs, ys, vals, axes, spec.title);
  } else {
    const series: Series[] = [];
    for (const [path, table] of tables) {
      const xs = requireColumn(table, spec.x, path);
      for (const col of yCols) {
        const ys = requireColumn(table, col, path);
        const label = tables.length > 1 ? `${path}:${col}` : col;
        series.push({ label, xs, ys });
      }
    }
    svg = renderLines(spec.width!, spec.height!, series, axes, spec.title);
  }
  writeFileSync(spec.output, svg, "utf-8");
  return spec.output;
}
