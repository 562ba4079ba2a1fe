import { readFileSync } from "fs";

export interface Table {
  header: string[];
  columns: Map<string, number[]>;
  rows: number;
}

/** Parse one of the runner's CSV artifacts: a header row followed by
 * comma-separated numeric rows (UTF-8, \n line endings). */
export function readCsv(path: string): Table {
  let text: string;
  try {
    text = readFileSync(path, "utf-8");
  } catch (err) {
    throw new Error(`missing file: ${path}`);
  }
  const lines = text.split("\n").filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new Error(`empty CSV: ${path}`);
  }
  const header = lines[0].split(",").map((h) => h.trim());
  const columns = new Map<string, number[]>(header.map((h) => [h, []]));
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(",");
    if (parts.length !== header.length) {
      throw new Error(`ragged row ${i} in ${path}`);
    }
    parts.forEach((p, j) => {
      const v = Number(p);
      if (!Number.isFinite(v)) {
        throw new Error(`non-numeric value ${JSON.stringify(p)} in ${path}`);
      }
      columns.get(header[j])!.push(v);
    });
  }
  const rows = lines.length - 1;
  if (rows === 0) {
    throw new Error(`empty data: ${path}`);
  }
  return { header, columns, rows };
}

export function requireColumn(table: Table, name: string, path: string): number[] {
  const col = table.columns.get(name);
  if (!col) {
    throw new Error(
      `missing column ${JSON.stringify(name)} in ${path} (have: ${table.header.join(", ")})`,
    );
  }
  return col;
}
