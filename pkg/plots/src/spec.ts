export type FigureKind = "line" | "envelope" | "heatmap";

export interface AxisOptions {
  logX?: boolean;
  logY?: boolean;
  xLabel?: string;
  yLabel?: string;
}

/** A figure specification: input artifact(s), figure kind, column bindings,
 * output path and dimensions, axis/scale options. */
export interface FigureSpec {
  input: string | string[];
  kind: FigureKind;
  output: string;
  x: string;
  y: string | string[];
  /** heatmap only: the second coordinate and the value column */
  y2?: string;
  value?: string;
  width?: number;
  height?: number;
  title?: string;
  axes?: AxisOptions;
}

const KINDS: FigureKind[] = ["line", "envelope", "heatmap"];

export function validateSpec(raw: unknown): FigureSpec {
  if (typeof raw !== "object" || raw === null) {
    throw new Error("figure spec must be a JSON object");
  }
  const spec = raw as Record<string, unknown>;
  if (typeof spec.output !== "string" || spec.output.length === 0) {
    throw new Error("spec.output must be a path");
  }
  const kind = spec.kind as FigureKind;
  if (!KINDS.includes(kind)) {
    throw new Error(`spec.kind must be one of ${KINDS.join("/")}`);
  }
  const input = spec.input;
  if (
    !(typeof input === "string") &&
    !(Array.isArray(input) && input.every((p) => typeof p === "string") && input.length > 0)
  ) {
    throw new Error("spec.input must be a path or non-empty list of paths");
  }
  if (typeof spec.x !== "string") {
    throw new Error("spec.x must name a column");
  }
  const y = spec.y;
  if (
    !(typeof y === "string") &&
    !(Array.isArray(y) && y.every((c) => typeof c === "string") && y.length > 0)
  ) {
    throw new Error("spec.y must name a column or list of columns");
  }
  if (kind === "heatmap") {
    if (typeof spec.y2 !== "string" || typeof spec.value !== "string") {
      throw new Error("heatmap specs need y2 and value columns");
    }
  }
  const width = spec.width === undefined ? 720 : Number(spec.width);
  const height = spec.height === undefined ? 480 : Number(spec.height);
  if (!Number.isFinite(width) || !Number.isFinite(height) || width < 64 || height < 64) {
    throw new Error("width/height must be >= 64");
  }
  return {
    input: input as string | string[],
    kind,
    output: spec.output,
    x: spec.x,
    y: y as string | string[],
    y2: spec.y2 as string | undefined,
    value: spec.value as string | undefined,
    width,
    height,
    title: typeof spec.title === "string" ? spec.title : undefined,
    axes: (spec.axes ?? {}) as AxisOptions,
  };
}

/** Envelope figures (coefficient magnitudes against a majorant) default to a
 * logarithmic value axis, as do norm-growth line plots over dyadic orders. */
export function effectiveAxes(spec: FigureSpec): AxisOptions {
  const axes = { ...spec.axes };
  if (spec.kind === "envelope" && axes.logY === undefined) {
    axes.logY = true;
  }
  if (spec.kind === "line" && axes.logX === undefined && spec.x === "N") {
    axes.logX = true;
  }
  return axes;
}
