import { createHash } from "crypto";
import { mkdtempSync, readFileSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import { beforeAll, describe, expect, it } from "vitest";

import { readCsv, requireColumn } from "../src/csv.js";
import { render } from "../src/render.js";
import { validateSpec, effectiveAxes } from "../src/spec.js";

let dir: string;

/** Fixtures covering every documented CSV kind emitted by the runner. */
const FIXTURES: Record<string, string> = {
  "kernel_l1.csv": "N,l1_norm\n16,2.4065\n32,2.6812\n64,2.9591\n128,3.2384\n",
  "kernel_fejer.csv":
    "index,re,im\n-2,0.5,0\n-1,0.75,0\n0,1,0\n1,0.75,0\n2,0.5,0\n",
  "wiener_inverse.csv": "index,re,im\n0,0.5,0\n1,-0.25,0\n2,0.125,0\n",
  "riesz_coeffs.csv": "frequency,re,im\n-3,0.5,0\n0,1,0\n3,0.5,0\n",
  "riesz_blocks.csv": "j,block_mass\n1,0.5\n2,0.625\n3,0.78\n",
  "szego.csv":
    "n,distance,target,gap\n2,1.87,1.866,0.004\n4,1.8661,1.866,0.0001\n8,1.86603,1.866,0.00003\n",
  "kolmogorov.csv": "n,distance,target,gap\n2,1.74,1.732,0.008\n4,1.733,1.732,0.001\n",
  "localization.csv":
    "measure_E,measure_F,norm,C\n0.25,0.25,0.11,1.12\n0.5,0.5,0.21,1.27\n1,1,0.39,1.64\n",
  "muntz.csv": "n,muntz_distance\n1,0.14\n2,0.056\n3,0.027\n4,0.014\n",
  "beurling_vmu.csv": "t,V_mu,log_term\n0.5,0.6,-0.41\n1,0.36,-0.51\n2,0.13,-0.41\n",
  "im_level_1.csv": "n,abs_coeff,bound\n1,0.02,0.5\n2,0.015,0.35\n3,0.003,0.29\n4,0.001,0.25\n",
  "bm_multiplier.csv": "x,log_m,bound\n-2,0.2,5.1\n0,0.5,4.6\n2,0.1,5.1\n",
  "bm_density.csv": "a,b,count,density\n1,2,1,1\n2,4,2,1\n4,8,4,1\n",
  "bm_envelope.csv":
    "x,y,u,laplacian\n-1,-1,0.5,0\n0,-1,0.8,0\n1,-1,0.5,0\n-1,0,-0.7,0\n0,0,0,0\n1,0,-0.7,0\n-1,1,0.5,0\n0,1,0.8,0\n1,1,0.5,0\n",
};

beforeAll(() => {
  dir = mkdtempSync(join(tmpdir(), "plots-"));
  for (const [name, text] of Object.entries(FIXTURES)) {
    writeFileSync(join(dir, name), text);
  }
});

function lineSpec(input: string, x: string, y: string | string[], out: string, extra = {}) {
  return { input: join(dir, input), kind: "line", x, y, output: join(dir, out), ...extra };
}

describe("csv reader", () => {
  it("parses headers and columns", () => {
    const t = readCsv(join(dir, "szego.csv"));
    expect(t.header).toEqual(["n", "distance", "target", "gap"]);
    expect(requireColumn(t, "distance", "szego.csv")).toHaveLength(2 + 1);
  });

  it("rejects a missing column with the available names", () => {
    const t = readCsv(join(dir, "szego.csv"));
    expect(() => requireColumn(t, "nope", "szego.csv")).toThrow(/missing column/);
  });

  it("rejects an empty csv", () => {
    const p = join(dir, "empty.csv");
    writeFileSync(p, "a,b\n");
    expect(() => readCsv(p)).toThrow(/empty data.*empty\.csv/);
  });
});

describe("spec validation", () => {
  it("norm-growth line plots default to log-x, envelopes to log-y", () => {
    const s1 = validateSpec(lineSpec("kernel_l1.csv", "N", "l1_norm", "a.svg"));
    expect(effectiveAxes(s1).logX).toBe(true);
    const s2 = validateSpec({
      input: join(dir, "im_level_1.csv"), kind: "envelope", x: "n",
      y: ["abs_coeff", "bound"], output: join(dir, "b.svg"),
    });
    expect(effectiveAxes(s2).logY).toBe(true);
  });

  it("rejects unknown kinds and bad dimensions", () => {
    expect(() => validateSpec({ kind: "pie", input: "x", x: "a", y: "b", output: "o" }))
      .toThrow(/kind/);
    expect(() =>
      validateSpec(lineSpec("szego.csv", "n", "distance", "o.svg", { width: 8 })),
    ).toThrow(/width/);
  });
});

describe("render", () => {
  it("renders every documented CSV kind without error", () => {
    const specs: Record<string, unknown>[] = [
      lineSpec("kernel_l1.csv", "N", "l1_norm", "fig_kernel_l1.svg"),
      lineSpec("kernel_fejer.csv", "index", ["re", "im"], "fig_kernel.svg"),
      lineSpec("wiener_inverse.csv", "index", "re", "fig_wiener.svg"),
      lineSpec("riesz_coeffs.csv", "frequency", "re", "fig_riesz.svg"),
      lineSpec("riesz_blocks.csv", "j", "block_mass", "fig_blocks.svg"),
      lineSpec("szego.csv", "n", ["distance", "target"], "fig_szego.svg"),
      lineSpec("kolmogorov.csv", "n", ["distance", "target"], "fig_kolm.svg"),
      lineSpec("localization.csv", "measure_E", ["norm", "C"], "fig_loc.svg"),
      lineSpec("muntz.csv", "n", "muntz_distance", "fig_muntz.svg", {
        axes: { logY: true },
      }),
      lineSpec("beurling_vmu.csv", "t", ["V_mu", "log_term"], "fig_beurling.svg"),
      {
        input: join(dir, "im_level_1.csv"), kind: "envelope", x: "n",
        y: ["abs_coeff", "bound"], output: join(dir, "fig_im.svg"),
        title: "coefficients vs majorant",
      },
      lineSpec("bm_multiplier.csv", "x", ["log_m", "bound"], "fig_bm_mult.svg"),
      lineSpec("bm_density.csv", "a", "density", "fig_density.svg"),
      {
        input: join(dir, "bm_envelope.csv"), kind: "heatmap", x: "x", y: "u",
        y2: "y", value: "u", output: join(dir, "fig_envelope.svg"),
        width: 400, height: 300,
      },
    ];
    for (const spec of specs) {
      const out = render(spec) as string;
      const svg = readFileSync(out, "utf-8");
      expect(svg.startsWith("<svg ")).toBe(true);
    }
  });

  it("produces images of the specified dimensions", () => {
    const out = render(
      lineSpec("szego.csv", "n", "distance", "fig_dims.svg", { width: 333, height: 222 }),
    ) as string;
    const svg = readFileSync(out, "utf-8");
    expect(svg).toContain('width="333" height="222"');
    expect(svg).toContain('viewBox="0 0 333 222"');
  });

  it("is deterministic (golden-manifest comparison)", () => {
    const spec = lineSpec("szego.csv", "n", ["distance", "target"], "fig_golden.svg");
    const h1 = createHash("sha256")
      .update(readFileSync(render(spec) as string))
      .digest("hex");
    const spec2 = lineSpec("szego.csv", "n", ["distance", "target"], "fig_golden2.svg");
    const h2 = createHash("sha256")
      .update(readFileSync(render(spec2) as string))
      .digest("hex");
    expect(h1).toBe(h2);
    // a content change must change the manifest hash
    writeFileSync(join(dir, "szego2.csv"),
      FIXTURES["szego.csv"].replace("1.87,", "1.99,"));
    const h3 = createHash("sha256")
      .update(readFileSync(render(
        lineSpec("szego2.csv", "n", ["distance", "target"], "fig_golden3.svg")) as string))
      .digest("hex");
    expect(h3).not.toBe(h1);
  });

  it("does not mutate its inputs", () => {
    const before = readFileSync(join(dir, "szego.csv"), "utf-8");
    render(lineSpec("szego.csv", "n", "distance", "fig_ro.svg"));
    expect(readFileSync(join(dir, "szego.csv"), "utf-8")).toBe(before);
  });

  it("fails on a missing file with the filename", () => {
    expect(() => render(lineSpec("missing.csv", "n", "distance", "x.svg")))
      .toThrow(/missing file.*missing\.csv/);
  });

  it("fails on a missing column", () => {
    expect(() => render(lineSpec("szego.csv", "n", "no_such", "x.svg")))
      .toThrow(/missing column/);
  });

  it("fails on empty data with the filename", () => {
    writeFileSync(join(dir, "empty2.csv"), "n,distance\n");
    expect(() => render(lineSpec("empty2.csv", "n", "distance", "x.svg")))
      .toThrow(/empty2\.csv/);
  });
});
