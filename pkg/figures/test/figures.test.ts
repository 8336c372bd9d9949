import { describe, expect, it } from "vitest";
import { mkdtempSync, readFileSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import Papa from "papaparse";

import {
  FIGURE_KINDS,
  FigureKind,
  HeatmapSpec,
  OracleSpec,
  ScatterSpec,
  TrajectorySpec,
  buildFigure,
  render,
} from "../src/figures.js";
import { SchemaError, loadCsv } from "../src/schema.js";

const DATA = join(__dirname, "..", "data");

const INPUTS: Record<FigureKind, string> = {
  trajectory_bands: join(DATA, "trajectory_delta.csv"),
  mechanism_heatmap: join(DATA, "mechanism_heatmap.csv"),
  balance_heatmap: join(DATA, "balance_heatmap.csv"),
  tradeoff_scatter: join(DATA, "tradeoff.csv"),
  oracle_panels: join(DATA, "oracle_comparison.csv"),
};

function rawRows(path: string): Record<string, string>[] {
  const parsed = Papa.parse<Record<string, string>>(
    readFileSync(path, "utf-8").trim(),
    { header: true, skipEmptyLines: true },
  );
  return parsed.data;
}

describe("figure smoke suite", () => {
  it("renders all five kinds from the bundled miniature results", () => {
    const out = mkdtempSync(join(tmpdir(), "figs-"));
    for (const kind of FIGURE_KINDS) {
      const spec = render({
        kind,
        input: INPUTS[kind],
        output: join(out, `${kind}.svg`),
      });
      expect(spec.kind).toBe(kind);
      const svg = readFileSync(join(out, `${kind}.svg`), "utf-8");
      expect(svg.startsWith("<svg")).toBe(true);
      expect(svg.trimEnd().endsWith("</svg>")).toBe(true);
    }
  });

  it("is deterministic: identical inputs give identical markup and series", () => {
    for (const kind of FIGURE_KINDS) {
      const a = buildFigure(kind, INPUTS[kind]);
      const b = buildFigure(kind, INPUTS[kind]);
      expect(a.svg).toBe(b.svg);
      expect(a.spec).toEqual(b.spec);
    }
  });
});

describe("trajectory bands", () => {
  it("plots exactly the median and IQR columns of the input CSV", () => {
    const { spec } = buildFigure("trajectory_bands", INPUTS.trajectory_bands);
    const panels = (spec as TrajectorySpec).panels;
    const rows = rawRows(INPUTS.trajectory_bands);
    expect(panels.length).toBeGreaterThan(0);
    for (const panel of panels) {
      for (const series of panel.series) {
        const subset = rows
          .filter((r) => r.metric === panel.metric && r.system === series.system)
          .sort((a, b) => Number(a.t) - Number(b.t));
        expect(series.t).toEqual(subset.map((r) => Number(r.t)));
        expect(series.median).toEqual(subset.map((r) => Number(r.median)));
        expect(series.q25).toEqual(subset.map((r) => Number(r.q25)));
        expect(series.q75).toEqual(subset.map((r) => Number(r.q75)));
      }
    }
  });

  it("renders the self-baseline delta as a flat zero line", () => {
    const out = mkdtempSync(join(tmpdir(), "figs-"));
    const path = join(out, "flat.csv");
    const lines = ["system,t,metric,median,q25,q75"];
    for (let t = 0; t <= 4; t += 1) {
      lines.push(`plurality,${t},D,0.0,0.0,0.0`);
    }
    writeFileSync(path, lines.join("\n"), "utf-8");
    const { spec } = buildFigure("trajectory_bands", path);
    const series = (spec as TrajectorySpec).panels[0].series[0];
    expect(series.system).toBe("plurality");
    expect(series.median).toEqual([0, 0, 0, 0, 0]);
    expect(series.q25).toEqual([0, 0, 0, 0, 0]);
    expect(series.q75).toEqual([0, 0, 0, 0, 0]);
  });
});

describe("heatmaps", () => {
  it("covers every system x mechanism pair in the fixture", () => {
    const { spec } = buildFigure("mechanism_heatmap", INPUTS.mechanism_heatmap);
    const heat = spec as HeatmapSpec;
    const rows = rawRows(INPUTS.mechanism_heatmap);
    expect(heat.rows.length).toBe(new Set(rows.map((r) => r.system)).size);
    expect(heat.columns.length).toBe(9); // 3 voter x 3 candidate mechanisms
    for (const row of rows) {
      const i = heat.rows.indexOf(row.system);
      const j = heat.columns.indexOf(row.mechanism);
      expect(heat.values[i][j]).toBe(Number(row.mean_delta_D));
    }
  });

  it("orders the benchmark systems first", () => {
    const { spec } = buildFigure("balance_heatmap", INPUTS.balance_heatmap);
    const heat = spec as HeatmapSpec;
    expect(heat.rows[0]).toBe("plurality");
    expect(heat.columns).toEqual(["50_50", "70_30", "original"]);
  });
});

describe("tradeoff scatter", () => {
  it("draws one point per system from the fixture", () => {
    const { spec } = buildFigure("tradeoff_scatter", INPUTS.tradeoff_scatter);
    const rows = rawRows(INPUTS.tradeoff_scatter);
    const points = (spec as ScatterSpec).points;
    expect(points.length).toBe(rows.length);
    for (const row of rows) {
      const point = points.find((p) => p.system === row.system)!;
      expect(point.x).toBe(Number(row.mean_delta_D));
      expect(point.y).toBe(Number(row.mean_delta_winner_center));
    }
  });

  it("draws eight points for an eight-system table", () => {
    const out = mkdtempSync(join(tmpdir(), "figs-"));
    const path = join(out, "eight.csv");
    const lines = ["system,mean_delta_D,mean_delta_winner_center,count"];
    for (let i = 0; i < 8; i += 1) {
      lines.push(`system_${i},${-0.01 * i},${0.005 * i},10`);
    }
    writeFileSync(path, lines.join("\n"), "utf-8");
    const { spec } = buildFigure("tradeoff_scatter", path);
    expect((spec as ScatterSpec).points.length).toBe(8);
  });
});

describe("oracle panels", () => {
  it("lays out three panels whose series equal the CSV columns", () => {
    const { spec } = buildFigure("oracle_panels", INPUTS.oracle_panels);
    const panels = (spec as OracleSpec).panels;
    const rows = rawRows(INPUTS.oracle_panels);
    expect(panels.map((p) => p.metric)).toEqual(["R", "D", "A"]);
    for (const panel of panels) {
      expect(panel.series.map((s) => s.oracle)).toEqual([
        "centrality",
        "depolarization",
      ]);
      for (const series of panel.series) {
        const subset = rows
          .filter((r) => r.oracle === series.oracle)
          .sort((a, b) => Number(a.t) - Number(b.t));
        expect(series.median).toEqual(
          subset.map((r) => Number(r[`${panel.metric}_median`])),
        );
        expect(series.q25).toEqual(
          subset.map((r) => Number(r[`${panel.metric}_q25`])),
        );
        expect(series.q75).toEqual(
          subset.map((r) => Number(r[`${panel.metric}_q75`])),
        );
      }
    }
  });
});

describe("schema validation", () => {
  it("names the missing columns on a schema mismatch", () => {
    expect(() =>
      loadCsv(INPUTS.tradeoff_scatter, ["system", "no_such_column"]),
    ).toThrowError(/no_such_column/);
    expect(() =>
      buildFigure("oracle_panels", INPUTS.tradeoff_scatter),
    ).toThrowError(SchemaError);
  });
});
