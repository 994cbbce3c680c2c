import { describe, expect, it } from "vitest";

import type { ResultTable } from "../src/csv.js";
import { fmt, linearScale, niceTicks, renderFigure, tickLabel } from "../src/style.js";
import { FIGURES as FIG2 } from "../src/figure2.js";

describe("fmt", () => {
  it("trims trailing zeros", () => {
    expect(fmt(2)).toBe("2");
    expect(fmt(1.5)).toBe("1.5");
    expect(fmt(1.25)).toBe("1.25");
  });

  it("never emits negative zero", () => {
    expect(fmt(-0.0001)).toBe("0");
  });
});

describe("scales and ticks", () => {
  it("maps domain endpoints to range endpoints", () => {
    const s = linearScale(0, 10, 100, 200);
    expect(s(0)).toBe(100);
    expect(s(10)).toBe(200);
    expect(s(5)).toBe(150);
  });

  it("covers [0, 1] with a 0.2 step", () => {
    const ticks = niceTicks(0, 1);
    expect(ticks.map((t) => tickLabel(t, 0.2)))
      .toEqual(["0.0", "0.2", "0.4", "0.6", "0.8", "1.0"]);
  });

  it("stays inside the domain", () => {
    for (const [lo, hi] of [[-10, 10], [60, 300], [0.004, 0.04]] as const) {
      for (const t of niceTicks(lo, hi)) {
        expect(t).toBeGreaterThanOrEqual(lo - 1e-9 * (hi - lo));
        expect(t).toBeLessThanOrEqual(hi + 1e-9 * (hi - lo));
      }
    }
  });

  it("label precision follows the step", () => {
    expect(tickLabel(200, 50)).toBe("200");
    expect(tickLabel(-5, 5)).toBe("-5");
    expect(tickLabel(0.5, 0.5)).toBe("0.5");
  });
});

function table(name: string, rows: ResultTable["rows"]): ResultTable {
  return { name, path: `${name}.csv`, rows };
}

const FIG2A = FIG2[0];

describe("renderFigure", () => {
  it("rejects unknown series names", () => {
    const t = table("bogus", [
      { sweep: 0, analytic_ub: 0.5, analytic_lb: null, mc_value: null, mc_stderr: null },
    ]);
    expect(() => renderFigure(FIG2A, [t]))
      .toThrow(/no series named "bogus".*comp, nearest, gue/);
  });

  it("rejects a series given twice", () => {
    const t = table("comp", [
      { sweep: 0, analytic_ub: 0.5, analytic_lb: null, mc_value: null, mc_stderr: null },
    ]);
    expect(() => renderFigure(FIG2A, [t, t])).toThrow(/given twice/);
  });

  it("rejects tables with nothing to draw", () => {
    const t = table("comp", [
      { sweep: 0, analytic_ub: null, analytic_lb: null, mc_value: null, mc_stderr: null },
    ]);
    expect(() => renderFigure(FIG2A, [t])).toThrow(/nothing to draw/);
  });

  it("legend follows the figure definition order, not input order", () => {
    const rows = [
      { sweep: -5, analytic_ub: 0.6, analytic_lb: null, mc_value: 0.58, mc_stderr: 0.002 },
      { sweep: 0, analytic_ub: 0.13, analytic_lb: null, mc_value: 0.1, mc_stderr: 0.001 },
    ];
    const svg = renderFigure(FIG2A, [table("nearest", rows), table("comp", rows)]);
    const comp = svg.indexOf("cluster service (bounds)");
    const near = svg.indexOf("nearest BS");
    expect(comp).toBeGreaterThan(0);
    expect(near).toBeGreaterThan(comp);
  });

  it("draws error bars spanning two stderr each way", () => {
    const rows = [
      { sweep: 0, analytic_ub: null, analytic_lb: null, mc_value: 0.5, mc_stderr: 0.05 },
      { sweep: 1, analytic_ub: null, analytic_lb: null, mc_value: 0.6, mc_stderr: 0.05 },
    ];
    const svg = renderFigure(FIG2A, [table("comp", rows)]);
    // each point: vertical bar plus two caps, then the marker on top
    const bars = svg.match(/stroke-width="1\.2"/g) ?? [];
    expect(bars.length).toBe(6);
    expect((svg.match(/<circle /g) ?? []).length).toBe(3); // 2 points + legend
  });
});
