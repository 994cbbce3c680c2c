import type { FigureDef } from "./style.js";
import { PALETTE } from "./style.js";

/** Static coverage: threshold sweep (fig2a) and cluster-radius sweep (fig2b). */
export const FIGURES: FigureDef[] = [
  {
    id: "fig2a",
    title: "Coverage vs SIR threshold",
    xLabel: "SIR threshold (dB)",
    yLabel: "Coverage probability",
    yDomain: [0, 1],
    series: {
      comp: { label: "cluster service (bounds)", color: PALETTE[0], marker: "circle" },
      nearest: { label: "nearest BS", color: PALETTE[1], marker: "square" },
      gue: { label: "ground user", color: PALETTE[2], marker: "diamond" },
    },
  },
  {
    id: "fig2b",
    title: "Coverage vs cluster radius",
    xLabel: "Cluster half-distance (m)",
    yLabel: "Coverage probability",
    yDomain: [0, 1],
    series: {
      comp: { label: "cluster service (bounds)", color: PALETTE[0], marker: "circle" },
      nearest: { label: "nearest BS", color: PALETTE[1], marker: "square" },
    },
  },
];
