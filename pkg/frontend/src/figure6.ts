import type { FigureDef } from "./style.js";
import { PALETTE } from "./style.js";

/**
 * Cluster-association mobility: handover rate vs cluster radius (fig6a)
 * and speed-penalized coverage (fig6c).
 */
export const FIGURES: FigureDef[] = [
  {
    id: "fig6a",
    title: "Cluster handover rate vs cluster radius",
    xLabel: "Cluster half-distance (m)",
    yLabel: "Handover rate (1/s)",
    series: {
      comp: { label: "cluster service", color: PALETTE[0], marker: "circle" },
    },
  },
  {
    id: "fig6c",
    title: "Mobile coverage vs speed, cluster service",
    xLabel: "Speed (km/h)",
    yLabel: "Coverage probability",
    yDomain: [0, 1],
    series: {
      "mobile-comp": { label: "cluster service, handover penalty", color: PALETTE[0], marker: "circle" },
    },
  },
];
