import type { FigureDef } from "./style.js";
import { PALETTE } from "./style.js";

/** Handover probability: BS-density sweep (fig3a) and cluster-radius sweep (fig3b). */
export const FIGURES: FigureDef[] = [
  {
    id: "fig3a",
    title: "Handover probability vs BS density",
    xLabel: "BS density (km⁻²)",
    yLabel: "Handover probability",
    series: {
      nearest: { label: "nearest BS", color: PALETTE[1], marker: "square" },
    },
  },
  {
    id: "fig3b",
    title: "Handover probability vs cluster radius",
    xLabel: "Cluster half-distance (m)",
    yLabel: "Handover probability",
    series: {
      comp: { label: "cluster service", color: PALETTE[0], marker: "circle" },
    },
  },
];
