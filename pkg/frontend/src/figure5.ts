import type { FigureDef } from "./style.js";
import { PALETTE } from "./style.js";

/**
 * Nearest-association mobility: handover rate vs BS density for three
 * altitude spreads (fig5a) and speed-penalized coverage (fig5c).
 */
export const FIGURES: FigureDef[] = [
  {
    id: "fig5a",
    title: "Handover rate vs BS density",
    xLabel: "BS density (km⁻²)",
    yLabel: "Handover rate (1/s)",
    series: {
      hbar0: { label: "altitude spread 0 m", color: PALETTE[0], marker: "circle" },
      hbar30: { label: "altitude spread 30 m", color: PALETTE[1], marker: "square" },
      hbar50: { label: "altitude spread 50 m", color: PALETTE[2], marker: "diamond" },
    },
  },
  {
    id: "fig5c",
    title: "Mobile coverage vs speed, nearest BS",
    xLabel: "Speed (km/h)",
    yLabel: "Coverage probability",
    yDomain: [0, 1],
    series: {
      "mobile-nearest": { label: "nearest BS, handover penalty", color: PALETTE[1], marker: "square" },
    },
  },
];
