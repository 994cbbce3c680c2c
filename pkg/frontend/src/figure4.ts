import type { FigureDef } from "./style.js";
import { PALETTE } from "./style.js";

/** Coverage against terminal altitude (fig4a). */
export const FIGURES: FigureDef[] = [
  {
    id: "fig4a",
    title: "Coverage vs terminal altitude",
    xLabel: "Terminal altitude (m)",
    yLabel: "Coverage probability",
    yDomain: [0, 1],
    series: {
      comp: { label: "cluster service (bounds)", color: PALETTE[0], marker: "circle" },
      nearest: { label: "nearest BS", color: PALETTE[1], marker: "square" },
    },
  },
];
