export { DataError, Table, column, readTable, stringColumn } from "./csv.js";
export { binEdges, histogram } from "./hist.js";
export { Scale, linearScale, logScale } from "./scale.js";
export { colormap, document, fmt, fmtTick } from "./svg.js";
export {
  ClassHistogram,
  PANEL_IDS,
  PanelId,
  PanelSpec,
  SCHEMAS,
  classHistogram,
  renderPanel,
} from "./panels.js";
