/** The seven figure panels and their CSV schemas. */

import { existsSync, readFileSync } from "node:fs";

import { DataError, Table, column, readTable, stringColumn } from "./csv.js";
import { binEdges, histogram } from "./hist.js";
import { Scale, linearScale, logScale } from "./scale.js";
import { colormap, document, el, fmtTick, polyline, textEl } from "./svg.js";

export type PanelId = "2a" | "2b" | "2c" | "3a" | "3b" | "3c" | "3d";

export const PANEL_IDS: PanelId[] = ["2a", "2b", "2c", "3a", "3b", "3c", "3d"];

export interface PanelSpec {
  panel: PanelId;
  inputs: string[];
  output: string;
  bins: number;
  deterministic: boolean;
}

export const SCHEMAS = {
  t1_sweep: [
    "gd_density_nm2", "gamma_bulk_s1", "gamma_surface_s1", "gamma_gd_s1",
    "t1_seconds",
  ],
  sensitivity_map: [
    "diameter_nm", "standoff_nm", "tau_opt_s", "eta_density",
    "min_molecules", "min_rna_copies",
  ],
  sensitivity_dist: [
    "sensor_index", "diameter_nm", "gd_density_nm2", "standoff_nm",
    "nv_offset_nm", "min_molecules", "detectable_flag",
  ],
  ensemble_hist: [
    "sample_index", "class", "group_size", "noisy_flag", "pl_value",
  ],
  fnr_curve: [
    "rna_copies", "group_size", "threshold", "fnr", "fpr",
    "fnr_worst", "fpr_worst", "fnr_best", "fpr_best", "balanced_accuracy",
  ],
} as const;

const WIDTH = 640;
const HEIGHT = 480;

interface PlotRect {
  left: number;
  right: number;
  top: number;
  bottom: number;
}

const RECT: PlotRect = { left: 72, right: WIDTH - 28, top: 46, bottom: HEIGHT - 58 };

function axes(
  rect: PlotRect,
  x: Scale,
  y: Scale,
  xLabel: string,
  yLabel: string,
  title: string,
  xTickLabel: (t: number) => string = fmtTick,
): string[] {
  const parts: string[] = [];
  parts.push(el("rect", {
    x: rect.left, y: rect.top,
    width: rect.right - rect.left, height: rect.bottom - rect.top,
    fill: "none", stroke: "#333333", "stroke-width": 1,
  }));
  for (const t of x.ticks()) {
    const px = x.map(t);
    if (px < rect.left - 0.01 || px > rect.right + 0.01) continue;
    parts.push(el("line", {
      x1: px, y1: rect.bottom, x2: px, y2: rect.bottom + 5,
      stroke: "#333333", "stroke-width": 1,
    }));
    parts.push(textEl(px, rect.bottom + 18, xTickLabel(t), {
      "text-anchor": "middle", "font-size": 11,
    }));
  }
  for (const t of y.ticks()) {
    const py = y.map(t);
    if (py > rect.bottom + 0.01 || py < rect.top - 0.01) continue;
    parts.push(el("line", {
      x1: rect.left - 5, y1: py, x2: rect.left, y2: py,
      stroke: "#333333", "stroke-width": 1,
    }));
    parts.push(textEl(rect.left - 8, py + 4, fmtTick(t), {
      "text-anchor": "end", "font-size": 11,
    }));
  }
  const cx = (rect.left + rect.right) / 2;
  const cy = (rect.top + rect.bottom) / 2;
  parts.push(textEl(cx, HEIGHT - 14, xLabel, {
    "text-anchor": "middle", "font-size": 13,
  }));
  parts.push(
    `<text x="20" y="${cy.toFixed(2)}" text-anchor="middle" font-size="13" ` +
    `transform="rotate(-90 20 ${cy.toFixed(2)})">${yLabel}</text>`,
  );
  parts.push(textEl(cx, 26, title, {
    "text-anchor": "middle", "font-size": 15, "font-weight": "bold",
  }));
  return parts;
}

function bars(
  edges: number[],
  counts: number[],
  x: Scale,
  y: Scale,
  floor: number,
  fill: string,
  opacity: number,
): string[] {
  const parts: string[] = [];
  for (let i = 0; i < counts.length; i++) {
    if (counts[i] === 0) continue;
    const x0 = x.map(edges[i]);
    const x1 = x.map(edges[i + 1]);
    const yTop = y.map(counts[i]);
    parts.push(el("rect", {
      x: x0, y: yTop, width: x1 - x0, height: floor - yTop,
      fill, "fill-opacity": opacity, stroke: fill, "stroke-width": 0.5,
    }));
  }
  return parts;
}

function markers(points: Array<[number, number]>, fill: string): string[] {
  return points.map(([px, py]) =>
    el("circle", { cx: px, cy: py, r: 2.6, fill }));
}

function uniformColumn(table: Table, name: string): number {
  const values = column(table, name);
  for (const v of values) {
    if (v !== values[0]) {
      throw new DataError(
        `${table.file}: column "${name}" must be uniform for this panel`,
      );
    }
  }
  return values[0];
}

function render2a(table: Table): string[] {
  const density = column(table, "gd_density_nm2");
  const t1 = column(table, "t1_seconds");
  const x = linearScale(Math.min(...density), Math.max(...density), RECT.left, RECT.right);
  const y = logScale(Math.min(...t1), Math.max(...t1), RECT.bottom, RECT.top);
  const pts = density.map((d, i) => [x.map(d), y.map(t1[i])] as [number, number]);
  return [
    ...axes(RECT, x, y, "Gd surface density (nm^-2)", "T1 (s)",
            "Relaxation time vs Gd surface density"),
    polyline(pts, { stroke: "#1f77b4", "stroke-width": 2 }),
    ...markers(pts, "#1f77b4"),
  ];
}

function render2b(table: Table): string[] {
  const rect: PlotRect = { ...RECT, right: WIDTH - 110 };
  const dCol = column(table, "diameter_nm");
  const lCol = column(table, "standoff_nm");
  const vCol = column(table, "min_molecules");
  const ds = [...new Set(dCol)].sort((a, b) => a - b);
  const ls = [...new Set(lCol)].sort((a, b) => a - b);
  if (ds.length * ls.length !== table.rows.length) {
    throw new DataError(
      `${table.file}: rows do not form a complete (diameter, standoff) grid`,
    );
  }
  const finite = vCol.filter(Number.isFinite);
  if (finite.length === 0 || Math.min(...finite) <= 0) {
    throw new DataError(`${table.file}: column "min_molecules": needs positive values`);
  }
  const vLo = Math.log10(Math.min(...finite));
  const vHi = Math.log10(Math.max(...finite));
  const span = vHi > vLo ? vHi - vLo : 1;

  const cw = (rect.right - rect.left) / ds.length;
  const ch = (rect.bottom - rect.top) / ls.length;
  const cells: string[] = [];
  for (let r = 0; r < table.rows.length; r++) {
    const i = ds.indexOf(dCol[r]);
    const j = ls.indexOf(lCol[r]);
    const t = Number.isFinite(vCol[r])
      ? (Math.log10(vCol[r]) - vLo) / span
      : 1;
    cells.push(el("rect", {
      x: rect.left + i * cw,
      y: rect.bottom - (j + 1) * ch,
      width: cw + 0.2, height: ch + 0.2,
      fill: colormap(t),
    }));
  }

  // tick labels at a spread of cell centers; the grid is index-mapped
  const labelled: string[] = [];
  const every = Math.max(1, Math.ceil(ds.length / 6));
  for (let i = 0; i < ds.length; i += every) {
    const px = rect.left + (i + 0.5) * cw;
    labelled.push(el("line", {
      x1: px, y1: rect.bottom, x2: px, y2: rect.bottom + 5,
      stroke: "#333333", "stroke-width": 1,
    }));
    labelled.push(textEl(px, rect.bottom + 18, fmtTick(ds[i]), {
      "text-anchor": "middle", "font-size": 11,
    }));
  }
  const everyL = Math.max(1, Math.ceil(ls.length / 6));
  for (let j = 0; j < ls.length; j += everyL) {
    const py = rect.bottom - (j + 0.5) * ch;
    labelled.push(el("line", {
      x1: rect.left - 5, y1: py, x2: rect.left, y2: py,
      stroke: "#333333", "stroke-width": 1,
    }));
    labelled.push(textEl(rect.left - 8, py + 4, fmtTick(ls[j]), {
      "text-anchor": "end", "font-size": 11,
    }));
  }

  // colorbar: 64 strips, decade labels on the log10 value scale
  const barLeft = WIDTH - 86;
  const barWidth = 16;
  const strips: string[] = [];
  const steps = 64;
  for (let s = 0; s < steps; s++) {
    const y0 = rect.bottom - ((s + 1) * (rect.bottom - rect.top)) / steps;
    strips.push(el("rect", {
      x: barLeft, y: y0, width: barWidth,
      height: (rect.bottom - rect.top) / steps + 0.2,
      fill: colormap((s + 0.5) / steps),
    }));
  }
  const cScale = logScale(Math.pow(10, vLo), Math.pow(10, vHi), rect.bottom, rect.top);
  for (const t of cScale.ticks()) {
    const py = cScale.map(t);
    if (py > rect.bottom + 0.01 || py < rect.top - 0.01) continue;
    strips.push(el("line", {
      x1: barLeft + barWidth, y1: py, x2: barLeft + barWidth + 4, y2: py,
      stroke: "#333333", "stroke-width": 1,
    }));
    strips.push(textEl(barLeft + barWidth + 7, py + 4, fmtTick(t), {
      "font-size": 10,
    }));
  }
  strips.push(el("rect", {
    x: barLeft, y: rect.top, width: barWidth, height: rect.bottom - rect.top,
    fill: "none", stroke: "#333333", "stroke-width": 1,
  }));
  strips.push(textEl(barLeft + barWidth / 2, rect.top - 8, "molecules", {
    "text-anchor": "middle", "font-size": 11,
  }));

  const cx = (rect.left + rect.right) / 2;
  const cy = (rect.top + rect.bottom) / 2;
  return [
    ...cells,
    el("rect", {
      x: rect.left, y: rect.top,
      width: rect.right - rect.left, height: rect.bottom - rect.top,
      fill: "none", stroke: "#333333", "stroke-width": 1,
    }),
    ...labelled,
    ...strips,
    textEl(cx, HEIGHT - 14, "diameter (nm)", { "text-anchor": "middle", "font-size": 13 }),
    `<text x="20" y="${cy.toFixed(2)}" text-anchor="middle" font-size="13" ` +
    `transform="rotate(-90 20 ${cy.toFixed(2)})">standoff (nm)</text>`,
    textEl(cx, 26, "Minimum detectable molecules", {
      "text-anchor": "middle", "font-size": 15, "font-weight": "bold",
    }),
  ];
}

function render2c(table: Table, bins: number): string[] {
  const flags = column(table, "detectable_flag");
  const all = column(table, "min_molecules");
  const values: number[] = [];
  let excluded = 0;
  for (let i = 0; i < all.length; i++) {
    if (flags[i] === 1 && Number.isFinite(all[i])) {
      if (all[i] <= 0) {
        throw new DataError(
          `${table.file}: column "min_molecules": needs positive values`,
        );
      }
      values.push(all[i]);
    } else {
      excluded++;
    }
  }
  if (values.length === 0) {
    throw new DataError(`${table.file}: no detectable sensors to bin`);
  }
  // detection limits span decades, so bin in log10 space; edges still
  // derive from data min/max and the bin count only
  const logs = values.map(Math.log10);
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of logs) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  const edges = binEdges(lo, hi, bins);
  const counts = histogram(logs, edges);
  const x = linearScale(edges[0], edges[edges.length - 1], RECT.left, RECT.right);
  const y = linearScale(0, Math.max(...counts), RECT.bottom, RECT.top, 5);

  // decade ticks, thinned to at most seven labels
  const first = Math.ceil(x.domain[0] - 1e-9);
  const last = Math.floor(x.domain[1] + 1e-9);
  const step = Math.max(1, Math.ceil((last - first + 1) / 7));
  const decades: number[] = [];
  for (let k = first; k <= last; k += step) decades.push(k);
  const xAxis: Scale = {
    domain: x.domain,
    map: x.map,
    ticks: () => (decades.length >= 2 ? decades : [x.domain[0], x.domain[1]]),
  };
  const label = (k: number) =>
    Number.isInteger(k) ? `1e${k}` : fmtTick(Math.pow(10, k));

  const parts = [
    ...axes(RECT, xAxis, y, "minimum detectable molecules", "sensors",
            "Per-sensor detection limit distribution", label),
    ...bars(edges, counts, x, y, RECT.bottom, "#4878cf", 0.8),
  ];
  if (excluded > 0) {
    parts.push(textEl(RECT.right - 6, RECT.top + 16,
      `${excluded} non-detectable sensors excluded`, {
        "text-anchor": "end", "font-size": 11, fill: "#555555",
      }));
  }
  return parts;
}

export interface ClassHistogram {
  edges: number[];
  negCounts: number[];
  posCounts: number[];
  negTotal: number;
  posTotal: number;
  groupSize: number;
}

/**
 * Shared-edge per-class binning of a two-class PL table. The edges span
 * the pooled min/max, so every row of either class lands in a bin and
 * each count vector sums to its class's row count.
 */
export function classHistogram(table: Table, bins: number): ClassHistogram {
  const classes = stringColumn(table, "class");
  const values = column(table, "pl_value");
  const neg: number[] = [];
  const pos: number[] = [];
  for (let i = 0; i < classes.length; i++) {
    if (classes[i] === "neg") neg.push(values[i]);
    else if (classes[i] === "pos") pos.push(values[i]);
    else {
      throw new DataError(
        `${table.file}: column "class": expected "neg" or "pos", ` +
          `found "${classes[i]}"`,
      );
    }
  }
  if (neg.length === 0 || pos.length === 0) {
    throw new DataError(`${table.file}: needs rows from both classes`);
  }
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  const edges = binEdges(lo, hi, bins);
  return {
    edges,
    negCounts: histogram(neg, edges),
    posCounts: histogram(pos, edges),
    negTotal: neg.length,
    posTotal: pos.length,
    groupSize: uniformColumn(table, "group_size"),
  };
}

function render3ab(table: Table, threshold: number | null, bins: number): string[] {
  const { edges, negCounts, posCounts, groupSize } = classHistogram(table, bins);
  const peak = Math.max(...negCounts, ...posCounts);
  const x = linearScale(edges[0], edges[edges.length - 1], RECT.left, RECT.right);
  const y = linearScale(0, peak, RECT.bottom, RECT.top, 5);
  const parts = [
    ...axes(RECT, x, y, "group-mean PL", "groups",
            `Group-mean PL by class (k = ${fmtTick(groupSize)})`),
    ...bars(edges, negCounts, x, y, RECT.bottom, "#4878cf", 0.55),
    ...bars(edges, posCounts, x, y, RECT.bottom, "#d65f5f", 0.55),
  ];
  if (threshold !== null) {
    const px = x.map(Math.min(Math.max(threshold, x.domain[0]), x.domain[1]));
    parts.push(el("line", {
      x1: px, y1: RECT.top, x2: px, y2: RECT.bottom,
      stroke: "#222222", "stroke-width": 1.5, "stroke-dasharray": "6 3",
    }));
    parts.push(textEl(px + 4, RECT.top + 14, "threshold", { "font-size": 11 }));
  }
  const lx = RECT.right - 150;
  parts.push(el("rect", {
    x: lx, y: RECT.bottom - 48, width: 11, height: 11,
    fill: "#4878cf", "fill-opacity": 0.55,
  }));
  parts.push(textEl(lx + 16, RECT.bottom - 38, "virus absent", { "font-size": 11 }));
  parts.push(el("rect", {
    x: lx, y: RECT.bottom - 30, width: 11, height: 11,
    fill: "#d65f5f", "fill-opacity": 0.55,
  }));
  parts.push(textEl(lx + 16, RECT.bottom - 20, "virus present", { "font-size": 11 }));
  return parts;
}

interface RateStyle {
  column: string;
  stroke: string;
  width: number;
  dash?: string;
  label: string;
}

// solid for the worst case, dashed for the best, heavy for noiseless
const RATE_STYLES: RateStyle[] = [
  { column: "_worst", stroke: "#d62728", width: 1.6, label: "worst case" },
  { column: "", stroke: "#333333", width: 2.4, label: "noiseless" },
  { column: "_best", stroke: "#2ca02c", width: 1.6, dash: "6 3", label: "best case" },
];

function rateLines(
  table: Table,
  base: "fnr" | "fpr",
  copies: number[],
  x: Scale,
  y: Scale,
): string[] {
  const parts: string[] = [];
  for (const style of RATE_STYLES) {
    const values = column(table, base + style.column);
    const pts = copies.map(
      (c, i) => [x.map(c), y.map(values[i])] as [number, number],
    );
    if (pts.length > 1) {
      parts.push(polyline(pts, {
        stroke: style.stroke,
        "stroke-width": style.width,
        ...(style.dash ? { "stroke-dasharray": style.dash } : {}),
      }));
    }
    parts.push(...markers(pts, style.stroke));
  }
  return parts;
}

function render3cd(table: Table): string[] {
  const copies = column(table, "rna_copies");
  const k = uniformColumn(table, "group_size");
  const x = logScale(Math.min(...copies), Math.max(...copies), RECT.left, RECT.right);
  const y = linearScale(0, 1, RECT.bottom, RECT.top, 5);
  const parts = [
    ...axes(RECT, x, y, "RNA copies", "FNR",
            `False-negative rate vs RNA copies (k = ${fmtTick(k)})`),
    ...rateLines(table, "fnr", copies, x, y),
  ];

  // FPR inset, top right, sharing the x domain
  const inset: PlotRect = {
    left: RECT.left + 0.58 * (RECT.right - RECT.left),
    right: RECT.right - 12,
    top: RECT.top + 14,
    bottom: RECT.top + 0.42 * (RECT.bottom - RECT.top),
  };
  const ix = logScale(x.domain[0], x.domain[1], inset.left, inset.right);
  const iy = linearScale(0, 1, inset.bottom, inset.top, 2);
  parts.push(el("rect", {
    x: inset.left, y: inset.top,
    width: inset.right - inset.left, height: inset.bottom - inset.top,
    fill: "#ffffff", stroke: "#999999", "stroke-width": 0.8,
  }));
  parts.push(...rateLines(table, "fpr", copies, ix, iy));
  for (const t of iy.ticks()) {
    parts.push(textEl(inset.left - 4, iy.map(t) + 3, fmtTick(t), {
      "text-anchor": "end", "font-size": 8,
    }));
  }
  parts.push(textEl(inset.left + 4, inset.top + 11, "FPR", { "font-size": 10 }));

  let ly = RECT.bottom - 58;
  for (const style of RATE_STYLES) {
    parts.push(el("line", {
      x1: RECT.left + 12, y1: ly, x2: RECT.left + 44, y2: ly,
      stroke: style.stroke, "stroke-width": style.width,
      ...(style.dash ? { "stroke-dasharray": style.dash } : {}),
    }));
    parts.push(textEl(RECT.left + 50, ly + 4, style.label, { "font-size": 11 }));
    ly += 18;
  }
  return parts;
}

function readThresholdReport(file: string): number {
  let parsed: unknown;
  try {
    parsed = JSON.parse(readFileSync(file, "utf-8"));
  } catch {
    throw new DataError(`${file}: not readable as JSON`);
  }
  const threshold = (parsed as Record<string, unknown>)?.threshold;
  if (typeof threshold !== "number" || !Number.isFinite(threshold)) {
    throw new DataError(`${file}: missing finite "threshold" field`);
  }
  return threshold;
}

/**
 * Threshold source for the two-class histograms, in order: an explicit
 * second input (report sidecar JSON, or an fnr_curve CSV whose first-row
 * threshold is used), else a `<name>_report.json` next to the histogram
 * CSV, else none (the line is omitted).
 */
function resolveThreshold(inputs: string[]): number | null {
  if (inputs.length > 1) {
    const source = inputs[1];
    if (source.endsWith(".json")) {
      return readThresholdReport(source);
    }
    const curve = readTable(source, [...SCHEMAS.fnr_curve]);
    return column(curve, "threshold")[0];
  }
  const sidecar = inputs[0].replace(/\.csv$/, "_report.json");
  if (sidecar !== inputs[0] && existsSync(sidecar)) {
    return readThresholdReport(sidecar);
  }
  return null;
}

function requireInputs(spec: PanelSpec, min: number, max: number): void {
  if (spec.inputs.length < min || spec.inputs.length > max) {
    const want = min === max ? `${min}` : `${min} or ${max}`;
    throw new DataError(
      `panel ${spec.panel} expects ${want} input file(s), got ${spec.inputs.length}`,
    );
  }
}

/** Render one panel to SVG text; the caller writes it to spec.output. */
export function renderPanel(spec: PanelSpec): string {
  let body: string[];
  switch (spec.panel) {
    case "2a":
      requireInputs(spec, 1, 1);
      body = render2a(readTable(spec.inputs[0], [...SCHEMAS.t1_sweep]));
      break;
    case "2b":
      requireInputs(spec, 1, 1);
      body = render2b(readTable(spec.inputs[0], [...SCHEMAS.sensitivity_map]));
      break;
    case "2c":
      requireInputs(spec, 1, 1);
      body = render2c(
        readTable(spec.inputs[0], [...SCHEMAS.sensitivity_dist]), spec.bins,
      );
      break;
    case "3a":
    case "3b":
      requireInputs(spec, 1, 2);
      body = render3ab(
        readTable(spec.inputs[0], [...SCHEMAS.ensemble_hist], ["class"]),
        resolveThreshold(spec.inputs),
        spec.bins,
      );
      break;
    case "3c":
    case "3d":
      requireInputs(spec, 1, 1);
      body = render3cd(readTable(spec.inputs[0], [...SCHEMAS.fnr_curve]));
      break;
    default:
      throw new DataError(`unknown panel id "${spec.panel}"`);
  }
  return document(WIDTH, HEIGHT, body, spec.deterministic);
}
