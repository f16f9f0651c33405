/** Histogram binning; edges derive from data min/max and bin count only. */

import { DataError } from "./csv.js";

export function binEdges(min: number, max: number, bins: number): number[] {
  if (!Number.isInteger(bins) || bins < 1) {
    throw new DataError(`bin count must be a positive integer, got ${bins}`);
  }
  if (!Number.isFinite(min) || !Number.isFinite(max) || min > max) {
    throw new DataError(`bad bin range [${min}, ${max}]`);
  }
  // a single-valued sample still gets a unit-wide axis
  const lo = min === max ? min - 0.5 : min;
  const hi = min === max ? max + 0.5 : max;
  const edges: number[] = [];
  for (let i = 0; i <= bins; i++) {
    // ratio first: (hi - lo) * i can overflow for near-max doubles
    edges.push(lo + (hi - lo) * (i / bins));
  }
  edges[bins] = hi; // exact upper edge regardless of rounding
  return edges;
}

/**
 * Count values per bin. The last bin is closed on the right, so every
 * value inside [edges[0], edges[last]] lands in exactly one bin and the
 * counts sum to the number of such values.
 */
export function histogram(values: number[], edges: number[]): number[] {
  const bins = edges.length - 1;
  const counts = new Array<number>(bins).fill(0);
  const lo = edges[0];
  const hi = edges[bins];
  const width = (hi - lo) / bins;
  for (const value of values) {
    if (!(value >= lo && value <= hi)) continue;
    let i = Math.floor((value - lo) / width);
    if (i >= bins) i = bins - 1;
    // rounding in the division can misplace a value by one bin
    while (i > 0 && value < edges[i]) i--;
    while (i < bins - 1 && value >= edges[i + 1]) i++;
    counts[i] += 1;
  }
  return counts;
}
