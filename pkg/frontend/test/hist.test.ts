import { expect, test } from "vitest";

import { binEdges, histogram } from "../dist/index.js";

test("edges come from min, max, and bin count alone", () => {
  const edges = binEdges(2, 12, 5);
  expect(edges).toEqual([2, 4, 6, 8, 10, 12]);
});

test("upper edge is exact even with uneven spans", () => {
  const edges = binEdges(0.1, 0.7, 7);
  expect(edges[0]).toBe(0.1);
  expect(edges[7]).toBe(0.7);
  expect(edges).toHaveLength(8);
});

test("near-max-double ranges stay finite", () => {
  const edges = binEdges(38.7, 4.2e307, 60);
  expect(edges.every(Number.isFinite)).toBe(true);
  expect(edges[60]).toBe(4.2e307);
});

test("a single-valued sample gets a padded axis", () => {
  const edges = binEdges(3, 3, 4);
  expect(edges[0]).toBe(2.5);
  expect(edges[4]).toBe(3.5);
});

test("every in-range value lands in exactly one bin", () => {
  const values = [0, 0.1999, 0.2, 0.5, 0.99999, 1];
  const edges = binEdges(0, 1, 5);
  const counts = histogram(values, edges);
  expect(counts.reduce((a, b) => a + b, 0)).toBe(values.length);
  // the top edge is right-closed
  expect(counts[4]).toBe(2);
});

test("values outside the edge range are ignored", () => {
  const counts = histogram([-1, 0.5, 2], binEdges(0, 1, 2));
  expect(counts.reduce((a, b) => a + b, 0)).toBe(1);
});

test("bin count must be a positive integer", () => {
  expect(() => binEdges(0, 1, 0)).toThrow(/positive integer/);
  expect(() => binEdges(0, 1, 2.5)).toThrow(/positive integer/);
});

test("conservation holds on a dense random sample", () => {
  // deterministic LCG; no seeding surprises across runs
  let state = 12345;
  const next = () => {
    state = (state * 48271) % 2147483647;
    return state / 2147483647;
  };
  const values = Array.from({ length: 10_000 }, next);
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  for (const bins of [1, 7, 60, 313]) {
    const counts = histogram(values, binEdges(lo, hi, bins));
    expect(counts.reduce((a, b) => a + b, 0)).toBe(values.length);
  }
});
