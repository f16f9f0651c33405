/** Minimal string-template SVG assembly with stable number formatting. */

/** Format a coordinate; two decimals keeps output bytes reproducible. */
export function fmt(x: number): string {
  if (!Number.isFinite(x)) {
    throw new Error(`non-finite coordinate: ${x}`);
  }
  const s = x.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
}

/** Format an axis tick label: plain for moderate magnitudes, else 1e+k. */
export function fmtTick(x: number): string {
  if (x === 0) return "0";
  const ax = Math.abs(x);
  if (ax >= 1e-3 && ax < 1e4) {
    // round-trip through a short fixed representation to drop fp noise
    const s = Number(x.toPrecision(6));
    return String(s);
  }
  return x.toExponential(0).replace("e+", "e").replace("e-", "e-");
}

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export type Attrs = Record<string, string | number>;

function attrText(attrs: Attrs): string {
  const parts = Object.entries(attrs).map(
    ([key, value]) => ` ${key}="${typeof value === "number" ? fmt(value) : value}"`,
  );
  return parts.join("");
}

export function el(tag: string, attrs: Attrs, children: string[] = []): string {
  if (children.length === 0) {
    return `<${tag}${attrText(attrs)}/>`;
  }
  return `<${tag}${attrText(attrs)}>${children.join("")}</${tag}>`;
}

export function textEl(x: number, y: number, content: string, attrs: Attrs = {}): string {
  return (
    `<text x="${fmt(x)}" y="${fmt(y)}"${attrText(attrs)}>` +
    `${esc(content)}</text>`
  );
}

export function polyline(points: Array<[number, number]>, attrs: Attrs): string {
  const joined = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
  return el("polyline", { points: joined, fill: "none", ...attrs });
}

/**
 * Wrap body elements into a complete SVG document.
 *
 * With `deterministic` the metadata element is omitted, so re-rendering
 * identical data yields an identical byte stream.
 */
export function document(
  width: number,
  height: number,
  body: string[],
  deterministic: boolean,
): string {
  const head =
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" ` +
    `height="${height}" viewBox="0 0 ${width} ${height}" ` +
    `font-family="Helvetica, Arial, sans-serif">`;
  const meta = deterministic
    ? []
    : [`<metadata>generated ${new Date().toISOString()}</metadata>`];
  const background = el("rect", {
    x: 0, y: 0, width, height, fill: "#ffffff",
  });
  return [head, ...meta, background, ...body, "</svg>", ""].join("\n");
}

/** Interpolate a compact viridis-like ramp; t in [0, 1]. */
export function colormap(t: number): string {
  const anchors: Array<[number, number, number]> = [
    [68, 1, 84],
    [71, 44, 122],
    [59, 81, 139],
    [44, 113, 142],
    [33, 144, 141],
    [39, 173, 129],
    [92, 200, 99],
    [170, 220, 50],
    [253, 231, 37],
  ];
  const clamped = Math.min(1, Math.max(0, t));
  const pos = clamped * (anchors.length - 1);
  const lo = Math.min(anchors.length - 2, Math.floor(pos));
  const frac = pos - lo;
  const mix = (a: number, b: number) => Math.round(a + (b - a) * frac);
  const [r0, g0, b0] = anchors[lo];
  const [r1, g1, b1] = anchors[lo + 1];
  return `rgb(${mix(r0, r1)},${mix(g0, g1)},${mix(b0, b1)})`;
}
