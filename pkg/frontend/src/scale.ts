/** Linear and log10 axis scales with tick generation. */

export interface Scale {
  map(value: number): number;
  ticks(): number[];
  domain: [number, number];
}

/** Widen a degenerate domain so a single-valued axis still renders. */
function padded(lo: number, hi: number, log: boolean): [number, number] {
  if (lo < hi) return [lo, hi];
  if (log) return [lo / 2, lo * 2];
  if (lo === 0) return [-1, 1];
  const pad = Math.abs(lo) / 2;
  return [lo - pad, lo + pad];
}

/** Round a step to the nearest 1-2-5 decade multiple at or above it. */
function niceStep(raw: number): number {
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const unit = raw / mag;
  if (unit <= 1) return mag;
  if (unit <= 2) return 2 * mag;
  if (unit <= 5) return 5 * mag;
  return 10 * mag;
}

export function linearScale(
  lo: number,
  hi: number,
  rangeLo: number,
  rangeHi: number,
  tickTarget = 6,
): Scale {
  const [dLo, dHi] = padded(lo, hi, false);
  const span = dHi - dLo;
  return {
    domain: [dLo, dHi],
    map(value: number): number {
      return rangeLo + ((value - dLo) / span) * (rangeHi - rangeLo);
    },
    ticks(): number[] {
      const step = niceStep(span / tickTarget);
      const first = Math.ceil(dLo / step) * step;
      const out: number[] = [];
      // steps counted by index to dodge accumulated rounding
      for (let i = 0; first + i * step <= dHi + step * 1e-9; i++) {
        out.push(Number((first + i * step).toPrecision(12)));
      }
      return out;
    },
  };
}

export function logScale(
  lo: number,
  hi: number,
  rangeLo: number,
  rangeHi: number,
): Scale {
  if (lo <= 0 || hi <= 0) {
    throw new Error(`log scale needs positive domain, got [${lo}, ${hi}]`);
  }
  const [dLo, dHi] = padded(lo, hi, true);
  const a = Math.log10(dLo);
  const b = Math.log10(dHi);
  return {
    domain: [dLo, dHi],
    map(value: number): number {
      return rangeLo + ((Math.log10(value) - a) / (b - a)) * (rangeHi - rangeLo);
    },
    ticks(): number[] {
      const out: number[] = [];
      for (let e = Math.ceil(a - 1e-9); e <= Math.floor(b + 1e-9); e++) {
        out.push(Math.pow(10, e));
      }
      // a sub-decade domain still deserves endpoint markers
      if (out.length < 2) return [dLo, dHi];
      return out;
    },
  };
}
