/**
 * Minimal deterministic SVG line charts built by string concatenation.
 *
 * No plotting library: panels are polylines over linear or log10 scales
 * with computed tick marks, a legend, and an optional horizontal guide
 * band.  Output depends only on the input curves, so re-rendering the
 * same data yields a byte-identical file.
 */

export interface Curve {
  label: string;
  x: number[];
  y: number[];
  dashed?: boolean;
}

export interface Band {
  from: number;
  to: number;
  label: string;
}

export interface ChartOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  logX: boolean;
  logY: boolean;
  band?: Band;
}

const WIDTH = 720;
const HEIGHT = 440;
const MARGIN = { top: 44, right: 24, bottom: 52, left: 72 };
const PLOT_W = WIDTH - MARGIN.left - MARGIN.right;
const PLOT_H = HEIGHT - MARGIN.top - MARGIN.bottom;

const PALETTE = ['#1f77b4', '#d62728', '#2ca02c', '#ff7f0e', '#9467bd', '#8c564b', '#17becf'];

function escapeXml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

/** Fixed-precision coordinate so float noise cannot change the output text. */
function coord(value: number): string {
  return value.toFixed(2);
}

function formatTick(value: number): string {
  if (value === 0) return '0';
  const magnitude = Math.abs(value);
  if (magnitude >= 1e5 || magnitude < 1e-3) {
    const exponent = Math.floor(Math.log10(magnitude));
    const mantissa = value / 10 ** exponent;
    const head = Number(mantissa.toPrecision(3));
    return head === 1 ? `1e${exponent}` : `${head}e${exponent}`;
  }
  return String(Number(value.toPrecision(4)));
}

interface Scale {
  (value: number): number;
  domain: [number, number];
  ticks: number[];
}

function linearTicks(lo: number, hi: number, count = 6): number[] {
  const span = hi - lo;
  if (span <= 0) return [lo];
  const rawStep = span / count;
  const power = 10 ** Math.floor(Math.log10(rawStep));
  const residual = rawStep / power;
  const step = power * (residual >= 5 ? 10 : residual >= 2 ? 5 : residual >= 1 ? 2 : 1);
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

function logTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (let e = Math.ceil(Math.log10(lo) - 1e-9); 10 ** e <= hi * (1 + 1e-9); e++) {
    if (10 ** e >= lo * (1 - 1e-9)) ticks.push(10 ** e);
  }
  if (ticks.length >= 2) return ticks;
  return [lo, hi];
}

function makeScale(values: number[], pixelSpan: number, log: boolean, pad: number): Scale {
  let pool = values.filter((v) => Number.isFinite(v));
  if (log) pool = pool.filter((v) => v > 0);
  if (pool.length === 0) pool = [1];
  let lo = Math.min(...pool);
  let hi = Math.max(...pool);
  if (log) {
    if (lo === hi) {
      lo /= 2;
      hi *= 2;
    }
    const scale = ((value: number) => {
      const clamped = Math.max(value, lo);
      return ((Math.log10(clamped) - Math.log10(lo)) / (Math.log10(hi) - Math.log10(lo))) * pixelSpan;
    }) as Scale;
    scale.domain = [lo, hi];
    scale.ticks = logTicks(lo, hi);
    return scale;
  }
  if (lo === hi) {
    lo -= 1;
    hi += 1;
  }
  const padding = (hi - lo) * pad;
  lo = lo >= 0 && lo - padding < 0 ? 0 : lo - padding;
  hi += padding;
  const scale = ((value: number) => ((value - lo) / (hi - lo)) * pixelSpan) as Scale;
  scale.domain = [lo, hi];
  scale.ticks = linearTicks(lo, hi);
  return scale;
}

export function renderChart(curves: Curve[], options: ChartOptions): string {
  const xs = curves.flatMap((c) => c.x);
  const ys = curves.flatMap((c) => c.y).concat(options.band ? [options.band.from, options.band.to] : []);
  const logY = options.logY && ys.some((v) => v > 0);
  const sx = makeScale(xs, PLOT_W, options.logX, 0.02);
  const sy = makeScale(ys, PLOT_H, logY, 0.06);
  const px = (v: number) => MARGIN.left + sx(v);
  const py = (v: number) => MARGIN.top + PLOT_H - sy(v);

  const parts: string[] = [];
  parts.push('<?xml version="1.0" encoding="UTF-8"?>');
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`,
  );
  parts.push('<rect width="100%" height="100%" fill="white"/>');
  parts.push(
    `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-size="15" fill="#1f2937">` +
      `${escapeXml(options.title)}</text>`,
  );

  // gridlines and ticks
  for (const tick of sx.ticks) {
    const x = coord(px(tick));
    parts.push(
      `<line x1="${x}" y1="${MARGIN.top}" x2="${x}" y2="${MARGIN.top + PLOT_H}" stroke="#e5e7eb" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${x}" y="${MARGIN.top + PLOT_H + 18}" text-anchor="middle" font-size="11" fill="#4b5563">` +
        `${formatTick(tick)}</text>`,
    );
  }
  for (const tick of sy.ticks) {
    const y = coord(py(tick));
    parts.push(
      `<line x1="${MARGIN.left}" y1="${y}" x2="${MARGIN.left + PLOT_W}" y2="${y}" stroke="#e5e7eb" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${MARGIN.left - 8}" y="${y}" text-anchor="end" dominant-baseline="middle" font-size="11" ` +
        `fill="#4b5563">${formatTick(tick)}</text>`,
    );
  }

  if (options.band) {
    const top = py(options.band.to);
    const bottom = py(options.band.from);
    parts.push(
      `<rect x="${MARGIN.left}" y="${coord(top)}" width="${PLOT_W}" height="${coord(bottom - top)}" ` +
        `fill="#fbbf24" fill-opacity="0.18"/>`,
    );
    const labelY = Math.min(top + 14, MARGIN.top + PLOT_H - 4);
    parts.push(
      `<text x="${MARGIN.left + PLOT_W - 6}" y="${coord(labelY)}" text-anchor="end" font-size="10" ` +
        `fill="#92400e">${escapeXml(options.band.label)}</text>`,
    );
  }

  // axes frame
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${PLOT_W}" height="${PLOT_H}" fill="none" ` +
      `stroke="#9ca3af" stroke-width="1"/>`,
  );

  curves.forEach((curve, index) => {
    const color = PALETTE[index % PALETTE.length];
    const points = curve.x.map((x, i) => `${coord(px(x))},${coord(py(curve.y[i]))}`).join(' ');
    const dash = curve.dashed ? ' stroke-dasharray="6 4"' : '';
    parts.push(
      `<polyline fill="none" stroke="${color}" stroke-width="1.5"${dash} points="${points}"/>`,
    );
  });

  // legend, top-left corner of the plot area
  curves.forEach((curve, index) => {
    const color = PALETTE[index % PALETTE.length];
    const y = MARGIN.top + 16 + index * 16;
    const dash = curve.dashed ? ' stroke-dasharray="6 4"' : '';
    parts.push(
      `<line x1="${MARGIN.left + 10}" y1="${y}" x2="${MARGIN.left + 34}" y2="${y}" stroke="${color}" ` +
        `stroke-width="1.5"${dash}/>`,
    );
    parts.push(
      `<text x="${MARGIN.left + 40}" y="${y + 4}" font-size="11" fill="#1f2937">${escapeXml(curve.label)}</text>`,
    );
  });

  parts.push(
    `<text x="${MARGIN.left + PLOT_W / 2}" y="${HEIGHT - 14}" text-anchor="middle" font-size="12" ` +
      `fill="#1f2937">${escapeXml(options.xLabel)}</text>`,
  );
  parts.push(
    `<text x="20" y="${MARGIN.top + PLOT_H / 2}" text-anchor="middle" font-size="12" fill="#1f2937" ` +
      `transform="rotate(-90 20 ${MARGIN.top + PLOT_H / 2})">${escapeXml(options.yLabel)}</text>`,
  );
  parts.push('</svg>');
  return parts.join('\n') + '\n';
}
