/** Minimal deterministic SVG chart scaffolding (no DOM, no randomness). */

export interface Margins {
  top: number;
  right: number;
  bottom: number;
  left: number;
}

export const WIDTH = 760;
export const HEIGHT = 480;
export const MARGINS: Margins = { top: 42, right: 24, bottom: 52, left: 72 };

export type Scale = (value: number) => number;

export interface Axis {
  scale: Scale;
  ticks: number[];
  format: (value: number) => string;
}

/** All coordinates round to 0.01 px so output bytes are reproducible. */
export function px(value: number): string {
  if (!Number.isFinite(value)) {
    throw new Error(`non-finite coordinate: ${value}`);
  }
  return value.toFixed(2);
}

function escapeText(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;");
}

export function linearScale(
  domain: [number, number],
  range: [number, number],
): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 === 0 ? 1 : d1 - d0;
  return (v) => r0 + ((v - d0) / span) * (r1 - r0);
}

export function logScale(
  domain: [number, number],
  range: [number, number],
): Scale {
  const [d0, d1] = domain;
  if (d0 <= 0 || d1 <= 0) {
    throw new Error(`log scale needs a positive domain, got [${d0}, ${d1}]`);
  }
  const inner = linearScale([Math.log10(d0), Math.log10(d1)], range);
  return (v) => inner(Math.log10(v));
}

export function linearTicks(lo: number, hi: number, count = 6): number[] {
  if (!(hi > lo)) {
    return [lo];
  }
  const rawStep = (hi - lo) / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const candidates = [1, 2, 5, 10].map((m) => m * mag);
  const step = candidates.find((s) => (hi - lo) / s <= count) ?? candidates[3]!;
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

export function decadeTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (
    let e = Math.ceil(Math.log10(lo) - 1e-9);
    e <= Math.floor(Math.log10(hi) + 1e-9);
    e += 1
  ) {
    ticks.push(Math.pow(10, e));
  }
  return ticks.length > 0 ? ticks : [lo, hi];
}

export function formatTick(value: number): string {
  if (value === 0) return "0";
  const abs = Math.abs(value);
  if (abs >= 1e4 || abs < 1e-3) {
    const e = Math.floor(Math.log10(abs));
    const mantissa = value / Math.pow(10, e);
    const m = Math.abs(mantissa - 1) < 1e-9 ? "" : `${mantissa.toPrecision(3)}x`;
    return `${m}1e${e}`;
  }
  return String(Number(value.toPrecision(6)));
}

export interface PolylineStyle {
  stroke: string;
  width: number;
  dash?: string;
}

export interface ChartSeries {
  label: string;
  points: Array<[number, number]>;
  style: PolylineStyle;
  markers?: boolean;
}

function polyline(points: Array<[number, number]>, style: PolylineStyle): string {
  const coords = points.map(([x, y]) => `${px(x)},${px(y)}`).join(" ");
  const dash = style.dash ? ` stroke-dasharray="${style.dash}"` : "";
  return (
    `<polyline fill="none" stroke="${style.stroke}" ` +
    `stroke-width="${style.width}"${dash} points="${coords}"/>`
  );
}

function markers(points: Array<[number, number]>, color: string): string {
  return points
    .map(([x, y]) => `<circle cx="${px(x)}" cy="${px(y)}" r="3" fill="${color}"/>`)
    .join("");
}

export interface ChartSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  x: Axis;
  y: Axis;
  series: ChartSeries[];
}

/** Axes, grid, legend, and series; returns the full SVG document. */
export function renderChart(spec: ChartSpec): string {
  const m = MARGINS;
  const plotLeft = m.left;
  const plotRight = WIDTH - m.right;
  const plotTop = m.top;
  const plotBottom = HEIGHT - m.bottom;
  const parts: string[] = [];

  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`,
  );
  parts.push(
    `<defs><clipPath id="plot-area"><rect x="${px(plotLeft)}" y="${px(plotTop)}" ` +
      `width="${px(plotRight - plotLeft)}" height="${px(plotBottom - plotTop)}"/>` +
      `</clipPath></defs>`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  parts.push(
    `<text x="${px(WIDTH / 2)}" y="24" text-anchor="middle" font-size="16">` +
      `${escapeText(spec.title)}</text>`,
  );

  for (const t of spec.x.ticks) {
    const x = spec.x.scale(t);
    parts.push(
      `<line x1="${px(x)}" y1="${px(plotTop)}" x2="${px(x)}" y2="${px(plotBottom)}" ` +
        `stroke="#dddddd" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${px(x)}" y="${px(plotBottom + 18)}" text-anchor="middle" ` +
        `font-size="11">${escapeText(spec.x.format(t))}</text>`,
    );
  }
  for (const t of spec.y.ticks) {
    const y = spec.y.scale(t);
    parts.push(
      `<line x1="${px(plotLeft)}" y1="${px(y)}" x2="${px(plotRight)}" y2="${px(y)}" ` +
        `stroke="#dddddd" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${px(plotLeft - 6)}" y="${px(y + 3.5)}" text-anchor="end" ` +
        `font-size="11">${escapeText(spec.y.format(t))}</text>`,
    );
  }

  parts.push(
    `<rect x="${px(plotLeft)}" y="${px(plotTop)}" width="${px(plotRight - plotLeft)}" ` +
      `height="${px(plotBottom - plotTop)}" fill="none" stroke="black" stroke-width="1"/>`,
  );
  parts.push(
    `<text x="${px((plotLeft + plotRight) / 2)}" y="${px(HEIGHT - 14)}" ` +
      `text-anchor="middle" font-size="13">${escapeText(spec.xLabel)}</text>`,
  );
  parts.push(
    `<text x="18" y="${px((plotTop + plotBottom) / 2)}" text-anchor="middle" ` +
      `font-size="13" transform="rotate(-90 18 ${px((plotTop + plotBottom) / 2)})">` +
      `${escapeText(spec.yLabel)}</text>`,
  );

  parts.push(`<g clip-path="url(#plot-area)">`);
  for (const s of spec.series) {
    if (s.points.length === 0) continue;
    parts.push(polyline(s.points, s.style));
    if (s.markers) {
      parts.push(markers(s.points, s.style.stroke));
    }
  }
  parts.push("</g>");

  spec.series.forEach((s, i) => {
    const y = plotTop + 14 + 16 * i;
    const x = plotLeft + 10;
    const dash = s.style.dash ? ` stroke-dasharray="${s.style.dash}"` : "";
    parts.push(
      `<line x1="${px(x)}" y1="${px(y - 4)}" x2="${px(x + 26)}" y2="${px(y - 4)}" ` +
        `stroke="${s.style.stroke}" stroke-width="${s.style.width}"${dash}/>`,
    );
    parts.push(
      `<text x="${px(x + 32)}" y="${px(y)}" font-size="11">${escapeText(s.label)}</text>`,
    );
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
