/**
 * Minimal SVG assembly: linear scales, line/band/marker primitives, and a
 * diverging color ramp anchored at zero. No rendering backend is involved,
 * so identical inputs always produce identical markup.
 */

export interface Scale {
  (value: number): number;
  domain: [number, number];
  range: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 === 0 ? 1 : d1 - d0;
  const scale = ((value: number) => r0 + ((value - d0) / span) * (r1 - r0)) as Scale;
  scale.domain = domain;
  scale.range = range;
  return scale;
}

export function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!Number.isFinite(lo)) return [0, 1];
  if (lo === hi) return [lo - 0.5, hi + 0.5];
  return [lo, hi];
}

const fmt = (v: number): string => (Math.round(v * 100) / 100).toString();

export function polyline(
  xs: number[],
  ys: number[],
  stroke: string,
  width = 1.5,
): string {
  const pts = xs.map((x, i) => `${fmt(x)},${fmt(ys[i])}`).join(" ");
  return `<polyline points="${pts}" fill="none" stroke="${stroke}" stroke-width="${width}"/>`;
}

/** Shaded band between a lower and upper series (interquartile ranges). */
export function band(
  xs: number[],
  lower: number[],
  upper: number[],
  fill: string,
  opacity = 0.25,
): string {
  const forward = xs.map((x, i) => `${fmt(x)},${fmt(upper[i])}`);
  const backward = xs
    .map((x, i) => `${fmt(x)},${fmt(lower[i])}`)
    .reverse();
  return `<polygon points="${forward.concat(backward).join(" ")}" fill="${fill}" fill-opacity="${opacity}" stroke="none"/>`;
}

export function rect(
  x: number,
  y: number,
  w: number,
  h: number,
  fill: string,
  stroke = "#ffffff",
): string {
  return `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" fill="${fill}" stroke="${stroke}"/>`;
}

export function circle(x: number, y: number, r: number, fill: string): string {
  return `<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${r}" fill="${fill}"/>`;
}

export function text(
  x: number,
  y: number,
  content: string,
  size = 10,
  anchor: "start" | "middle" | "end" = "start",
): string {
  const safe = content
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;");
  return `<text x="${fmt(x)}" y="${fmt(y)}" font-size="${size}" font-family="sans-serif" text-anchor="${anchor}">${safe}</text>`;
}

/** Diverging blue-white-red ramp centered at zero (blue = negative). */
export function divergingColor(value: number, maxAbs: number): string {
  const span = maxAbs === 0 ? 1 : maxAbs;
  const t = Math.max(-1, Math.min(1, value / span));
  const channel = Math.round(255 * (1 - Math.abs(t)));
  if (t < 0) {
    return `rgb(${channel},${channel},255)`;
  }
  return `rgb(255,${channel},${channel})`;
}

const PALETTE = [
  "#1f77b4",
  "#ff7f0e",
  "#2ca02c",
  "#d62728",
  "#9467bd",
  "#8c564b",
  "#e377c2",
  "#7f7f7f",
];

export function seriesColor(index: number): string {
  return PALETTE[index % PALETTE.length];
}

export function svgDocument(width: number, height: number, body: string[]): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
    `<rect x="0" y="0" width="${width}" height="${height}" fill="#ffffff"/>`,
    ...body,
    "</svg>",
  ].join("\n");
}

/** Plain rectangular frame with min/max tick labels on both axes. */
export function frame(
  x: number,
  y: number,
  w: number,
  h: number,
  xDomain: [number, number],
  yDomain: [number, number],
  xLabel: string,
  yLabel: string,
): string {
  return [
    `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" fill="none" stroke="#444444"/>`,
    text(x, y + h + 12, xDomain[0].toPrecision(3), 8),
    text(x + w, y + h + 12, xDomain[1].toPrecision(3), 8, "end"),
    text(x - 4, y + h, yDomain[0].toPrecision(3), 8, "end"),
    text(x - 4, y + 8, yDomain[1].toPrecision(3), 8, "end"),
    text(x + w / 2, y + h + 24, xLabel, 10, "middle"),
    text(x + 4, y - 6, yLabel, 10),
  ].join("\n");
}
