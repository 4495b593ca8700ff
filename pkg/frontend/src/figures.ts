/** The three figure builders, one per sweep CSV schema. */

import {
  expectColumns,
  numberColumn,
  parseCsv,
  stringColumn,
  type Table,
} from "./csv.js";
import {
  type Axis,
  type ChartSeries,
  decadeTicks,
  formatTick,
  HEIGHT,
  linearScale,
  linearTicks,
  logScale,
  MARGINS,
  renderChart,
  WIDTH,
} from "./svg.js";

export const POWER_COLUMNS = [
  "p_dbm",
  "n_per_side",
  "architecture",
  "scheme",
  "capacity_bits",
  "ref_slope1_bits",
  "ref_slope2_bits",
] as const;

export const GAINS_COLUMNS = [
  "n_per_side",
  "scheme",
  "g_array",
  "g_mux",
  "array_target",
  "mux_target",
  "bound_lower_array",
  "bound_upper_array",
  "bound_lower_mux",
  "bound_upper_mux",
] as const;

export const CAPACITY_COLUMNS = [
  "n_per_side",
  "p_dbm",
  "architecture",
  "scheme",
  "capacity_bits",
  "g_total",
  "gain_improvement_db",
  "capacity_improvement_bits",
] as const;

export type FigureKind = "a" | "b" | "c";

export const SCHEMAS: Record<FigureKind, readonly string[]> = {
  a: POWER_COLUMNS,
  b: GAINS_COLUMNS,
  c: CAPACITY_COLUMNS,
};

const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#17becf",
  "#7f7f7f",
];

const PLOT_X: [number, number] = [MARGINS.left, WIDTH - MARGINS.right];
const PLOT_Y: [number, number] = [HEIGHT - MARGINS.bottom, MARGINS.top];

// Architecture fixes the dash pattern, scheme the stroke width, so a
// rerun with the same data is visually (and byte-) identical.
const ARCH_DASH: Record<string, string | undefined> = {
  center: undefined,
  end: "7,4",
};

function span(values: number[], fallback: [number, number]): [number, number] {
  if (values.length === 0) return fallback;
  let lo = values[0]!;
  let hi = values[0]!;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (lo === hi) {
    return [lo - 0.5, hi + 0.5];
  }
  return [lo, hi];
}

function linearAxis(values: number[], fallback: [number, number],
                    range: [number, number]): Axis {
  const [lo, hi] = span(values, fallback);
  return {
    scale: linearScale([lo, hi], range),
    ticks: linearTicks(lo, hi),
    format: formatTick,
  };
}

function logAxis(values: number[], fallback: [number, number],
                 range: [number, number]): Axis {
  const positive = values.filter((v) => v > 0);
  const [lo, hi] = span(positive, fallback);
  return {
    scale: logScale([lo, hi], range),
    ticks: decadeTicks(lo, hi),
    format: formatTick,
  };
}

interface SeriesBucket {
  label: string;
  rows: number[];
}

function groupRows(keys: string[][]): SeriesBucket[] {
  const buckets = new Map<string, number[]>();
  keys[0]?.forEach((_, rowIdx) => {
    const label = keys.map((k) => k[rowIdx]).join(", ");
    const bucket = buckets.get(label);
    if (bucket) {
      bucket.push(rowIdx);
    } else {
      buckets.set(label, [rowIdx]);
    }
  });
  return [...buckets.entries()]
    .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0))
    .map(([label, rows]) => ({ label, rows }));
}

function sortedPoints(
  rows: number[],
  xs: number[],
  ys: number[],
  xAxis: Axis,
  yAxis: Axis,
): Array<[number, number]> {
  return rows
    .slice()
    .sort((i, j) => xs[i]! - xs[j]!)
    .map((i) => [xAxis.scale(xs[i]!), yAxis.scale(ys[i]!)] as [number, number]);
}

function renderPower(table: Table): string {
  const p = numberColumn(table, "p_dbm");
  const n = numberColumn(table, "n_per_side");
  const arch = stringColumn(table, "architecture");
  const cap = numberColumn(table, "capacity_bits");
  const ref1 = numberColumn(table, "ref_slope1_bits");
  const ref2 = numberColumn(table, "ref_slope2_bits");

  const x = linearAxis(p, [0, 1], PLOT_X);
  const y = linearAxis(cap, [0, 1], PLOT_Y);
  const series: ChartSeries[] = [];

  const buckets = groupRows([arch, n.map((v) => `N=${v}`)]);
  buckets.forEach((bucket, i) => {
    const archName = arch[bucket.rows[0]!]!;
    series.push({
      label: bucket.label,
      points: sortedPoints(bucket.rows, p, cap, x, y),
      style: {
        stroke: PALETTE[i % PALETTE.length]!,
        width: 1.8,
        dash: ARCH_DASH[archName],
      },
    });
  });

  // slope guides ride on the largest-N curve of each architecture
  const guides: Array<[string, number[], string]> = [
    ["end", ref1, "slope-1 guide"],
    ["center", ref2, "slope-2 guide"],
  ];
  for (const [archName, ref, label] of guides) {
    const nMax = Math.max(
      0,
      ...n.filter((_, i) => arch[i] === archName),
    );
    const rows = n
      .map((v, i) => i)
      .filter((i) => arch[i] === archName && n[i] === nMax);
    if (rows.length > 0) {
      series.push({
        label,
        points: sortedPoints(rows, p, ref, x, y),
        style: { stroke: "#555555", width: 1.2, dash: "2,3" },
      });
    }
  }

  return renderChart({
    title: "Capacity versus transmit power",
    xLabel: "transmit power (dBm)",
    yLabel: "capacity (bits per channel use)",
    x,
    y,
    series,
  });
}

function renderGains(table: Table): string {
  const n = numberColumn(table, "n_per_side");
  const x = logAxis(n, [1, 10], PLOT_X);
  const gainColumns = [
    "g_array",
    "g_mux",
    "array_target",
    "mux_target",
    "bound_lower_array",
    "bound_upper_array",
    "bound_lower_mux",
    "bound_upper_mux",
  ] as const;
  const values: Record<string, number[]> = {};
  for (const name of gainColumns) {
    values[name] = numberColumn(table, name);
  }
  const y = logAxis(
    gainColumns.flatMap((name) => values[name]!),
    [1, 10],
    PLOT_Y,
  );

  const rows = n.map((_, i) => i);
  const family = (color: string, sim: string, target: string,
                  lower: string, upper: string): ChartSeries[] => [
    {
      label: `${sim} (simulated)`,
      points: sortedPoints(rows, n, values[sim]!, x, y),
      style: { stroke: color, width: 1.2 },
      markers: true,
    },
    {
      label: `${target}`,
      points: sortedPoints(rows, n, values[target]!, x, y),
      style: { stroke: color, width: 2.2 },
    },
    {
      label: `${sim} bounds`,
      points: sortedPoints(rows, n, values[lower]!, x, y),
      style: { stroke: color, width: 1, dash: "5,3" },
    },
    {
      label: "",
      points: sortedPoints(rows, n, values[upper]!, x, y),
      style: { stroke: color, width: 1, dash: "5,3" },
    },
  ];

  const series = [
    ...family("#1f77b4", "g_array", "array_target",
              "bound_lower_array", "bound_upper_array"),
    ...family("#d62728", "g_mux", "mux_target",
              "bound_lower_mux", "bound_upper_mux"),
  ].filter((s) => s.label !== "" || s.points.length > 0);

  return renderChart({
    title: "Array and multiplexing gains versus element count",
    xLabel: "elements per side",
    yLabel: "gain (log scale)",
    x,
    y,
    series,
  });
}

function renderCapacity(table: Table): string {
  const n = numberColumn(table, "n_per_side");
  const p = numberColumn(table, "p_dbm");
  const arch = stringColumn(table, "architecture");
  const scheme = stringColumn(table, "scheme");
  const cap = numberColumn(table, "capacity_bits");

  const x = linearAxis(n, [0, 1], PLOT_X);
  const y = linearAxis(cap, [0, 1], PLOT_Y);
  const buckets = groupRows([
    arch,
    scheme,
    p.map((v) => `${v} dBm`),
  ]);
  const series: ChartSeries[] = buckets.map((bucket, i) => {
    const archName = arch[bucket.rows[0]!]!;
    return {
      label: bucket.label,
      points: sortedPoints(bucket.rows, n, cap, x, y),
      style: {
        stroke: PALETTE[i % PALETTE.length]!,
        width: 1.8,
        dash: ARCH_DASH[archName],
      },
    };
  });

  return renderChart({
    title: "Capacity versus element count",
    xLabel: "elements per side",
    yLabel: "capacity (bits per channel use)",
    x,
    y,
    series,
  });
}

const RENDERERS: Record<FigureKind, (table: Table) => string> = {
  a: renderPower,
  b: renderGains,
  c: renderCapacity,
};

/** Parse, validate against the figure's schema, and render to SVG text. */
export function renderFigure(kind: FigureKind, csvText: string): string {
  const table = expectColumns(parseCsv(csvText), SCHEMAS[kind]);
  return RENDERERS[kind](table);
}
