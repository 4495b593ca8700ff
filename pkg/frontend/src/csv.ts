/** Strict reader for the sweep CSVs: exact header match or a loud error. */

export interface Table {
  columns: string[];
  rows: string[][];
}

export class SchemaError extends Error {
  constructor(expected: readonly string[], found: readonly string[]) {
    super(
      `column mismatch: expected "${expected.join(",")}", found "${found.join(",")}"`,
    );
    this.name = "SchemaError";
  }
}

/** The cells never contain quotes or embedded commas by upstream contract. */
export function parseCsv(text: string): Table {
  const lines = text
    .split(/\r?\n/)
    .filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new Error("empty CSV: no header line");
  }
  const [header, ...body] = lines;
  return {
    columns: header!.split(","),
    rows: body.map((line) => line.split(",")),
  };
}

export function expectColumns(table: Table, expected: readonly string[]): Table {
  const found = table.columns;
  if (
    found.length !== expected.length ||
    expected.some((name, i) => found[i] !== name)
  ) {
    throw new SchemaError(expected, found);
  }
  for (const row of table.rows) {
    if (row.length !== expected.length) {
      throw new Error(
        `ragged row: expected ${expected.length} cells, found ${row.length}`,
      );
    }
  }
  return table;
}

export function columnIndex(table: Table, name: string): number {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new Error(`no such column: ${name}`);
  }
  return idx;
}

export function numberColumn(table: Table, name: string): number[] {
  const idx = columnIndex(table, name);
  return table.rows.map((row) => {
    const value = Number(row[idx]);
    if (!Number.isFinite(value)) {
      throw new Error(`non-numeric cell in column ${name}: ${row[idx]}`);
    }
    return value;
  });
}

export function stringColumn(table: Table, name: string): string[] {
  const idx = columnIndex(table, name);
  return table.rows.map((row) => row[idx]!);
}
