export {
  columnIndex,
  expectColumns,
  numberColumn,
  parseCsv,
  SchemaError,
  stringColumn,
  type Table,
} from "./csv.js";
export {
  CAPACITY_COLUMNS,
  GAINS_COLUMNS,
  POWER_COLUMNS,
  renderFigure,
  SCHEMAS,
  type FigureKind,
} from "./figures.js";
export { main } from "./cli.js";
