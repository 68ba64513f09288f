/**
 * Parser for the data dialect emitted by the djcqsl CLI: comma-separated,
 * one header row, LF endings, '#'-prefixed metadata comment lines above the
 * header, no quoting (values are numbers and simple identifiers).
 */

export class CsvFormatError extends Error {}

export class MissingColumnError extends CsvFormatError {
  constructor(column: string, found: string[]) {
    super(`missing column '${column}'; found: ${found.join(", ")}`);
  }
}

export interface CsvTable {
  meta: Record<string, string>;
  columns: string[];
  rows: string[][];
}

export function parseCsv(text: string): CsvTable {
  const meta: Record<string, string> = {};
  let columns: string[] | null = null;
  const rows: string[][] = [];
  for (const rawLine of text.split("\n")) {
    const line = rawLine.endsWith("\r") ? rawLine.slice(0, -1) : rawLine;
    if (line.length === 0) {
      continue;
    }
    if (line.startsWith("#")) {
      const body = line.slice(1).trim();
      const sep = body.indexOf(":");
      if (sep > 0) {
        meta[body.slice(0, sep).trim()] = body.slice(sep + 1).trim();
      }
      continue;
    }
    const cells = line.split(",");
    if (columns === null) {
      columns = cells.map((c) => c.trim());
    } else {
      if (cells.length !== columns.length) {
        throw new CsvFormatError(
          `row has ${cells.length} cells, header has ${columns.length}: ${line}`,
        );
      }
      rows.push(cells);
    }
  }
  if (columns === null) {
    throw new CsvFormatError("no header row found");
  }
  if (rows.length === 0) {
    throw new CsvFormatError("no data rows (header-only file)");
  }
  return { meta, columns, rows };
}

export function columnIndex(table: CsvTable, name: string): number {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new MissingColumnError(name, table.columns);
  }
  return idx;
}

/** Numeric column; 'nan' cells become NaN (the writer spells them that way). */
export function numericColumn(table: CsvTable, name: string): number[] {
  const idx = columnIndex(table, name);
  return table.rows.map((row) => {
    const cell = row[idx];
    const value = Number(cell);
    if (Number.isNaN(value) && cell !== "nan" && cell !== "NaN") {
      throw new CsvFormatError(`non-numeric cell '${cell}' in column '${name}'`);
    }
    return value;
  });
}

export function stringColumn(table: CsvTable, name: string): string[] {
  const idx = columnIndex(table, name);
  return table.rows.map((row) => row[idx]);
}
