/**
 * CSV reading and schema checks for the benchmark files.
 *
 * The benchmark harness writes three file layouts, all with a `# key=value`
 * comment preamble followed by a pinned header row:
 *
 *   trace:   t,true,released,abs_error,bound_exact,bound_analytic
 *   summary: t,mean_abs_error,max_abs_error,bound_exact,bound_analytic
 *   bounds:  T,ours_upper,gamma_hat,mathias_lower,mathias_upper,gap_upper,gap_lower
 *
 * Every cell is numeric ("nan" is legal in bounds tables below T = 2).
 * Validation failures always name the offending column or cell.
 */
import { readFile } from 'fs/promises';
import Papa from 'papaparse';

export type Row = Record<string, number>;

export interface Table {
  path: string;
  columns: string[];
  rows: Row[];
}

export const TRACE_COLUMNS = ['t', 'true', 'released', 'abs_error', 'bound_exact', 'bound_analytic'];
export const SUMMARY_COLUMNS = ['t', 'mean_abs_error', 'max_abs_error', 'bound_exact', 'bound_analytic'];
export const BOUNDS_COLUMNS = ['T', 'ours_upper', 'gamma_hat', 'mathias_lower', 'mathias_upper', 'gap_upper', 'gap_lower'];

function parseCell(raw: string | undefined, column: string, rowIndex: number, path: string): number {
  if (raw === undefined || raw.trim() === '') {
    throw new Error(`${path}: missing value in column '${column}' at data row ${rowIndex + 1}`);
  }
  const value = Number(raw);
  if (Number.isNaN(value) && raw.trim().toLowerCase() !== 'nan') {
    throw new Error(`${path}: non-numeric value '${raw}' in column '${column}' at data row ${rowIndex + 1}`);
  }
  return value;
}

export async function readTable(path: string): Promise<Table> {
  let text: string;
  try {
    text = await readFile(path, 'utf8');
  } catch (err) {
    throw new Error(`cannot read ${path}: ${(err as NodeJS.ErrnoException).message}`);
  }
  const body = text
    .split('\n')
    .filter((line) => !line.startsWith('#'))
    .join('\n')
    .trim();
  if (body === '') {
    throw new Error(`${path}: no header row found`);
  }
  const parsed = Papa.parse<Record<string, string>>(body, { header: true, skipEmptyLines: true });
  // short rows fall through to the cell check so the message names the column
  const fatal = parsed.errors.filter((e) => e.code !== 'TooFewFields');
  if (fatal.length > 0) {
    throw new Error(`${path}: malformed CSV (${fatal[0].message})`);
  }
  const columns = parsed.meta.fields ?? [];
  if (columns.length === 0) {
    throw new Error(`${path}: no header row found`);
  }
  const rows = parsed.data.map((raw, i) => {
    const row: Row = {};
    for (const column of columns) {
      row[column] = parseCell(raw[column], column, i, path);
    }
    return row;
  });
  if (rows.length === 0) {
    throw new Error(`${path}: no data rows`);
  }
  return { path, columns, rows };
}

/** Assert the table carries every column the panel kind reads. */
export function requireColumns(table: Table, required: string[], kind: string): void {
  for (const column of required) {
    if (!table.columns.includes(column)) {
      throw new Error(
        `panel kind '${kind}' requires column '${column}', which ${table.path} lacks ` +
          `(its columns: ${table.columns.join(', ')})`,
      );
    }
  }
}

export function column(table: Table, name: string): number[] {
  return table.rows.map((row) => row[name]);
}
