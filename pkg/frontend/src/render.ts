/**
 * Turn a panel spec into an SVG file.
 *
 * Reading, validation, curve extraction and drawing are sequenced here;
 * all failures surface as plain Error messages naming the offending
 * input, column or cell.
 */

import { mkdir, writeFile } from 'node:fs/promises';
import * as path from 'node:path';
import { PanelSpec, chartOptions, panelDefinition } from './panels.js';
import { readTable, requireColumns } from './schema.js';
import { renderChart } from './svg.js';

export async function renderPanel(spec: PanelSpec): Promise<string> {
  const definition = panelDefinition(spec.kind);
  if (spec.inputs.length < definition.minInputs) {
    throw new Error(
      `panel kind '${spec.kind}' needs at least ${definition.minInputs} input file(s), got ${spec.inputs.length}`,
    );
  }
  if (spec.inputs.length > definition.maxInputs) {
    throw new Error(
      `panel kind '${spec.kind}' accepts at most ${definition.maxInputs} input file(s), got ${spec.inputs.length}`,
    );
  }
  const tables = [];
  for (const input of spec.inputs) {
    const table = await readTable(input);
    requireColumns(table, definition.columns, spec.kind);
    tables.push(table);
  }
  return renderChart(definition.curves(tables), chartOptions(spec));
}

export async function writePanel(spec: PanelSpec, outPath: string): Promise<void> {
  const svg = await renderPanel(spec);
  await mkdir(path.dirname(path.resolve(outPath)), { recursive: true });
  await writeFile(outPath, svg, 'utf8');
}
