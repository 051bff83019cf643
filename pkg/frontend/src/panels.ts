/**
 * Panel kinds: named mappings from CSV tables to chart curves.
 *
 * Each kind declares which columns it needs and how rows become curves.
 * No computation happens here beyond picking columns and axis scaling;
 * every plotted number comes straight out of a CSV cell.
 */

import * as path from 'node:path';
import { Band, ChartOptions, Curve } from './svg.js';
import { BOUNDS_COLUMNS, SUMMARY_COLUMNS, TRACE_COLUMNS, Table, column } from './schema.js';

export type PanelKind =
  | 'trace-error'
  | 'trace-values'
  | 'trace-comparison'
  | 'summary-error'
  | 'gap-curve'
  | 'bound-sandwich';

export const PANEL_KINDS: PanelKind[] = [
  'trace-error',
  'trace-values',
  'trace-comparison',
  'summary-error',
  'gap-curve',
  'bound-sandwich',
];

export interface PanelSpec {
  inputs: string[];
  kind: PanelKind;
  title?: string;
  xLabel?: string;
  yLabel?: string;
  logX?: boolean;
  logY?: boolean;
}

interface PanelDefinition {
  columns: string[];
  minInputs: number;
  maxInputs: number;
  defaults: { title: string; xLabel: string; yLabel: string; logX: boolean; logY: boolean };
  band?: Band;
  curves(tables: Table[]): Curve[];
}

/** Short label for a curve taken from one input file. */
function stem(filePath: string): string {
  return path.basename(filePath).replace(/\.csv$/i, '');
}

function perInput(tables: Table[], xCol: string, yCol: string): Curve[] {
  return tables.map((table) => ({
    label: stem(table.path),
    x: column(table, xCol),
    y: column(table, yCol),
  }));
}

function namedColumns(table: Table, xCol: string, yCols: string[], dashedFrom: number): Curve[] {
  return yCols.map((name, index) => ({
    label: name,
    x: column(table, xCol),
    y: column(table, name),
    dashed: index >= dashedFrom,
  }));
}

const DEFINITIONS: Record<PanelKind, PanelDefinition> = {
  'trace-error': {
    columns: TRACE_COLUMNS,
    minInputs: 1,
    maxInputs: 6,
    defaults: { title: 'Per-step absolute error', xLabel: 't', yLabel: '|released - true|', logX: false, logY: false },
    curves: (tables) => perInput(tables, 't', 'abs_error'),
  },
  'trace-values': {
    columns: TRACE_COLUMNS,
    minInputs: 1,
    maxInputs: 6,
    defaults: { title: 'Released vs true values', xLabel: 't', yLabel: 'value', logX: false, logY: false },
    curves: (tables) => {
      const released = perInput(tables, 't', 'released');
      const reference: Curve = {
        label: 'true',
        x: column(tables[0], 't'),
        y: column(tables[0], 'true'),
        dashed: true,
      };
      return [...released, reference];
    },
  },
  'trace-comparison': {
    columns: TRACE_COLUMNS,
    minInputs: 2,
    maxInputs: 6,
    defaults: { title: 'Mechanism error comparison', xLabel: 't', yLabel: '|released - true|', logX: false, logY: true },
    curves: (tables) => perInput(tables, 't', 'abs_error'),
  },
  'summary-error': {
    columns: SUMMARY_COLUMNS,
    minInputs: 1,
    maxInputs: 1,
    defaults: { title: 'Error summary across trials', xLabel: 't', yLabel: 'absolute error', logX: false, logY: false },
    curves: (tables) =>
      namedColumns(tables[0], 't', ['mean_abs_error', 'max_abs_error', 'bound_exact', 'bound_analytic'], 2),
  },
  'gap-curve': {
    columns: BOUNDS_COLUMNS,
    minInputs: 1,
    maxInputs: 1,
    defaults: { title: 'Gap to the optimal-norm sandwich', xLabel: 'T', yLabel: 'gap', logX: true, logY: false },
    band: { from: 0, to: 0.02, label: 'upper-gap band' },
    curves: (tables) => namedColumns(tables[0], 'T', ['gap_upper', 'gap_lower'], 2),
  },
  'bound-sandwich': {
    columns: BOUNDS_COLUMNS,
    minInputs: 1,
    maxInputs: 1,
    defaults: { title: 'Norm-product bounds', xLabel: 'T', yLabel: 'norm product', logX: true, logY: false },
    curves: (tables) =>
      namedColumns(tables[0], 'T', ['mathias_lower', 'mathias_upper', 'ours_upper', 'gamma_hat'], 3),
  },
};

export function panelDefinition(kind: string): PanelDefinition {
  const definition = DEFINITIONS[kind as PanelKind];
  if (!definition) {
    throw new Error(`unknown panel kind '${kind}' (expected one of: ${PANEL_KINDS.join(', ')})`);
  }
  return definition;
}

export function chartOptions(spec: PanelSpec): ChartOptions {
  const definition = panelDefinition(spec.kind);
  return {
    title: spec.title ?? definition.defaults.title,
    xLabel: spec.xLabel ?? definition.defaults.xLabel,
    yLabel: spec.yLabel ?? definition.defaults.yLabel,
    logX: spec.logX ?? definition.defaults.logX,
    logY: spec.logY ?? definition.defaults.logY,
    band: definition.band,
  };
}
