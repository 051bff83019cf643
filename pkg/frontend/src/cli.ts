/**
 * Command line entry point: render one panel from CSV inputs to SVG.
 *
 * Usage:
 *   node dist/cli.js --in trace_000.csv [--in trace_001.csv ...] \
 *     --kind trace-error --out figures/error.svg \
 *     [--title T] [--x-label X] [--y-label Y] [--log-x] [--log-y]
 */

import { pathToFileURL } from 'node:url';
import { PANEL_KINDS, PanelKind, PanelSpec } from './panels.js';
import { writePanel } from './render.js';

const USAGE = `usage: render --in FILE [--in FILE ...] --kind KIND --out FILE
             [--title TEXT] [--x-label TEXT] [--y-label TEXT] [--log-x] [--log-y]

panel kinds: ${PANEL_KINDS.join(', ')}`;

export function parseArgs(argv: string[]): PanelSpec & { out: string } {
  const inputs: string[] = [];
  let kind: string | undefined;
  let out: string | undefined;
  let title: string | undefined;
  let xLabel: string | undefined;
  let yLabel: string | undefined;
  let logX: boolean | undefined;
  let logY: boolean | undefined;

  const takeValue = (flag: string, index: number): string => {
    const value = argv[index + 1];
    if (value === undefined || value.startsWith('--')) {
      throw new Error(`${flag} expects a value\n${USAGE}`);
    }
    return value;
  };

  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    switch (arg) {
      case '--in':
        inputs.push(takeValue(arg, i));
        i++;
        break;
      case '--kind':
        kind = takeValue(arg, i);
        i++;
        break;
      case '--out':
        out = takeValue(arg, i);
        i++;
        break;
      case '--title':
        title = takeValue(arg, i);
        i++;
        break;
      case '--x-label':
        xLabel = takeValue(arg, i);
        i++;
        break;
      case '--y-label':
        yLabel = takeValue(arg, i);
        i++;
        break;
      case '--log-x':
        logX = true;
        break;
      case '--log-y':
        logY = true;
        break;
      case '--help':
      case '-h':
        throw new Error(USAGE);
      default:
        throw new Error(`unrecognized argument '${arg}'\n${USAGE}`);
    }
  }

  if (inputs.length === 0) throw new Error(`--in is required\n${USAGE}`);
  if (!kind) throw new Error(`--kind is required\n${USAGE}`);
  if (!out) throw new Error(`--out is required\n${USAGE}`);
  if (!PANEL_KINDS.includes(kind as PanelKind)) {
    throw new Error(`unknown panel kind '${kind}' (expected one of: ${PANEL_KINDS.join(', ')})`);
  }
  return { inputs, kind: kind as PanelKind, out, title, xLabel, yLabel, logX, logY };
}

export async function runCli(argv: string[]): Promise<number> {
  let parsed;
  try {
    parsed = parseArgs(argv);
  } catch (error) {
    console.error((error as Error).message);
    return 2;
  }
  const { out, ...spec } = parsed;
  try {
    await writePanel(spec, out);
  } catch (error) {
    console.error((error as Error).message);
    return 1;
  }
  console.log(`wrote ${out}`);
  return 0;
}

if (process.argv[1] !== undefined && import.meta.url === pathToFileURL(process.argv[1]).href) {
  runCli(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
