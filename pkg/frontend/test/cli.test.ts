import { mkdtemp, readFile } from 'node:fs/promises';
import { tmpdir } from 'node:os';
import * as path from 'node:path';
import { fileURLToPath } from 'node:url';
import { afterEach, describe, expect, it, vi } from 'vitest';
import { parseArgs, runCli } from '../src/cli.js';

const fixture = (name: string) => fileURLToPath(new URL(`./fixtures/${name}`, import.meta.url));

afterEach(() => {
  vi.restoreAllMocks();
});

describe('parseArgs', () => {
  it('collects repeated --in flags in order', () => {
    const parsed = parseArgs(['--in', 'a.csv', '--in', 'b.csv', '--kind', 'trace-error', '--out', 'x.svg']);
    expect(parsed.inputs).toEqual(['a.csv', 'b.csv']);
    expect(parsed.kind).toBe('trace-error');
    expect(parsed.out).toBe('x.svg');
  });

  it('rejects a missing --kind', () => {
    expect(() => parseArgs(['--in', 'a.csv', '--out', 'x.svg'])).toThrow(/--kind is required/);
  });

  it('rejects an unknown kind with the list of valid ones', () => {
    expect(() => parseArgs(['--in', 'a.csv', '--kind', 'pie', '--out', 'x.svg'])).toThrow(
      /unknown panel kind 'pie' \(expected one of: trace-error/,
    );
  });

  it('rejects a flag without its value', () => {
    expect(() => parseArgs(['--in', '--kind', 'trace-error', '--out', 'x.svg'])).toThrow(/--in expects a value/);
  });
});

describe('runCli', () => {
  it('writes an SVG file and exits 0', async () => {
    vi.spyOn(console, 'log').mockImplementation(() => {});
    const dir = await mkdtemp(path.join(tmpdir(), 'cli-'));
    const out = path.join(dir, 'figures', 'error.svg');
    const code = await runCli(['--in', fixture('count/trace_000.csv'), '--kind', 'trace-error', '--out', out]);
    expect(code).toBe(0);
    const svg = await readFile(out, 'utf8');
    expect(svg.startsWith('<?xml')).toBe(true);
    expect(svg).toContain('</svg>');
  });

  it('exits 2 with usage on bad arguments', async () => {
    const errors: string[] = [];
    vi.spyOn(console, 'error').mockImplementation((msg: string) => {
      errors.push(msg);
    });
    const code = await runCli(['--kind', 'trace-error']);
    expect(code).toBe(2);
    expect(errors.join('\n')).toContain('--in is required');
  });

  it('exits 1 with a clear message when an input is missing', async () => {
    const errors: string[] = [];
    vi.spyOn(console, 'error').mockImplementation((msg: string) => {
      errors.push(msg);
    });
    const dir = await mkdtemp(path.join(tmpdir(), 'cli-'));
    const code = await runCli([
      '--in', '/no/such/trace.csv',
      '--kind', 'trace-error',
      '--out', path.join(dir, 'x.svg'),
    ]);
    expect(code).toBe(1);
    expect(errors.join('\n')).toContain('cannot read /no/such/trace.csv');
  });

  it('reports a schema mismatch through the CLI surface', async () => {
    const errors: string[] = [];
    vi.spyOn(console, 'error').mockImplementation((msg: string) => {
      errors.push(msg);
    });
    const dir = await mkdtemp(path.join(tmpdir(), 'cli-'));
    const code = await runCli([
      '--in', fixture('bounds/bounds.csv'),
      '--kind', 'summary-error',
      '--out', path.join(dir, 'x.svg'),
    ]);
    expect(code).toBe(1);
    expect(errors.join('\n')).toMatch(/requires column/);
  });
});
