import {describe, expect, it} from 'vitest';

import {formatCsv, HEADER, mergeRows, parseCsv, Row} from '../src/table.js';

const row = (overrides: Partial<Row>): Row => ({
  dataset: 'MNIST',
  model: 'CNN',
  snrDb: 5,
  nc: 4,
  pc: 0.912345,
  nTest: 1600,
  seed: 42,
  ...overrides,
});

describe('formatCsv', () => {
  it('writes the shared header and sorted rows', () => {
    const text = formatCsv([
      row({nc: 8, pc: 0.95}),
      row({dataset: 'CIFAR10', nc: 1, pc: 0.3}),
      row({snrDb: 0, nc: 1, pc: 0.5}),
      row({nc: 1, pc: 0.6}),
    ]);
    const lines = text.trimEnd().split('\n');
    expect(lines[0]).toBe(HEADER);
    expect(lines[1]).toBe('CIFAR10,CNN,5,1,0.3,1600,42');
    expect(lines[2]).toBe('MNIST,CNN,0,1,0.5,1600,42');
    expect(lines[3]).toBe('MNIST,CNN,5,1,0.6,1600,42');
    expect(lines[4]).toBe('MNIST,CNN,5,8,0.95,1600,42');
    expect(text.endsWith('\n')).toBe(true);
  });

  it('round-trips through parseCsv', () => {
    const rows = [row({nc: 2}), row({nc: 16, pc: 0.987})];
    expect(parseCsv(formatCsv(rows))).toEqual(rows);
  });
});

describe('mergeRows', () => {
  it('replaces retrained cells and keeps the rest', () => {
    const existing = [row({nc: 1, pc: 0.4}), row({nc: 2, pc: 0.6})];
    const fresh = [row({nc: 2, pc: 0.65}), row({nc: 4, pc: 0.8})];
    const merged = mergeRows(existing, fresh);
    expect(merged.map((r) => [r.nc, r.pc])).toEqual([
      [1, 0.4], [2, 0.65], [4, 0.8]
    ]);
  });
});

describe('parseCsv', () => {
  it('rejects foreign headers', () => {
    expect(() => parseCsv('a,b,c\n1,2,3\n')).toThrow(/header/);
  });

  it('rejects malformed rows', () => {
    expect(() => parseCsv(`${HEADER}\nMNIST,CNN,5,4\n`)).toThrow(/columns/);
    expect(() => parseCsv(`${HEADER}\nMNIST,CNN,5,four,0.9,100,1\n`))
        .toThrow(/numeric/);
  });

  it('accepts an empty file as no rows', () => {
    expect(parseCsv('')).toEqual([]);
  });
});
