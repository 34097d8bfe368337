import {DatasetName, ModelName} from './models.js';

export const HEADER = 'dataset,model,snr_db,n_c,p_c,n_test,seed';

export interface Row {
  dataset: DatasetName;
  model: ModelName;
  snrDb: number;
  nc: number;
  pc: number;
  nTest: number;
  seed: number;
}

function key(r: Pick<Row, 'dataset' | 'model' | 'snrDb' | 'nc'>): string {
  return `${r.dataset}|${r.model}|${r.snrDb}|${r.nc}`;
}

function compare(a: Row, b: Row): number {
  return a.dataset.localeCompare(b.dataset) ||
      a.model.localeCompare(b.model) || a.snrDb - b.snrDb || a.nc - b.nc;
}

/** Merge freshly trained rows over existing ones (same cell: fresh
 * wins), then sort, so incremental runs build one deterministic table. */
export function mergeRows(existing: Row[], fresh: Row[]): Row[] {
  const byKey = new Map<string, Row>();
  for (const r of existing) {
    byKey.set(key(r), r);
  }
  for (const r of fresh) {
    byKey.set(key(r), r);
  }
  return [...byKey.values()].sort(compare);
}

export function formatCsv(rows: Row[]): string {
  const lines = [HEADER];
  for (const r of [...rows].sort(compare)) {
    lines.push(`${r.dataset},${r.model},${r.snrDb},${r.nc},${r.pc},` +
               `${r.nTest},${r.seed}`);
  }
  return lines.join('\n') + '\n';
}

/** Parse a previously exported table back; tolerant only of the exact
 * format formatCsv writes plus blank lines. */
export function parseCsv(text: string): Row[] {
  const lines = text.split(/\r?\n/).filter((l) => l.trim() !== '');
  if (lines.length === 0) {
    return [];
  }
  if (lines[0].trim() !== HEADER) {
    throw new Error(`unexpected header: ${lines[0]}`);
  }
  return lines.slice(1).map((line, i) => {
    const parts = line.split(',');
    if (parts.length !== 7) {
      throw new Error(`line ${i + 2}: expected 7 columns`);
    }
    const [dataset, model, snrDb, nc, pc, nTest, seed] = parts;
    const row: Row = {
      dataset: dataset as DatasetName,
      model: model as ModelName,
      snrDb: Number(snrDb),
      nc: Number(nc),
      pc: Number(pc),
      nTest: nTest === '' ? 0 : Number(nTest),
      seed: seed === '' ? 0 : Number(seed),
    };
    if (![row.snrDb, row.nc, row.pc].every(Number.isFinite)) {
      throw new Error(`line ${i + 2}: bad numeric field`);
    }
    return row;
  });
}
