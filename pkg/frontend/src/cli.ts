import {existsSync, mkdirSync, readFileSync, writeFileSync} from 'node:fs';
import {dirname} from 'node:path';
import yargs from 'yargs';
import {hideBin} from 'yargs/helpers';

import {noiseSigma} from './channel.js';
import {DatasetName, ModelName} from './models.js';
import {formatCsv, mergeRows, parseCsv, Row} from './table.js';
import {DEFAULTS, initBackend, runGrid, TrainSpec} from './train.js';

function parseGrid(raw: string, name: string, integer: boolean): number[] {
  const values = raw.split(',').map((s) => Number(s.trim()));
  if (values.length === 0 || values.some((v) => !Number.isFinite(v))) {
    throw new Error(`bad ${name} grid: ${raw}`);
  }
  if (integer && values.some((v) => !Number.isInteger(v) || v < 1)) {
    throw new Error(`${name} grid needs positive integers: ${raw}`);
  }
  return values;
}

function exportRows(outPath: string, fresh: Row[], spec: TrainSpec,
                    backend: string): number {
  const existing =
      existsSync(outPath) ? parseCsv(readFileSync(outPath, 'utf-8')) : [];
  const merged = mergeRows(existing, fresh);
  mkdirSync(dirname(outPath), {recursive: true});
  writeFileSync(outPath, formatCsv(merged));
  const metaPath = outPath.replace(/\.csv$/, '') + '.meta.json';
  const meta = {
    power_normalization: 'per sample, unit average power per dimension',
    noise_sigma_by_snr_db: Object.fromEntries(
        spec.snrGridDb.map((s) => [String(s), noiseSigma(s)])),
    channel_active_at_eval: true,
    epochs: spec.epochs,
    batch_size: spec.batchSize,
    optimizer: 'adam',
    loss: 'categoricalCrossentropy',
    base_seed: spec.seed,
    train_cap_per_digit: spec.trainCap,
    test_per_digit: spec.testPerDigit,
    backend,
    updated: new Date().toISOString(),
  };
  const old = existsSync(metaPath) ?
      JSON.parse(readFileSync(metaPath, 'utf-8')) :
      {runs: []};
  old.runs = [...(old.runs ?? []),
              {dataset: spec.dataset, model: spec.model, ...meta}];
  writeFileSync(metaPath, JSON.stringify(old, null, 2) + '\n');
  return merged.length;
}

export async function main(argv: string[]): Promise<number> {
  let failed = false;
  const parser =
      yargs(argv)
          .scriptName('trainer')
          .command(
              'train', 'train the grid and export the accuracy table',
              (y) => y.option('dataset', {
                        type: 'string',
                        choices: ['MNIST', 'CIFAR10'] as const,
                        demandOption: true,
                      })
                         .option('model', {
                           type: 'string',
                           choices: ['FNN', 'CNN'] as const,
                           demandOption: true,
                         })
                         .option('nc-grid', {
                           type: 'string',
                           default: DEFAULTS.ncGrid.join(','),
                           describe: 'comma-separated codeword lengths',
                         })
                         .option('snr-grid', {
                           type: 'string',
                           default: DEFAULTS.snrGridDb.join(','),
                           describe: 'comma-separated SNRs in dB',
                         })
                         .option('out', {
                           type: 'string',
                           default: 'out/accuracy.csv',
                         })
                         .option('epochs',
                                 {type: 'number', default: DEFAULTS.epochs})
                         .option('batch-size', {
                           type: 'number',
                           default: DEFAULTS.batchSize,
                         })
                         .option('seed',
                                 {type: 'number', default: DEFAULTS.seed})
                         .option('train-cap', {
                           type: 'number',
                           default: DEFAULTS.trainCap,
                           describe: 'max training samples per digit',
                         })
                         .option('test-per-digit', {
                           type: 'number',
                           default: DEFAULTS.testPerDigit,
                         })
                         .option('backend', {
                           type: 'string',
                           default: 'wasm',
                           choices: ['wasm', 'cpu'] as const,
                         }),
              async (args) => {
                const spec: TrainSpec = {
                  dataset: args.dataset as DatasetName,
                  model: args.model as ModelName,
                  ncGrid: parseGrid(args['nc-grid'], 'n_c', true),
                  snrGridDb: parseGrid(args['snr-grid'], 'snr', false),
                  epochs: args.epochs,
                  batchSize: args['batch-size'],
                  seed: args.seed,
                  trainCap: args['train-cap'],
                  testPerDigit: args['test-per-digit'],
                };
                const backend = await initBackend(args.backend);
                const rows =
                    await runGrid(spec, (line) => console.log(line));
                const total = exportRows(args.out, rows, spec, backend);
                console.log(`wrote ${args.out} (${total} rows)`);
              })
          .demandCommand(1)
          .strict()
          .fail((msg, err) => {
            console.error(`error: ${msg ?? err?.message}`);
            failed = true;
          });
  await parser.parseAsync();
  return failed ? 2 : 0;
}

const invokedDirectly =
    process.argv[1] !== undefined &&
    import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  main(hideBin(process.argv))
      .then((code) => {
        process.exitCode = code;
      })
      .catch((err) => {
        console.error(`error: ${err.message}`);
        process.exitCode = 1;
      });
}
