/**
 * Harness entry point.
 *
 *   node dist/src/cli.js train --plan-dir plans/run1 --out runs/run1 \
 *       [--img-size 380] [--epochs 50] [--batch-size 25] [--learn-rate 0.001] \
 *       [--channels 8,16,32] [--seed-override N] [--gradcam-limit 8]
 *
 * Exits 0 on success, 1 on runtime errors, 2 on usage errors.
 */

import { DEFAULT_CONFIG, TrainerConfig, makeConfig } from "./config";
import { TrainerError } from "./errors";
import { runPlan } from "./train";

function parseFlags(argv: string[]): Map<string, string> {
  const flags = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    if (!key.startsWith("--") || i + 1 >= argv.length) {
      usage(`malformed arguments near '${key}'`);
    }
    flags.set(key.slice(2), argv[i + 1]);
  }
  return flags;
}

function usage(message: string): never {
  console.error(`usage error: ${message}`);
  console.error("usage: cli.js train --plan-dir DIR --out DIR [--epochs N] [--img-size N] "
    + "[--batch-size N] [--learn-rate F] [--channels A,B,C] [--seed-override N] [--gradcam-limit N]");
  process.exit(2);
}

function numberFlag(flags: Map<string, string>, name: string, fallback: number): number {
  const raw = flags.get(name);
  if (raw === undefined) return fallback;
  const value = Number(raw);
  if (!Number.isFinite(value)) usage(`--${name} needs a number, got '${raw}'`);
  return value;
}

function main(argv: string[]): number {
  if (argv.length === 0 || argv[0] !== "train") {
    usage("expected the 'train' command");
  }
  const flags = parseFlags(argv.slice(1));
  const planDir = flags.get("plan-dir");
  const outDir = flags.get("out");
  if (!planDir || !outDir) usage("--plan-dir and --out are required");

  const channels = (flags.get("channels") ?? DEFAULT_CONFIG.channels.join(","))
    .split(",").map(Number) as [number, number, number];
  try {
    const config: TrainerConfig = makeConfig({
      imgSize: numberFlag(flags, "img-size", DEFAULT_CONFIG.imgSize),
      batchSize: numberFlag(flags, "batch-size", DEFAULT_CONFIG.batchSize),
      learnRate: numberFlag(flags, "learn-rate", DEFAULT_CONFIG.learnRate),
      epochs: numberFlag(flags, "epochs", DEFAULT_CONFIG.epochs),
      channels,
    });
    const seedFlag = flags.get("seed-override");
    const metrics = runPlan(planDir, config, outDir, {
      gradCamLimit: numberFlag(flags, "gradcam-limit", 8),
      seedOverride: seedFlag === undefined ? undefined : Number(seedFlag),
    });
    for (const { proportion, accuracy } of metrics.results) {
      console.log(`proportion ${proportion}: accuracy ${accuracy.toFixed(4)}`);
    }
    console.log(`metrics written to ${outDir}/metrics.json`);
    return 0;
  } catch (error) {
    if (error instanceof TrainerError) {
      console.error(`error: ${error.name}: ${error.message}`);
      return 1;
    }
    throw error;
  }
}

process.exit(main(process.argv.slice(2)));
