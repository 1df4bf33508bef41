/**
 * Training hyperparameters. The defaults are the published settings for
 * the EfficientNet-B4 experiment; tests and the toy path override the
 * sizes while keeping the same configuration surface.
 */

import { createHash } from "node:crypto";

import { TrainerError, UnsupportedArchitecture } from "./errors";

export type Architecture = "efficientnet_b4" | "tiny_cnn";

export interface TrainerConfig {
  imgSize: number;
  batchSize: number;
  dataMean: [number, number, number];
  dataStd: [number, number, number];
  outFeatures: number;
  optimizer: "ADAM";
  learnRate: number;
  minEpochs: number;
  epochs: number;
  /** Informational here: this harness computes in float64 regardless. */
  precision: number;
  architecture: Architecture;
  /** Channel widths of the three tiny_cnn conv blocks. */
  channels: [number, number, number];
  seed: number;
}

export const DEFAULT_CONFIG: TrainerConfig = {
  imgSize: 380,
  batchSize: 25,
  dataMean: [0.1129, 0.1157, 0.118],
  dataStd: [0.1546, 0.1575, 0.1595],
  outFeatures: 1,
  optimizer: "ADAM",
  learnRate: 0.001,
  minEpochs: 1,
  epochs: 50,
  precision: 16,
  architecture: "tiny_cnn",
  channels: [8, 16, 32],
  seed: 0,
};

export function makeConfig(overrides: Partial<TrainerConfig> = {}): TrainerConfig {
  const config: TrainerConfig = { ...DEFAULT_CONFIG, ...overrides };
  validateConfig(config);
  return config;
}

export function validateConfig(config: TrainerConfig): void {
  const positives: [string, number][] = [
    ["imgSize", config.imgSize],
    ["batchSize", config.batchSize],
    ["outFeatures", config.outFeatures],
    ["learnRate", config.learnRate],
    ["minEpochs", config.minEpochs],
    ["epochs", config.epochs],
    ["precision", config.precision],
  ];
  for (const [name, value] of positives) {
    if (!(value > 0)) throw new TrainerError(`${name} must be positive, got ${value}`);
  }
  if (config.dataMean.length !== 3 || config.dataStd.length !== 3) {
    throw new TrainerError("dataMean and dataStd must be 3-vectors");
  }
  if (config.dataStd.some((s) => !(s > 0))) {
    throw new TrainerError("dataStd entries must be positive");
  }
  if (config.epochs < config.minEpochs) {
    throw new TrainerError(`epochs (${config.epochs}) below minEpochs (${config.minEpochs})`);
  }
  if (config.outFeatures !== 1) {
    throw new TrainerError("binary classifier uses a single output feature");
  }
  if (config.architecture === "efficientnet_b4") {
    throw new UnsupportedArchitecture(
      "efficientnet_b4 needs a pretrained backbone unavailable in this runtime; use tiny_cnn",
    );
  }
  if (config.architecture !== "tiny_cnn") {
    throw new TrainerError(`unknown architecture ${String(config.architecture)}`);
  }
}

/** Stable hash of the configuration, recorded in metrics.json. */
export function configHash(config: TrainerConfig): string {
  const canonical = JSON.stringify(config, Object.keys(config).sort());
  return createHash("sha256").update(canonical).digest("hex").slice(0, 16);
}
