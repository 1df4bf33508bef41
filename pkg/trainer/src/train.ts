/**
 * The experiment loop: one freshly-seeded model per train manifest,
 * full epoch budget, then test-set evaluation. Produces metrics.json
 * (atomic write), one predictions CSV per proportion, and Grad-CAM
 * heatmaps for the misclassified test images of the last proportion.
 */

import * as fs from "node:fs";
import * as path from "node:path";

import { Adam } from "./adam";
import { TrainerConfig, configHash } from "./config";
import { EmptyManifest } from "./errors";
import { gradCam, writeHeatmapPng } from "./gradcam";
import { loadImageTensor } from "./image";
import { ManifestRecord, PlanManifests, readPlan } from "./manifest";
import { TinyCnn, bceWithLogit, sigmoid } from "./model";
import { decodePng } from "./png";
import { SplitMix64, deriveSeed } from "./rng";
import { Tensor } from "./tensor";

export interface Prediction {
  id: string;
  label: string;
  pred: string;
  correct: boolean;
}

export interface Evaluation {
  accuracy: number;
  predictions: Prediction[];
}

export interface ProportionResult {
  proportion: number;
  accuracy: number;
}

export interface Metrics {
  seed: number;
  config: TrainerConfig;
  config_hash: string;
  results: ProportionResult[];
}

function targetOf(record: ManifestRecord): number {
  return record.label === "blood" ? 1 : 0;
}

function loadTensor(record: ManifestRecord, config: TrainerConfig): Tensor {
  return loadImageTensor(record.path, config.imgSize, config.dataMean, config.dataStd);
}

/** Train one model on one manifest; batch order is seeded and epoch-keyed. */
export function trainModel(records: ManifestRecord[], config: TrainerConfig): TinyCnn {
  if (records.length === 0) throw new EmptyManifest("training manifest is empty");
  const model = new TinyCnn(config);
  const adam = new Adam(model.params(), config.learnRate);
  const inputs = records.map((rec) => loadTensor(rec, config));
  const targets = records.map(targetOf);

  for (let epoch = 0; epoch < config.epochs; epoch++) {
    const order = inputs.map((_, i) => i);
    new SplitMix64(deriveSeed(config.seed, "order", String(epoch))).shuffle(order);
    for (let start = 0; start < order.length; start += config.batchSize) {
      const batch = order.slice(start, start + config.batchSize);
      model.zeroGrads();
      for (const i of batch) {
        const logit = model.forward(inputs[i]);
        const dLogit = (sigmoid(logit) - targets[i]) / batch.length;
        model.backward(dLogit);
      }
      adam.step();
    }
  }
  return model;
}

export function evaluate(model: TinyCnn, testRecords: ManifestRecord[],
                         config: TrainerConfig): Evaluation {
  if (testRecords.length === 0) throw new EmptyManifest("test manifest is empty");
  const predictions: Prediction[] = [];
  let correct = 0;
  for (const rec of testRecords) {
    const logit = model.forward(loadTensor(rec, config));
    const pred = sigmoid(logit) > 0.5 ? "blood" : "no_blood";
    const ok = pred === rec.label;
    if (ok) correct += 1;
    predictions.push({ id: rec.id, label: rec.label, pred, correct: ok });
  }
  return { accuracy: correct / testRecords.length, predictions };
}

export function meanLoss(model: TinyCnn, records: ManifestRecord[], config: TrainerConfig): number {
  let total = 0;
  for (const rec of records) {
    total += bceWithLogit(model.forward(loadTensor(rec, config)), targetOf(rec));
  }
  return total / records.length;
}

function writePredictionsCsv(predictions: Prediction[], filePath: string): void {
  const lines = ["id,label,pred,correct"];
  for (const p of predictions) {
    lines.push(`${p.id},${p.label},${p.pred},${p.correct ? 1 : 0}`);
  }
  fs.writeFileSync(filePath, lines.join("\n") + "\n");
}

function atomicWriteJson(filePath: string, payload: unknown): void {
  const tmp = `${filePath}.tmp`;
  fs.writeFileSync(tmp, JSON.stringify(payload, null, 2) + "\n");
  fs.renameSync(tmp, filePath);
}

function proportionTag(p: number): string {
  return String(Math.round(p * 1000) / 10);
}

export interface RunOptions {
  /** Heatmaps rendered for at most this many misclassified test images. */
  gradCamLimit?: number;
  /** Train with this seed instead of the plan's own. */
  seedOverride?: number;
}

/** Run the full schedule in a plan directory; returns the written metrics. */
export function runPlan(planDir: string, baseConfig: TrainerConfig, outDir: string,
                        options: RunOptions = {}): Metrics {
  const plan: PlanManifests = readPlan(planDir);
  const config: TrainerConfig = { ...baseConfig, seed: options.seedOverride ?? plan.seed };
  fs.mkdirSync(outDir, { recursive: true });

  const results: ProportionResult[] = [];
  let lastModel: TinyCnn | null = null;
  let lastEval: Evaluation | null = null;
  for (const { proportion, records } of plan.schedule) {
    const model = trainModel(records, config);
    const evaluation = evaluate(model, plan.test, config);
    results.push({ proportion, accuracy: evaluation.accuracy });
    writePredictionsCsv(evaluation.predictions,
                        path.join(outDir, `predictions_p${proportionTag(proportion)}.csv`));
    lastModel = model;
    lastEval = evaluation;
  }

  const metrics: Metrics = {
    seed: plan.seed,
    config,
    config_hash: configHash(config),
    results,
  };
  atomicWriteJson(path.join(outDir, "metrics.json"), metrics);

  const limit = options.gradCamLimit ?? 8;
  if (lastModel && lastEval && limit > 0) {
    triageMisclassified(lastModel, lastEval, plan.test, config,
                        path.join(outDir, "gradcam"), limit);
  }
  return metrics;
}

/** Heatmaps for unexpected predictions: where was the model looking? */
function triageMisclassified(model: TinyCnn, evaluation: Evaluation,
                             testRecords: ManifestRecord[], config: TrainerConfig,
                             gradCamDir: string, limit: number): void {
  const byId = new Map(testRecords.map((rec) => [rec.id, rec]));
  const missed = evaluation.predictions.filter((p) => !p.correct).slice(0, limit);
  if (missed.length === 0) return;
  fs.mkdirSync(gradCamDir, { recursive: true });
  for (const miss of missed) {
    const rec = byId.get(miss.id);
    if (!rec) continue;
    const input = loadTensor(rec, config);
    const map = gradCam(model, input, miss.pred as "blood" | "no_blood");
    const base = decodePng(fs.readFileSync(rec.path));
    writeHeatmapPng(map, base, path.join(gradCamDir, `${miss.id}_gradcam.png`));
  }
}
