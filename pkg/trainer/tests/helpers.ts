/**
 * Builds a toy, linearly-separable plan directory in the exact wire format
 * the planner emits: JSONL manifests plus plan.json with SHA-256 digests.
 * "blood" images are bright squares, "no_blood" images dark squares.
 */

import { createHash } from "node:crypto";
import * as fs from "node:fs";
import * as path from "node:path";

import { encodePng } from "../src/png";
import { SplitMix64 } from "../src/rng";

export interface ToyRecord {
  id: string;
  path: string;
  label: "blood" | "no_blood";
  source: string;
  origin_id: string | null;
}

export function writeToyImage(filePath: string, bright: boolean, seed: number, size = 16): void {
  const rng = new SplitMix64(seed);
  const base = bright ? 200 : 55;
  const data = new Uint8Array(size * size);
  for (let i = 0; i < data.length; i++) {
    const noisy = base + Math.round((rng.nextFloat() - 0.5) * 40);
    data[i] = Math.min(255, Math.max(0, noisy));
  }
  fs.writeFileSync(filePath, encodePng({ width: size, height: size, channels: 1, data }));
}

export function toyRecords(dir: string, prefix: string, count: number, seedBase: number): ToyRecord[] {
  const records: ToyRecord[] = [];
  for (let i = 0; i < count; i++) {
    const bright = i % 2 === 0;
    const id = `${prefix}${i}`;
    const imgPath = path.join(dir, `${id}.png`);
    writeToyImage(imgPath, bright, seedBase + i);
    records.push({
      id, path: imgPath, label: bright ? "blood" : "no_blood", source: "real", origin_id: null,
    });
  }
  return records;
}

export function manifestLine(rec: ToyRecord): string {
  return JSON.stringify({
    id: rec.id, label: rec.label, origin_id: rec.origin_id, path: rec.path, source: rec.source,
  });
}

export function writeManifestFile(records: ToyRecord[], filePath: string): void {
  fs.writeFileSync(filePath, records.map(manifestLine).map((l) => l + "\n").join(""));
}

export function sha256File(filePath: string): string {
  return createHash("sha256").update(fs.readFileSync(filePath)).digest("hex");
}

export interface ToyPlanOptions {
  trainCount?: number;
  testCount?: number;
  proportions?: number[];
  seed?: number;
}

/** Lay out images + manifests + plan.json under `dir`; returns the plan dir. */
export function writeToyPlan(dir: string, options: ToyPlanOptions = {}): string {
  const { trainCount = 24, testCount = 12, proportions = [0.1, 0.25], seed = 12345 } = options;
  const imagesDir = path.join(dir, "images");
  const planDir = path.join(dir, "plan");
  fs.mkdirSync(imagesDir, { recursive: true });
  fs.mkdirSync(planDir, { recursive: true });

  const train = toyRecords(imagesDir, "train", trainCount, 1000);
  const test = toyRecords(imagesDir, "test", testCount, 9000);

  const manifests: Record<string, { records: number; sha256: string }> = {};
  const add = (name: string, records: ToyRecord[]) => {
    const filePath = path.join(planDir, name);
    writeManifestFile(records, filePath);
    manifests[name] = { records: records.length, sha256: sha256File(filePath) };
  };

  add("test.jsonl", test);
  for (const p of proportions) {
    // The toy pool reuses extra bright/dark squares as flip stand-ins.
    const extra = Math.round(p * trainCount);
    const pool = toyRecords(imagesDir, `aug${Math.round(p * 100)}_`, extra, 5000 + extra);
    add(`train_p${Math.round(p * 100)}.jsonl`, train.concat(pool));
  }

  fs.writeFileSync(path.join(planDir, "plan.json"), JSON.stringify({
    seed,
    train_count: trainCount,
    test_count: testCount,
    proportions,
    test_mode: "real",
    manifests,
  }, null, 2) + "\n");
  return planDir;
}
