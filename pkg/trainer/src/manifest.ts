/**
 * Reads the planner's JSON Lines manifests and plan.json descriptor.
 * Every manifest named by plan.json is SHA-256 verified before use, and
 * the train/test leakage guard is re-checked on this side of the fence.
 */

import { createHash } from "node:crypto";
import * as fs from "node:fs";
import * as path from "node:path";

import { EmptyManifest, SchemaError } from "./errors";

export type Label = "blood" | "no_blood";

export interface ManifestRecord {
  id: string;
  path: string;
  label: Label;
  source: string;
  origin_id: string | null;
}

export interface PlanManifests {
  seed: number;
  /** Ascending proportion levels with their train manifests. */
  schedule: { proportion: number; records: ManifestRecord[] }[];
  test: ManifestRecord[];
}

export function parseManifest(filePath: string): ManifestRecord[] {
  const text = fs.readFileSync(filePath, "utf-8");
  const records: ManifestRecord[] = [];
  const seen = new Set<string>();
  const lines = text.split("\n");
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].trim();
    if (!line) continue;
    let obj: Record<string, unknown>;
    try {
      obj = JSON.parse(line);
    } catch {
      throw new SchemaError(`${filePath}:${i + 1}: not valid JSON`);
    }
    const rec = validateRecord(obj, `${filePath}:${i + 1}`);
    if (seen.has(rec.id)) {
      throw new SchemaError(`${filePath}: duplicate record id '${rec.id}'`);
    }
    seen.add(rec.id);
    records.push(rec);
  }
  return records;
}

function validateRecord(obj: Record<string, unknown>, where: string): ManifestRecord {
  const { id, path: imgPath, label } = obj;
  if (typeof id !== "string" || id.length === 0) {
    throw new SchemaError(`${where}: record needs a string id`);
  }
  if (typeof imgPath !== "string" || imgPath.length === 0) {
    throw new SchemaError(`${where}: record '${id}' needs a path`);
  }
  if (label !== "blood" && label !== "no_blood") {
    throw new SchemaError(`${where}: record '${id}' has invalid label '${String(label)}'`);
  }
  const source = typeof obj.source === "string" ? obj.source : "real";
  const origin = obj.origin_id == null ? null : String(obj.origin_id);
  return { id, path: imgPath, label, source, origin_id: origin };
}

function sha256File(filePath: string): string {
  return createHash("sha256").update(fs.readFileSync(filePath)).digest("hex");
}

export function readPlan(planDir: string): PlanManifests {
  const planPath = path.join(planDir, "plan.json");
  if (!fs.existsSync(planPath)) {
    throw new SchemaError(`no plan.json in ${planDir}`);
  }
  const descriptor = JSON.parse(fs.readFileSync(planPath, "utf-8"));
  const manifests: Record<string, { sha256?: string }> = descriptor.manifests ?? {};

  for (const [name, meta] of Object.entries(manifests)) {
    const filePath = path.join(planDir, name);
    if (!fs.existsSync(filePath)) {
      throw new SchemaError(`plan.json names missing manifest ${name}`);
    }
    if (meta.sha256 && sha256File(filePath) !== meta.sha256) {
      throw new SchemaError(`manifest ${name} does not match its recorded SHA-256`);
    }
  }

  const test = parseManifest(path.join(planDir, "test.jsonl"));
  if (test.length === 0) throw new EmptyManifest(`${planDir}/test.jsonl is empty`);
  const testIds = new Set(test.map((r) => r.id));

  const schedule: PlanManifests["schedule"] = [];
  for (const name of Object.keys(manifests)) {
    const match = /^train_p(.+)\.jsonl$/.exec(name);
    if (!match) continue;
    const proportion = Number(match[1]) / 100;
    const records = parseManifest(path.join(planDir, name));
    if (records.length === 0) throw new EmptyManifest(`${planDir}/${name} is empty`);
    for (const rec of records) {
      if (testIds.has(rec.id)) {
        throw new SchemaError(`record '${rec.id}' appears in both ${name} and test.jsonl`);
      }
      if (rec.origin_id !== null && testIds.has(rec.origin_id)) {
        throw new SchemaError(
          `record '${rec.id}' in ${name} derives from test image '${rec.origin_id}'`,
        );
      }
    }
    schedule.push({ proportion, records });
  }
  if (schedule.length === 0) {
    throw new SchemaError(`plan.json names no train_p*.jsonl manifests`);
  }
  schedule.sort((a, b) => a.proportion - b.proportion);
  return { seed: Number(descriptor.seed ?? 0), schedule, test };
}
