import assert from "node:assert/strict";
import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";
import { test } from "node:test";

import { makeConfig } from "../src/config";
import { decodePng } from "../src/png";
import { evaluate, runPlan, trainModel } from "../src/train";
import { parseManifest, readPlan } from "../src/manifest";
import { writeToyPlan } from "./helpers";

const TOY = {
  imgSize: 16,
  channels: [4, 8, 8] as [number, number, number],
  batchSize: 6,
  epochs: 5,
  learnRate: 0.05,
};

function tmpDir(): string {
  return fs.mkdtempSync(path.join(os.tmpdir(), "trainer-train-"));
}

test("pixel-mean threshold oracle separates the toy set perfectly", () => {
  const planDir = writeToyPlan(tmpDir());
  const test0 = parseManifest(path.join(planDir, "test.jsonl"));
  let correct = 0;
  for (const rec of test0) {
    const img = decodePng(fs.readFileSync(rec.path));
    let sum = 0;
    for (const v of img.data) sum += v;
    const predicted = sum / img.data.length > 128 ? "blood" : "no_blood";
    if (predicted === rec.label) correct += 1;
  }
  assert.equal(correct / test0.length, 1.0);
});

test("toy separable set trains to accuracy >= 0.95 within the time budget", () => {
  const start = Date.now();
  const planDir = writeToyPlan(tmpDir());
  const outDir = tmpDir();
  const metrics = runPlan(planDir, makeConfig(TOY), outDir);

  assert.equal(metrics.results.length, 2); // one entry per schedule proportion
  assert.deepEqual(metrics.results.map((r) => r.proportion), [0.1, 0.25]);
  for (const { accuracy } of metrics.results) {
    assert.ok(accuracy >= 0.95, `accuracy ${accuracy} below 0.95`);
  }
  assert.ok(Date.now() - start < 120_000, "toy training exceeded 2 minutes");

  const onDisk = JSON.parse(fs.readFileSync(path.join(outDir, "metrics.json"), "utf-8"));
  assert.equal(onDisk.seed, 12345);
  assert.equal(onDisk.results.length, 2);
  assert.equal(typeof onDisk.config_hash, "string");
});

test("predictions CSV is self-consistent with the reported accuracy", () => {
  const planDir = writeToyPlan(tmpDir(), { proportions: [0.1] });
  const outDir = tmpDir();
  const metrics = runPlan(planDir, makeConfig(TOY), outDir);

  const csv = fs.readFileSync(path.join(outDir, "predictions_p10.csv"), "utf-8").trim().split("\n");
  assert.equal(csv[0], "id,label,pred,correct");
  const rows = csv.slice(1).map((line) => line.split(","));
  assert.equal(rows.length, 12);
  const meanCorrect = rows.reduce((acc, row) => acc + Number(row[3]), 0) / rows.length;
  assert.equal(meanCorrect, metrics.results[0].accuracy);
  for (const row of rows) {
    assert.equal(String(row[1] === row[2] ? 1 : 0), row[3]);
  }
});

test("metrics are reproducible for a fixed plan seed", () => {
  const planDir = writeToyPlan(tmpDir());
  const a = runPlan(planDir, makeConfig(TOY), tmpDir());
  const b = runPlan(planDir, makeConfig(TOY), tmpDir());
  assert.deepEqual(a.results, b.results);
  assert.equal(a.config_hash, b.config_hash);
});

test("always-blood predictions on a balanced test set score 0.5", () => {
  const planDir = writeToyPlan(tmpDir(), { proportions: [0.1] });
  const plan = readPlan(planDir);
  // Freshly initialized tiny model with a huge positive head bias: always "blood".
  const config = makeConfig({ ...TOY, epochs: 1 });
  const model = trainModel(plan.schedule[0].records, config);
  const head = model.params()[model.params().length - 1];
  head.value[0] = 1e6;
  const { accuracy, predictions } = evaluate(model, plan.test, config);
  assert.ok(predictions.every((p) => p.pred === "blood"));
  assert.equal(accuracy, 0.5);
});

test("grad-cam triage writes heatmaps for misclassified test images", () => {
  const planDir = writeToyPlan(tmpDir(), { proportions: [0.1] });
  // One epoch at the published learning rate is far too little training for
  // the toy set, so some test images stay misclassified and get triaged.
  const config = makeConfig({ ...TOY, epochs: 1, learnRate: 0.001 });
  const outDir = tmpDir();
  runPlan(planDir, config, outDir, { gradCamLimit: 4 });
  const gradCamDir = path.join(outDir, "gradcam");
  assert.ok(fs.existsSync(gradCamDir), "expected grad-cam triage output");
  const files = fs.readdirSync(gradCamDir);
  assert.ok(files.length >= 1 && files.length <= 4);
  for (const file of files) {
    assert.match(file, /_gradcam\.png$/);
    const img = decodePng(fs.readFileSync(path.join(gradCamDir, file)));
    assert.equal(img.width, 16);
    assert.equal(img.channels, 3);
  }
});
