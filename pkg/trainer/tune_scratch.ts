import * as fs from "node:fs";
import { makeConfig } from "./src/config";
import { runPlan } from "./src/train";
import { writeToyPlan } from "./tests/helpers";

const dir = fs.mkdtempSync("/tmp/toy-");
const planDir = writeToyPlan(dir);
for (const [epochs, lr] of [[5, 0.001], [5, 0.01], [5, 0.05], [10, 0.05], [5, 0.1]] as const) {
  const config = makeConfig({ imgSize: 16, channels: [4, 8, 8], batchSize: 6, epochs, learnRate: lr });
  const t0 = Date.now();
  const out = fs.mkdtempSync("/tmp/out-");
  const metrics = runPlan(planDir, config, out, { gradCamLimit: 0 });
  console.log(`epochs=${epochs} lr=${lr} accuracies=${metrics.results.map(r => r.accuracy).join(",")} (${Date.now() - t0}ms)`);
}
