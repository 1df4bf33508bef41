/**
 * Gradient-weighted class activation maps.
 *
 * For a target conv layer: pool the gradients of the class score over
 * each activation map's spatial extent, take the gradient-weighted sum of
 * the maps, rectify, and normalize by the maximum. A uniformly-zero
 * result is flagged degenerate (all-zero map) rather than dividing by 0.
 */

import * as fs from "node:fs";

import { bilinearResizeChannel } from "./image";
import { TinyCnn } from "./model";
import { Image, encodePng } from "./png";
import { Tensor } from "./tensor";

export type TargetClass = "blood" | "no_blood";

export interface GradCamMap {
  /** height x width grid of values in [0, 1]. */
  grid: number[][];
  width: number;
  height: number;
  targetClass: TargetClass;
  /** True when every pooled-gradient weight times map is rectified away. */
  degenerate: boolean;
}

/** Spatially average each map's gradients into one weight per channel. */
export function pooledGradients(gradients: Tensor): number[] {
  const area = gradients.h * gradients.w;
  const weights: number[] = [];
  for (let c = 0; c < gradients.c; c++) {
    let sum = 0;
    for (let i = 0; i < area; i++) sum += gradients.data[c * area + i];
    weights.push(sum / area);
  }
  return weights;
}

/** Rectified, max-normalized weighted sum of activation maps. */
export function combineMaps(
  activations: Tensor, weights: number[], targetClass: TargetClass,
): GradCamMap {
  if (weights.length !== activations.c) {
    throw new Error(`need one weight per map: ${weights.length} != ${activations.c}`);
  }
  const { h, w } = activations;
  const area = h * w;
  const grid: number[][] = [];
  let max = 0;
  for (let y = 0; y < h; y++) {
    const row: number[] = [];
    for (let x = 0; x < w; x++) {
      let value = 0;
      for (let c = 0; c < activations.c; c++) {
        value += weights[c] * activations.data[c * area + y * w + x];
      }
      value = Math.max(value, 0);
      if (value > max) max = value;
      row.push(value);
    }
    grid.push(row);
  }
  if (max > 0) {
    for (const row of grid) {
      for (let x = 0; x < w; x++) row[x] /= max;
    }
  }
  return { grid, width: w, height: h, targetClass, degenerate: max === 0 };
}

/**
 * Grad-CAM for one input. The class score is the logit for "blood" and its
 * negation for "no_blood"; the target layer defaults to the last conv.
 */
export function gradCam(
  model: TinyCnn, input: Tensor, targetClass: TargetClass, targetLayer?: string,
): GradCamMap {
  const layer = targetLayer ?? model.lastConvLayerName();
  const { activations, gradients } = model.scoreGradients(input, layer);
  let weights = pooledGradients(gradients);
  if (targetClass === "no_blood") weights = weights.map((v) => -v);
  return combineMaps(activations, weights, targetClass);
}

/** Overlay the map on the source image (red heat over dimmed gray) as PNG. */
export function writeHeatmapPng(map: GradCamMap, base: Image, path: string): void {
  const { width, height } = base;
  const flat = new Float64Array(map.width * map.height);
  for (let y = 0; y < map.height; y++) {
    for (let x = 0; x < map.width; x++) flat[y * map.width + x] = map.grid[y][x];
  }
  const heat = bilinearResizeChannel(flat, map.height, map.width, height, width);

  const data = new Uint8Array(width * height * 3);
  for (let i = 0; i < width * height; i++) {
    const gray = base.channels === 1
      ? base.data[i]
      : (base.data[i * 3] + base.data[i * 3 + 1] + base.data[i * 3 + 2]) / 3;
    const h01 = Math.min(Math.max(heat[i], 0), 1);
    data[i * 3] = Math.round(Math.min(255, gray * 0.5 + 255 * h01 * 0.5));
    data[i * 3 + 1] = Math.round(gray * 0.5);
    data[i * 3 + 2] = Math.round(gray * 0.5);
  }
  fs.writeFileSync(path, encodePng({ width, height, channels: 3, data }));
}
