/**
 * Image-to-tensor preparation: bilinear resize (half-pixel centers, the
 * same convention the feature pipeline uses), channel replication for
 * grayscale, and per-channel mean/std normalization.
 */

import * as fs from "node:fs";

import { Image, decodePng } from "./png";
import { Tensor, tensor } from "./tensor";

export function bilinearResizeChannel(
  src: Float64Array, inH: number, inW: number, outH: number, outW: number,
): Float64Array {
  const out = new Float64Array(outH * outW);
  for (let y = 0; y < outH; y++) {
    let sy = ((y + 0.5) * inH) / outH - 0.5;
    sy = Math.min(Math.max(sy, 0), inH - 1);
    const y0 = Math.floor(sy);
    const y1 = Math.min(y0 + 1, inH - 1);
    const fy = sy - y0;
    for (let x = 0; x < outW; x++) {
      let sx = ((x + 0.5) * inW) / outW - 0.5;
      sx = Math.min(Math.max(sx, 0), inW - 1);
      const x0 = Math.floor(sx);
      const x1 = Math.min(x0 + 1, inW - 1);
      const fx = sx - x0;
      const top = src[y0 * inW + x0] * (1 - fx) + src[y0 * inW + x1] * fx;
      const bottom = src[y1 * inW + x0] * (1 - fx) + src[y1 * inW + x1] * fx;
      out[y * outW + x] = top * (1 - fy) + bottom * fy;
    }
  }
  return out;
}

export function imageToTensor(
  img: Image, size: number, mean: [number, number, number], std: [number, number, number],
): Tensor {
  const out = tensor(3, size, size);
  for (let ch = 0; ch < 3; ch++) {
    const srcCh = img.channels === 1 ? 0 : ch;
    const plane = new Float64Array(img.height * img.width);
    for (let i = 0; i < plane.length; i++) {
      plane[i] = img.data[i * img.channels + srcCh] / 255;
    }
    const resized = bilinearResizeChannel(plane, img.height, img.width, size, size);
    for (let i = 0; i < resized.length; i++) {
      out.data[ch * size * size + i] = (resized[i] - mean[ch]) / std[ch];
    }
  }
  return out;
}

export function loadImageTensor(
  path: string, size: number, mean: [number, number, number], std: [number, number, number],
): Tensor {
  return imageToTensor(decodePng(fs.readFileSync(path)), size, mean, std);
}
