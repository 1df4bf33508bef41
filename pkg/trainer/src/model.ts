/**
 * tiny_cnn: three conv blocks (3x3 conv, ReLU, 2x2 average pool), a
 * global average pool and a single-logit dense head. Forward and backward
 * passes are written out explicitly; no autograd, no native code.
 *
 * Sigmoid(logit) > 0.5 decides "blood". Everything is float64 and seeded,
 * so a fixed seed reproduces the same weights and the same training run.
 */

import { TrainerConfig } from "./config";
import { LayerNotFound } from "./errors";
import { SplitMix64, deriveSeed } from "./rng";
import { Tensor, at, cloneTensor, tensor, zerosLike } from "./tensor";

export interface Param {
  value: Float64Array;
  grad: Float64Array;
}

interface ConvLayer {
  kind: "conv";
  name: string;
  cin: number;
  cout: number;
  weight: Param; // [cout][cin][3][3]
  bias: Param;   // [cout]
}

interface ReluLayer { kind: "relu"; name: string; }
interface PoolLayer { kind: "pool"; name: string; }
interface GapLayer { kind: "gap"; name: string; }

interface DenseLayer {
  kind: "dense";
  name: string;
  cin: number;
  weight: Param; // [cin]
  bias: Param;   // [1]
}

type Layer = ConvLayer | ReluLayer | PoolLayer | GapLayer | DenseLayer;

function param(size: number): Param {
  return { value: new Float64Array(size), grad: new Float64Array(size) };
}

export class TinyCnn {
  readonly layers: Layer[] = [];
  /** Output of each layer from the latest forward pass; [0] is the input. */
  private cache: Tensor[] = [];

  constructor(config: TrainerConfig, inputChannels = 3) {
    const rng = new SplitMix64(deriveSeed(config.seed, "weights"));
    let cin = inputChannels;
    config.channels.forEach((cout, i) => {
      const conv: ConvLayer = {
        kind: "conv", name: `conv${i + 1}`, cin, cout,
        weight: param(cout * cin * 9), bias: param(cout),
      };
      const scale = Math.sqrt(2 / (cin * 9));
      for (let j = 0; j < conv.weight.value.length; j++) {
        conv.weight.value[j] = rng.nextGaussian() * scale;
      }
      this.layers.push(conv, { kind: "relu", name: `conv${i + 1}_relu` },
                       { kind: "pool", name: `pool${i + 1}` });
      cin = cout;
    });
    this.layers.push({ kind: "gap", name: "gap" });
    const dense: DenseLayer = { kind: "dense", name: "head", cin, weight: param(cin), bias: param(1) };
    const scale = Math.sqrt(1 / cin);
    for (let j = 0; j < cin; j++) dense.weight.value[j] = rng.nextGaussian() * scale;
    this.layers.push(dense);
  }

  params(): Param[] {
    const out: Param[] = [];
    for (const layer of this.layers) {
      if (layer.kind === "conv" || layer.kind === "dense") out.push(layer.weight, layer.bias);
    }
    return out;
  }

  zeroGrads(): void {
    for (const p of this.params()) p.grad.fill(0);
  }

  /** Forward pass; returns the classification logit and fills the cache. */
  forward(input: Tensor): number {
    this.cache = [input];
    let current = input;
    for (const layer of this.layers) {
      current = this.forwardLayer(layer, current);
      this.cache.push(current);
    }
    return current.data[0];
  }

  private forwardLayer(layer: Layer, input: Tensor): Tensor {
    switch (layer.kind) {
      case "conv": return convForward(layer, input);
      case "relu": {
        const out = cloneTensor(input);
        for (let i = 0; i < out.data.length; i++) if (out.data[i] < 0) out.data[i] = 0;
        return out;
      }
      case "pool": return poolForward(input);
      case "gap": {
        const out = tensor(input.c, 1, 1);
        const area = input.h * input.w;
        for (let c = 0; c < input.c; c++) {
          let sum = 0;
          for (let i = 0; i < area; i++) sum += input.data[c * area + i];
          out.data[c] = sum / area;
        }
        return out;
      }
      case "dense": {
        const out = tensor(1, 1, 1);
        let z = layer.bias.value[0];
        for (let i = 0; i < layer.cin; i++) z += layer.weight.value[i] * input.data[i];
        out.data[0] = z;
        return out;
      }
    }
  }

  /**
   * Backpropagate d(logit) through the whole network, accumulating
   * parameter gradients. Stops at `stopAfter` (a cache index) when the
   * caller only needs the gradient w.r.t. an intermediate activation.
   */
  backward(dLogit: number, stopAfter = 0): Tensor {
    let grad = tensor(1, 1, 1, Float64Array.from([dLogit]));
    for (let i = this.layers.length - 1; i >= stopAfter; i--) {
      grad = this.backwardLayer(this.layers[i], this.cache[i], this.cache[i + 1], grad);
    }
    return grad;
  }

  private backwardLayer(layer: Layer, input: Tensor, output: Tensor, dOut: Tensor): Tensor {
    switch (layer.kind) {
      case "conv": return convBackward(layer, input, dOut);
      case "relu": {
        const dIn = zerosLike(input);
        for (let i = 0; i < input.data.length; i++) {
          dIn.data[i] = output.data[i] > 0 ? dOut.data[i] : 0;
        }
        return dIn;
      }
      case "pool": return poolBackward(input, dOut);
      case "gap": {
        const dIn = zerosLike(input);
        const area = input.h * input.w;
        for (let c = 0; c < input.c; c++) {
          const g = dOut.data[c] / area;
          for (let i = 0; i < area; i++) dIn.data[c * area + i] = g;
        }
        return dIn;
      }
      case "dense": {
        const dz = dOut.data[0];
        const dIn = zerosLike(input);
        for (let i = 0; i < layer.cin; i++) {
          layer.weight.grad[i] += input.data[i] * dz;
          dIn.data[i] = layer.weight.value[i] * dz;
        }
        layer.bias.grad[0] += dz;
        return dIn;
      }
    }
  }

  /** Cache index of a conv layer's post-activation maps. */
  activationIndex(layerName: string): number {
    for (let i = 0; i < this.layers.length; i++) {
      if (this.layers[i].kind === "conv" && this.layers[i].name === layerName) {
        return i + 2; // cache slot after the conv's ReLU
      }
    }
    const names = this.layers.filter((l) => l.kind === "conv").map((l) => l.name);
    throw new LayerNotFound(`no convolutional layer '${layerName}' (have ${names.join(", ")})`);
  }

  lastConvLayerName(): string {
    const convs = this.layers.filter((l) => l.kind === "conv");
    return convs[convs.length - 1].name;
  }

  /**
   * Activation maps of a conv layer plus d(logit)/d(maps) for one input.
   * The forward cache is rebuilt, so this is safe between training steps.
   */
  scoreGradients(input: Tensor, layerName: string): { logit: number; activations: Tensor; gradients: Tensor } {
    const index = this.activationIndex(layerName);
    const logit = this.forward(input);
    const before = this.params().map((p) => Float64Array.from(p.grad));
    const gradients = this.backward(1.0, index);
    this.params().forEach((p, i) => p.grad.set(before[i])); // score backprop must not disturb training grads
    return { logit, activations: this.cache[index], gradients };
  }

  /** Continue the forward pass from a replaced intermediate activation. */
  logitFromActivation(layerName: string, activation: Tensor): number {
    const index = this.activationIndex(layerName);
    let current = activation;
    for (let i = index; i < this.layers.length; i++) {
      current = this.forwardLayer(this.layers[i], current);
    }
    return current.data[0];
  }
}

function convForward(layer: ConvLayer, input: Tensor): Tensor {
  const { h, w } = input;
  const out = tensor(layer.cout, h, w);
  const weight = layer.weight.value;
  for (let oc = 0; oc < layer.cout; oc++) {
    const bias = layer.bias.value[oc];
    for (let y = 0; y < h; y++) {
      for (let x = 0; x < w; x++) {
        let acc = bias;
        for (let ic = 0; ic < layer.cin; ic++) {
          for (let ky = 0; ky < 3; ky++) {
            const iy = y + ky - 1;
            if (iy < 0 || iy >= h) continue;
            for (let kx = 0; kx < 3; kx++) {
              const ix = x + kx - 1;
              if (ix < 0 || ix >= w) continue;
              acc += weight[((oc * layer.cin + ic) * 3 + ky) * 3 + kx] * at(input, ic, iy, ix);
            }
          }
        }
        out.data[(oc * h + y) * w + x] = acc;
      }
    }
  }
  return out;
}

function convBackward(layer: ConvLayer, input: Tensor, dOut: Tensor): Tensor {
  const { h, w } = input;
  const dIn = zerosLike(input);
  const weight = layer.weight.value;
  const dWeight = layer.weight.grad;
  for (let oc = 0; oc < layer.cout; oc++) {
    for (let y = 0; y < h; y++) {
      for (let x = 0; x < w; x++) {
        const g = dOut.data[(oc * h + y) * w + x];
        if (g === 0) continue;
        layer.bias.grad[oc] += g;
        for (let ic = 0; ic < layer.cin; ic++) {
          for (let ky = 0; ky < 3; ky++) {
            const iy = y + ky - 1;
            if (iy < 0 || iy >= h) continue;
            for (let kx = 0; kx < 3; kx++) {
              const ix = x + kx - 1;
              if (ix < 0 || ix >= w) continue;
              const wi = ((oc * layer.cin + ic) * 3 + ky) * 3 + kx;
              dWeight[wi] += g * at(input, ic, iy, ix);
              dIn.data[(ic * h + iy) * w + ix] += g * weight[wi];
            }
          }
        }
      }
    }
  }
  return dIn;
}

function poolForward(input: Tensor): Tensor {
  const outH = Math.floor(input.h / 2);
  const outW = Math.floor(input.w / 2);
  const out = tensor(input.c, outH, outW);
  for (let c = 0; c < input.c; c++) {
    for (let y = 0; y < outH; y++) {
      for (let x = 0; x < outW; x++) {
        const sum = at(input, c, 2 * y, 2 * x) + at(input, c, 2 * y, 2 * x + 1)
          + at(input, c, 2 * y + 1, 2 * x) + at(input, c, 2 * y + 1, 2 * x + 1);
        out.data[(c * outH + y) * outW + x] = sum / 4;
      }
    }
  }
  return out;
}

function poolBackward(input: Tensor, dOut: Tensor): Tensor {
  const dIn = zerosLike(input);
  const outH = dOut.h;
  const outW = dOut.w;
  for (let c = 0; c < input.c; c++) {
    for (let y = 0; y < outH; y++) {
      for (let x = 0; x < outW; x++) {
        const g = dOut.data[(c * outH + y) * outW + x] / 4;
        dIn.data[(c * input.h + 2 * y) * input.w + 2 * x] += g;
        dIn.data[(c * input.h + 2 * y) * input.w + 2 * x + 1] += g;
        dIn.data[(c * input.h + 2 * y + 1) * input.w + 2 * x] += g;
        dIn.data[(c * input.h + 2 * y + 1) * input.w + 2 * x + 1] += g;
      }
    }
  }
  return dIn;
}

export function sigmoid(z: number): number {
  return z >= 0 ? 1 / (1 + Math.exp(-z)) : Math.exp(z) / (1 + Math.exp(z));
}

/** Numerically stable binary cross-entropy on the logit. */
export function bceWithLogit(logit: number, target: number): number {
  return Math.max(logit, 0) - logit * target + Math.log(1 + Math.exp(-Math.abs(logit)));
}
