/** Dense channel-major (c, h, w) tensor of float64 samples. */
export interface Tensor {
  c: number;
  h: number;
  w: number;
  data: Float64Array;
}

export function tensor(c: number, h: number, w: number, data?: Float64Array): Tensor {
  const size = c * h * w;
  if (data !== undefined && data.length !== size) {
    throw new Error(`tensor data length ${data.length} != ${c}x${h}x${w}`);
  }
  return { c, h, w, data: data ?? new Float64Array(size) };
}

export function zerosLike(t: Tensor): Tensor {
  return tensor(t.c, t.h, t.w);
}

export function cloneTensor(t: Tensor): Tensor {
  return tensor(t.c, t.h, t.w, Float64Array.from(t.data));
}

export function at(t: Tensor, c: number, y: number, x: number): number {
  return t.data[(c * t.h + y) * t.w + x];
}

export function setAt(t: Tensor, c: number, y: number, x: number, value: number): void {
  t.data[(c * t.h + y) * t.w + x] = value;
}
