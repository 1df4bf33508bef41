/** Adam optimizer over the model's parameter arrays. */

import { Param } from "./model";

export class Adam {
  private readonly m: Float64Array[];
  private readonly v: Float64Array[];
  private t = 0;

  constructor(
    private readonly params: Param[],
    private readonly learnRate: number,
    private readonly beta1 = 0.9,
    private readonly beta2 = 0.999,
    private readonly eps = 1e-8,
  ) {
    this.m = params.map((p) => new Float64Array(p.value.length));
    this.v = params.map((p) => new Float64Array(p.value.length));
  }

  step(): void {
    this.t += 1;
    const correction1 = 1 - Math.pow(this.beta1, this.t);
    const correction2 = 1 - Math.pow(this.beta2, this.t);
    this.params.forEach((p, i) => {
      const m = this.m[i];
      const v = this.v[i];
      for (let j = 0; j < p.value.length; j++) {
        const g = p.grad[j];
        m[j] = this.beta1 * m[j] + (1 - this.beta1) * g;
        v[j] = this.beta2 * v[j] + (1 - this.beta2) * g * g;
        const mHat = m[j] / correction1;
        const vHat = v[j] / correction2;
        p.value[j] -= (this.learnRate * mHat) / (Math.sqrt(vHat) + this.eps);
      }
    });
  }
}
