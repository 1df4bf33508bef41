/**
 * splitmix64 stream, the same generator the planner pins, so data order
 * is reproducible for a fixed seed on any platform.
 */

const MASK64 = (1n << 64n) - 1n;
const GOLDEN = 0x9e3779b97f4a7c15n;

function mix(z: bigint): bigint {
  z = ((z ^ (z >> 30n)) * 0xbf58476d1ce4e5b9n) & MASK64;
  z = ((z ^ (z >> 27n)) * 0x94d049bb133111ebn) & MASK64;
  return z ^ (z >> 31n);
}

export class SplitMix64 {
  private state: bigint;

  constructor(seed: number | bigint) {
    this.state = BigInt(seed) & MASK64;
  }

  nextU64(): bigint {
    this.state = (this.state + GOLDEN) & MASK64;
    return mix(this.state);
  }

  /** Uniform float in [0, 1) with 53 bits of randomness. */
  nextFloat(): number {
    return Number(this.nextU64() >> 11n) / 9007199254740992;
  }

  /** Uniform integer in [0, n), bias-free via rejection sampling. */
  below(n: number): number {
    if (n <= 0) throw new Error("bound must be positive");
    const bound = BigInt(n);
    const limit = (1n << 64n) - ((1n << 64n) % bound);
    for (;;) {
      const v = this.nextU64();
      if (v < limit) return Number(v % bound);
    }
  }

  /** In-place Fisher-Yates shuffle. */
  shuffle<T>(items: T[]): void {
    for (let i = items.length - 1; i > 0; i--) {
      const j = this.below(i + 1);
      [items[i], items[j]] = [items[j], items[i]];
    }
  }

  /** Standard normal via Box-Muller. */
  nextGaussian(): number {
    let u = 0;
    while (u === 0) u = this.nextFloat();
    const v = this.nextFloat();
    return Math.sqrt(-2 * Math.log(u)) * Math.cos(2 * Math.PI * v);
  }
}

export function deriveSeed(seed: number | bigint, ...tokens: string[]): bigint {
  let z = BigInt(seed) & MASK64;
  for (const tok of tokens) {
    let h = 0xcbf29ce484222325n;
    for (const byte of Buffer.from(tok, "utf-8")) {
      h = ((h ^ BigInt(byte)) * 0x100000001b3n) & MASK64;
    }
    z = mix((z ^ h) & MASK64);
  }
  return z;
}
