import assert from "node:assert/strict";
import * as fs from "node:fs";
import * as path from "node:path";
import { test } from "node:test";

import { decodePng, encodePng, Image } from "../src/png";

const FIXTURES = path.join(__dirname, "..", "..", "tests", "fixtures");

function readExpected(): Record<string, { width: number; height: number; channels: number; data: number[] }> {
  return JSON.parse(fs.readFileSync(path.join(FIXTURES, "expected_pixels.json"), "utf-8"));
}

test("decodes a grayscale PNG written by an independent encoder", () => {
  const expected = readExpected()["gray_5x7"];
  const img = decodePng(fs.readFileSync(path.join(FIXTURES, "gray_5x7.png")));
  assert.equal(img.width, expected.width);
  assert.equal(img.height, expected.height);
  assert.equal(img.channels, expected.channels);
  assert.deepEqual(Array.from(img.data), expected.data);
});

test("decodes an RGB PNG written by an independent encoder", () => {
  const expected = readExpected()["rgb_4x6"];
  const img = decodePng(fs.readFileSync(path.join(FIXTURES, "rgb_4x6.png")));
  assert.equal(img.channels, 3);
  assert.deepEqual(Array.from(img.data), expected.data);
});

test("encode/decode round trip is bit-exact", () => {
  for (const channels of [1, 3] as const) {
    const width = 9;
    const height = 6;
    const data = new Uint8Array(width * height * channels);
    for (let i = 0; i < data.length; i++) data[i] = (i * 37 + 11) % 256;
    const img: Image = { width, height, channels, data };
    const back = decodePng(encodePng(img));
    assert.equal(back.width, width);
    assert.equal(back.height, height);
    assert.equal(back.channels, channels);
    assert.deepEqual(back.data, data);
  }
});

test("rejects non-PNG bytes", () => {
  assert.throws(() => decodePng(Buffer.from("definitely not a png")), /signature/);
});
