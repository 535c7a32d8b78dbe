import { describe, expect, it } from "vitest";
import { inflateSync } from "node:zlib";
import { encodePng } from "../src/png.js";

function chunkTypes(png: Buffer): string[] {
  const types: string[] = [];
  let offset = 8;
  while (offset < png.length) {
    const length = png.readUInt32BE(offset);
    types.push(png.subarray(offset + 4, offset + 8).toString("ascii"));
    offset += 12 + length;
  }
  return types;
}

describe("png encoder", () => {
  it("writes a valid signature and chunk layout", () => {
    const png = encodePng(3, 2, new Uint8Array(3 * 2 * 3));
    expect([...png.subarray(0, 8)]).toEqual([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]);
    expect(chunkTypes(png)).toEqual(["IHDR", "IDAT", "IEND"]);
    expect(png.readUInt32BE(16)).toBe(3); // width
    expect(png.readUInt32BE(20)).toBe(2); // height
  });

  it("round-trips pixel data through the IDAT stream", () => {
    const pixels = new Uint8Array([255, 0, 0, 0, 255, 0, 0, 0, 255, 10, 20, 30, 0, 0, 0, 200, 200, 200]);
    const png = encodePng(2, 3, pixels);
    const idatLength = png.readUInt32BE(8 + 25);
    const idat = png.subarray(8 + 25 + 8, 8 + 25 + 8 + idatLength);
    const raw = inflateSync(idat);
    // 3 rows of filter byte + 6 pixel bytes
    expect(raw.length).toBe(3 * 7);
    expect([...raw.subarray(1, 7)]).toEqual([255, 0, 0, 0, 255, 0]);
  });

  it("is deterministic", () => {
    const pixels = new Uint8Array(12 * 9 * 3).map((_, i) => (i * 37) % 256);
    const a = encodePng(12, 9, pixels);
    const b = encodePng(12, 9, pixels);
    expect(a.equals(b)).toBe(true);
  });

  it("rejects a mis-sized buffer", () => {
    expect(() => encodePng(4, 4, new Uint8Array(5))).toThrow(/expected/);
  });
});
