import { spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, describe, expect, it } from "vitest";

import {
  ddclGradient,
  mcvqeGradient,
  parseResultBuffer,
  readBufferDump,
} from "../src/index.js";

const python = process.env.QVIRT_PYTHON ?? "python3";
const scratch = mkdtempSync(join(tmpdir(), "qvirt-test-"));

afterAll(() => rmSync(scratch, { recursive: true, force: true }));

/** Run the CLI directly, bypassing the bindings, and read its gradient dump. */
function nativeGradientDump(args: string[]): { gradient: number[]; wall_time_s: number } {
  const path = join(scratch, `native-${Math.random().toString(36).slice(2)}.json`);
  const proc = spawnSync(python, [
    "-m", "qvirt.cli", ...args,
    "--reps", "1", "--out", join(scratch, "native.csv"), "--dump-gradient", path,
  ], { encoding: "utf8" });
  expect(proc.status).toBe(0);
  return JSON.parse(readFileSync(path, "utf8"));
}

describe("gradient bindings", () => {
  it("reproduces the native CLI gradient bitwise (n=4, seed 7)", () => {
    const started = performance.now();
    const bound = mcvqeGradient(4, 7);
    const boundWall = (performance.now() - started) / 1000;
    const native = nativeGradientDump(["mcvqe-grad", "--qubits", "4", "--seed", "7",
      "--n-virtual-qpus", "1"]);

    expect(bound.gradient.length).toBe(16);
    expect(bound.gradient.length).toBe(native.gradient.length);
    bound.gradient.forEach((value, k) => {
      expect(Object.is(value, native.gradient[k]), `component ${k}`).toBe(true);
    });

    // Informational only: how much process/startup overhead the binding adds
    // on top of the native parallel-execution span.
    const ratio = boundWall / bound.wallTimeS;
    console.log(`binding overhead: ${boundWall.toFixed(3)}s total vs ` +
      `${bound.wallTimeS.toFixed(3)}s native execution (${ratio.toFixed(1)}x)`);
    expect(ratio).toBeGreaterThan(0);
  });

  it("is worker-count invariant", () => {
    const serial = mcvqeGradient(3, 5, 1);
    const pooled = mcvqeGradient(3, 5, 4);
    expect(pooled.gradient).toEqual(serial.gradient);
    expect(pooled.executions).toBe(serial.executions);
  });

  it("reports the closed-form execution counts", () => {
    expect(mcvqeGradient(4, 0).executions).toBe(640);
    expect(ddclGradient(2, 1, 64, 0).executions).toBe(24);
  });

  it("sampled gradients are seed-deterministic", () => {
    const first = ddclGradient(2, 1, 256, 9);
    const again = ddclGradient(2, 1, 256, 9);
    expect(again.gradient).toEqual(first.gradient);
    expect(first.gradient.length).toBe(12);
  });

  it("surfaces native errors as exceptions", () => {
    expect(() => mcvqeGradient(1, 0)).toThrowError(/at least 2/);
    expect(() => ddclGradient(3, 1, 64, 0)).toThrowError(/even/);
    expect(() => ddclGradient(4, 0, 64, 0)).toThrowError(/layers/);
  });
});

describe("result-buffer accessor", () => {
  it("parses a buffer dumped through a gradient run", () => {
    const path = join(scratch, "buffer.txt");
    const report = mcvqeGradient(2, 3, 2, { dumpBufferTo: path });
    const buffer = readBufferDump(path);
    expect(buffer.nQubits).toBe(2);
    expect(buffer.metadata.vqpu_count).toBe(2);
    expect(buffer.children.length).toBe(report.executions);
    expect(buffer.children[0].name).toBe("k0+ X0");
    for (const child of buffer.children) {
      expect(typeof child.expectation).toBe("number");
    }
  });

  it("round-trips counts and probabilities", () => {
    const text = [
      "qvirt-buffer v1",
      "nqubits 2",
      "meta vqpu_count 1",
      "child sampled run",
      "shots 8",
      "count 01 3",
      "count 10 5",
      "child exact run",
      "prob 00 0.5",
      "prob 11 0.5",
      "",
    ].join("\n");
    const buffer = parseResultBuffer(text);
    expect(buffer.children).toHaveLength(2);
    expect(buffer.children[0].name).toBe("sampled run");
    expect(buffer.children[0].counts).toEqual({ "01": 3, "10": 5 });
    expect(buffer.children[1].distribution).toEqual({ "00": 0.5, "11": 0.5 });
  });

  it("rejects text that is not a buffer dump", () => {
    expect(() => parseResultBuffer("nonsense\n")).toThrowError(/not a result-buffer/);
    expect(() => parseResultBuffer("qvirt-buffer v1\nshots 4\n")).toThrowError(/before any child/);
  });
});
