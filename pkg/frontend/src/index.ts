/**
 * Typed client for the `qvirt` benchmark CLI.
 *
 * Each gradient call spawns one CLI run (`python3 -m qvirt.cli ...`) with a
 * single repetition and reads the gradient report the CLI dumps as JSON.
 * Python emits floats in shortest round-trip notation, so the numbers parsed
 * here are bit-identical to the native float64 values — equal seeds give
 * equal gradients, at any worker count, down to the last bit.
 */

import { spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

/** One gradient run: the vector itself plus the execution-count/time record. */
export interface GradientReport {
  gradient: number[];
  /** Circuits the run executed (two parameter shifts per entry of the batch). */
  executions: number;
  /** Native wall time of the parallel-execution span, in seconds. */
  wallTimeS: number;
}

export interface RunOptions {
  /** Python interpreter with the `qvirt` package installed (default `python3`, or $QVIRT_PYTHON). */
  pythonBin?: string;
  /** Also write the run's result buffer (text format) to this path. */
  dumpBufferTo?: string;
}

/** A per-circuit record parsed back out of a result-buffer dump. */
export interface BufferChild {
  name: string;
  shots: number;
  expectation?: number;
  counts?: Record<string, number>;
  distribution?: Record<string, number>;
}

export interface ResultBuffer {
  nQubits: number;
  metadata: Record<string, unknown>;
  children: BufferChild[];
}

interface GradientDump {
  gradient: number[];
  n_circuit_executions: number;
  wall_time_s: number;
}

function runCli(args: string[], options: RunOptions): GradientDump {
  const python = options.pythonBin ?? process.env.QVIRT_PYTHON ?? "python3";
  const scratch = mkdtempSync(join(tmpdir(), "qvirt-"));
  try {
    const gradientPath = join(scratch, "gradient.json");
    const argv = [
      "-m", "qvirt.cli", ...args,
      "--reps", "1",
      "--out", join(scratch, "bench.csv"),
      "--dump-gradient", gradientPath,
    ];
    if (options.dumpBufferTo !== undefined) {
      argv.push("--dump-buffer", options.dumpBufferTo);
    }
    const proc = spawnSync(python, argv, { encoding: "utf8" });
    if (proc.error) {
      throw new Error(`failed to spawn ${python}: ${proc.error.message}`);
    }
    if (proc.status !== 0) {
      const detail = (proc.stderr || proc.stdout || "").trim();
      throw new Error(`qvirt exited with status ${proc.status}: ${detail}`);
    }
    return JSON.parse(readFileSync(gradientPath, "utf8")) as GradientDump;
  } finally {
    rmSync(scratch, { recursive: true, force: true });
  }
}

function toReport(dump: GradientDump): GradientReport {
  return {
    gradient: dump.gradient,
    executions: dump.n_circuit_executions,
    wallTimeS: dump.wall_time_s,
  };
}

/**
 * Gradient of the chain-Hamiltonian variational energy (exact expectations).
 * Coefficients, reference amplitudes, and angles all derive from `seed`
 * exactly as in the native CLI. Invalid shapes (e.g. `nQubits < 2`) surface
 * as exceptions carrying the CLI's error text.
 */
export function mcvqeGradient(
  nQubits: number,
  seed: number,
  nVqpus = 1,
  options: RunOptions = {},
): GradientReport {
  return toReport(runCli([
    "mcvqe-grad",
    "--qubits", String(nQubits),
    "--seed", String(seed),
    "--n-virtual-qpus", String(nVqpus),
  ], options));
}

/**
 * Gradient of the sampled circuit-learning loss (Jensen–Shannon divergence
 * against a seeded random target), `shots` samples per circuit.
 */
export function ddclGradient(
  nQubits: number,
  layers: number,
  shots: number,
  seed: number,
  nVqpus = 1,
  options: RunOptions = {},
): GradientReport {
  return toReport(runCli([
    "ddcl-grad",
    "--qubits", String(nQubits),
    "--layers", String(layers),
    "--shots", String(shots),
    "--seed", String(seed),
    "--n-virtual-qpus", String(nVqpus),
  ], options));
}

/** Parse a result-buffer dump (the CLI's `--dump-buffer` text format). */
export function parseResultBuffer(text: string): ResultBuffer {
  const lines = text.split("\n");
  if (lines[0] !== "qvirt-buffer v1") {
    throw new Error(`not a result-buffer dump: ${JSON.stringify(lines[0])}`);
  }
  const buffer: ResultBuffer = { nQubits: 0, metadata: {}, children: [] };
  let current: BufferChild | undefined;
  for (let i = 1; i < lines.length; i++) {
    const line = lines[i];
    if (line === "") continue;
    const space = line.indexOf(" ");
    const keyword = space < 0 ? line : line.slice(0, space);
    const rest = space < 0 ? "" : line.slice(space + 1);
    switch (keyword) {
      case "nqubits":
        buffer.nQubits = Number(rest);
        break;
      case "meta": {
        const metaSpace = rest.indexOf(" ");
        if (metaSpace < 0) throw new Error(`line ${i + 1}: malformed meta line`);
        buffer.metadata[rest.slice(0, metaSpace)] = JSON.parse(rest.slice(metaSpace + 1));
        break;
      }
      case "child":
        current = { name: rest, shots: 0 };
        buffer.children.push(current);
        break;
      case "shots":
      case "expectation":
      case "count":
      case "prob": {
        if (!current) throw new Error(`line ${i + 1}: ${keyword} before any child`);
        if (keyword === "shots") {
          current.shots = Number(rest);
        } else if (keyword === "expectation") {
          current.expectation = Number(rest);
        } else {
          const [bits, value] = rest.split(" ");
          const field = keyword === "count" ? "counts" : "distribution";
          (current[field] ??= {})[bits] = Number(value);
        }
        break;
      }
      default:
        throw new Error(`line ${i + 1}: unknown keyword ${JSON.stringify(keyword)}`);
    }
  }
  return buffer;
}

/** Read and parse a result-buffer dump from disk. */
export function readBufferDump(path: string): ResultBuffer {
  return parseResultBuffer(readFileSync(path, "utf8"));
}
