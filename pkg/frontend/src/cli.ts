#!/usr/bin/env node
/**
 * plots <kind> --in <csv> --out <png> [overlay flags]
 *
 * kinds: heatmap | snapshots | stochastic_map
 *
 * File-out only: rendering is a pure CSV -> PNG transformation with no
 * timestamps, so identical inputs give pixel-identical images.
 */

import { writeFileSync } from "node:fs";
import { HEATMAP_DEFAULTS, renderHeatmap } from "./heatmap.js";
import { SNAPSHOT_DEFAULTS, renderSnapshots } from "./snapshots.js";
import { STOCHMAP_DEFAULTS, renderStochMap } from "./stochmap.js";

interface Flags {
  [key: string]: string | boolean;
}

export function parseArgs(argv: string[]): { kind: string; flags: Flags } {
  if (argv.length === 0) {
    throw new Error("usage: plots <heatmap|snapshots|stochastic_map> --in <csv> --out <png>");
  }
  const [kind, ...rest] = argv;
  const flags: Flags = {};
  for (let i = 0; i < rest.length; i++) {
    const arg = rest[i];
    if (!arg.startsWith("--")) {
      throw new Error(`unexpected argument '${arg}'`);
    }
    const name = arg.slice(2);
    if (i + 1 < rest.length && !rest[i + 1].startsWith("--")) {
      flags[name] = rest[++i];
    } else {
      flags[name] = true;
    }
  }
  return { kind, flags };
}

function requireString(flags: Flags, name: string): string {
  const v = flags[name];
  if (typeof v !== "string") {
    throw new Error(`missing required flag --${name}`);
  }
  return v;
}

function numberFlag(flags: Flags, name: string, fallback: number): number {
  const v = flags[name];
  if (v === undefined || v === true) return fallback;
  const parsed = Number(v);
  if (!Number.isFinite(parsed)) {
    throw new Error(`--${name} expects a number, got '${v}'`);
  }
  return parsed;
}

export function render(kind: string, flags: Flags): Buffer {
  const input = requireString(flags, "in");
  switch (kind) {
    case "heatmap":
      return renderHeatmap({
        input,
        output: "",
        clip: numberFlag(flags, "clip", HEATMAP_DEFAULTS.clip),
        zeroContour: flags["no-zero-contour"] !== true,
        eradicationCurve: flags["eradication-curve"] === true,
        monostabilityLine: flags["monostability-line"] === true,
        demography: typeof flags["demography"] === "string"
          ? flags["demography"] : HEATMAP_DEFAULTS.demography,
        alleeThreshold: numberFlag(flags, "allee-threshold", HEATMAP_DEFAULTS.alleeThreshold),
        xLabel: typeof flags["xlabel"] === "string" ? flags["xlabel"] : HEATMAP_DEFAULTS.xLabel,
        yLabel: typeof flags["ylabel"] === "string" ? flags["ylabel"] : HEATMAP_DEFAULTS.yLabel,
        width: numberFlag(flags, "width", HEATMAP_DEFAULTS.width),
        height: numberFlag(flags, "height", HEATMAP_DEFAULTS.height),
      });
    case "snapshots":
      return renderSnapshots({
        input,
        output: "",
        panels: numberFlag(flags, "panels", SNAPSHOT_DEFAULTS.panels),
        width: numberFlag(flags, "width", SNAPSHOT_DEFAULTS.width),
        height: numberFlag(flags, "height", SNAPSHOT_DEFAULTS.height),
      });
    case "stochastic_map":
      return renderStochMap({
        input,
        output: "",
        xLabel: typeof flags["xlabel"] === "string" ? flags["xlabel"] : STOCHMAP_DEFAULTS.xLabel,
        yLabel: typeof flags["ylabel"] === "string" ? flags["ylabel"] : STOCHMAP_DEFAULTS.yLabel,
        width: numberFlag(flags, "width", STOCHMAP_DEFAULTS.width),
        height: numberFlag(flags, "height", STOCHMAP_DEFAULTS.height),
      });
    default:
      throw new Error(`unknown figure kind '${kind}'`);
  }
}

export function main(argv: string[]): number {
  try {
    const { kind, flags } = parseArgs(argv);
    const png = render(kind, flags);
    const out = requireString(flags, "out");
    writeFileSync(out, png);
    console.log(`wrote ${out} (${png.length} bytes)`);
    return 0;
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    return 1;
  }
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
