#!/usr/bin/env node
import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";
import {
  TASKS,
  TaskSpec,
  buildGolden,
  compileTask,
  expectedPath,
  goldenDir,
  goldenDrift,
  readExpected,
  runBinary,
  runInterpreter,
  toolchainAvailable,
} from "./harness.js";

function withTempDir<T>(prefix: string, body: (dir: string) => T): T {
  const dir = fs.mkdtempSync(path.join(os.tmpdir(), prefix));
  try {
    return body(dir);
  } finally {
    fs.rmSync(dir, { recursive: true, force: true });
  }
}

function updateTask(task: TaskSpec): void {
  fs.mkdirSync(goldenDir(task), { recursive: true });
  compileTask(task, goldenDir(task));
  const lines = withTempDir(`${task.name}-update-`, (dir) => {
    const binary = buildGolden(task, dir);
    return runBinary(task, binary);
  });
  fs.writeFileSync(expectedPath(task), lines.join("\n") + "\n");
  console.log(`updated: ${task.name} (${lines.length} expected lines)`);
}

function verifyTask(task: TaskSpec, buildAndRun: boolean): void {
  const drifts = goldenDrift(task);
  if (drifts.length === 0) {
    console.log(`OK: GOLDEN ${task.name}`);
  } else {
    for (const d of drifts) {
      console.error(`FAIL: GOLDEN ${task.name}/${d.file}`);
      console.error(d.detail);
    }
    process.exitCode = 1;
  }

  if (!buildAndRun) {
    console.log(`SKIP: BINARY ${task.name} (no C toolchain)`);
    return;
  }

  const expected = readExpected(task);
  const actual = withTempDir(`${task.name}-verify-`, (dir) => {
    const binary = buildGolden(task, dir);
    return runBinary(task, binary);
  });
  if (actual.join("\n") === expected.join("\n")) {
    console.log(`OK: BINARY ${task.name}`);
  } else {
    console.error(`FAIL: BINARY ${task.name}`);
    console.error("--- Actual ---");
    console.error(actual.join("\n"));
    console.error("--- Expected ---");
    console.error(expected.join("\n"));
    process.exitCode = 1;
  }

  const interp = runInterpreter(task);
  if (interp.join("\n") === actual.join("\n")) {
    console.log(`OK: INTERP ${task.name}`);
  } else {
    console.error(`FAIL: INTERP ${task.name} (binary and reference disagree)`);
    console.error("--- Binary ---");
    console.error(actual.join("\n"));
    console.error("--- Reference ---");
    console.error(interp.join("\n"));
    process.exitCode = 1;
  }
}

function main(): void {
  const update = process.argv.includes("--update");
  if (update) {
    for (const task of TASKS) updateTask(task);
    return;
  }
  const buildAndRun = toolchainAvailable();
  for (const task of TASKS) {
    try {
      verifyTask(task, buildAndRun);
    } catch (e: unknown) {
      const err = e as { message?: string };
      console.error(`ERROR: ${task.name}: ${err.message ?? String(e)}`);
      process.exitCode = 1;
    }
  }
}

main();
