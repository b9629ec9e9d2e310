import { spawnSync } from "node:child_process";
import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";
import { fileURLToPath } from "node:url";

// Compiled location is dist/src/harness.js, so the package root is two up.
const here = path.dirname(fileURLToPath(import.meta.url));
export const packageRoot = path.resolve(here, "..", "..");

export interface TaskSpec {
  readonly name: string;
  /** Emitted program uses a worker pool; its Makefile must carry -pthread. */
  readonly parallel: boolean;
  /** Value range passed explicitly when fixtures are not in the default (-1, 1). */
  readonly range?: readonly [number, number];
}

export const TASKS: readonly TaskSpec[] = [
  { name: "voicehd", parallel: false },
  { name: "mnist", parallel: true },
  { name: "emg", parallel: false, range: [0, 1] },
  { name: "languages", parallel: false },
];

// Stricter than the emitted Makefile default on purpose: golden programs must
// compile warning-free as pedantic C99. Overriding CFLAGS on the make command
// line is safe because -pthread is baked into the link recipe, not CFLAGS.
export const STRICT_CFLAGS = "-O2 -std=c99 -pedantic -Wall -Wextra -Werror";

export function taskDir(task: TaskSpec): string {
  return path.join(packageRoot, "tasks", task.name);
}

export function descriptionPath(task: TaskSpec): string {
  return path.join(taskDir(task), `${task.name}.hdcc`);
}

export function goldenDir(task: TaskSpec): string {
  return path.join(taskDir(task), "golden");
}

export function expectedPath(task: TaskSpec): string {
  return path.join(taskDir(task), "expected.txt");
}

export function goldenFiles(task: TaskSpec): readonly string[] {
  return [`${task.name}.c`, "hdc_runtime.h", "Makefile"];
}

export function fixturePaths(task: TaskSpec): readonly string[] {
  const dir = path.join(taskDir(task), "fixtures");
  return ["train_data", "train_labels", "test_data", "test_labels"].map(
    (stem) => path.join(dir, `${stem}.txt`),
  );
}

/** Compiler invocation, overridable as e.g. HDC2C="python3 -m hdc2c". */
export function compilerArgv(): readonly string[] {
  const override = process.env.HDC2C;
  if (override && override.trim().length > 0) {
    return override.trim().split(/\s+/);
  }
  return ["python3", "-m", "hdc2c"];
}

function run(argv: readonly string[], cwd?: string): string {
  const [cmd, ...rest] = argv;
  if (cmd === undefined) throw new Error("empty command");
  const res = spawnSync(cmd, rest, { encoding: "utf8", cwd, timeout: 120_000 });
  if (res.error) {
    throw new Error(`${cmd}: ${res.error.message}`);
  }
  if (res.status !== 0) {
    throw new Error(`${argv.join(" ")} exited ${res.status ?? "by signal"}\n${res.stderr}`);
  }
  return res.stdout;
}

export function compileTask(task: TaskSpec, outDir: string): void {
  run([...compilerArgv(), "compile", descriptionPath(task), "-o", outDir]);
}

export interface Drift {
  readonly file: string;
  readonly detail: string;
}

function firstDiff(expected: string, actual: string): string {
  const exp = expected.split("\n");
  const act = actual.split("\n");
  const n = Math.max(exp.length, act.length);
  for (let i = 0; i < n; i++) {
    if (exp[i] !== act[i]) {
      return `line ${i + 1}:\n  golden: ${exp[i] ?? "<absent>"}\n  actual: ${act[i] ?? "<absent>"}`;
    }
  }
  return "contents differ";
}

/** Recompile through the CLI and byte-compare against the committed golden. */
export function goldenDrift(task: TaskSpec): Drift[] {
  const tmp = fs.mkdtempSync(path.join(os.tmpdir(), `${task.name}-drift-`));
  try {
    compileTask(task, tmp);
    const drifts: Drift[] = [];
    for (const name of goldenFiles(task)) {
      const goldenFile = path.join(goldenDir(task), name);
      if (!fs.existsSync(goldenFile)) {
        drifts.push({ file: name, detail: "missing from golden/" });
        continue;
      }
      const golden = fs.readFileSync(goldenFile, "utf8");
      const fresh = fs.readFileSync(path.join(tmp, name), "utf8");
      if (golden !== fresh) {
        drifts.push({ file: name, detail: firstDiff(golden, fresh) });
      }
    }
    return drifts;
  } finally {
    fs.rmSync(tmp, { recursive: true, force: true });
  }
}

/** Copy the committed golden into workDir and build it with strict flags. */
export function buildGolden(task: TaskSpec, workDir: string): string {
  for (const name of goldenFiles(task)) {
    fs.copyFileSync(path.join(goldenDir(task), name), path.join(workDir, name));
  }
  run(["make", "-s", `CFLAGS=${STRICT_CFLAGS}`], workDir);
  return path.join(workDir, task.name);
}

// Timing lines vary run to run; predictions, accuracy, and the model digest
// are the deterministic part of the output contract.
export function stableLines(output: string): string[] {
  return output
    .split(/\r?\n/)
    .filter((line) => /^(acc=|dbg:digest=|dbg:pred=)/.test(line));
}

export function runBinary(task: TaskSpec, binary: string): string[] {
  const args = [...fixturePaths(task)];
  if (task.range) {
    args.push(String(task.range[0]), String(task.range[1]));
  }
  return stableLines(run([binary, ...args]));
}

/** Same task through the in-process reference path of the CLI. */
export function runInterpreter(task: TaskSpec): string[] {
  const args = [...compilerArgv(), "run", descriptionPath(task), ...fixturePaths(task)];
  if (task.range) {
    args.push("--range", String(task.range[0]), String(task.range[1]));
  }
  return stableLines(run(args));
}

export function readExpected(task: TaskSpec): string[] {
  return fs
    .readFileSync(expectedPath(task), "utf8")
    .split(/\r?\n/)
    .filter((line) => line.length > 0);
}

function hasTool(cmd: string): boolean {
  const res = spawnSync(cmd, ["--version"], { stdio: "ignore" });
  return res.error === undefined && res.status === 0;
}

export function toolchainAvailable(): boolean {
  return hasTool("cc") && hasTool("make");
}
