/** Shared test plumbing: a canned-response fetch stub for contract tests,
 * and a real `sufa serve` process for end-to-end tests. */

import { execFile, spawn, ChildProcess } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { get as httpGet } from "node:http";
import { tmpdir } from "node:os";
import { dirname, join, resolve } from "node:path";
import { fileURLToPath } from "node:url";
import { promisify } from "node:util";

const execFileAsync = promisify(execFile);

export const REPO_ROOT = resolve(dirname(fileURLToPath(import.meta.url)), "..", "..");
export const PYTHON = process.env.PYTHON ?? "python3";

export function jsonResponse(body: unknown, status = 200): Response {
  return {
    ok: status >= 200 && status < 300,
    status,
    json: async () => body,
    text: async () => JSON.stringify(body),
  } as unknown as Response;
}

export function textResponse(body: string, status = 200): Response {
  return {
    ok: status >= 200 && status < 300,
    status,
    json: async () => JSON.parse(body),
    text: async () => body,
  } as unknown as Response;
}

export interface CannedFetch {
  fetch: typeof fetch;
  calls: { url: string; init?: RequestInit }[];
}

/** Routes "METHOD path" to a canned response (or a function producing one). */
export function cannedFetch(
  routes: Record<string, Response | ((init?: RequestInit) => Response)>,
): CannedFetch {
  const calls: { url: string; init?: RequestInit }[] = [];
  const impl = (async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input);
    calls.push({ url, init });
    const method = (init?.method ?? "GET").toUpperCase();
    const path = url.replace(/^https?:\/\/[^/]+/, "");
    const key = `${method} ${path}`;
    const exact = routes[key];
    if (exact) {
      return typeof exact === "function" ? exact(init) : exact;
    }
    const withoutQuery = `${method} ${path.split("?")[0]}`;
    const loose = routes[withoutQuery];
    if (loose) {
      return typeof loose === "function" ? loose(init) : loose;
    }
    throw new Error(`no canned route for ${key}`);
  }) as typeof fetch;
  return { fetch: impl, calls };
}

export async function runCli(args: string[]): Promise<string> {
  const { stdout } = await execFileAsync(PYTHON, ["-m", "sufa.cli", ...args], {
    cwd: REPO_ROOT,
    maxBuffer: 16 * 1024 * 1024,
  });
  return stdout;
}

export interface LiveServer {
  base: string;
  port: number;
  workDir: string;
  process: ChildProcess;
  stop: () => Promise<void>;
}

/** Ingest the fixture corpus with the cc-augmented lexicons and serve it. */
export async function startServer(): Promise<LiveServer> {
  const workDir = mkdtempSync(join(tmpdir(), "sufa-ui-test-"));
  const corpus = join(workDir, "corpus.json");
  const lexicons = resolve(REPO_ROOT, "frontend", "tests", "fixtures", "lexicons_with_cc.json");
  await runCli([
    "ingest", resolve(REPO_ROOT, "tests", "fixtures", "corpus", "news.conllu"),
    "--meta", resolve(REPO_ROOT, "tests", "fixtures", "corpus", "meta.json"),
    "--lexicons", lexicons,
    "--out", corpus,
  ]);

  const port = 8300 + Math.floor(Math.random() * 500);
  const child = spawn(PYTHON, [
    "-m", "sufa.cli", "serve",
    "--corpus", corpus,
    "--lexicons", lexicons,
    "--sessions", join(workDir, "sessions"),
    "--vectors", resolve(REPO_ROOT, "tests", "fixtures", "toy_vectors_8d.txt"),
    "--port", String(port),
  ], { cwd: REPO_ROOT, stdio: ["ignore", "pipe", "pipe"] });

  let stderr = "";
  child.stderr?.on("data", (chunk) => { stderr += String(chunk); });

  const base = `http://127.0.0.1:${port}`;
  const healthy = () => new Promise<boolean>((resolvePoll) => {
    const request = httpGet(`${base}/health`, (response) => {
      response.resume();
      resolvePoll(response.statusCode === 200);
    });
    request.on("error", () => resolvePoll(false));
  });
  const deadline = Date.now() + 30_000;
  for (;;) {
    if (child.exitCode !== null) {
      throw new Error(`server exited early: ${stderr}`);
    }
    if (await healthy()) break;
    if (Date.now() > deadline) {
      child.kill();
      throw new Error(`server did not come up: ${stderr}`);
    }
    await new Promise((r) => setTimeout(r, 250));
  }

  return {
    base,
    port,
    workDir,
    process: child,
    stop: async () => {
      child.kill("SIGTERM");
      await new Promise((r) => setTimeout(r, 300));
      if (child.exitCode === null) child.kill("SIGKILL");
    },
  };
}
