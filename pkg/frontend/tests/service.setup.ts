/**
 * Boots the fixture-backed workbench service once for the whole test run.
 *
 * The fixture tree is copied to a scratch directory first so saves and
 * imports never touch the committed files. Tests receive the base URL via
 * vitest's provide/inject channel.
 */

import { spawn, type ChildProcess } from "node:child_process";
import { cpSync, mkdtempSync, rmSync } from "node:fs";
import { createServer } from "node:net";
import { tmpdir } from "node:os";
import { dirname, join, resolve } from "node:path";
import { fileURLToPath } from "node:url";

const HERE = dirname(fileURLToPath(import.meta.url));


const FIXTURES = resolve(HERE, "..", "..", "tests", "fixtures");

function freePort(): Promise<number> {
  return new Promise((resolvePort, reject) => {
    const server = createServer();
    server.once("error", reject);
    server.listen(0, "127.0.0.1", () => {
      const address = server.address();
      if (address === null || typeof address === "string") {
        reject(new Error("no port assigned"));
        return;
      }
      const port = address.port;
      server.close(() => resolvePort(port));
    });
  });
}

async function waitForService(url: string, timeoutMs: number): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  let lastError: unknown = null;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${url}/api/sources`);
      if (response.ok) {
        return;
      }
      lastError = new Error(`status ${response.status}`);
    } catch (error) {
      lastError = error;
    }
    await new Promise((r) => setTimeout(r, 150));
  }
  throw new Error(`service did not come up at ${url}: ${lastError}`);
}

export default async function setup(project: {
  provide: (key: string, value: unknown) => void;
}): Promise<() => Promise<void>> {
  const scratch = mkdtempSync(join(tmpdir(), "mindforge-ui-"));
  const fixtureCopy = join(scratch, "fixtures");
  cpSync(FIXTURES, fixtureCopy, { recursive: true });

  const port = await freePort();
  const url = `http://127.0.0.1:${port}`;
  const child: ChildProcess = spawn(
    "python3",
    ["-m", "mindforge.cli", "serve",
     "--config", join(fixtureCopy, "service_config.toml"),
     "--host", "127.0.0.1", "--port", String(port)],
    { stdio: ["ignore", "pipe", "pipe"] },
  );
  const stderrChunks: Buffer[] = [];
  child.stderr?.on("data", (chunk: Buffer) => stderrChunks.push(chunk));
  child.on("exit", (code) => {
    if (code !== null && code !== 0) {
      console.error("service exited early:", Buffer.concat(stderrChunks).toString());
    }
  });

  try {
    await waitForService(url, 30000);
  } catch (error) {
    child.kill("SIGKILL");
    throw error;
  }

  project.provide("serviceUrl", url);

  return async () => {
    child.kill("SIGTERM");
    await new Promise((r) => setTimeout(r, 300));
    if (child.exitCode === null) {
      child.kill("SIGKILL");
    }
    rmSync(scratch, { recursive: true, force: true });
  };
}
