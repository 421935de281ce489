/**
 * Harness entry point. With --url=http://host:port it drives an already
 * running service; otherwise it spawns one on a free port, waits for
 * readiness, runs every scenario and shuts the service down again.
 * Exit status is nonzero when any scenario fails.
 */

import { ChildProcess, spawn } from 'node:child_process';
import * as net from 'node:net';
import * as path from 'node:path';

import { runScenarios } from './harness';

const BINDINGS_PATH = path.join(__dirname, '..', 'src', 'generated.ts');

function freePort(): Promise<number> {
  return new Promise((resolvePort, reject) => {
    const probe = net.createServer();
    probe.once('error', reject);
    probe.listen(0, '127.0.0.1', () => {
      const address = probe.address();
      if (address === null || typeof address === 'string') {
        reject(new Error('no port assigned'));
        return;
      }
      probe.close(() => resolvePort(address.port));
    });
  });
}

async function waitReady(baseUrl: string, timeoutMs: number): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const reply = await fetch(baseUrl + '/model/@type');
      if (reply.ok) {
        await reply.text();
        return;
      }
    } catch {
      // not listening yet
    }
    await new Promise((r) => setTimeout(r, 100));
  }
  throw new Error(`service at ${baseUrl} not ready within ${timeoutMs}ms`);
}

function stopService(child: ChildProcess): Promise<void> {
  return new Promise((resolveExit) => {
    const fallback = setTimeout(() => child.kill('SIGKILL'), 5000);
    child.once('exit', () => {
      clearTimeout(fallback);
      resolveExit();
    });
    child.kill('SIGINT');
  });
}

async function main(): Promise<number> {
  const urlArg = process.argv.find((arg) => arg.startsWith('--url='));
  let child: ChildProcess | undefined;
  let baseUrl: string;

  if (urlArg !== undefined) {
    baseUrl = urlArg.slice('--url='.length).replace(/\/+$/, '');
  } else {
    const port = await freePort();
    baseUrl = `http://127.0.0.1:${port}`;
    child = spawn('python3', ['-m', 'fatgate', 'serve', '--port', String(port)], {
      stdio: ['ignore', 'ignore', 'inherit'],
    });
  }

  try {
    await waitReady(baseUrl, 15000);
    const failures = await runScenarios({ baseUrl, bindingsPath: BINDINGS_PATH });
    console.log(failures === 0 ? 'all scenarios passed' : `${failures} scenario(s) failed`);
    return failures === 0 ? 0 : 1;
  } finally {
    if (child !== undefined) {
      await stopService(child);
    }
  }
}

main().then(
  (code) => process.exit(code),
  (err) => {
    console.error(err instanceof Error ? err.message : String(err));
    process.exit(1);
  },
);
