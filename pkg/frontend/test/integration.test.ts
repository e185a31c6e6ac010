/**
 * End-to-end checks against the real service: spawns `pathsig serve` on an
 * OS-assigned port and drives the controller through actual HTTP.
 */

import { spawn, type ChildProcess } from 'node:child_process';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { httpTransport, type Point } from '../src/api.js';
import { ExplorerController } from '../src/state.js';

let server: ChildProcess;
let baseUrl: string;

function startServer(): Promise<string> {
  return new Promise((resolve, reject) => {
    server = spawn('python3', ['-m', 'pathsig', 'serve', '--port', '0'], {
      stdio: ['ignore', 'pipe', 'pipe'],
    });
    let output = '';
    const timer = setTimeout(() => reject(new Error(`server never came up: ${output}`)), 20000);
    server.stdout!.on('data', (chunk: Buffer) => {
      output += chunk.toString();
      const match = output.match(/serving on (http:\/\/[^\s/]+)\//);
      if (match) {
        clearTimeout(timer);
        resolve(match[1]);
      }
    });
    server.stderr!.on('data', (chunk: Buffer) => {
      output += chunk.toString();
    });
    server.on('exit', (code) => {
      clearTimeout(timer);
      reject(new Error(`server exited early with code ${code}: ${output}`));
    });
  });
}

beforeAll(async () => {
  baseUrl = await startServer();
}, 30000);

afterAll(() => {
  server?.kill();
});

async function directLogsig(points: Point[]): Promise<number[]> {
  const response = await fetch(`${baseUrl}/api/logsig`, {
    method: 'POST',
    headers: { 'Content-Type': 'application/json' },
    body: JSON.stringify({ dim: 2, level: 4, points }),
  });
  expect(response.ok).toBe(true);
  return ((await response.json()) as { values: number[] }).values;
}

describe('explorer against the live service', () => {
  it('displayed components track /api/logsig through a drag sequence', async () => {
    const controller = new ExplorerController(httpTransport(baseUrl));
    await controller.refresh();

    const sequence: [number, Point][] = [
      [1, [1.2, 0.1]],
      [2, [0.9, 1.3]],
      [3, [-0.2, 0.8]],
      [1, [1.0, -0.4]],
      [4, [0.3, 0.2]],
    ];
    for (const [index, position] of sequence) {
      await controller.moveVertex(index, position);
      const view = controller.view();
      expect(view.serviceDown).toBe(false);
      expect(view.components).not.toBeNull();
      expect(view.components).toEqual(await directLogsig(view.points));
    }
  });

  it('collapsing the path zeroes every component', async () => {
    const controller = new ExplorerController(httpTransport(baseUrl), [
      [0.4, 0.4],
      [0.4, 0.4],
      [0.4, 0.4],
      [0.4, 0.4],
      [0.4, 0.4],
    ]);
    await controller.refresh();
    expect(controller.view().components).toEqual([0, 0, 0, 0, 0, 0, 0, 0]);
  });

  it('solve steers the signed-area component to its target', async () => {
    const controller = new ExplorerController(httpTransport(baseUrl));
    await controller.refresh();
    const before = controller.view().components!;
    expect(before[2]).toBeCloseTo(1.0, 9); // unit square area

    controller.setSolveEnabled(true);
    const target = before[2] + 0.1;
    await controller.adjustComponent(2, target);

    const view = controller.view();
    expect(view.solveWarning).toBeNull();
    expect(view.components).not.toBeNull();
    expect(Math.abs(view.components![2] - target)).toBeLessThan(1e-4);
    // displayed components are the service's reading of the rendered path
    expect(view.components).toEqual(await directLogsig(view.points));
    // the anchor vertex stayed put
    expect(view.points[0]).toEqual([0, 0]);
  }, 20000);

  it('solving for the current components is a fixed point', async () => {
    const start: Point[] = [[0, 0], [1, 0.2], [0.6, 1], [-0.3, 0.7], [0.1, 0]];
    const controller = new ExplorerController(httpTransport(baseUrl), start);
    await controller.refresh();
    const before = controller.view();
    controller.setSolveEnabled(true);
    await controller.adjustComponent(4, before.components![4]);
    const after = controller.view();
    expect(after.solveWarning).toBeNull();
    for (let i = 0; i < start.length; i++) {
      expect(after.points[i][0]).toBeCloseTo(before.points[i][0], 9);
      expect(after.points[i][1]).toBeCloseTo(before.points[i][1], 9);
    }
  });
});
