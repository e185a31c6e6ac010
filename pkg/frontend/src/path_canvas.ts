/**
 * The path editor: five draggable vertices joined by straight segments.
 * The viewport rescales itself to keep the whole figure visible, so solver
 * outputs that wander off never disappear from view.
 */

import type { Point } from './api.js';

export interface PathCanvas {
  element: HTMLCanvasElement;
  setPoints(points: Point[]): void;
  setEditable(editable: boolean): void;
  /** Continuous position reports while a vertex is dragged. */
  onDrag(callback: (index: number, position: Point) => void): void;
  /** One report when the pointer is released. */
  onRelease(callback: (index: number, position: Point) => void): void;
}

const WIDTH = 420;
const HEIGHT = 420;
const MARGIN = 36;
const HANDLE_RADIUS = 7;

interface Viewport {
  minX: number;
  minY: number;
  scale: number;
}

function fitViewport(points: Point[]): Viewport {
  let minX = Infinity;
  let maxX = -Infinity;
  let minY = Infinity;
  let maxY = -Infinity;
  for (const [x, y] of points) {
    minX = Math.min(minX, x);
    maxX = Math.max(maxX, x);
    minY = Math.min(minY, y);
    maxY = Math.max(maxY, y);
  }
  const spanX = Math.max(maxX - minX, 1e-6);
  const spanY = Math.max(maxY - minY, 1e-6);
  const scale = Math.min((WIDTH - 2 * MARGIN) / spanX, (HEIGHT - 2 * MARGIN) / spanY);
  // center the figure
  const padX = (WIDTH / scale - spanX) / 2;
  const padY = (HEIGHT / scale - spanY) / 2;
  return { minX: minX - padX, minY: minY - padY, scale };
}

export function createPathCanvas(): PathCanvas {
  const canvas = document.createElement('canvas');
  canvas.width = WIDTH;
  canvas.height = HEIGHT;
  canvas.className = 'path-canvas';
  const ctx = canvas.getContext('2d')!;

  let points: Point[] = [];
  let viewport: Viewport = { minX: -1, minY: -1, scale: 100 };
  let editable = true;
  let draggingIndex = -1;
  let dragCallback: ((index: number, position: Point) => void) | null = null;
  let releaseCallback: ((index: number, position: Point) => void) | null = null;

  function toScreen([x, y]: Point): [number, number] {
    return [(x - viewport.minX) * viewport.scale, HEIGHT - (y - viewport.minY) * viewport.scale];
  }

  function toWorld(sx: number, sy: number): Point {
    return [sx / viewport.scale + viewport.minX, (HEIGHT - sy) / viewport.scale + viewport.minY];
  }

  function draw() {
    ctx.clearRect(0, 0, WIDTH, HEIGHT);
    ctx.fillStyle = '#ffffff';
    ctx.fillRect(0, 0, WIDTH, HEIGHT);

    // axes through the world origin, when visible
    const [ox, oy] = toScreen([0, 0]);
    ctx.strokeStyle = '#e0e0e0';
    ctx.lineWidth = 1;
    ctx.beginPath();
    if (oy >= 0 && oy <= HEIGHT) {
      ctx.moveTo(0, oy);
      ctx.lineTo(WIDTH, oy);
    }
    if (ox >= 0 && ox <= WIDTH) {
      ctx.moveTo(ox, 0);
      ctx.lineTo(ox, HEIGHT);
    }
    ctx.stroke();

    if (points.length === 0) return;
    ctx.strokeStyle = '#1565c0';
    ctx.lineWidth = 2;
    ctx.beginPath();
    points.forEach((p, i) => {
      const [sx, sy] = toScreen(p);
      if (i === 0) ctx.moveTo(sx, sy);
      else ctx.lineTo(sx, sy);
    });
    ctx.stroke();

    points.forEach((p, i) => {
      const [sx, sy] = toScreen(p);
      ctx.beginPath();
      ctx.arc(sx, sy, HANDLE_RADIUS, 0, 2 * Math.PI);
      ctx.fillStyle = i === 0 ? '#2e7d32' : editable ? '#1565c0' : '#9e9e9e';
      ctx.fill();
      ctx.fillStyle = '#ffffff';
      ctx.font = '9px sans-serif';
      ctx.textAlign = 'center';
      ctx.textBaseline = 'middle';
      ctx.fillText(String(i), sx, sy);
    });
  }

  function pointerScreen(event: PointerEvent): [number, number] {
    const rect = canvas.getBoundingClientRect();
    return [
      ((event.clientX - rect.left) / rect.width) * WIDTH,
      ((event.clientY - rect.top) / rect.height) * HEIGHT,
    ];
  }

  function hitTest(sx: number, sy: number): number {
    for (let i = points.length - 1; i >= 0; i--) {
      const [px, py] = toScreen(points[i]);
      if ((px - sx) ** 2 + (py - sy) ** 2 <= (HANDLE_RADIUS + 4) ** 2) return i;
    }
    return -1;
  }

  canvas.addEventListener('pointerdown', (event) => {
    if (!editable) return;
    const [sx, sy] = pointerScreen(event);
    draggingIndex = hitTest(sx, sy);
    if (draggingIndex >= 0) canvas.setPointerCapture(event.pointerId);
  });
  canvas.addEventListener('pointermove', (event) => {
    if (draggingIndex < 0) return;
    const [sx, sy] = pointerScreen(event);
    const position = toWorld(sx, sy);
    points[draggingIndex] = position;
    draw(); // keep the viewport fixed mid-drag so the handle tracks the pointer
    if (dragCallback) dragCallback(draggingIndex, position);
  });
  canvas.addEventListener('pointerup', (event) => {
    if (draggingIndex < 0) return;
    const index = draggingIndex;
    draggingIndex = -1;
    canvas.releasePointerCapture(event.pointerId);
    const [sx, sy] = pointerScreen(event);
    const position = toWorld(sx, sy);
    points[index] = position;
    viewport = fitViewport(points);
    draw();
    if (releaseCallback) releaseCallback(index, position);
  });

  return {
    element: canvas,
    setPoints(next: Point[]): void {
      points = next.map((p) => [p[0], p[1]] as Point);
      if (draggingIndex < 0) viewport = fitViewport(points);
      draw();
    },
    setEditable(value: boolean): void {
      editable = value;
      if (!value) draggingIndex = -1;
      draw();
    },
    onDrag(callback): void {
      dragCallback = callback;
    },
    onRelease(callback): void {
      releaseCallback = callback;
    },
  };
}
