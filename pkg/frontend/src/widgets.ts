/**
 * Input widgets for log signature components: a 2-D pad for component
 * pairs and a slider for single components. Widgets display values pushed
 * from the controller and emit edits; they never transform the numbers.
 */

export interface PadWidget {
  element: HTMLElement;
  /** Show a pair of values; never triggers onInput. */
  setValues(x: number, y: number): void;
  setEnabled(enabled: boolean): void;
  /** Fires on pointer release with the pair the user chose. */
  onInput(callback: (x: number, y: number) => void): void;
}

export interface SliderWidget {
  element: HTMLElement;
  setValue(value: number): void;
  setEnabled(enabled: boolean): void;
  onInput(callback: (value: number) => void): void;
}

const PAD_SIZE = 140;
const KNOB_RADIUS = 6;

function clamp(v: number, lo: number, hi: number): number {
  return Math.min(hi, Math.max(lo, v));
}

function formatValue(v: number): string {
  return Math.abs(v) >= 100 ? v.toFixed(1) : v.toFixed(3);
}

/**
 * A square pad mapping [-range, range]^2 to its area, x rightward and
 * y upward. Values outside the range park the knob on the edge; the
 * readout always shows the exact numbers.
 */
export function createPad(labelX: string, labelY: string, range: number): PadWidget {
  const root = document.createElement('div');
  root.className = 'widget pad';
  const canvas = document.createElement('canvas');
  canvas.width = PAD_SIZE;
  canvas.height = PAD_SIZE;
  const readout = document.createElement('div');
  readout.className = 'readout';
  root.append(canvas, readout);

  const ctx = canvas.getContext('2d')!;
  let x = 0;
  let y = 0;
  let enabled = false;
  let dragging = false;
  let callback: ((x: number, y: number) => void) | null = null;

  function toPixel(value: number): number {
    return ((clamp(value, -range, range) + range) / (2 * range)) * PAD_SIZE;
  }

  function fromPixel(px: number): number {
    return (clamp(px, 0, PAD_SIZE) / PAD_SIZE) * 2 * range - range;
  }

  function draw() {
    ctx.clearRect(0, 0, PAD_SIZE, PAD_SIZE);
    ctx.fillStyle = enabled ? '#fafafa' : '#eeeeee';
    ctx.fillRect(0, 0, PAD_SIZE, PAD_SIZE);
    ctx.strokeStyle = '#cccccc';
    ctx.strokeRect(0.5, 0.5, PAD_SIZE - 1, PAD_SIZE - 1);
    ctx.beginPath();
    ctx.moveTo(PAD_SIZE / 2, 0);
    ctx.lineTo(PAD_SIZE / 2, PAD_SIZE);
    ctx.moveTo(0, PAD_SIZE / 2);
    ctx.lineTo(PAD_SIZE, PAD_SIZE / 2);
    ctx.stroke();
    ctx.beginPath();
    ctx.arc(toPixel(x), PAD_SIZE - toPixel(y), KNOB_RADIUS, 0, 2 * Math.PI);
    ctx.fillStyle = enabled ? '#1565c0' : '#9e9e9e';
    ctx.fill();
    readout.textContent = `${labelX}=${formatValue(x)}  ${labelY}=${formatValue(y)}`;
  }

  function pointerPair(event: PointerEvent): [number, number] {
    const rect = canvas.getBoundingClientRect();
    const px = ((event.clientX - rect.left) / rect.width) * PAD_SIZE;
    const py = ((event.clientY - rect.top) / rect.height) * PAD_SIZE;
    return [fromPixel(px), fromPixel(PAD_SIZE - py)];
  }

  canvas.addEventListener('pointerdown', (event) => {
    if (!enabled) return;
    dragging = true;
    canvas.setPointerCapture(event.pointerId);
    [x, y] = pointerPair(event);
    draw();
  });
  canvas.addEventListener('pointermove', (event) => {
    if (!dragging) return;
    [x, y] = pointerPair(event);
    draw();
  });
  canvas.addEventListener('pointerup', (event) => {
    if (!dragging) return;
    dragging = false;
    canvas.releasePointerCapture(event.pointerId);
    [x, y] = pointerPair(event);
    draw();
    if (callback) callback(x, y);
  });

  draw();
  return {
    element: root,
    setValues(nx: number, ny: number): void {
      if (dragging) return;
      x = nx;
      y = ny;
      draw();
    },
    setEnabled(value: boolean): void {
      enabled = value;
      if (!value) dragging = false;
      draw();
    },
    onInput(cb): void {
      callback = cb;
    },
  };
}

/** A labelled slider over [-range, range]; emits on release. */
export function createSlider(label: string, range: number): SliderWidget {
  const root = document.createElement('div');
  root.className = 'widget slider';
  const caption = document.createElement('span');
  caption.className = 'caption';
  caption.textContent = label;
  const input = document.createElement('input');
  input.type = 'range';
  input.min = String(-range);
  input.max = String(range);
  input.step = 'any';
  input.value = '0';
  input.disabled = true;
  const readout = document.createElement('span');
  readout.className = 'readout';
  root.append(caption, input, readout);

  let value = 0;
  let sliding = false;
  let callback: ((value: number) => void) | null = null;

  function draw() {
    readout.textContent = formatValue(value);
    if (!sliding) input.value = String(clamp(value, -range, range));
  }

  input.addEventListener('input', () => {
    sliding = true;
    value = Number(input.value);
    draw();
  });
  input.addEventListener('change', () => {
    sliding = false;
    value = Number(input.value);
    draw();
    if (callback) callback(value);
  });

  draw();
  return {
    element: root,
    setValue(v: number): void {
      if (sliding) return;
      value = v;
      draw();
    },
    setEnabled(enabled: boolean): void {
      input.disabled = !enabled;
      if (!enabled) sliding = false;
    },
    onInput(cb): void {
      callback = cb;
    },
  };
}
