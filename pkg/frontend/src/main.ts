/**
 * Explorer assembly: path editor on the left, log signature widgets on the
 * right, a solve toggle between them.
 *
 * Widget layout: the level-1 pair and level-3 pair are 2-D pads, the
 * level-2 coordinate and the three level-4 coordinates are sliders. With
 * solve off, dragging path vertices streams throttled requests and the
 * widgets follow; with solve on, the widgets become inputs and each edit
 * asks the service for a path realizing the changed coordinate.
 */

import { httpTransport } from './api.js';
import { createPathCanvas } from './path_canvas.js';
import { DEFAULT_POINTS, ExplorerController } from './state.js';
import { throttle } from './throttle.js';
import { createPad, createSlider } from './widgets.js';

const DRAG_INTERVAL_MS = 34; // ~30 requests per second

const controller = new ExplorerController(httpTransport(), DEFAULT_POINTS);

const root = document.getElementById('app')!;
const layout = document.createElement('div');
layout.className = 'layout';
root.append(layout);

const banner = document.createElement('div');
banner.className = 'banner hidden';
root.prepend(banner);

const pathCanvas = createPathCanvas();
const left = document.createElement('div');
left.className = 'left';
left.append(pathCanvas.element);

const right = document.createElement('div');
right.className = 'right';

const solveRow = document.createElement('label');
solveRow.className = 'solve-row';
const solveBox = document.createElement('input');
solveBox.type = 'checkbox';
solveRow.append(solveBox, document.createTextNode(' solve'));
right.append(solveRow);

const warning = document.createElement('div');
warning.className = 'warning hidden';
right.append(warning);

// widget order mirrors the component order 1, 2, 12, 112, 122, 1112, 1122, 1222
const levelOnePad = createPad('1', '2', 3);
const areaSlider = createSlider('12', 2);
const levelThreePad = createPad('112', '122', 1);
const levelFourSliders = [createSlider('1112', 0.5), createSlider('1122', 0.5), createSlider('1222', 0.5)];

right.append(levelOnePad.element, areaSlider.element, levelThreePad.element);
for (const slider of levelFourSliders) right.append(slider.element);
layout.append(left, right);

const componentWidgets = {
  setEnabled(enabled: boolean) {
    levelOnePad.setEnabled(enabled);
    areaSlider.setEnabled(enabled);
    levelThreePad.setEnabled(enabled);
    for (const slider of levelFourSliders) slider.setEnabled(enabled);
  },
  show(components: number[]) {
    levelOnePad.setValues(components[0], components[1]);
    areaSlider.setValue(components[2]);
    levelThreePad.setValues(components[3], components[4]);
    levelFourSliders.forEach((slider, i) => slider.setValue(components[5 + i]));
  },
};

const throttledMove = throttle((index: number, position: [number, number]) => {
  void controller.moveVertex(index, position);
}, DRAG_INTERVAL_MS);

pathCanvas.onDrag((index, position) => throttledMove(index, position));
pathCanvas.onRelease((index, position) => {
  void controller.moveVertex(index, position);
});

solveBox.addEventListener('change', () => controller.setSolveEnabled(solveBox.checked));

levelOnePad.onInput((x, y) => {
  void controller.adjustComponent(0, x).then(() => controller.adjustComponent(1, y));
});
areaSlider.onInput((value) => void controller.adjustComponent(2, value));
levelThreePad.onInput((x, y) => {
  void controller.adjustComponent(3, x).then(() => controller.adjustComponent(4, y));
});
levelFourSliders.forEach((slider, i) => {
  slider.onInput((value) => void controller.adjustComponent(5 + i, value));
});

controller.onChange((view) => {
  pathCanvas.setPoints(view.points);
  pathCanvas.setEditable(!view.solveEnabled);
  componentWidgets.setEnabled(view.solveEnabled && !view.solving && view.components !== null);
  if (view.components) componentWidgets.show(view.components);
  banner.classList.toggle('hidden', !view.serviceDown);
  banner.textContent = view.serviceDown ? 'service unreachable; values may be stale' : '';
  warning.classList.toggle('hidden', view.solveWarning === null);
  warning.textContent = view.solveWarning ?? '';
});

void controller.refresh();
