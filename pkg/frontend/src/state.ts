/**
 * Explorer controller: all state transitions, no DOM.
 *
 * The controller owns the five path vertices and the eight displayed log
 * signature components. Components are only ever assigned from service
 * responses; this file contains no signature math. Log signature requests
 * are sequence-numbered so a slow response can never overwrite the result
 * of a later request.
 */

import type { Point, SolveResponse, Transport } from './api.js';

export const COMPONENT_COUNT = 8;
export const VERTEX_COUNT = 5;

/**
 * A single least-squares solve spreads any unreachable remainder over all
 * eight components, so the one the user moved can land off its requested
 * value. Re-pinning that component against the freshly recomputed others
 * converges fast when the request is realizable at all; a few rounds
 * suffice.
 */
export const ADJUST_ROUNDS = 3;
export const ADJUST_PIN_TOLERANCE = 1e-6;

export interface ExplorerView {
  points: Point[];
  /** Coordinates on 1, 2, 12, 112, 122, 1112, 1122, 1222; null until the first reply. */
  components: number[] | null;
  solveEnabled: boolean;
  /** True after a failed request; cleared by the next success. */
  serviceDown: boolean;
  /** Residual message when the last solve stopped short of its target. */
  solveWarning: string | null;
  /** A solve is in flight; component widgets should not issue another. */
  solving: boolean;
}

export type ViewListener = (view: ExplorerView) => void;

export const DEFAULT_POINTS: Point[] = [
  [0, 0],
  [1, 0],
  [1, 1],
  [0, 1],
  [0, 0],
];

export class ExplorerController {
  private readonly transport: Transport;
  private points: Point[];
  private components: number[] | null = null;
  private solveEnabled = false;
  private serviceDown = false;
  private solveWarning: string | null = null;
  private solving = false;

  private issued = 0;
  private applied = 0;
  private readonly listeners: ViewListener[] = [];

  constructor(transport: Transport, initialPoints: Point[] = DEFAULT_POINTS) {
    if (initialPoints.length !== VERTEX_COUNT) {
      throw new Error(`expected ${VERTEX_COUNT} vertices, got ${initialPoints.length}`);
    }
    this.transport = transport;
    this.points = initialPoints.map((p) => [p[0], p[1]]);
  }

  onChange(listener: ViewListener): void {
    this.listeners.push(listener);
  }

  view(): ExplorerView {
    return {
      points: this.points.map((p) => [p[0], p[1]] as Point),
      components: this.components ? [...this.components] : null,
      solveEnabled: this.solveEnabled,
      serviceDown: this.serviceDown,
      solveWarning: this.solveWarning,
      solving: this.solving,
    };
  }

  private notify(): void {
    const snapshot = this.view();
    for (const listener of this.listeners) listener(snapshot);
  }

  setSolveEnabled(enabled: boolean): void {
    this.solveEnabled = enabled;
    if (!enabled) this.solveWarning = null;
    this.notify();
  }

  /** Re-request the components for the current points. */
  async refresh(): Promise<void> {
    await this.requestComponents(this.points);
  }

  /**
   * Move one vertex and request fresh components. Ignored while solve mode
   * is on: there the path is the solver's output, not a drag target.
   */
  async moveVertex(index: number, position: Point): Promise<void> {
    if (this.solveEnabled) return;
    if (index < 0 || index >= VERTEX_COUNT) {
      throw new Error(`vertex index ${index} out of range`);
    }
    this.points[index] = [position[0], position[1]];
    this.notify();
    await this.requestComponents(this.points);
  }

  /**
   * Solve-mode edit: replace one component, ask the service for a path that
   * realizes the new target, then re-read all components from the rendered
   * path. When the pinned component still misses its requested value, the
   * other components have drifted to what the path can actually do, so the
   * request is re-issued against them, up to ADJUST_ROUNDS times. Ignored
   * unless solve is on, the components are known, and no other solve is
   * running.
   */
  async adjustComponent(index: number, value: number): Promise<void> {
    if (!this.solveEnabled || this.components === null || this.solving) return;
    if (index < 0 || index >= COMPONENT_COUNT) {
      throw new Error(`component index ${index} out of range`);
    }
    this.solving = true;
    this.notify();
    let lastSolve: SolveResponse | null = null;
    try {
      for (let round = 0; round < ADJUST_ROUNDS; round++) {
        const target = [...this.components];
        target[index] = value;
        let solved: SolveResponse;
        try {
          solved = await this.transport.solve(target, this.points);
        } catch {
          this.serviceDown = true;
          return;
        }
        this.serviceDown = false;
        lastSolve = solved;
        this.points = solved.points.map((p) => [p[0], p[1]] as Point);
        this.notify();
        if (!(await this.requestComponents(this.points))) return;
        if (Math.abs(this.components[index] - value) <= ADJUST_PIN_TOLERANCE) break;
      }
      const landed = Math.abs(this.components[index] - value) <= ADJUST_PIN_TOLERANCE;
      this.solveWarning =
        landed || lastSolve === null
          ? null
          : `target out of reach, residual ${lastSolve.residual_norm.toExponential(2)} after ${lastSolve.iterations} iterations`;
    } finally {
      this.solving = false;
      this.notify();
    }
  }

  /** Resolves true when this request's reply was applied to the view. */
  private async requestComponents(points: Point[]): Promise<boolean> {
    const sequence = ++this.issued;
    const snapshot = points.map((p) => [p[0], p[1]] as Point);
    let values: number[];
    try {
      values = (await this.transport.logsig(snapshot)).values;
    } catch {
      if (sequence > this.applied) {
        this.serviceDown = true;
        this.notify();
      }
      return false;
    }
    if (sequence <= this.applied) return false; // a newer reply already landed
    this.applied = sequence;
    this.components = values;
    this.serviceDown = false;
    this.notify();
    return true;
  }
}
