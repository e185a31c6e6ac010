/**
 * Typed client for the pathsig service.
 *
 * The explorer never computes log signature values itself; every number it
 * displays came back from one of these endpoints. The Transport interface
 * exists so tests can substitute a scripted fake for the HTTP layer.
 */

export type Point = [number, number];

export interface LogsigResponse {
  dim: number;
  level: number;
  basis: string[];
  values: number[];
}

export interface SolveOptions {
  max_iterations?: number;
  tolerance?: number;
  damping?: number;
}

export interface SolveResponse {
  points: Point[];
  residual_norm: number;
  iterations: number;
  converged: boolean;
}

export interface Transport {
  logsig(points: Point[]): Promise<LogsigResponse>;
  solve(target: number[], initialPoints: Point[], options?: SolveOptions): Promise<SolveResponse>;
}

export const EXPLORER_DIM = 2;
export const EXPLORER_LEVEL = 4;

async function postJson<T>(url: string, body: unknown): Promise<T> {
  const response = await fetch(url, {
    method: 'POST',
    headers: { 'Content-Type': 'application/json' },
    body: JSON.stringify(body),
  });
  const text = await response.text();
  if (!response.ok) {
    let message = `${response.status} ${response.statusText}`;
    try {
      const payload = JSON.parse(text) as { error?: string };
      if (payload.error) message = payload.error;
    } catch {
      // non-JSON error body; keep the status line
    }
    throw new Error(message);
  }
  return JSON.parse(text) as T;
}

export function httpTransport(baseUrl = ''): Transport {
  return {
    logsig(points: Point[]): Promise<LogsigResponse> {
      return postJson<LogsigResponse>(`${baseUrl}/api/logsig`, {
        dim: EXPLORER_DIM,
        level: EXPLORER_LEVEL,
        points,
      });
    },
    solve(target: number[], initialPoints: Point[], options?: SolveOptions): Promise<SolveResponse> {
      return postJson<SolveResponse>(`${baseUrl}/api/solve`, {
        dim: EXPLORER_DIM,
        level: EXPLORER_LEVEL,
        target,
        initial_points: initialPoints,
        ...(options ? { options } : {}),
      });
    },
  };
}
