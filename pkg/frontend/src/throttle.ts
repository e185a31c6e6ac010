/**
 * Leading-and-trailing throttle: the first call fires at once, later calls
 * within the interval collapse into one trailing call with the freshest
 * arguments, so the last position of a drag always goes out.
 */
export function throttle<A extends unknown[]>(
  fn: (...args: A) => void,
  intervalMs: number,
): (...args: A) => void {
  let lastFired = -Infinity;
  let pending: A | null = null;
  let timer: ReturnType<typeof setTimeout> | null = null;

  function fire(args: A) {
    lastFired = Date.now();
    fn(...args);
  }

  return (...args: A) => {
    const now = Date.now();
    if (now - lastFired >= intervalMs && timer === null) {
      fire(args);
      return;
    }
    pending = args;
    if (timer === null) {
      timer = setTimeout(() => {
        timer = null;
        if (pending !== null) {
          const queued = pending;
          pending = null;
          fire(queued);
        }
      }, Math.max(0, intervalMs - (now - lastFired)));
    }
  };
}
