"""Independent numerical oracle for signatures: direct ODE integration.

Along a segment with constant velocity v, the signature coefficients
satisfy d/dt X(wa) = X(w) * v[a]; level by level that is one linear system,
integrated here with an adaptive solver.  Shares no code with the algebraic
route it checks.
"""

import numpy as np
from scipy.integrate import solve_ivp


def quadrature_signature(points, m: int, rtol: float = 1e-10, atol: float = 1e-12) -> list:
    """Signature levels 0..m of the piecewise-linear path, as flat blocks in
    lexicographic word order."""
    pts = np.asarray(points, dtype=float)
    d = pts.shape[1]
    sizes = [d**n for n in range(m + 1)]
    offsets = np.concatenate([[0], np.cumsum(sizes)])

    def rhs_for(v):
        def rhs(_t, state):
            out = np.zeros_like(state)
            for n in range(1, m + 1):
                prev = state[offsets[n - 1] : offsets[n]]
                out[offsets[n] : offsets[n + 1]] = np.multiply.outer(prev, v).reshape(-1)
            return out

        return rhs

    state = np.zeros(offsets[-1])
    state[0] = 1.0
    for i in range(pts.shape[0] - 1):
        v = pts[i + 1] - pts[i]
        sol = solve_ivp(rhs_for(v), (0.0, 1.0), state, method="DOP853", rtol=rtol, atol=atol)
        state = sol.y[:, -1]
    return [state[offsets[n] : offsets[n + 1]].copy() for n in range(m + 1)]
