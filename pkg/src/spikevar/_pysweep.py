"""Pure-Python fallback for the shooting integrator's inner loop.

Same algorithm as the compiled kernel in ``_core.pyx``: classic fixed-step
RK4 for the linear system (y, y') with y'' = (W(r) - E) y, where W is
pre-tabulated at step endpoints and midpoints.  Sign changes of y are
counted on the fly and the state is renormalized whenever it threatens to
overflow or underflow (the rescaling cancels out of node counts and
logarithmic derivatives).
"""

from __future__ import annotations

__all__ = ["rk4_sweep"]


def rk4_sweep(w_nodes, w_mid, h, energy, y1, y2, count_nodes=False):
    """Integrate across the whole tabulated grid; return (y1, y2, nodes).

    w_nodes has len(h) + 1 entries (potential at the step endpoints), w_mid
    len(h) entries (potential at step midpoints).  Steps h may be negative
    for inward sweeps.
    """
    wn = w_nodes.tolist() if hasattr(w_nodes, "tolist") else list(w_nodes)
    wm = w_mid.tolist() if hasattr(w_mid, "tolist") else list(w_mid)
    hs = h.tolist() if hasattr(h, "tolist") else list(h)
    nodes = 0
    prev = 1.0 if y1 > 0.0 else (-1.0 if y1 < 0.0 else 0.0)
    e = energy
    for i, hi in enumerate(hs):
        q0 = wn[i] - e
        qm = wm[i] - e
        q1 = wn[i + 1] - e
        half = 0.5 * hi
        k1a = y2
        k1b = q0 * y1
        ya = y1 + half * k1a
        yb = y2 + half * k1b
        k2a = yb
        k2b = qm * ya
        ya = y1 + half * k2a
        yb = y2 + half * k2b
        k3a = yb
        k3b = qm * ya
        ya = y1 + hi * k3a
        yb = y2 + hi * k3b
        k4a = yb
        k4b = q1 * ya
        y1 = y1 + hi / 6.0 * (k1a + 2.0 * (k2a + k3a) + k4a)
        y2 = y2 + hi / 6.0 * (k1b + 2.0 * (k2b + k3b) + k4b)
        if count_nodes:
            s = 1.0 if y1 > 0.0 else (-1.0 if y1 < 0.0 else 0.0)
            if s != 0.0:
                if prev != 0.0 and s != prev:
                    nodes += 1
                prev = s
        mag = abs(y1) + abs(y2)
        if mag > 1e250 or (mag != 0.0 and mag < 1e-250):
            y1 /= mag
            y2 /= mag
    return y1, y2, nodes
