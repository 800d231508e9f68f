# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loop of the shooting integrator.

Mirrors ``_pysweep.rk4_sweep`` exactly: fixed-step RK4 for y'' = (W - E) y
over a pre-tabulated grid, with node counting and overflow-safe rescaling.
"""

from libc.math cimport fabs


def rk4_sweep(double[::1] w_nodes, double[::1] w_mid, double[::1] h,
              double energy, double y1, double y2, bint count_nodes=False):
    """Integrate across the whole tabulated grid; return (y1, y2, nodes)."""
    cdef Py_ssize_t i, n = h.shape[0]
    cdef int nodes = 0
    cdef double prev = 1.0 if y1 > 0.0 else (-1.0 if y1 < 0.0 else 0.0)
    cdef double hi, half, q0, qm, q1
    cdef double k1a, k1b, k2a, k2b, k3a, k3b, k4a, k4b, ya, yb, s, mag
    with nogil:
        for i in range(n):
            hi = h[i]
            q0 = w_nodes[i] - energy
            qm = w_mid[i] - energy
            q1 = w_nodes[i + 1] - energy
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
            mag = fabs(y1) + fabs(y2)
            if mag > 1e250 or (mag != 0.0 and mag < 1e-250):
                y1 /= mag
                y2 /= mag
    return y1, y2, nodes
