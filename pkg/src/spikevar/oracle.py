"""Independent eigenvalue computation by direct integration of the radial
Schrodinger equation.

-y'' + [Lam(Lam+1)/r^2 + V(r)] y = E y is integrated with fixed-step RK4 on a
composite log-uniform / uniform grid; the energy is located by bisection on
the interior node count and refined by matching logarithmic derivatives of
outward and inward sweeps at the outer classical turning point.  The grid
density is doubled until the eigenvalue moves by less than tol/4 under step
halving (Richardson self-consistency).

This module never touches the variational machinery: it is the check the
variational bounds are measured against.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .hamiltonian import PotentialSpec

if os.environ.get("SPIKEVAR_PURE"):
    from ._pysweep import rk4_sweep as _sweep

    BACKEND = "pure"
else:
    try:
        from ._core import rk4_sweep as _sweep

        BACKEND = "compiled"
    except ImportError:
        from ._pysweep import rk4_sweep as _sweep

        BACKEND = "pure"

__all__ = ["OracleResult", "ShootingError", "shoot_eigenvalue", "BACKEND"]

_RMIN_CAP = 1e-4     # default inner cutoff floor
_RMAX_CAP = 20.0     # default outer cutoff ceiling (override via r_max)
_TAIL_ACTION = 41.5  # WKB action making the neglected tail < 1e-18
_CORE_ACTION = 22.0  # barrier action below which the start form is exact enough


class ShootingError(RuntimeError):
    """Raised when the integrator cannot reach the requested tolerance."""


@dataclass(frozen=True)
class OracleResult:
    """A shooting eigenvalue with its bracketing and domain metadata.

    The reported energy is deliberately one-sided: it is the lower edge of
    the final bisection bracket shifted down by one bracket width, so it
    never lands above the true eigenvalue (the bisection noise floor sits
    well inside the shift).  The eigenvalue lies within a couple of
    bracket_width above `energy`, and bracket_width <= the requested
    tolerance, so the estimate is still accurate to tol.
    """

    energy: float
    nodes: int
    bracket_width: float
    r_min: float
    r_max: float
    steps: int
    grid_scale: float


class _NeedLargerDomain(Exception):
    pass


class _StepSizeFailure(Exception):
    pass


class _RadialProblem:
    """W(r) = Lam(Lam+1)/r^2 + a1 r^2 + sum lam_k r^(-alpha_k) and its pieces."""

    def __init__(self, v: PotentialSpec):
        self.a1 = v.a1
        lam = v.Lambda
        self.c2 = lam * (lam + 1.0) + sum(l for l, a in v.terms if a == 2.0)
        self.terms = tuple((l, a) for l, a in v.terms if a != 2.0 and l != 0.0)
        self.strong = any(a > 2.0 and l > 0.0 for l, a in self.terms)
        if not self.strong and self.c2 < -0.25:
            raise ValueError(
                f"inverse-square coefficient {self.c2:.6g} < -1/4 makes the "
                "operator unbounded below near the origin"
            )

    def w(self, r: np.ndarray) -> np.ndarray:
        out = self.a1 * r * r
        if self.c2 != 0.0:
            out = out + self.c2 / (r * r)
        for lam, alpha in self.terms:
            out = out + lam * r ** (-alpha)
        return out

    def w_prime(self, r: float) -> float:
        out = 2.0 * self.a1 * r - 2.0 * self.c2 / r**3
        for lam, alpha in self.terms:
            out -= alpha * lam * r ** (-alpha - 1.0)
        return out


class _Grid:
    """Composite grid with the potential pre-tabulated for the RK4 kernel."""

    def __init__(self, prob: _RadialProblem, r_min: float, r_max: float,
                 e_cap: float, scale: float):
        r_sw = min(max(2.0 * r_min, 0.5), 0.75 * r_max)
        w_floor_est = float(np.min(prob.w(np.geomspace(r_min, r_max, 512))))
        k_est = math.sqrt(max(e_cap - w_floor_est, 1.0))
        h_uni = min(0.03 / k_est, 0.25 / math.sqrt(max(prob.w(np.array([r_sw]))[0], 1.0)))
        n_uni = max(600, int(math.ceil((r_max - r_sw) / h_uni)))
        stiff = math.sqrt(max(prob.w(np.array([r_min]))[0], 1.0)) * r_min
        delta = min(0.08, 0.25 / max(stiff, 1.0))
        n_log = max(64, int(math.ceil(math.log(r_sw / r_min) / delta)))
        n_uni = int(math.ceil(n_uni * scale))
        n_log = int(math.ceil(n_log * scale))
        g_log = np.geomspace(r_min, r_sw, n_log + 1)
        g_uni = np.linspace(r_sw, r_max, n_uni + 1)
        self.r = np.concatenate([g_log, g_uni[1:]])
        self.h = np.diff(self.r)
        mid = 0.5 * (self.r[:-1] + self.r[1:])
        self.wn = prob.w(self.r)
        self.wm = prob.w(mid)
        self.w_floor = float(min(self.wn.min(), self.wm.min()))
        self.steps = len(self.h)
        # contiguous reversed copies for inward sweeps
        self._wn_r = np.ascontiguousarray(self.wn[::-1])
        self._wm_r = np.ascontiguousarray(self.wm[::-1])
        self._h_r = np.ascontiguousarray(-self.h[::-1])

    def outward(self, energy, y1, y2, count_nodes=False, stop=None):
        if stop is None:
            return _sweep(self.wn, self.wm, self.h, energy, y1, y2, count_nodes)
        return _sweep(self.wn[: stop + 1], self.wm[:stop], self.h[:stop],
                      energy, y1, y2, count_nodes)

    def inward(self, energy, y1, y2, stop):
        """Sweep from r_max down to node index `stop`."""
        n = self.steps
        return _sweep(self._wn_r[: n - stop + 1], self._wm_r[: n - stop],
                      self._h_r[: n - stop], energy, y1, y2, False)


def _choose_r_min(prob: _RadialProblem, e_cap: float) -> float:
    if not prob.strong:
        return _RMIN_CAP
    rr = np.geomspace(_RMIN_CAP, 2.0, 4000)
    wv = prob.w(rr)
    under = wv > e_cap
    if not under[0]:
        return _RMIN_CAP
    turn = int(np.argmin(under))  # first index inside the well
    if turn == 0:
        turn = len(rr) - 1
    q = np.sqrt(np.maximum(wv - e_cap, 0.0))
    s = np.concatenate([[0.0], np.cumsum(0.5 * (q[1:] + q[:-1]) * np.diff(rr))])
    action_to_turn = s[turn] - s
    ok = np.nonzero(action_to_turn[: turn + 1] >= _CORE_ACTION)[0]
    if len(ok) == 0:
        return _RMIN_CAP
    return float(rr[ok[-1]])


def _choose_r_max(prob: _RadialProblem, e_cap: float, cap: float) -> float:
    hi = min(cap, 2.0 * math.sqrt(e_cap / prob.a1) + 10.0)
    rr = np.linspace(0.25, hi, 4000)
    wv = prob.w(rr)
    q = np.sqrt(np.maximum(wv - e_cap, 0.0))
    outer = len(rr) - 1 - int(np.argmax((wv < e_cap)[::-1]))
    if wv[outer] >= e_cap:  # no allowed region this far out; keep everything
        return hi
    s = np.concatenate([[0.0], np.cumsum(0.5 * (q[1:] + q[:-1]) * np.diff(rr))])
    tail = s - s[outer]
    ok = np.nonzero(tail >= _TAIL_ACTION)[0]
    if len(ok) == 0:
        if hi >= cap - 1e-12:
            raise ShootingError(
                f"outer cutoff cap {cap} cannot reach the 1e-18 tail decay for "
                f"energies near {e_cap:.3g}; pass a larger r_max"
            )
        return hi
    return float(rr[ok[0]])


def _start_values(prob: _RadialProblem, r0: float, energy: float):
    """(y, y') at r_min: Frobenius form r^s (1 + c r^2) for inverse-square
    leading behavior, WKB log-derivative under a stronger singular barrier."""
    if prob.strong:
        q = prob.w(np.array([r0]))[0] - energy
        if q <= 0.0:
            return 1.0, 0.0
        return 1.0, math.sqrt(q) - prob.w_prime(r0) / (4.0 * q)
    s = 0.5 + math.sqrt(max(0.25 + prob.c2, 0.0))
    c = -energy / (4.0 * s + 2.0)
    return 1.0 + c * r0 * r0, (s + (s + 2.0) * c * r0 * r0) / r0


def _solve_at_density(prob: _RadialProblem, grid: _Grid, level: int, tol: float,
                      e_cap: float):
    """Bisection on node count, then on the normalized matching Wronskian."""

    def nodes_of(energy: float) -> int:
        y1, y2 = _start_values(prob, grid.r[0], energy)
        return grid.outward(energy, y1, y2, count_nodes=True)[2]

    def mismatch(energy: float) -> float:
        below = grid.wn < energy
        if below.any():
            im = len(grid.wn) - 1 - int(np.argmax(below[::-1]))
        else:
            im = grid.steps // 2
        im = min(max(im, 3), grid.steps - 3)
        y1, y2 = _start_values(prob, grid.r[0], energy)
        o1, o2, _ = grid.outward(energy, y1, y2, stop=im)
        qe = max(grid.wn[-1] - energy, 1e-12)
        i1, i2, _ = grid.inward(energy, 1.0, -math.sqrt(qe), stop=im)
        return (o2 * i1 - i2 * o1) / ((abs(o1) + abs(o2)) * (abs(i1) + abs(i2)))

    floor = grid.w_floor
    e_lo = floor + 1e-12 * (1.0 + abs(floor))
    n_lo = nodes_of(e_lo)
    if n_lo > level:
        raise _StepSizeFailure(f"{n_lo} nodes at the potential floor")
    e_hi = floor + max(4.0 * math.sqrt(prob.a1) * (level + 1.0), 1.0)
    n_hi = nodes_of(e_hi)
    while n_hi <= level:
        e_hi = floor + 2.0 * (e_hi - floor)
        if e_hi > e_cap:
            raise _NeedLargerDomain
        n_hi = nodes_of(e_hi)
    # narrow to a unit node bracket around the level-th transition
    coarse = max(tol, 1e-3 * (1.0 + abs(e_hi)))
    for _ in range(240):
        if n_hi - n_lo == 1 and e_hi - e_lo <= coarse:
            break
        e_mid = 0.5 * (e_lo + e_hi)
        if e_mid <= e_lo or e_mid >= e_hi:
            break
        n_mid = nodes_of(e_mid)
        if not n_lo <= n_mid <= n_hi:
            raise _StepSizeFailure(
                f"node count {n_mid} at E={e_mid:.6g} outside [{n_lo}, {n_hi}]"
            )
        if n_mid <= level:
            e_lo, n_lo = e_mid, n_mid
        else:
            e_hi, n_hi = e_mid, n_mid
    # refine on the matching mismatch when it brackets a sign change,
    # otherwise carry the node bisection all the way down
    f_lo = mismatch(e_lo)
    f_hi = mismatch(e_hi)
    use_wronskian = f_lo == f_lo and f_hi == f_hi and (f_lo < 0.0) != (f_hi < 0.0)
    for _ in range(240):
        if e_hi - e_lo <= 0.125 * tol:
            break
        e_mid = 0.5 * (e_lo + e_hi)
        if e_mid <= e_lo or e_mid >= e_hi:
            break
        if use_wronskian:
            f_mid = mismatch(e_mid)
            if (f_mid < 0.0) == (f_lo < 0.0):
                e_lo, f_lo = e_mid, f_mid
            else:
                e_hi, f_hi = e_mid, f_mid
        else:
            if nodes_of(e_mid) <= level:
                e_lo = e_mid
            else:
                e_hi = e_mid
    width = e_hi - e_lo
    if width > tol:
        raise ShootingError(
            f"energy bracket stalled at width {width:.3g} > tol {tol:.3g}"
        )
    # one-sided report: lower edge less one width stays below the true level
    return e_lo - width, width


def shoot_eigenvalue(
    v: PotentialSpec,
    level: int,
    tol: float = 1e-6,
    r_min: float | None = None,
    r_max: float | None = None,
    grid_scale: float = 1.0,
    auto_refine: bool = True,
    max_refine: int = 6,
) -> OracleResult:
    """Level-th Dirichlet eigenvalue of -y'' + [Lam(Lam+1)/r^2 + V] y = E y.

    The domain is sized so the start forms at r_min and the neglected tail
    beyond r_max are below the eigenvalue tolerance; explicit r_min / r_max
    override the automatic choice.  With auto_refine the grid density doubles
    until step halving moves the eigenvalue by less than tol/4; failure to
    settle within max_refine doublings raises ShootingError.
    """
    if level < 0:
        raise ValueError(f"level must be >= 0, got {level}")
    if not tol > 0.0:
        raise ValueError(f"tolerance must be > 0, got {tol}")
    prob = _RadialProblem(v)
    w_probe = float(np.min(prob.w(np.geomspace(1e-3, 10.0, 1024))))
    e_cap = w_probe + max(4.0 * math.sqrt(v.a1) * (2 * level + 3.0), 20.0)

    for _ in range(12):
        rmin_eff = r_min if r_min is not None else _choose_r_min(prob, e_cap)
        rmax_eff = r_max if r_max is not None else _choose_r_max(prob, e_cap, _RMAX_CAP)
        if not 0.0 < rmin_eff < rmax_eff:
            raise ValueError(f"invalid domain [{rmin_eff}, {rmax_eff}]")
        scale = grid_scale
        refinements = 0
        try:
            grid = _Grid(prob, rmin_eff, rmax_eff, e_cap, scale)
            while True:
                try:
                    energy, width = _solve_at_density(prob, grid, level, tol, e_cap)
                except _StepSizeFailure:
                    refinements += 1
                    if refinements > max_refine:
                        raise ShootingError(
                            "node-count monotonicity kept failing under refinement"
                        ) from None
                    scale *= 2.0
                    grid = _Grid(prob, rmin_eff, rmax_eff, e_cap, scale)
                    continue
                break
            if not auto_refine:
                return OracleResult(energy, level, width, rmin_eff, rmax_eff,
                                    grid.steps, scale)
            while True:
                fine = _Grid(prob, rmin_eff, rmax_eff, e_cap, 2.0 * scale)
                try:
                    energy_fine, width_fine = _solve_at_density(prob, fine,
                                                                level, tol,
                                                                e_cap)
                except _StepSizeFailure:
                    refinements += 1
                    if refinements > max_refine:
                        raise ShootingError(
                            "node-count monotonicity kept failing under "
                            "refinement"
                        ) from None
                    scale *= 2.0
                    continue
                if abs(energy_fine - energy) < 0.25 * tol:
                    return OracleResult(energy_fine, level, width_fine,
                                        rmin_eff, rmax_eff, fine.steps,
                                        2.0 * scale)
                refinements += 1
                if refinements > max_refine:
                    raise ShootingError(
                        f"Richardson check did not settle below tol/4 = "
                        f"{0.25 * tol:.3g} within {max_refine} grid doublings"
                    )
                scale *= 2.0
                energy = energy_fine
        except _NeedLargerDomain:
            e_cap = w_probe + 2.0 * (e_cap - w_probe)
            continue
    raise ShootingError("energy cap expansion failed to bracket the level")
