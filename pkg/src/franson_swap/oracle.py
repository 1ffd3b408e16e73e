"""Brute-force reference path for tests and acceptance runs.

Everything here works on dense ``n x n`` amplitude matrices.  Packets come
from direct quadrature of the spectrum, interferometers are applied as
explicit shifted copies along rows and columns, and coincidence windows are
summed diagonal by diagonal.  No FFT and no separable-term shortcut is used,
so agreement with the fast path is a genuine cross-check.  Keep grids at or
below a few hundred points.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spectral import GridError, SpectralAmplitude, TimeGrid


@dataclass(frozen=True, eq=False)
class DenseTwoPhotonAmplitude:
    """``samples[p, q]`` is the amplitude for mode ``a`` at ``times[p]`` and
    the second mode at ``times[q]``."""

    t_grid: TimeGrid
    samples: np.ndarray

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.samples) ** 2)) * self.t_grid.dt ** 2


def quadrature_packet(spec: SpectralAmplitude, times) -> np.ndarray:
    """``(2 pi)^-1/2 * sum_k f_k exp(-i w_k t) dw`` evaluated term by term."""
    w = spec.grid.omegas
    t = np.asarray(times, dtype=float)
    kernel = np.exp(-1j * np.multiply.outer(t, w))
    return kernel @ spec.samples * spec.grid.spacing / math.sqrt(2.0 * math.pi)


def densify(state, t_grid: TimeGrid | None = None, tau: float | None = None) -> DenseTwoPhotonAmplitude:
    """Evaluate a sum-of-products state pointwise on a dense grid.

    ``t_grid`` must share the state's time step and sit on its lattice; it
    may be a sub-window.
    """
    src = state.grid_a
    if t_grid is None:
        t_grid = src
    if tau is not None and t_grid.dt > tau / 8:
        raise GridError(f"time step {t_grid.dt:g} is coarser than tau/8 = {tau / 8:g}")
    if abs(t_grid.dt - src.dt) > 1e-12 * src.dt:
        raise GridError("dense grid must use the state's time step")
    off = (t_grid.t0 - src.t0) / src.dt
    start = int(round(off))
    if abs(off - start) > 1e-9 or start < 0 or start + t_grid.n > src.n:
        raise GridError("dense grid is not a sub-window of the state's lattice")
    psi = np.zeros((t_grid.n, t_grid.n), dtype=complex)
    for term in state.terms:
        g = term.env_a.samples[start:start + t_grid.n]
        h = term.env_b.samples[start:start + t_grid.n]
        psi += term.coeff * g[:, None] * h[None, :]
    return DenseTwoPhotonAmplitude(t_grid, psi)


def _arm_table(mz, port):
    e = complex(math.cos(mz.phase), math.sin(mz.phase))
    if port == 0:
        return [(mz.t_short, 0.5), (mz.t_long, -0.5 * e)]
    if port == 1:
        return [(mz.t_short, 0.5j), (mz.t_long, 0.5j * e)]
    raise ValueError(f"port must be 0 or 1, got {port}")


def _steps(delay, dt):
    m = int(round(delay / dt))
    if abs(m * dt - delay) > 1e-9 * max(1.0, abs(delay)):
        raise GridError(f"delay {delay} is not on the time lattice (dt={dt})")
    return m


def _shift_axis(psi, steps, axis):
    out = np.zeros_like(psi)
    n = psi.shape[axis]
    if steps >= n or -steps >= n:
        return out
    src = [slice(None), slice(None)]
    dst = [slice(None), slice(None)]
    if steps >= 0:
        dst[axis] = slice(steps, n)
        src[axis] = slice(0, n - steps)
    else:
        dst[axis] = slice(0, n + steps)
        src[axis] = slice(-steps, n)
    out[tuple(dst)] = psi[tuple(src)]
    return out


def propagate_dense(dense: DenseTwoPhotonAmplitude, mz_a, mz_b, i: int, j: int) -> np.ndarray:
    dt = dense.t_grid.dt
    out = np.zeros_like(dense.samples)
    for delay_a, ka in _arm_table(mz_a, i):
        rows = _shift_axis(dense.samples, _steps(delay_a, dt), 0)
        for delay_b, kb in _arm_table(mz_b, j):
            out += ka * kb * _shift_axis(rows, _steps(delay_b, dt), 1)
    return out


def brute_coincidence(dense: DenseTwoPhotonAmplitude, mz_a, mz_b, i: int, j: int) -> np.ndarray:
    """Joint detection density behind both interferometers for ports ``(i, j)``."""
    return np.abs(propagate_dense(dense, mz_a, mz_b, i, j)) ** 2


def brute_bins(density: np.ndarray, dt: float, zero_centers, side_delta: float, half_width: float) -> dict:
    """Sum ``density * dt^2`` over anti-diagonal bands of ``t_b - t_a``."""
    n = density.shape[0]
    out = {"minus": 0.0, "zero": 0.0, "plus": 0.0, "other": 0.0}
    for m in range(-(n - 1), n):
        rel = m * dt
        if any(abs(rel - c) <= half_width for c in zero_centers):
            key = "zero"
        elif abs(rel + side_delta) <= half_width:
            key = "minus"
        elif abs(rel - side_delta) <= half_width:
            key = "plus"
        else:
            key = "other"
        out[key] += float(np.trace(density, offset=m)) * dt * dt
    return out


def franson_dense(pair) -> DenseTwoPhotonAmplitude:
    """CW pair amplitude ``exp(-i pump t_b) F(t_a - t_b)`` on the pair's
    time lattice, normalized per emitted pair."""
    tg = pair.grid.time_grid()
    n = tg.n
    lags = np.arange(-(n - 1), n) * tg.dt
    f_lag = quadrature_packet(pair.spectrum, lags)
    idx = np.arange(n)
    psi = f_lag[(idx[:, None] - idx[None, :]) + n - 1]
    psi = psi * np.exp(-1j * pair.pump * tg.times)[None, :]
    return DenseTwoPhotonAmplitude(tg, psi)


def brute_franson_table(pair, mz_a, mz_b, half_width_tau: float = 3.0) -> dict:
    """Franson coincidence probabilities from the column ``t_b = 0`` of the
    dense output amplitude; stationarity makes every column equivalent."""
    dense = franson_dense(pair)
    tg = dense.t_grid
    col = tg.n // 2
    tau = 1.0 / pair.spectrum.bandwidth
    out = {}
    for i in (0, 1):
        for j in (0, 1):
            dens = brute_coincidence(dense, mz_a, mz_b, i, j)[:, col]
            rel = tg.times[col] - tg.times
            bins = {"minus": 0.0, "zero": 0.0, "plus": 0.0, "other": 0.0}
            for r, w in zip(rel, dens):
                if abs(r) <= half_width_tau * tau:
                    key = "zero"
                elif abs(r + mz_a.delay) <= half_width_tau * tau:
                    key = "minus"
                elif abs(r - mz_a.delay) <= half_width_tau * tau:
                    key = "plus"
                else:
                    key = "other"
                bins[key] += float(w) * tg.dt
            for key, p in bins.items():
                out[(i, j, key)] = p
    return out


def dense_conditional_state(four, e1, e2) -> DenseTwoPhotonAmplitude:
    """Unnormalized ``a, a'`` amplitude after clicks ``e1, e2``, summed over
    which source fed which click."""
    tg = four.left_pair.grid.time_grid()
    t = tg.times
    m = four.bs.matrix
    ports = {"c": 0, "c'": 1}
    psi = np.zeros((tg.n, tg.n), dtype=complex)
    for first, second in ((e1, e2), (e2, e1)):
        amp = m[ports[first.detector], 0] * m[ports[second.detector], 1]
        left = quadrature_packet(four.left_pair.spectrum, t - first.time)
        right = quadrature_packet(four.right_pair.spectrum, t - second.time)
        phase = np.exp(-1j * four.left_pair.pump * first.time - 1j * four.right_pair.pump * second.time)
        psi += amp * phase * np.outer(left, right)
    return DenseTwoPhotonAmplitude(tg, psi)


def brute_swap_table(four, mz_a, mz_b, e1, e2, half_width_tau: float = 3.0) -> tuple[dict, float]:
    """Normalized conditional coincidence table and the click-pattern weight."""
    dense = dense_conditional_state(four, e1, e2)
    weight = dense.norm_squared()
    dense = DenseTwoPhotonAmplitude(dense.t_grid, dense.samples / math.sqrt(weight))
    d = abs(e2.time - e1.time) - mz_a.delay
    centers = [-d, d]
    tau = 1.0 / four.left_pair.spectrum.bandwidth
    out = {}
    for i in (0, 1):
        for j in (0, 1):
            dens = brute_coincidence(dense, mz_a, mz_b, i, j)
            for key, p in brute_bins(dens, dense.t_grid.dt, centers, mz_a.delay,
                                     half_width_tau * tau).items():
                out[(i, j, key)] = p
    return out, weight
