"""Single-photon spectral and temporal envelopes.

Frequencies are angular (rad per time unit).  Time-domain amplitudes use the
detection convention ``F(t) = (2 pi)^-1/2 * integral f(w) exp(-i w t) dw`` so
that a spectral factor ``exp(i w T)`` delays a packet by ``T``.  Both
directions are unitary on the discrete grids used here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

#: Minimum grid span in units of the spectral bandwidth.
MIN_SPAN_FACTOR = 12.0


class GridError(ValueError):
    """Raised when amplitudes are combined across incompatible grids."""


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform angular-frequency grid centred on ``center``.

    Sample ``k`` sits at ``center + (k - n_points // 2) * spacing``.
    """

    center: float
    span: float
    n_points: int

    def __post_init__(self):
        n = self.n_points
        if n < 16 or n & (n - 1):
            raise ValueError(f"n_points must be a power of two >= 16, got {n}")
        if not self.span > 0:
            raise ValueError(f"span must be positive, got {self.span}")

    @classmethod
    def for_time_step(cls, center: float, time_step: float, n_points: int) -> "FrequencyGrid":
        """Grid whose conjugate time lattice has spacing ``time_step``."""
        return cls(center, 2.0 * math.pi / time_step, n_points)

    @property
    def spacing(self) -> float:
        return self.span / self.n_points

    @property
    def omegas(self) -> np.ndarray:
        k = np.arange(self.n_points) - self.n_points // 2
        return self.center + k * self.spacing

    @property
    def time_step(self) -> float:
        return 2.0 * math.pi / self.span

    def time_grid(self) -> "TimeGrid":
        dt = self.time_step
        return TimeGrid(-(self.n_points // 2) * dt, dt, self.n_points)


@dataclass(frozen=True)
class TimeGrid:
    t0: float
    dt: float
    n: int

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.n)

    @property
    def t_end(self) -> float:
        return self.t0 + self.dt * (self.n - 1)

    def same_as(self, other: "TimeGrid", rtol: float = 1e-12) -> bool:
        scale = max(abs(self.dt), abs(self.t0), 1.0)
        return (
            self.n == other.n
            and abs(self.dt - other.dt) <= rtol * abs(self.dt)
            and abs(self.t0 - other.t0) <= rtol * scale
        )


@dataclass(frozen=True, eq=False)
class SpectralAmplitude:
    grid: FrequencyGrid
    samples: np.ndarray
    bandwidth: float | None = None

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=complex)
        if samples.shape != (self.grid.n_points,):
            raise GridError(
                f"expected {self.grid.n_points} samples, got shape {samples.shape}"
            )
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    def norm(self) -> float:
        return math.sqrt(float(np.sum(np.abs(self.samples) ** 2)) * self.grid.spacing)

    def with_phase_ramp(self, delay: float) -> "SpectralAmplitude":
        """Multiply by ``exp(i w delay)``: the packet is delayed by ``delay``."""
        ramp = np.exp(1j * self.grid.omegas * delay)
        return SpectralAmplitude(self.grid, self.samples * ramp, self.bandwidth)

    def mirrored(self) -> "SpectralAmplitude":
        """Spectrum of the partner photon, ``f(2 center - w)``.

        The lowest grid sample has no mirror image on an even grid and is
        set to zero.
        """
        f = self.samples
        out = np.zeros_like(f)
        out[1:] = f[1:][::-1]
        return SpectralAmplitude(self.grid, out, self.bandwidth)


@dataclass(frozen=True, eq=False)
class TemporalAmplitude:
    t0: float
    dt: float
    samples: np.ndarray

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=complex)
        if samples.ndim != 1:
            raise GridError("temporal samples must be one-dimensional")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    @property
    def grid(self) -> TimeGrid:
        return TimeGrid(self.t0, self.dt, len(self.samples))

    @property
    def times(self) -> np.ndarray:
        return self.grid.times

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.samples) ** 2)) * self.dt

    def norm(self) -> float:
        return math.sqrt(self.norm_squared())

    def scaled(self, factor: complex) -> "TemporalAmplitude":
        return TemporalAmplitude(self.t0, self.dt, self.samples * factor)


def _checkerboard(n: int) -> np.ndarray:
    return 1.0 - 2.0 * (np.arange(n) % 2)


def fourier_series(samples: np.ndarray, grid: FrequencyGrid, sign: int = -1) -> np.ndarray:
    """Evaluate ``(2 pi)^-1/2 * sum_k h_k exp(sign * i w_k t_m) * spacing`` on the
    conjugate time lattice ``t_m = (m - n/2) * dt`` using one FFT.

    The lattice offsets turn the centred sums into plain DFTs with a
    ``(-1)^k`` pre-twiddle and ``(-1)^m`` post-twiddle (valid for n divisible
    by 4), while the carrier ``exp(sign * i * center * t_m)`` is applied
    explicitly.
    """
    n = grid.n_points
    times = grid.time_grid().times
    chk = _checkerboard(n)
    h = np.asarray(samples, dtype=complex) * chk
    if sign < 0:
        core = np.fft.fft(h)
    else:
        core = np.fft.ifft(h) * n
    carrier = np.exp(sign * 1j * grid.center * times)
    return grid.spacing / math.sqrt(2.0 * math.pi) * carrier * chk * core


def gaussian_spectrum(omega_center: float, bandwidth: float, grid: FrequencyGrid) -> SpectralAmplitude:
    """Gaussian envelope ``exp(-(w - omega_center)^2 / (4 bandwidth^2))`` with unit
    discrete L2 norm."""
    if not bandwidth > 0:
        raise ValueError(f"bandwidth must be positive, got {bandwidth}")
    if abs(grid.center - omega_center) > 1e-12 * max(1.0, abs(omega_center)):
        raise GridError(
            f"grid is centred at {grid.center}, spectrum at {omega_center}"
        )
    if grid.span < MIN_SPAN_FACTOR * bandwidth:
        raise GridError(
            f"grid span {grid.span:.4g} is narrower than "
            f"{MIN_SPAN_FACTOR:g} x bandwidth = {MIN_SPAN_FACTOR * bandwidth:.4g}"
        )
    nu = grid.omegas - omega_center
    f = np.exp(-(nu**2) / (4.0 * bandwidth**2)).astype(complex)
    f /= math.sqrt(float(np.sum(np.abs(f) ** 2)) * grid.spacing)
    return SpectralAmplitude(grid, f, bandwidth)


def to_temporal(spec: SpectralAmplitude) -> TemporalAmplitude:
    """Time-domain amplitude of ``spec`` on the conjugate lattice.

    The window is ``2 pi / spacing`` long with step ``2 pi / span``; it is
    centred on ``t = 0``.
    """
    grid = spec.grid
    tg = grid.time_grid()
    return TemporalAmplitude(tg.t0, tg.dt, fourier_series(spec.samples, grid, sign=-1))


def to_spectral(amp: TemporalAmplitude, grid: FrequencyGrid) -> SpectralAmplitude:
    """Inverse of :func:`to_temporal` for amplitudes on ``grid``'s time lattice."""
    if not amp.grid.same_as(grid.time_grid()):
        raise GridError("temporal amplitude is not on the grid's conjugate lattice")
    n = grid.n_points
    chk = _checkerboard(n)
    carrier = np.exp(-1j * grid.center * amp.times)
    core = amp.samples / carrier * chk / (grid.spacing / math.sqrt(2.0 * math.pi))
    f = np.fft.ifft(core) * chk
    return SpectralAmplitude(grid, f)


def coherence_time(spec: SpectralAmplitude) -> float:
    """Width of a collapsed single-photon packet, taken as ``1 / bandwidth``."""
    if spec.bandwidth is None:
        raise ValueError("spectrum carries no bandwidth")
    return 1.0 / spec.bandwidth


def rms_width(amp: TemporalAmplitude) -> float:
    """Standard deviation of the time distribution ``|F(t)|^2``."""
    w = np.abs(amp.samples) ** 2
    w = w / w.sum()
    t = amp.times
    mean = float(np.sum(w * t))
    return math.sqrt(float(np.sum(w * (t - mean) ** 2)))


def overlap(a: TemporalAmplitude, b: TemporalAmplitude) -> complex:
    """Discrete inner product ``<a|b> = sum conj(a) b dt``."""
    if not a.grid.same_as(b.grid):
        raise GridError("overlap requires identical time grids")
    return complex(np.vdot(a.samples, b.samples) * a.dt)


def packet_at(spec: SpectralAmplitude, center_time: float) -> TemporalAmplitude:
    """Time-domain packet of ``spec`` delayed so it is centred on ``center_time``."""
    return to_temporal(spec.with_phase_ramp(center_time))
