"""Linear optical elements: unbalanced Mach-Zehnder interferometers and a
symmetric beam splitter."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spectral import GridError, TemporalAmplitude

#: Lattice tolerance when converting a delay to a whole number of samples.
_LATTICE_RTOL = 1e-9
#: Fraction of the input weight allowed to leave the window on a shift.
OVERFLOW_TOL = 1e-12


class WindowOverflowError(GridError):
    """A delayed copy of an envelope no longer fits in its time window."""


@dataclass(frozen=True)
class MachZehnderParams:
    """Short/long arm transit times and the phase inserted in the long arm."""

    t_short: float
    t_long: float
    phase: float = 0.0

    def __post_init__(self):
        if not self.t_long > self.t_short:
            raise ValueError(
                f"t_long ({self.t_long}) must exceed t_short ({self.t_short})"
            )

    @property
    def delay(self) -> float:
        """Arm imbalance ``t_long - t_short``."""
        return self.t_long - self.t_short

    def with_phase(self, phase: float) -> "MachZehnderParams":
        return MachZehnderParams(self.t_short, self.t_long, phase)


@dataclass(frozen=True)
class BeamSplitterConvention:
    """Lossless 50/50 splitter; column ``k`` holds the output amplitudes of
    input ``k`` on outputs ``(c, c')``."""

    matrix: np.ndarray = None

    def __post_init__(self):
        if self.matrix is None:
            m = np.array([[1.0, 1.0j], [1.0j, 1.0]]) / math.sqrt(2.0)
        else:
            m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError("beam splitter matrix must be 2x2")
        if not np.allclose(m.conj().T @ m, np.eye(2), atol=1e-14):
            raise ValueError("beam splitter matrix is not unitary")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def amplitude(self, input_port: int, output_port: int) -> complex:
        return complex(self.matrix[output_port, input_port])


def mz_coefficients(omega, params: MachZehnderParams):
    """Output-port amplitudes ``(c0, c1)`` for a photon of frequency ``omega``.

    Broadcasts over array ``omega``.
    """
    omega = np.asarray(omega, dtype=float)
    short = np.exp(1j * omega * params.t_short)
    long_ = np.exp(1j * (omega * params.t_long + params.phase))
    return 0.5 * (short - long_), 0.5j * (long_ + short)


def _lattice_steps(delay: float, dt: float) -> int:
    steps = delay / dt
    m = round(steps)
    if abs(steps - m) > _LATTICE_RTOL * max(1.0, abs(steps)):
        raise GridError(
            f"delay {delay} is not a whole number of time steps (dt={dt})"
        )
    return int(m)


def shift_samples(samples: np.ndarray, steps: int) -> np.ndarray:
    """Delay by ``steps`` samples with zero fill; raise if weight falls off."""
    n = len(samples)
    out = np.zeros_like(samples)
    if abs(steps) >= n:
        lost = samples
    elif steps >= 0:
        out[steps:] = samples[: n - steps]
        lost = samples[n - steps:]
    else:
        out[: n + steps] = samples[-steps:]
        lost = samples[:-steps]
    total = float(np.sum(np.abs(samples) ** 2))
    if total > 0 and float(np.sum(np.abs(lost) ** 2)) > OVERFLOW_TOL * total:
        raise WindowOverflowError(
            f"shift of {steps} samples pushes the envelope out of its window"
        )
    return out


def apply_mz_time_domain(envelope: TemporalAmplitude, params: MachZehnderParams, port: int) -> TemporalAmplitude:
    """Envelope leaving output ``port`` (0 or 1) of the interferometer.

    Both arm delays must sit on the envelope's time lattice.  The result is
    subnormalized; the two ports together carry the input weight.
    """
    if port not in (0, 1):
        raise ValueError(f"port must be 0 or 1, got {port}")
    dt = envelope.dt
    s = shift_samples(envelope.samples, _lattice_steps(params.t_short, dt))
    l = shift_samples(envelope.samples, _lattice_steps(params.t_long, dt))
    ph = np.exp(1j * params.phase)
    if port == 0:
        out = 0.5 * (s - ph * l)
    else:
        out = 0.5j * (ph * l + s)
    return TemporalAmplitude(envelope.t0, dt, out)
