"""Two-photon states and coincidence statistics.

Source pairs are kept in the frequency-anticorrelated form.  Conditional
(post-selected) states are sums of separable time-domain terms, which is
exact for the two-packet states produced by entanglement swapping.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .network import MachZehnderParams, apply_mz_time_domain, mz_coefficients
from .spectral import (
    FrequencyGrid,
    GridError,
    SpectralAmplitude,
    TemporalAmplitude,
    fourier_series,
    gaussian_spectrum,
    overlap,
    packet_at,
)

PORTS = (0, 1)
BINS = ("minus", "zero", "plus", "other")
#: Half-width of each coincidence window, in coherence times.
BIN_HALF_WIDTH = 3.0
#: Minimum arm imbalance, in coherence times, for disjoint windows.
MIN_SEPARATION = 10.0
NEG_NORM_TOL = 1e-10


class OverlappingBinsError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class AnticorrelatedPairState:
    """Photon ``a`` at frequency ``w`` with amplitude ``f(w)``; its partner in
    mode ``b`` sits at ``pump - w``."""

    spectrum: SpectralAmplitude
    pump: float
    mode_labels: tuple[str, str] = ("a", "b")

    def __post_init__(self):
        norm = self.spectrum.norm()
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"pair spectrum must be normalized, norm={norm}")
        if abs(self.pump - 2.0 * self.spectrum.grid.center) > 1e-12 * max(1.0, abs(self.pump)):
            raise GridError("pump must equal twice the grid centre")

    @property
    def grid(self) -> FrequencyGrid:
        return self.spectrum.grid

    @property
    def tau(self) -> float:
        return 1.0 / self.spectrum.bandwidth

    def partner_frequency(self, omega):
        return self.pump - np.asarray(omega)

    def collapse(self, detected: str, click_time: float) -> tuple[complex, TemporalAmplitude]:
        """Packet of the undetected photon after its partner clicks at
        ``click_time``, plus the pump phase ``exp(-i pump t)`` it carries.

        ``detected`` is the mode label of the photon that clicked.
        """
        a, b = self.mode_labels
        if detected == b:
            spec = self.spectrum
        elif detected == a:
            spec = self.spectrum.mirrored()
        else:
            raise ValueError(f"unknown mode {detected!r}; pair modes are {self.mode_labels}")
        return np.exp(-1j * self.pump * click_time), packet_at(spec, click_time)


def make_pair_state(omega_center: float, bandwidth: float, grid: FrequencyGrid) -> AnticorrelatedPairState:
    spec = gaussian_spectrum(omega_center, bandwidth, grid)
    return AnticorrelatedPairState(spec, 2.0 * omega_center)


@dataclass(frozen=True, eq=False)
class SeparableTerm:
    coeff: complex
    env_a: TemporalAmplitude
    env_b: TemporalAmplitude


@dataclass(frozen=True, eq=False)
class TwoPhotonState:
    """``sum_k coeff_k * env_a_k (x) env_b_k``; may be subnormalized."""

    terms: tuple[SeparableTerm, ...]
    mode_labels: tuple[str, str] = ("a", "a'")

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        for term in self.terms[1:]:
            if not (term.env_a.grid.same_as(self.terms[0].env_a.grid)
                    and term.env_b.grid.same_as(self.terms[0].env_b.grid)):
                raise GridError("all terms must share the same time grids")

    @property
    def grid_a(self):
        return self.terms[0].env_a.grid

    @property
    def grid_b(self):
        return self.terms[0].env_b.grid

    def scaled(self, factor: complex) -> "TwoPhotonState":
        return TwoPhotonState(
            tuple(SeparableTerm(t.coeff * factor, t.env_a, t.env_b) for t in self.terms),
            self.mode_labels,
        )

    def normalized(self) -> "TwoPhotonState":
        n = state_norm(self)
        if n == 0.0:
            raise ZeroDivisionError("cannot normalize a zero state")
        return self.scaled(1.0 / n)

    def exchanged(self) -> "TwoPhotonState":
        """Swap the roles of the two modes."""
        return TwoPhotonState(
            tuple(SeparableTerm(t.coeff, t.env_b, t.env_a) for t in self.terms),
            self.mode_labels[::-1],
        )


def gram_inner(left: TwoPhotonState, right: TwoPhotonState) -> complex:
    """``<left|right>`` from the single-photon overlaps of the terms."""
    total = 0j
    for p in left.terms:
        for q in right.terms:
            total += (np.conj(p.coeff) * q.coeff
                      * overlap(p.env_a, q.env_a) * overlap(p.env_b, q.env_b))
    return total


def state_norm(state: TwoPhotonState) -> float:
    n2 = gram_inner(state, state)
    scale = max(1.0, sum(abs(t.coeff) ** 2 for t in state.terms))
    if abs(n2.imag) > 1e-10 * scale:
        raise ArithmeticError(f"state norm^2 has imaginary part {n2.imag:.3e}")
    if n2.real < -NEG_NORM_TOL * scale:
        raise ArithmeticError(f"state norm^2 is negative ({n2.real:.3e})")
    return math.sqrt(max(n2.real, 0.0))


def fidelity(a: TwoPhotonState, b: TwoPhotonState) -> float:
    """``|<a|b>|^2`` for normalized inputs."""
    return abs(gram_inner(a, b)) ** 2 / (state_norm(a) ** 2 * state_norm(b) ** 2)


@dataclass
class CoincidenceTable:
    """Probabilities keyed by ``(port_i, port_j, bin)`` with ``bin`` one of
    ``minus``, ``zero``, ``plus``, ``other``."""

    entries: dict
    bin_width: float
    visibility: float | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        for key, p in self.entries.items():
            if not -1e-12 <= p <= 1.0 + 1e-12:
                raise ValueError(f"probability {p} for {key} outside [0, 1]")

    def __getitem__(self, key):
        return self.entries[key]

    def total(self) -> float:
        return float(sum(self.entries.values()))

    def simultaneous(self, i: int, j: int) -> float:
        return self.entries[(i, j, "zero")]

    def side_total(self) -> float:
        return float(sum(p for (i, j, b), p in self.entries.items() if b in ("minus", "plus")))

    def other_total(self) -> float:
        return float(sum(p for (i, j, b), p in self.entries.items() if b == "other"))

    def as_array(self) -> np.ndarray:
        """Entries as a ``(2, 2, 4)`` array ordered by :data:`BINS`."""
        out = np.zeros((2, 2, len(BINS)))
        for (i, j, b), p in self.entries.items():
            out[i, j, BINS.index(b)] = p
        return out


def assign_bins(offsets: np.ndarray, zero_centers: Sequence[float], side_delta: float, half_width: float) -> np.ndarray:
    """Label every relative-time offset with an index into :data:`BINS`.

    Windows are closed intervals of ``half_width`` around each centre;
    where windows overlap the zero bin wins, then minus, then plus.
    """
    labels = np.full(offsets.shape, BINS.index("other"), dtype=int)
    for name, centers in (("plus", [side_delta]), ("minus", [-side_delta]), ("zero", zero_centers)):
        mask = np.zeros(offsets.shape, dtype=bool)
        for c in centers:
            mask |= np.abs(offsets - c) <= half_width
        labels[mask] = BINS.index(name)
    return labels


def _check_separation(delta_t: float, tau: float):
    if delta_t < MIN_SEPARATION * tau:
        raise OverlappingBinsError(
            f"arm imbalance {delta_t:g} = {delta_t / tau:.3g} tau is below "
            f"{MIN_SEPARATION:g} tau; coincidence windows would overlap"
        )


def franson_relative_amplitude(pair: AnticorrelatedPairState, mz_a: MachZehnderParams,
                               mz_b: MachZehnderParams, i: int, j: int) -> TemporalAmplitude:
    """Amplitude over the detection-time difference ``t_b - t_a`` for ports
    ``(i, j)``.

    For an exactly anticorrelated CW-pumped pair the joint detection
    statistics depend only on this difference; the amplitude is normalized
    per emitted pair, so its squared norm summed over ports is one.
    """
    grid = pair.grid
    omega = grid.omegas
    ca = mz_coefficients(omega, mz_a)[i]
    cb = mz_coefficients(pair.partner_frequency(omega), mz_b)[j]
    h = pair.spectrum.samples * ca * cb
    tg = grid.time_grid()
    return TemporalAmplitude(tg.t0, tg.dt, fourier_series(h, grid, sign=+1))


def bin_probabilities(amplitude: TemporalAmplitude, delta_t: float, tau: float) -> dict:
    """Integrate ``|A|^2`` over windows of width ``6 tau`` at ``-delta_t, 0,
    +delta_t``; everything else lands in ``other``."""
    _check_separation(delta_t, tau)
    weights = np.abs(amplitude.samples) ** 2 * amplitude.dt
    labels = assign_bins(amplitude.times, [0.0], delta_t, BIN_HALF_WIDTH * tau)
    return {b: float(weights[labels == k].sum()) for k, b in enumerate(BINS)}


def franson_table(pair: AnticorrelatedPairState, mz_a: MachZehnderParams, mz_b: MachZehnderParams) -> CoincidenceTable:
    if abs(mz_a.delay - mz_b.delay) > 1e-9 * max(1.0, mz_a.delay):
        raise ValueError("Franson interferometers must have equal arm imbalance")
    entries = {}
    for i in PORTS:
        for j in PORTS:
            amp = franson_relative_amplitude(pair, mz_a, mz_b, i, j)
            for b, p in bin_probabilities(amp, mz_a.delay, pair.tau).items():
                entries[(i, j, b)] = p
    return CoincidenceTable(entries, 2 * BIN_HALF_WIDTH * pair.tau)


def _propagate(state: TwoPhotonState, mz_a, mz_b, i, j):
    if not state.terms:
        raise ValueError("state has no terms")
    coeffs = np.array([t.coeff for t in state.terms], dtype=complex)
    ga = [apply_mz_time_domain(t.env_a, mz_a, i).samples for t in state.terms]
    hb = [apply_mz_time_domain(t.env_b, mz_b, j).samples for t in state.terms]
    return coeffs, ga, hb


def coincidence_density(state: TwoPhotonState, mz_a: MachZehnderParams, mz_b: MachZehnderParams,
                        i: int, j: int) -> np.ndarray:
    """Joint detection density over ``(t_a, t_b)`` for ports ``(i, j)``.

    Rows index the mode-``a`` detection time.  Summed over the grid with
    weight ``dt_a * dt_b`` it gives the port-pair probability.
    """
    coeffs, ga, hb = _propagate(state, mz_a, mz_b, i, j)
    amp = np.zeros((len(ga[0]), len(hb[0])), dtype=complex)
    for c, g, h in zip(coeffs, ga, hb):
        amp += c * np.outer(g, h)
    return np.abs(amp) ** 2


def relative_time_weights(state: TwoPhotonState, mz_a: MachZehnderParams, mz_b: MachZehnderParams,
                          i: int, j: int) -> tuple[np.ndarray, np.ndarray]:
    """Probability per relative-time lattice offset ``t_b - t_a``.

    Uses the separable structure: for each pair of terms the cross-density
    integrated along the anti-diagonals is a cross-correlation, evaluated
    by zero-padded FFT.
    """
    if not state.grid_a.same_as(state.grid_b):
        raise GridError("both modes must share one time grid")
    coeffs, ga, hb = _propagate(state, mz_a, mz_b, i, j)
    n = len(ga[0])
    size = 2 * n
    dt = state.grid_a.dt
    acc = np.zeros(size, dtype=complex)
    k_terms = len(coeffs)
    for k in range(k_terms):
        for l in range(k, k_terms):
            u = np.conj(ga[k]) * ga[l]
            v = np.conj(hb[k]) * hb[l]
            corr = np.fft.ifft(np.conj(np.fft.fft(np.conj(u), size)) * np.fft.fft(v, size))
            w = np.conj(coeffs[k]) * coeffs[l] * corr
            # (l, k) contributes the complex conjugate of (k, l)
            acc += w if k == l else 2.0 * w.real
    weights = acc * dt * dt
    scale = max(float(np.abs(weights).max()), 1e-300)
    if np.abs(weights.imag).max() > 1e-9 * scale + 1e-15:
        raise ArithmeticError("relative-time weights are not real")
    # reorder so offsets run from -(n-1) to n-1
    m = np.arange(-(n - 1), n)
    return m * dt, weights.real[m % size]


def binned_table(state: TwoPhotonState, mz_a: MachZehnderParams, mz_b: MachZehnderParams,
                 zero_centers: Iterable[float], tau: float) -> CoincidenceTable:
    """Coincidence table of a conditional state.

    Side windows sit at ``-/+ delay``; the zero bin is the union of windows
    around ``zero_centers``.
    """
    zero_centers = list(zero_centers)
    entries = {}
    for i in PORTS:
        for j in PORTS:
            offsets, w = relative_time_weights(state, mz_a, mz_b, i, j)
            labels = assign_bins(offsets, zero_centers, mz_a.delay, BIN_HALF_WIDTH * tau)
            for k, b in enumerate(BINS):
                entries[(i, j, b)] = max(float(w[labels == k].sum()), 0.0)
    return CoincidenceTable(entries, 2 * BIN_HALF_WIDTH * tau)
