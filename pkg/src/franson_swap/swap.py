"""Entanglement swapping between two independent pair sources.

The ``b`` photons of both sources meet on a beam splitter whose outputs are
watched by detectors ``c`` and ``c'``.  Two clicks localise both emission
events without revealing which source produced which click, leaving the
remaining photons ``a`` and ``a'`` in a two-packet superposition.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple

from .network import BeamSplitterConvention, MachZehnderParams
from .spectral import GridError
from .twophoton import (
    AnticorrelatedPairState,
    CoincidenceTable,
    SeparableTerm,
    TwoPhotonState,
    binned_table,
    state_norm,
)

DETECTORS = ("c", "c'")
#: Required distance between a click and the window edge, in coherence times.
EDGE_MARGIN = 6.0
#: Conditional states lighter than this are returned unnormalized.
DEGENERATE_WEIGHT = 1e-14


class PostselectionClass(enum.Enum):
    SAME = "same"
    DIFFERENT = "different"


@dataclass(frozen=True)
class DetectionEvent:
    detector: str
    time: float

    def __post_init__(self):
        if self.detector not in DETECTORS:
            raise ValueError(f"detector must be one of {DETECTORS}, got {self.detector!r}")

    @property
    def port(self) -> int:
        return DETECTORS.index(self.detector)


@dataclass(frozen=True, eq=False)
class FourModeState:
    left_pair: AnticorrelatedPairState
    right_pair: AnticorrelatedPairState
    bs: BeamSplitterConvention = field(default_factory=BeamSplitterConvention)

    def __post_init__(self):
        l, r = self.left_pair, self.right_pair
        if l.grid != r.grid:
            raise GridError("both sources must share one frequency grid")
        if abs(l.pump - r.pump) > 1e-12 * max(1.0, abs(l.pump)):
            raise GridError("both sources must share one pump frequency")

    def detector_amplitudes(self) -> dict:
        """Amplitude that photon ``b`` reaches the first detector and ``b'``
        the second, keyed by ``(detector_b, detector_b')``."""
        m = self.bs.matrix
        return {
            (DETECTORS[d], DETECTORS[e]): complex(m[d, 0] * m[e, 1])
            for d in range(2) for e in range(2)
        }

    def swapped(self) -> "FourModeState":
        return FourModeState(self.right_pair, self.left_pair, self.bs)

    @property
    def tau(self) -> float:
        return max(self.left_pair.tau, self.right_pair.tau)


def beam_split(pair_left: AnticorrelatedPairState, pair_right: AnticorrelatedPairState,
               bs: BeamSplitterConvention | None = None) -> FourModeState:
    return FourModeState(pair_left, pair_right, bs or BeamSplitterConvention())


def classify(e1: DetectionEvent, e2: DetectionEvent) -> PostselectionClass:
    return PostselectionClass.SAME if e1.detector == e2.detector else PostselectionClass.DIFFERENT


class ConditionalState(NamedTuple):
    state: TwoPhotonState
    postselection: PostselectionClass
    weight: float


def _check_window(state: FourModeState, *events: DetectionEvent):
    tg = state.left_pair.grid.time_grid()
    margin = EDGE_MARGIN * state.tau
    for e in events:
        if not tg.t0 + margin <= e.time <= tg.t_end - margin:
            raise GridError(
                f"click at t={e.time:g} is closer than {EDGE_MARGIN:g} tau to the "
                f"window edge [{tg.t0:g}, {tg.t_end:g}]"
            )


def _conditional_terms(state: FourModeState, e1: DetectionEvent, e2: DetectionEvent) -> TwoPhotonState:
    amps = state.detector_amplitudes()
    left, right = state.left_pair, state.right_pair
    terms = []
    for first, second in ((e1, e2), (e2, e1)):
        # photon b clicks as `first`, photon b' as `second`
        amp = amps[(first.detector, second.detector)]
        ph_l, g = left.collapse(left.mode_labels[1], first.time)
        ph_r, h = right.collapse(right.mode_labels[1], second.time)
        terms.append(SeparableTerm(amp * ph_l * ph_r, g, h))
    return TwoPhotonState(tuple(terms), (left.mode_labels[0], right.mode_labels[0]))


def postselection_weight(state: FourModeState, e1: DetectionEvent, e2: DetectionEvent) -> float:
    """Relative probability of the click pattern ``(e1, e2)``.

    Over the four detector patterns at a fixed pair of click times the
    weights sum to two, one per ordering of the two clicks.
    """
    _check_window(state, e1, e2)
    return state_norm(_conditional_terms(state, e1, e2)) ** 2


def condition_on_detections(state: FourModeState, e1: DetectionEvent, e2: DetectionEvent) -> ConditionalState:
    """State of modes ``a, a'`` given clicks ``e1`` and ``e2``.

    Returns the normalized conditional state, its postselection class and
    the pre-normalization weight.  States of negligible weight (bunching at
    zero delay) are returned unnormalized.
    """
    _check_window(state, e1, e2)
    klass = classify(e1, e2)
    dt = state.left_pair.grid.time_step
    if klass is PostselectionClass.SAME and abs(e1.time - e2.time) < dt:
        raise ValueError(
            "two clicks on one detector closer than the time step are unresolvable"
        )
    raw = _conditional_terms(state, e1, e2)
    weight = state_norm(raw) ** 2
    if weight > DEGENERATE_WEIGHT:
        raw = raw.scaled(1.0 / math.sqrt(weight))
    return ConditionalState(raw, klass, weight)


def hom_cross_coincidence_probability(state: FourModeState, delta_t: float, t_click: float = 0.0) -> float:
    """Probability that clicks separated by ``delta_t`` land on different
    detectors.  Vanishes at zero delay and tends to 1/2 for distinguishable
    photons."""
    e1 = DetectionEvent("c", t_click)
    e2 = DetectionEvent("c'", t_click + delta_t)
    return postselection_weight(state, e1, e2)


def interference_centers(delta_small_t: float, delay: float) -> list[float]:
    """Relative times at which the short/long and long/short paths of the two
    packets arrive; both coincide at zero when the packet spacing matches the
    arm imbalance."""
    d = abs(delta_small_t) - delay
    if abs(d) <= 1e-12 * max(1.0, delay):
        return [0.0]
    return [-d, d]


def swapped_fringe_probabilities(pair_left: AnticorrelatedPairState, pair_right: AnticorrelatedPairState,
                                 mz_a: MachZehnderParams, mz_b: MachZehnderParams,
                                 e1: DetectionEvent, e2: DetectionEvent) -> CoincidenceTable:
    """Coincidence table of ``a, a'`` behind their interferometers, given the
    clicks ``e1, e2``; normalized to the conditional state."""
    if abs(mz_a.delay - mz_b.delay) > 1e-9 * max(1.0, mz_a.delay):
        raise ValueError("both interferometers must have equal arm imbalance")
    four = beam_split(pair_left, pair_right)
    cond = condition_on_detections(four, e1, e2)
    if cond.weight <= DEGENERATE_WEIGHT:
        raise ValueError(
            f"click pattern has negligible probability ({cond.weight:.2e}); "
            "no conditional state to propagate"
        )
    delta_small_t = abs(e2.time - e1.time)
    table = binned_table(cond.state, mz_a, mz_b,
                         interference_centers(delta_small_t, mz_a.delay), four.tau)
    table.meta.update(
        postselection=cond.postselection.value,
        weight=cond.weight,
        delta_small_t=delta_small_t,
    )
    return table
