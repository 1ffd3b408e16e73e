import math

import numpy as np
import pytest

from franson_swap.experiments import Setup, fringe_visibility
from franson_swap.network import MachZehnderParams
from franson_swap.spectral import GridError
from franson_swap.swap import (
    DetectionEvent,
    PostselectionClass,
    beam_split,
    classify,
    condition_on_detections,
    hom_cross_coincidence_probability,
    interference_centers,
    postselection_weight,
    swapped_fringe_probabilities,
)
from franson_swap.twophoton import BINS, gram_inner, make_pair_state

SETUP = Setup(grid_points=4096)
PHASES = 2 * math.pi * np.arange(16) / 16


@pytest.fixture(scope="module")
def pair():
    return SETUP.pair()


@pytest.fixture(scope="module")
def four(pair):
    return beam_split(pair, pair)


def ev(detector, t):
    return DetectionEvent(detector, t)


def test_detector_amplitudes(four):
    amps = four.detector_amplitudes()
    assert all(abs(abs(a) - 0.5) < 1e-15 for a in amps.values())
    assert sum(abs(a) ** 2 for a in amps.values()) == pytest.approx(1.0)
    assert amps[("c", "c'")] / amps[("c'", "c")] == pytest.approx(-1.0)
    assert amps[("c", "c")] == pytest.approx(amps[("c'", "c'")])


def test_classify_and_event_validation():
    assert classify(ev("c", 0), ev("c", 1)) is PostselectionClass.SAME
    assert classify(ev("c", 0), ev("c'", 1)) is PostselectionClass.DIFFERENT
    with pytest.raises(ValueError):
        DetectionEvent("d", 0.0)


def test_postselected_states(four):
    same = condition_on_detections(four, ev("c", 0.0), ev("c", 30.0))
    diff = condition_on_detections(four, ev("c", 0.0), ev("c'", 30.0))
    assert same.postselection is PostselectionClass.SAME
    assert same.weight == pytest.approx(0.5, abs=1e-9)
    assert diff.weight == pytest.approx(0.5, abs=1e-9)
    # Ψ- flips sign under exchange of a and a'; Ψ+ does not
    assert gram_inner(diff.state, diff.state.exchanged()) == pytest.approx(-1.0, abs=1e-9)
    assert gram_inner(same.state, same.state.exchanged()) == pytest.approx(1.0, abs=1e-9)
    assert abs(gram_inner(same.state, diff.state)) < 1e-9


def test_bunching_at_zero_delay(four):
    diff = condition_on_detections(four, ev("c", 0.0), ev("c'", 0.0))
    assert diff.weight < 1e-6
    with pytest.raises(ValueError):
        condition_on_detections(four, ev("c", 0.0), ev("c", 0.1))


def test_click_near_edge(four):
    with pytest.raises(GridError):
        condition_on_detections(four, ev("c", 0.0), ev("c'", 510.0))


@pytest.mark.parametrize("dt, expected", [(0.0, 0.0), (1.0, (1 - math.exp(-1)) / 2), (50.0, 0.5)])
def test_hom_dip(four, dt, expected):
    assert hom_cross_coincidence_probability(four, dt) == pytest.approx(expected, abs=1e-9)


def test_pattern_weights_sum_to_two(four):
    total = sum(postselection_weight(four, ev(d1, 0.0), ev(d2, 1.3))
                for d1 in ("c", "c'") for d2 in ("c", "c'"))
    assert total == pytest.approx(2.0, abs=1e-9)


def test_interference_centers():
    assert interference_centers(30.0, 30.0) == [0.0]
    assert interference_centers(33.0, 30.0) == [-3.0, 3.0]


def _tables(pair, alpha, beta, detector, dts=30.0):
    mza = MachZehnderParams(5.0, 35.0, alpha)
    mzb = MachZehnderParams(5.0, 35.0, beta)
    return swapped_fringe_probabilities(pair, pair, mza, mzb, ev("c", 0.0), ev(detector, dts))


def test_fringes_depend_on_phase_difference_only(pair):
    a = _tables(pair, 0.3, 1.0, "c").as_array()
    b = _tables(pair, 2.3, 3.0, "c").as_array()
    assert np.abs(a - b).max() < 1e-9


def test_same_plus_different_is_flat(pair):
    for alpha in (0.0, 1.1, 2.9):
        same = _tables(pair, alpha, 0.2, "c")
        diff = _tables(pair, alpha, 0.2, "c'")
        for i in (0, 1):
            for j in (0, 1):
                s = same[(i, j, "zero")] + diff[(i, j, "zero")]
                assert s == pytest.approx(0.125, abs=1e-4)


def test_fringe_values(pair):
    d = 0.8
    same = _tables(pair, d, 0.0, "c")
    diff = _tables(pair, d, 0.0, "c'")
    assert same[(0, 0, "zero")] == pytest.approx((1 + math.cos(d)) / 16, abs=1e-5)
    assert diff[(0, 0, "zero")] == pytest.approx((1 - math.cos(d)) / 16, abs=1e-5)
    assert same.total() == pytest.approx(1.0, abs=1e-9)
    assert same.meta["postselection"] == "same"


def test_exchange_of_sources():
    grid = SETUP.grid()
    left = make_pair_state(SETUP.omega, 1.0, grid)
    right = make_pair_state(SETUP.omega, 0.8, grid)
    mza = MachZehnderParams(5.0, 35.0, 0.4)
    mzb = MachZehnderParams(5.0, 35.0, 1.9)
    mirror = {"minus": "plus", "plus": "minus", "zero": "zero", "other": "other"}
    for det in ("c", "c'"):
        t1 = swapped_fringe_probabilities(left, right, mza, mzb, ev("c", 0.0), ev(det, 30.0))
        t2 = swapped_fringe_probabilities(right, left, mzb, mza, ev("c", 0.0), ev(det, 30.0))
        for (i, j, b), p in t1.entries.items():
            assert t2[(j, i, mirror[b])] == pytest.approx(p, abs=1e-6)


def test_far_mismatch_is_flat(pair):
    rows = [_tables(pair, p, 0.0, "c", dts=90.0) for p in PHASES]
    for row in rows:
        for i in (0, 1):
            for j in (0, 1):
                assert row[(i, j, "zero")] == pytest.approx(1 / 16, abs=1e-6)
    assert fringe_visibility(PHASES, rows) < 0.01
    assert set(BINS) == {b for (_, _, b) in rows[0].entries}
