import itertools
import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import load_reference_pairs
from uwiqa.colorspace import srgb_to_lab
from uwiqa.color_accuracy import (
    Ciede2000Params,
    ciede2000,
    delta_e00,
    euclidean_distance,
    reproduction_angular_error,
)

lab_values = st.tuples(
    st.floats(0, 100, allow_subnormal=False),
    st.floats(-128, 128, allow_subnormal=False),
    st.floats(-128, 128, allow_subnormal=False),
)
rgb_values = st.tuples(*[st.floats(0, 1, allow_subnormal=False)] * 3).filter(lambda v: max(v) > 1e-6)


def test_reference_pairs_both_orders():
    ref, test, expected = load_reference_pairs()
    assert len(expected) == 34
    assert np.max(np.abs(delta_e00(ref, test) - expected)) < 1e-4
    assert np.max(np.abs(delta_e00(test, ref) - expected)) < 1e-4


def test_single_pair_returns_floats():
    out = ciede2000((50, 2.6772, -79.7751), (50, 0, -82.7485))
    assert isinstance(out.value, float)
    assert out.value == pytest.approx(2.0425, abs=1e-4)


def test_identical_is_zero():
    assert delta_e00((41.2, -3.0, 17.5), (41.2, -3.0, 17.5)) == 0.0


def test_kl_halves_lightness_only_difference():
    base = delta_e00((50, 0, 0), (55, 0, 0))
    doubled = delta_e00((50, 0, 0), (55, 0, 0), Ciede2000Params(kL=2.0))
    assert doubled == pytest.approx(base / 2, rel=1e-12)


def test_params_must_be_positive():
    with pytest.raises(ValueError):
        Ciede2000Params(kC=0)


@given(lab_values, lab_values)
def test_symmetry_and_non_negativity(a, b):
    ab, ba = delta_e00(a, b), delta_e00(b, a)
    assert ab >= 0
    assert ab == pytest.approx(ba, abs=1e-9)
    if a != b:
        assume(max(abs(x - y) for x, y in zip(a, b)) > 1e-6)
        assert ab > 0


@given(lab_values, lab_values, st.floats(0.5, 3), st.floats(0.5, 3), st.floats(0.5, 3))
def test_breakdown_recombines(a, b, kl, kc, kh):
    out = ciede2000(a, b, Ciede2000Params(kl, kc, kh))
    assert out.recombine() == pytest.approx(out.value, abs=1e-9)


def test_agrees_with_skimage_over_srgb_pairs():
    color = pytest.importorskip("skimage.color")
    rng = np.random.default_rng(7)
    a = srgb_to_lab(rng.integers(0, 256, (5000, 3)))
    b = srgb_to_lab(rng.integers(0, 256, (5000, 3)))
    assert np.allclose(delta_e00(a, b), color.deltaE_ciede2000(a, b), atol=1e-6)


def test_saturated_complements_exceed_100():
    # the standard formula is not capped at 100: sRGB green vs magenta is ~111.4
    green, magenta = srgb_to_lab(np.array([[0, 255, 0], [255, 0, 255]]))
    assert delta_e00(green, magenta) == pytest.approx(111.414, abs=1e-2)


def test_imperceptible_flag():
    assert ciede2000((50, 0, 0), (50.5, 0, 0)).imperceptible
    assert not ciede2000((50, 0, 0), (55, 0, 0)).imperceptible


def test_angular_examples():
    assert reproduction_angular_error((0.5, 0.5, 0.5)) == 0.0
    assert reproduction_angular_error((1, 0, 0)) == pytest.approx(54.7356, abs=1e-4)
    assert reproduction_angular_error((2, 1, 1)) == pytest.approx(math.degrees(math.acos(4 / math.sqrt(18))), abs=1e-10)
    assert reproduction_angular_error((2, 1, 1)) == pytest.approx(19.4712, abs=1e-4)


def test_angular_integer_input_is_normalised():
    assert reproduction_angular_error(np.array([200, 100, 100])) == pytest.approx(
        reproduction_angular_error((2.0, 1.0, 1.0)), abs=1e-12
    )


def test_angular_errors():
    with pytest.raises(ValueError, match="zero"):
        reproduction_angular_error((0, 0, 0))
    with pytest.raises(ValueError):
        reproduction_angular_error((-0.1, 0.5, 0.5))


@given(rgb_values, st.floats(1e-3, 1e3))
def test_angle_scale_invariant_and_bounded(v, alpha):
    phi = reproduction_angular_error(v)
    assert 0 <= phi <= 90
    scaled = tuple(alpha * x for x in v)
    assume(max(scaled) > 0)
    assert reproduction_angular_error(scaled) == pytest.approx(phi, abs=1e-9)


@given(rgb_values)
def test_angle_permutation_invariant(v):
    phis = {reproduction_angular_error(p) for p in itertools.permutations(v)}
    assert len(phis) == 1


def test_per_pixel_mode_averages_angles():
    px = np.array([[1.0, 0, 0], [1.0, 1.0, 1.0]])
    assert reproduction_angular_error(px, per_pixel=True) == pytest.approx(54.7356 / 2, abs=1e-4)


def test_euclidean():
    assert euclidean_distance((1, 2, 3), (1, 2, 3)) == 0.0
    assert euclidean_distance((0, 0, 0), (255, 0, 0), "rgb") == 255.0
    assert euclidean_distance((50, 3, 4), (50, 0, 0), "lab") == 5.0
    with pytest.raises(ValueError):
        euclidean_distance((0, 0, 0), (1, 1, 1), "hsv")
