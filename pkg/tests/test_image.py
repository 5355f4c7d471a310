from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from uwiqa.image import (
    ImageBuffer,
    ImageReadError,
    load_image,
    preprocess,
    resize_bilinear,
    round_half_away,
    save_png,
    to_float,
    to_grayscale,
    to_uint8,
)


def test_buffer_invariants():
    img = ImageBuffer(np.zeros((3, 5, 3), np.uint8))
    assert (img.width, img.height, img.channels) == (5, 3, 3)
    assert img.data.size == img.width * img.height * img.channels
    with pytest.raises(ValueError):
        ImageBuffer(np.full((2, 2, 3), 300))
    with pytest.raises(ValueError):
        ImageBuffer(np.full((2, 2, 3), 1.5), depth="float")
    with pytest.raises(ValueError):
        ImageBuffer(np.zeros((0, 2, 3), np.uint8))
    with pytest.raises(ValueError):
        ImageBuffer(np.zeros((2, 2, 3), np.uint8), encoding="gray")


def test_round_half_away():
    assert list(round_half_away([0.5, 1.5, 2.5, -0.5, 127.5])) == [1, 2, 3, -1, 128]


def test_load_black_png(tmp_path):
    path = tmp_path / "black.png"
    save_png(ImageBuffer(np.zeros((2, 2, 3), np.uint8)), path)
    img = load_image(path)
    assert img.depth == "uint8" and img.encoding == "srgb"
    assert img.data.ravel().tolist() == [0] * 12


def test_load_red_pixel(tmp_path):
    path = tmp_path / "red.png"
    save_png(ImageBuffer(np.array([[[255, 0, 0]]], np.uint8)), path)
    assert load_image(path).data.ravel().tolist() == [255, 0, 0]


def test_load_grayscale_expands(tmp_path):
    path = tmp_path / "gray.png"
    save_png(ImageBuffer.from_array(np.array([[7, 200]], np.uint8)), path)
    img = load_image(path)
    assert img.channels == 3
    assert img.data[0, 1].tolist() == [200, 200, 200]


def test_truncated_file_names_path(tmp_path):
    good = tmp_path / "good.png"
    rng = np.random.default_rng(0)
    save_png(ImageBuffer(rng.integers(0, 256, (64, 64, 3), dtype=np.uint8)), good)
    bad = tmp_path / "truncated.png"
    bad.write_bytes(good.read_bytes()[:200])
    with pytest.raises(ImageReadError) as exc:
        load_image(bad)
    assert str(bad) in str(exc.value)


def test_unsupported_and_missing(tmp_path):
    txt = tmp_path / "notes.png"
    txt.write_text("not an image")
    with pytest.raises(ImageReadError, match="notes.png"):
        load_image(txt)
    with pytest.raises(ImageReadError, match="missing.png"):
        load_image(tmp_path / "missing.png")


def test_png_round_trip(tmp_path):
    rng = np.random.default_rng(1)
    img = ImageBuffer(rng.integers(0, 256, (13, 17, 3), dtype=np.uint8))
    save_png(img, tmp_path / "a.png")
    once = load_image(tmp_path / "a.png")
    save_png(once, tmp_path / "b.png")
    assert np.array_equal(load_image(tmp_path / "b.png").data, img.data)


def test_resize_identity():
    rng = np.random.default_rng(2)
    img = ImageBuffer(rng.integers(0, 256, (9, 11, 3), dtype=np.uint8))
    assert np.array_equal(resize_bilinear(img, 1).data, img.data)


def test_resize_center_aligned_two_to_one():
    # output centre maps to source x = (0 + 0.5) * 2 - 0.5 = 0.5 -> halfway between 0 and 255
    img = ImageBuffer.from_array(np.array([[0, 255]], np.uint8))
    out = resize_bilinear(img, Fraction(1, 2))
    assert out.shape == (1, 1, 1)
    assert out.data[0, 0, 0] == 128


def test_resize_quarter_dimensions():
    img = ImageBuffer(np.zeros((300, 400, 3), np.uint8))
    assert resize_bilinear(img, Fraction(1, 4)).shape == (75, 100, 3)
    assert resize_bilinear(img, 0.25).shape == (75, 100, 3)


def test_resize_errors():
    img = ImageBuffer(np.zeros((2, 2, 3), np.uint8))
    with pytest.raises(ValueError):
        resize_bilinear(img, Fraction(1, 8))
    with pytest.raises(ValueError):
        resize_bilinear(img, 0)
    with pytest.raises(ValueError):
        resize_bilinear(img, 2)


def test_resize_matches_hand_computed_weights():
    # 4 -> 2 columns: positions (0.5, 2.5) average neighbouring pairs
    img = ImageBuffer.from_array(np.array([[0, 100, 200, 250]], np.uint8))
    out = resize_bilinear(img, Fraction(1, 2))
    assert out.shape == (1, 2, 1)  # rows: round(0.5) = 1
    assert out.data[0, :, 0].tolist() == [50, 225]


@settings(max_examples=60, deadline=None)
@given(
    arrays(np.uint8, st.tuples(st.integers(2, 24), st.integers(2, 24), st.just(3))),
    st.sampled_from([Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(9, 10)]),
)
def test_resize_stays_in_input_range(data, scale):
    img = ImageBuffer(data)
    if min(img.height, img.width) * scale < 0.5:
        return
    out = resize_bilinear(img, scale).data
    assert out.min() >= data.min() and out.max() <= data.max()


def test_grayscale_examples():
    img = ImageBuffer(np.array([[[255, 255, 255], [255, 0, 0], [0, 0, 0]]], np.uint8))
    assert to_grayscale(img).data[0, :, 0].tolist() == [255, 76, 0]


def test_grayscale_exact_on_gray_axis():
    v = np.arange(256, dtype=np.uint8)
    img = ImageBuffer(np.repeat(v[None, :, None], 3, axis=2))
    assert np.array_equal(to_grayscale(img).data[0, :, 0], v)


def test_depth_conversion():
    img = ImageBuffer(np.array([[[0, 128, 255]]], np.uint8))
    f = to_float(img)
    assert f.data[0, 0, 1] == 128 / 255
    assert np.array_equal(to_uint8(f).data, img.data)


def test_preprocess_quarter():
    img = ImageBuffer(np.zeros((40, 80, 3)), depth="float")
    out = preprocess(img, quarter=True)
    assert out.shape == (10, 20, 3) and out.depth == "uint8"
