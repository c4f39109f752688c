import numpy as np
import pytest

from topoedit import ChannelField, ChannelId, ImageRGB
from topoedit.session import analyze_field

# Hand-checked 3x5 terrain used as the canonical fixture throughout the
# suite: three minima (d < m < l), two maxima (a > j), saddles h, o, f, and
# regular nodes b, c, e, g, i, k, n. Values are the sort ranks.
TERRAIN = np.array(
    [
        [3, 8, 9, 11, 10],
        [4, 14, 12, 13, 2],
        [1, 0, 7, 6, 5],
    ],
    dtype=np.float64,
)

# letter -> (row, col); node ids equal raster index because all values differ
TERRAIN_LETTERS = {
    "l": (0, 0), "e": (0, 1), "g": (0, 2), "b": (0, 3), "k": (0, 4),
    "h": (1, 0), "a": (1, 1), "f": (1, 2), "j": (1, 3), "m": (1, 4),
    "c": (2, 0), "d": (2, 1), "o": (2, 2), "n": (2, 3), "i": (2, 4),
}

LINE5 = np.array([[2, 0, 3, 1, 4]], dtype=np.float64)


def field_of(values, channel=ChannelId.BRIGHTNESS) -> ChannelField:
    return ChannelField(np.asarray(values, dtype=np.float64), channel)


def gray_image(values) -> ImageRGB:
    arr = np.asarray(values)
    return ImageRGB(np.repeat(arr[:, :, None], 3, axis=2).astype(np.uint8))


@pytest.fixture
def terrain_field():
    return field_of(TERRAIN)


@pytest.fixture
def terrain_analysis():
    return analyze_field(field_of(TERRAIN), connectivity=4)


@pytest.fixture
def terrain_ids():
    return {letter: r * 5 + c for letter, (r, c) in TERRAIN_LETTERS.items()}


@pytest.fixture
def line5_analysis():
    return analyze_field(field_of(LINE5), connectivity=8)
