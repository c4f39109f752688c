"""Image I/O, colorspace channels, and super-pixel graph construction.

A loaded image is decomposed into per-channel scalar fields. Adjacent
pixels of exactly equal value are grouped into super-pixels so that the
sweep algorithms in :mod:`topoedit.topology` see a graph in which no two
neighbouring nodes share a value.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from io import BytesIO
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import (
    CorruptImageError,
    DimensionMismatchError,
    ImageIoError,
    UnsupportedFormatError,
)

_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


class ChannelId(Enum):
    """Color channels that map to a real-valued scalar field.

    Hue is deliberately absent: it is circular, and the sweep-based
    segmentation requires a totally ordered codomain.
    """

    RED = "red"
    GREEN = "green"
    BLUE = "blue"
    SATURATION = "saturation"
    BRIGHTNESS = "brightness"

    @classmethod
    def parse(cls, name: str) -> "ChannelId":
        try:
            return cls(name.strip().lower())
        except ValueError:
            valid = ", ".join(c.value for c in cls)
            raise ValueError(f"unknown channel {name!r} (expected one of: {valid})") from None


@dataclass(frozen=True)
class ImageRGB:
    """8-bit RGB raster. ``pixels`` has shape (height, width, 3), dtype uint8."""

    pixels: np.ndarray

    def __post_init__(self):
        p = self.pixels
        if p.ndim != 3 or p.shape[2] != 3 or p.dtype != np.uint8:
            raise ValueError("pixels must be a (height, width, 3) uint8 array")
        if p.shape[0] < 1 or p.shape[1] < 1:
            raise ValueError("image must be at least 1x1")

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    def as_float(self) -> np.ndarray:
        return self.pixels.astype(np.float64)

    def same_pixels(self, other: "ImageRGB") -> bool:
        return self.pixels.shape == other.pixels.shape and bool(
            np.array_equal(self.pixels, other.pixels)
        )


@dataclass(frozen=True)
class ChannelField:
    """One channel of an image as a real scalar field, shape (height, width)."""

    values: np.ndarray
    channel: ChannelId

    def __post_init__(self):
        v = self.values
        if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] < 1:
            raise ValueError("field values must be a non-empty 2d array")
        if v.dtype != np.float64:
            object.__setattr__(self, "values", v.astype(np.float64))
        if not np.isfinite(self.values).all():
            raise ValueError("field values must be finite")

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    def with_values(self, values: np.ndarray) -> "ChannelField":
        return ChannelField(values=values, channel=self.channel)


@dataclass(frozen=True)
class SuperPixelGraph:
    """Plateau-merged pixel graph.

    Node ids are assigned by ascending minimum raster index of the member
    pixels, which makes construction deterministic. ``pixel_node`` maps each
    raster index to its node id.
    """

    width: int
    height: int
    connectivity: int
    node_values: np.ndarray
    members: tuple
    adjacency: tuple
    pixel_node: np.ndarray

    @property
    def node_count(self) -> int:
        return len(self.node_values)

    @property
    def pixel_counts(self) -> np.ndarray:
        return np.array([len(m) for m in self.members], dtype=np.int64)


# ---------------------------------------------------------------------------
# image loading / saving


def _decode_p3(data: bytes) -> np.ndarray:
    text = data.decode("ascii", errors="replace")
    # strip comments, then tokenize
    lines = [line.split("#", 1)[0] for line in text.splitlines()]
    tokens = " ".join(lines).split()
    if not tokens or tokens[0] != "P3":
        raise CorruptImageError("not a P3 PPM stream")
    try:
        width, height, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
        values = np.array([int(t) for t in tokens[4 : 4 + width * height * 3]], dtype=np.int64)
    except (ValueError, IndexError) as exc:
        raise CorruptImageError(f"bad PPM header or samples: {exc}") from exc
    if width < 1 or height < 1 or maxval < 1 or maxval > 65535:
        raise CorruptImageError("PPM dimensions or maxval out of range")
    if len(values) != width * height * 3:
        raise CorruptImageError("PPM sample count does not match dimensions")
    if values.min() < 0 or values.max() > maxval:
        raise CorruptImageError("PPM sample outside [0, maxval]")
    if maxval != 255:
        values = np.floor(values * (255.0 / maxval) + 0.5).astype(np.int64)
    return values.reshape(height, width, 3).astype(np.uint8)


def _decode_png(data: bytes) -> np.ndarray:
    try:
        with Image.open(BytesIO(data)) as img:
            img.load()
            if img.mode in ("I", "I;16", "I;16B", "I;16L"):
                arr = np.asarray(img, dtype=np.float64)
                arr = np.floor(arr * (255.0 / 65535.0) + 0.5).astype(np.uint8)
                return np.repeat(arr[:, :, None], 3, axis=2)
            if img.mode != "RGB":
                img = img.convert("RGB")
            return np.asarray(img, dtype=np.uint8).copy()
    except UnidentifiedImageError as exc:
        raise CorruptImageError(f"undecodable PNG: {exc}") from exc
    except OSError as exc:
        raise CorruptImageError(f"truncated or corrupt PNG: {exc}") from exc


def decode_image_bytes(data: bytes) -> ImageRGB:
    """Decode PNG or ASCII PPM (P3) bytes into an image."""
    if data.startswith(_PNG_MAGIC):
        return ImageRGB(_decode_png(data))
    if data[:2] == b"P3":
        return ImageRGB(_decode_p3(data))
    if data[:8].startswith(b"\x89PN") or data[:2] in (b"P6", b"P5", b"P2", b"P1"):
        raise UnsupportedFormatError("only PNG and ASCII PPM (P3) inputs are supported")
    raise UnsupportedFormatError("unrecognized image format (expected PNG or P3 PPM)")


def load_image(path) -> ImageRGB:
    """Load a PNG or ASCII PPM file. 16-bit sources are rescaled to 8-bit."""
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(str(p))
    try:
        data = p.read_bytes()
    except OSError as exc:
        raise ImageIoError(f"cannot read {p}: {exc}") from exc
    return decode_image_bytes(data)


def encode_png(image: ImageRGB) -> bytes:
    buf = BytesIO()
    Image.fromarray(image.pixels, mode="RGB").save(buf, format="PNG")
    return buf.getvalue()


def save_image(image: ImageRGB, path) -> None:
    """Write an image as 8-bit RGB PNG."""
    data = encode_png(image)
    try:
        Path(path).write_bytes(data)
    except OSError as exc:
        raise ImageIoError(f"cannot write {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# channel extraction and write-back

# All channel math runs in float64 on a 0..255 scale. Editing sessions keep
# real-valued channels; quantization happens only on write-back/export.


def channel_values(rgb: np.ndarray, channel: ChannelId) -> np.ndarray:
    """Per-pixel scalar for ``channel`` from a float (H, W, 3) array."""
    if channel is ChannelId.RED:
        return rgb[:, :, 0].copy()
    if channel is ChannelId.GREEN:
        return rgb[:, :, 1].copy()
    if channel is ChannelId.BLUE:
        return rgb[:, :, 2].copy()
    mx = rgb.max(axis=2)
    if channel is ChannelId.BRIGHTNESS:
        return mx
    mn = rgb.min(axis=2)
    sat = np.zeros_like(mx)
    ok = mx > 0
    sat[ok] = 255.0 * (mx[ok] - mn[ok]) / mx[ok]
    return sat


def hue_degrees(rgb: np.ndarray) -> np.ndarray:
    """Hue in [0, 360) from a float (H, W, 3) array; achromatic pixels get 0."""
    r, g, b = rgb[:, :, 0], rgb[:, :, 1], rgb[:, :, 2]
    mx = rgb.max(axis=2)
    c = mx - rgb.min(axis=2)
    h = np.zeros_like(mx)
    ok = c > 0
    with np.errstate(invalid="ignore", divide="ignore"):
        hr = (g - b) / c
        hg = (b - r) / c + 2.0
        hb = (r - g) / c + 4.0
    h = np.select([ok & (mx == r), ok & (mx == g), ok & (mx == b)], [hr, hg, hb], default=0.0)
    h = (h * 60.0) % 360.0
    return h


def compose_hsb(hue: np.ndarray, sat: np.ndarray, bright: np.ndarray) -> np.ndarray:
    """Rebuild float RGB from hue [0,360), saturation [0,255], brightness."""
    s = sat / 255.0
    v = bright
    c = v * s
    hp = hue / 60.0
    x = c * (1.0 - np.abs(hp % 2.0 - 1.0))
    m = v - c
    zeros = np.zeros_like(c)
    sextant = np.floor(hp).astype(np.int64) % 6
    r = np.select([sextant == 0, sextant == 1, sextant == 2, sextant == 3, sextant == 4], [c, x, zeros, zeros, x], default=c)
    g = np.select([sextant == 0, sextant == 1, sextant == 2, sextant == 3, sextant == 4], [x, c, c, x, zeros], default=zeros)
    b = np.select([sextant == 0, sextant == 1, sextant == 2, sextant == 3, sextant == 4], [zeros, zeros, x, c, c], default=x)
    return np.stack([r + m, g + m, b + m], axis=2)


def quantize(values: np.ndarray) -> np.ndarray:
    """Clamp to [0, 255] and round half-up to uint8."""
    return np.floor(np.clip(values, 0.0, 255.0) + 0.5).astype(np.uint8)


def extract_channel(image: ImageRGB, channel: ChannelId) -> ChannelField:
    """Pull one channel out of an image as a real-valued field."""
    return ChannelField(values=channel_values(image.as_float(), channel), channel=channel)


def recompose_rgb(rgb: np.ndarray, channel: ChannelId, values: np.ndarray) -> np.ndarray:
    """Write ``values`` into ``channel`` of a float RGB array (no quantization).

    Saturation and brightness write-backs keep the pixel's existing hue and
    the untouched complementary channel.
    """
    out = rgb.copy()
    if channel in (ChannelId.RED, ChannelId.GREEN, ChannelId.BLUE):
        idx = {ChannelId.RED: 0, ChannelId.GREEN: 1, ChannelId.BLUE: 2}[channel]
        out[:, :, idx] = values
        return out
    hue = hue_degrees(rgb)
    if channel is ChannelId.SATURATION:
        bright = channel_values(rgb, ChannelId.BRIGHTNESS)
        return compose_hsb(hue, values, bright)
    sat = channel_values(rgb, ChannelId.SATURATION)
    return compose_hsb(hue, sat, values)


def write_channel(image: ImageRGB, channel: ChannelId, field: ChannelField) -> ImageRGB:
    """Write a field back into an image, clamping and rounding to 8-bit."""
    if field.height != image.height or field.width != image.width:
        raise DimensionMismatchError(
            f"field is {field.width}x{field.height}, image is {image.width}x{image.height}"
        )
    rgb = image.as_float()
    clamped = np.clip(field.values, 0.0, 255.0)
    return ImageRGB(quantize(recompose_rgb(rgb, channel, clamped)))


# ---------------------------------------------------------------------------
# super-pixel graph


def _neighbor_shifts(connectivity: int):
    if connectivity == 4:
        return [(0, 1), (1, 0)]
    if connectivity == 8:
        return [(0, 1), (1, 0), (1, 1), (1, -1)]
    raise ValueError("connectivity must be 4 or 8")


def _neighbor_pairs(height: int, width: int, connectivity: int):
    """Raster-index pairs (a, b) for each undirected neighbor relation."""
    idx = np.arange(height * width, dtype=np.int64).reshape(height, width)
    pairs_a, pairs_b = [], []
    for dr, dc in _neighbor_shifts(connectivity):
        if dc >= 0:
            a = idx[: height - dr, : width - dc]
            b = idx[dr:, dc:]
        else:
            a = idx[: height - dr, -dc:]
            b = idx[dr:, : width + dc]
        pairs_a.append(a.ravel())
        pairs_b.append(b.ravel())
    return np.concatenate(pairs_a), np.concatenate(pairs_b)


def build_superpixels(field: ChannelField, connectivity: int = 8) -> SuperPixelGraph:
    """Group equal-valued neighbouring pixels into super-pixel nodes.

    Equality is exact (bit-equal doubles): tolerance-based grouping would
    make the result depend on traversal order.
    """
    height, width = field.height, field.width
    flat = field.values.ravel()
    n_pixels = height * width
    a, b = _neighbor_pairs(height, width, connectivity)
    equal = flat[a] == flat[b]
    ea, eb = a[equal], b[equal]
    if len(ea):
        graph = coo_matrix(
            (np.ones(len(ea), dtype=np.int8), (ea, eb)), shape=(n_pixels, n_pixels)
        )
        n_labels, labels = connected_components(graph, directed=False)
    else:
        n_labels, labels = n_pixels, np.arange(n_pixels, dtype=np.int64)
    labels = labels.astype(np.int64)

    # stable ids: rank labels by the smallest raster index they contain
    first_index = np.full(n_labels, n_pixels, dtype=np.int64)
    np.minimum.at(first_index, labels, np.arange(n_pixels, dtype=np.int64))
    order = np.argsort(first_index, kind="stable")
    rank = np.empty(n_labels, dtype=np.int64)
    rank[order] = np.arange(n_labels, dtype=np.int64)
    pixel_node = rank[labels]

    node_values = flat[first_index[order]]

    by_node = np.argsort(pixel_node, kind="stable")
    counts = np.bincount(pixel_node, minlength=n_labels)
    members = tuple(np.sort(chunk) for chunk in np.split(by_node, np.cumsum(counts)[:-1]))

    na, nb = pixel_node[a], pixel_node[b]
    diff = na != nb
    na, nb = na[diff], nb[diff]
    lo = np.minimum(na, nb)
    hi = np.maximum(na, nb)
    if len(lo):
        enc = np.unique(lo * n_labels + hi)
        lo, hi = enc // n_labels, enc % n_labels
        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        srt = np.argsort(src, kind="stable")
        src, dst = src[srt], dst[srt]
        adj_counts = np.bincount(src, minlength=n_labels)
        adjacency = tuple(
            np.sort(chunk) for chunk in np.split(dst, np.cumsum(adj_counts)[:-1])
        )
    else:
        adjacency = tuple(np.empty(0, dtype=np.int64) for _ in range(n_labels))

    return SuperPixelGraph(
        width=width,
        height=height,
        connectivity=connectivity,
        node_values=node_values.astype(np.float64),
        members=members,
        adjacency=adjacency,
        pixel_node=pixel_node,
    )
