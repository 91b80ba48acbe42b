#  Copyright (c) 2025 ElasticaSplit contributors
#  Licensed under the GNU AGPL v3.0: https://www.gnu.org/licenses/agpl-3.0.html
#  Part of the ElasticaSplit project. All rights reserved where applicable.

import math
from pathlib import Path
from typing import Literal, Union

import numpy as np
from PIL import Image, UnidentifiedImageError

from src import config
from src.logger import LOGGER
from ._dataclass import GridGeometry, NoiseSpec
from ._grid import FloatArray, ScalarField

PathLike = Union[str, Path]
TestImageKind = Literal["ball", "disk", "square", "star", "circle"]
TEST_IMAGE_KINDS: tuple[str, ...] = ("ball", "disk", "square", "star", "circle")

_PNG_MAXVAL = {"L": 255, "I;16": 65535, "I;16B": 65535, "I;16L": 65535, "I": 65535}


class ImageFormatError(ValueError):
    """Raised when an image file cannot be decoded or encoded as grayscale."""


def _maxval_for(bit_depth: int) -> int:
    if bit_depth not in (8, 16):
        raise ImageFormatError(f"bit depth must be 8 or 16, got {bit_depth}")
    return (1 << bit_depth) - 1


def _pgm_tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    """Read ``count`` whitespace-separated header tokens, skipping '#' comments."""
    tokens: list[bytes] = []
    pos = 0
    while len(tokens) < count:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos >= len(data):
            raise ImageFormatError("truncated PGM header")
        if data[pos : pos + 1] == b"#":
            end = data.find(b"\n", pos)
            pos = len(data) if end < 0 else end + 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        tokens.append(data[start:pos])
    return tokens, pos


def _read_pgm(data: bytes) -> tuple[np.ndarray, int]:
    (magic, w, h, mx), pos = _pgm_tokens(data, 4)
    try:
        width, height, maxval = int(w), int(h), int(mx)
    except ValueError as exc:
        raise ImageFormatError(f"malformed PGM header: {exc}") from exc
    if width < 1 or height < 1 or not 0 < maxval < 65536:
        raise ImageFormatError(f"invalid PGM geometry {width}x{height}, maxval {maxval}")

    if magic == b"P5":
        # exactly one whitespace byte separates the header from the raster
        raster = data[pos + 1 :]
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
        needed = width * height * dtype.itemsize
        if len(raster) < needed:
            raise ImageFormatError(f"PGM raster too short: {len(raster)} < {needed} bytes")
        pixels = np.frombuffer(raster[:needed], dtype=dtype)
    elif magic == b"P2":
        try:
            pixels = np.array([int(tok) for tok in data[pos:].split()], dtype=np.int64)
        except ValueError as exc:
            raise ImageFormatError(f"malformed P2 raster: {exc}") from exc
        if pixels.size < width * height:
            raise ImageFormatError(f"P2 raster too short: {pixels.size} < {width * height}")
        pixels = pixels[: width * height]
    else:
        raise ImageFormatError(f"unsupported PGM magic {magic!r}, expected P2 or P5")

    return pixels.reshape(height, width).astype(np.float64), maxval


def _read_png(path: Path) -> tuple[np.ndarray, int]:
    try:
        with Image.open(path) as img:
            img.load()
            if img.mode == "1":
                img = img.convert("L")
            if img.mode not in _PNG_MAXVAL:
                raise ImageFormatError(f"{path}: image mode {img.mode} is not grayscale")
            return np.asarray(img, dtype=np.float64), _PNG_MAXVAL[img.mode]
    except UnidentifiedImageError as exc:
        raise ImageFormatError(f"{path}: cannot decode image") from exc


def load_image(path: PathLike) -> ScalarField:
    """
    Load a grayscale PGM (P2/P5) or PNG file into a field with values in [0, 1].

    The returned field is indexed (x, y): axis 0 runs along the image width.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"image not found: {path}")

    suffix = path.suffix.lower()
    if suffix in (".pgm", ".pnm"):
        rows, maxval = _read_pgm(path.read_bytes())
    elif suffix == ".png":
        rows, maxval = _read_png(path)
    else:
        raise ImageFormatError(f"unsupported image format {suffix!r}")

    LOGGER.info("Loaded %s (%dx%d, maxval %d)", path, rows.shape[1], rows.shape[0], maxval)
    return ScalarField(rows.T / maxval)


def quantize(values: FloatArray, bit_depth: int = config.DEFAULT_BIT_DEPTH) -> np.ndarray:
    """Clamp to [0, 1] and round half up to integer levels."""
    maxval = _maxval_for(bit_depth)
    levels = np.floor(np.clip(values, 0.0, 1.0) * maxval + 0.5)
    return levels.astype(np.uint16 if bit_depth == 16 else np.uint8)


def save_image(
    field: ScalarField,
    path: PathLike,
    bit_depth: int = config.DEFAULT_BIT_DEPTH,
    ascii_pgm: bool = False,
) -> Path:
    path = Path(path)
    rows = quantize(field.values, bit_depth).T
    maxval = _maxval_for(bit_depth)
    suffix = path.suffix.lower()

    if suffix in (".pgm", ".pnm"):
        height, width = rows.shape
        magic = "P2" if ascii_pgm else "P5"
        header = f"{magic}\n{width} {height}\n{maxval}\n".encode("ascii")
        if ascii_pgm:
            body = "\n".join(" ".join(str(v) for v in row) for row in rows.tolist())
            payload = header + body.encode("ascii") + b"\n"
        else:
            payload = header + rows.astype(">u2" if bit_depth == 16 else "u1").tobytes()
        path.write_bytes(payload)
    elif suffix == ".png":
        Image.fromarray(np.ascontiguousarray(rows)).save(path, format="PNG")
    else:
        raise ImageFormatError(f"unsupported image format {suffix!r}")

    LOGGER.info("Saved %s (%d-bit)", path, bit_depth)
    return path


def add_noise(f: ScalarField, spec: NoiseSpec) -> ScalarField:
    """Add i.i.d. zero-mean Gaussian noise; the result is not clamped."""
    if spec.std == 0:
        return f
    rng = np.random.default_rng(spec.seed)
    return ScalarField(f.values + rng.normal(spec.mean, spec.std, size=f.shape))


def generate_test_image(kind: TestImageKind, size: int) -> ScalarField:
    """
    Procedural phantoms on a ``size`` x ``size`` grid with values in [0, 1].

    ``ball`` is a shaded hemisphere, ``disk`` and ``square`` are flat shapes,
    ``star`` is a five-pointed star and ``circle`` is a ring.
    """
    GridGeometry(width=size, height=size)

    centre = (size - 1) / 2.0
    x, y = np.meshgrid(np.arange(size) - centre, np.arange(size) - centre, indexing="ij")
    r = np.hypot(x, y)
    radius = size / 4.0

    if kind == "ball":
        values = np.sqrt(np.clip(1.0 - (r / radius) ** 2, 0.0, None))
    elif kind == "disk":
        values = (r <= radius).astype(np.float64)
    elif kind == "square":
        values = ((np.abs(x) <= radius) & (np.abs(y) <= radius)).astype(np.float64)
    elif kind == "star":
        angle = np.arctan2(y, x) + math.pi / 2.0
        boundary = 1.4 * radius * (0.6 + 0.4 * np.cos(5.0 * angle))
        values = (r <= boundary).astype(np.float64)
    elif kind == "circle":
        values = (np.abs(r - radius) <= max(1.0, size / 16.0)).astype(np.float64)
    else:
        raise ValueError(f"unknown test image kind {kind!r}, expected one of {TEST_IMAGE_KINDS}")

    return ScalarField(values)


def psnr(u: ScalarField, reference: ScalarField) -> float:
    """Peak signal-to-noise ratio in dB for intensities in [0, 1]."""
    if u.shape != reference.shape:
        raise ValueError(f"shape mismatch: {u.shape} vs {reference.shape}")
    mse = float(np.mean((u.values - reference.values) ** 2))
    return math.inf if mse == 0 else 10.0 * math.log10(1.0 / mse)
