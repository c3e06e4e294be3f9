"""Parameter-plane rasters coloured by kneading prefix, with tangent overlays.

Pixel identifiers are the 64-bit FNV-1a hash of the prefix symbol codes, masked
to 63 bits so they stay nonnegative in an int64 grid. Negative identifiers are
reserved markers.
"""

import csv
import hashlib
import io
from dataclasses import dataclass, field, replace

import numpy as np

from . import kernels
from .birkhoff import DEFAULT_N, DEFAULT_SEED, estimate_gamma, slope_from_gamma
from .kneading import DEFAULT_C_TOL
from .map_core import SkewTentMap, in_region_U
from .theta import theta_slope

OUT_OF_U = -1
GAMMA_OVERLAY = -2
THETA_OVERLAY = -3

_SOURCE_ID = {"gamma": GAMMA_OVERLAY, "theta": THETA_OVERLAY}
_MARKER_RGB = {
    OUT_OF_U: (255, 255, 255),
    GAMMA_OVERLAY: (255, 0, 0),
    THETA_OVERLAY: (0, 0, 255),
}
_MASK63 = np.uint64(0x7FFFFFFFFFFFFFFF)
_ENCODE = bytes.maketrans(b"LCR", bytes([0, 1, 2]))


@dataclass(frozen=True)
class Overlay:
    alpha: float
    beta: float
    source: str
    slope: float | None = None

    def __post_init__(self):
        if self.source not in _SOURCE_ID:
            raise ValueError(f"overlay source must be 'gamma' or 'theta', got {self.source!r}")


@dataclass(frozen=True)
class RasterConfig:
    alpha_range: tuple = (0.0, 1.0)
    beta_range: tuple = (0.5, 1.0)
    width: int = 512
    height: int = 256
    prefix_len: int = 10
    c_tol: float = DEFAULT_C_TOL
    overlays: tuple = field(default=())

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("image size must be positive")
        if self.prefix_len < 1:
            raise ValueError("prefix_len must be >= 1")

    def pixel_centers(self):
        """(alphas, betas) grids of shape (height, width); row 0 is the top."""
        a0, a1 = self.alpha_range
        b0, b1 = self.beta_range
        cols = a0 + (np.arange(self.width) + 0.5) * ((a1 - a0) / self.width)
        rows = b1 - (np.arange(self.height) + 0.5) * ((b1 - b0) / self.height)
        return np.meshgrid(cols, rows)

    def to_pixel(self, alpha, beta):
        """Fractional (column, row) coordinates of a parameter point."""
        a0, a1 = self.alpha_range
        b0, b1 = self.beta_range
        col = (np.asarray(alpha) - a0) / (a1 - a0) * self.width
        row = (b1 - np.asarray(beta)) / (b1 - b0) * self.height
        return col, row


@dataclass(frozen=True)
class RasterImage:
    config: RasterConfig
    ids: np.ndarray

    @property
    def width(self):
        return self.config.width

    @property
    def height(self):
        return self.config.height

    def rgb(self) -> np.ndarray:
        ids = self.ids
        out = np.empty(ids.shape + (3,), dtype=np.uint8)
        h = ids.astype(np.uint64)
        # spread hash bits over three channels; keep away from pure red/blue
        out[..., 0] = (h >> np.uint64(8)) & np.uint64(0xBF)
        out[..., 1] = (h >> np.uint64(24)) & np.uint64(0xFF)
        out[..., 2] = (h >> np.uint64(40)) & np.uint64(0xBF)
        for marker, color in _MARKER_RGB.items():
            out[ids == marker] = color
        return out

    def to_ppm(self) -> bytes:
        header = f"P6\n{self.width} {self.height}\n255\n".encode("ascii")
        return header + self.rgb().tobytes()

    def write_ppm(self, path):
        with open(path, "wb") as fh:
            fh.write(self.to_ppm())

    def to_csv(self) -> str:
        """One row per pixel: ``row, col, alpha, beta, identifier``."""
        alphas, betas = self.config.pixel_centers()
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["row", "col", "alpha", "beta", "identifier"])
        for r in range(self.height):
            for c in range(self.width):
                writer.writerow(
                    [r, c, f"{alphas[r, c]:.17g}", f"{betas[r, c]:.17g}", int(self.ids[r, c])]
                )
        return buf.getvalue()

    def digest(self) -> str:
        return hashlib.sha256(self.ids.tobytes()).hexdigest()


def prefix_identifier(symbols: str) -> int:
    """Identifier of a symbol string, matching the raster kernels."""
    codes = np.frombuffer(symbols.encode("ascii").translate(_ENCODE), dtype=np.uint8)
    return int(np.uint64(kernels.python_kernels["fnv1a"](codes, len(codes))) & _MASK63)


def kneading_raster(config: RasterConfig) -> RasterImage:
    """Identifier of the kneading prefix at each pixel centre; overlays drawn last."""
    alphas, betas = config.pixel_centers()
    inside = (betas > 0.5) & (betas <= 1.0) & (alphas > 1.0 - betas) & (alphas < betas)
    # out-of-U pixels are evaluated at a harmless point and masked afterwards
    safe_a = np.where(inside, alphas, 0.5)
    safe_b = np.where(inside, betas, 1.0)
    hashes, _ = kernels.kneading_grid(
        np.ascontiguousarray(safe_a), np.ascontiguousarray(safe_b),
        config.prefix_len, config.c_tol,
    )
    ids = (hashes & _MASK63).astype(np.int64)
    ids[~inside] = OUT_OF_U
    image = RasterImage(config, ids)
    if config.overlays:
        image = render_overlay(image, config.overlays)
    return image


def overlay_slope(overlay: Overlay, n=DEFAULT_N, seed=DEFAULT_SEED, prefix_len=200) -> float:
    if overlay.slope is not None:
        return overlay.slope
    tmap = SkewTentMap(overlay.alpha, overlay.beta)
    if overlay.source == "gamma":
        gamma = estimate_gamma(tmap, n, seed).gamma
        return slope_from_gamma(tmap.alpha, tmap.beta, gamma)
    return theta_slope(tmap, prefix_len)


def segment_pixels(config: RasterConfig, alpha, beta, slope, half_span=0.1):
    """Integer (rows, cols) covered by the segment through (alpha, beta).

    The segment spans ``alpha +- half_span`` and is sampled at sub-pixel
    spacing, then clipped to the image.
    """
    col0, _ = config.to_pixel(alpha - half_span, beta)
    col1, _ = config.to_pixel(alpha + half_span, beta)
    _, r0 = config.to_pixel(alpha, beta - slope * half_span)
    _, r1 = config.to_pixel(alpha, beta + slope * half_span)
    samples = int(4 * (abs(col1 - col0) + abs(r1 - r0))) + 2
    a = np.linspace(alpha - half_span, alpha + half_span, samples)
    b = beta + slope * (a - alpha)
    cols, rows = config.to_pixel(a, b)
    cols = np.floor(cols).astype(np.int64)
    rows = np.floor(rows).astype(np.int64)
    keep = (cols >= 0) & (cols < config.width) & (rows >= 0) & (rows < config.height)
    return rows[keep], cols[keep]


def render_overlay(image: RasterImage, overlays, half_span=0.1, **slope_kwargs) -> RasterImage:
    """Draw tangent segments: gamma-derived ones red, theta-derived ones blue."""
    ids = image.ids.copy()
    resolved = []
    for ov in overlays:
        slope = overlay_slope(ov, **slope_kwargs)
        resolved.append(replace(ov, slope=slope))
        rows, cols = segment_pixels(image.config, ov.alpha, ov.beta, slope, half_span)
        ids[rows, cols] = _SOURCE_ID[ov.source]
    config = replace(image.config, overlays=tuple(resolved))
    return RasterImage(config, ids)


def kneading_identifier(alpha, beta, prefix_len, c_tol=DEFAULT_C_TOL) -> int:
    """Identifier a raster pixel centred exactly at (alpha, beta) would get."""
    if not in_region_U(alpha, beta):
        return OUT_OF_U
    a = np.array([[float(alpha)]])
    b = np.array([[float(beta)]])
    hashes, _ = kernels.kneading_grid(a, b, prefix_len, c_tol)
    return int(hashes[0, 0] & _MASK63)
