"""Feature-grid time conversion and sliding-window generation.

Detector heads operate on a feature grid: one feature step covers
``stride_frames`` video frames, and the whole grid is shifted by a fixed
frame offset. Everything downstream (fusion, suppression, evaluation)
works in seconds, so the conversions here are the single place where
grid coordinates and wall-clock time meet.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateInterval, InvalidConfig, InvalidOverlap

DEFAULT_STRIDE_FRAMES = 8
DEFAULT_OFFSET_FRAMES = 4
DEFAULT_FPS = 30.0
DEFAULT_WINDOW_LENGTH = 4608
DEFAULT_WINDOW_OVERLAP = 0.5


@dataclass(frozen=True)
class FeatureGrid:
    """Constants mapping feature indices to seconds.

    ``window_start_frame`` is the first video frame of the sliding window
    the coordinates are local to; 0 for single-window videos.
    """

    stride_frames: int = DEFAULT_STRIDE_FRAMES
    offset_frames: int = DEFAULT_OFFSET_FRAMES
    fps: float = DEFAULT_FPS
    window_start_frame: int = 0

    def __post_init__(self):
        if self.stride_frames < 1:
            raise InvalidConfig("stride_frames must be >= 1")
        if self.offset_frames < 0:
            raise InvalidConfig("offset_frames must be >= 0")
        if self.fps <= 0:
            raise InvalidConfig("fps must be positive")
        if self.window_start_frame < 0:
            raise InvalidConfig("window_start_frame must be >= 0")


@dataclass(frozen=True)
class Window:
    """A contiguous span of feature indices, [start, start + length)."""

    start_feature: int
    length_features: int

    def __post_init__(self):
        if self.start_feature < 0:
            raise InvalidConfig("window start must be >= 0")
        if self.length_features < 1:
            raise InvalidConfig("window length must be >= 1")

    @property
    def end_feature(self) -> int:
        return self.start_feature + self.length_features


def feature_index_to_seconds(i: int, grid: FeatureGrid = FeatureGrid()) -> float:
    """Map feature index ``i`` to the second of its temporal center."""
    if i < 0:
        raise InvalidConfig(f"feature index must be >= 0, got {i}")
    return (i * grid.stride_frames + grid.offset_frames) / grid.fps


def boundary_to_seconds(
    boundary: tuple[float, float], grid: FeatureGrid = FeatureGrid()
) -> tuple[float, float]:
    """Convert a (start, end) pair in feature coordinates to seconds.

    Coordinates may be fractional (regressed) and may undershoot the
    window origin; negative values clamp to 0 before conversion. The
    window's start frame shifts both ends so that overlapping windows
    share a single global clock.

    Raises:
        DegenerateInterval: if the input is inverted/empty, or if
            clamping collapses it to a point.
    """
    start, end = boundary
    if start >= end:
        raise DegenerateInterval(f"boundary start {start} >= end {end}")
    start = max(start, 0.0)
    end = max(end, 0.0)
    if start >= end:
        raise DegenerateInterval("boundary collapsed to a point after clamping at 0")

    def convert(u: float) -> float:
        return (u * grid.stride_frames + grid.window_start_frame + grid.offset_frames) / grid.fps

    return (convert(start), convert(end))


def seconds_to_feature_coord(seconds: float, grid: FeatureGrid = FeatureGrid()) -> float:
    """Inverse of the boundary conversion: seconds to feature coordinates.

    The result may be negative for times before the grid's first center;
    the forward conversion clamps those at 0.
    """
    return (seconds * grid.fps - grid.window_start_frame - grid.offset_frames) / grid.stride_frames


def generate_windows(
    total_features: int,
    max_len: int = DEFAULT_WINDOW_LENGTH,
    overlap: float = DEFAULT_WINDOW_OVERLAP,
) -> list[Window]:
    """Generate sliding windows covering ``total_features`` feature steps.

    Windows advance by ``floor(max_len * (1 - overlap))``. The final
    window is shifted left, not shortened, so fixed-length detectors see
    a full window whose end lands exactly on the sequence end. Sequences
    shorter than ``max_len`` yield a single window of their full length.

    Raises:
        InvalidOverlap: if overlap is outside [0, 1).
    """
    if not 0.0 <= overlap < 1.0:
        raise InvalidOverlap(f"overlap must be in [0, 1), got {overlap}")
    if total_features < 1:
        raise InvalidConfig("total_features must be >= 1")
    if max_len < 1:
        raise InvalidConfig("max_len must be >= 1")

    if total_features <= max_len:
        return [Window(0, total_features)]

    stride = max(1, math.floor(max_len * (1.0 - overlap)))
    starts: list[int] = []
    start = 0
    while True:
        if start + max_len >= total_features:
            starts.append(total_features - max_len)
            break
        starts.append(start)
        start += stride
    return [Window(s, max_len) for s in starts]
