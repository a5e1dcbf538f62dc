"""Pipeline configuration: defaults and the key-value file format.

The file format is deliberately plain: UTF-8 text, one ``key = value``
per line, ``#`` comments. Every key has a default matching the constants
the pipeline was tuned with, so an empty file is a valid configuration.
Unknown keys are rejected rather than ignored; silent typos in a
post-processing config are a classic way to ship a broken submission.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

from .composition import (
    DEFAULT_NOUN_COUNT,
    DEFAULT_TOP_K_NOUNS,
    DEFAULT_TOP_K_VERBS,
    DEFAULT_VERB_COUNT,
    VocabSpec,
)
from .errors import ParseError, UnknownKey
from .fusion import DEFAULT_FUSION_EPSILON, FUSION_MODES
from .suppression import (
    DEFAULT_MAX_PER_VIDEO,
    DEFAULT_PRE_NMS_CAP,
    NMS_PRESETS,
    NmsConfig,
)
from .timeline import (
    DEFAULT_FPS,
    DEFAULT_OFFSET_FRAMES,
    DEFAULT_STRIDE_FRAMES,
    DEFAULT_WINDOW_LENGTH,
    DEFAULT_WINDOW_OVERLAP,
    FeatureGrid,
)

DEFAULT_SUBMISSION_VERSION = "0.1"
CHALLENGE_NAME = "action_detection"


@dataclass
class PipelineConfig:
    """All pipeline constants, with the defaults the system was tuned at."""

    stride_frames: int = DEFAULT_STRIDE_FRAMES
    offset_frames: int = DEFAULT_OFFSET_FRAMES
    fps: float = DEFAULT_FPS
    window_length: int = DEFAULT_WINDOW_LENGTH
    window_overlap: float = DEFAULT_WINDOW_OVERLAP
    noun_count: int = DEFAULT_NOUN_COUNT
    verb_count: int = DEFAULT_VERB_COUNT
    top_k_nouns: int = DEFAULT_TOP_K_NOUNS
    top_k_verbs: int = DEFAULT_TOP_K_VERBS
    epsilon: float = DEFAULT_FUSION_EPSILON
    fusion_mode: str = "dwf"
    nms_preset: str = "verb_action"
    pre_nms_cap: int = DEFAULT_PRE_NMS_CAP
    max_per_video: int = DEFAULT_MAX_PER_VIDEO
    eval_thresholds: tuple[float, ...] = (0.1, 0.2, 0.3, 0.4, 0.5)
    submission_version: str = DEFAULT_SUBMISSION_VERSION
    sim_segments: int = 1000
    sim_video_length: float = 600.0
    sim_confidence_lo: float = 0.1
    sim_confidence_hi: float = 0.95
    sim_sigma_min: float = 0.05
    sim_sigma_max: float = 1.0
    sim_seed: int = 0

    def grid(self, window_start_frame: int = 0) -> FeatureGrid:
        return FeatureGrid(
            stride_frames=self.stride_frames,
            offset_frames=self.offset_frames,
            fps=self.fps,
            window_start_frame=window_start_frame,
        )

    def vocab(self) -> VocabSpec:
        return VocabSpec(noun_count=self.noun_count, verb_count=self.verb_count)

    def nms_config(self) -> NmsConfig:
        preset = NMS_PRESETS[self.nms_preset]
        return NmsConfig(
            sigma=preset.sigma,
            min_score=preset.min_score,
            vote_threshold=preset.vote_threshold,
            pre_nms_cap=self.pre_nms_cap,
            max_per_video=self.max_per_video,
        )


_INT_KEYS = {
    "stride_frames",
    "offset_frames",
    "window_length",
    "noun_count",
    "verb_count",
    "top_k_nouns",
    "top_k_verbs",
    "pre_nms_cap",
    "max_per_video",
    "sim_segments",
    "sim_seed",
}
_FLOAT_KEYS = {
    "fps",
    "window_overlap",
    "epsilon",
    "sim_video_length",
    "sim_confidence_lo",
    "sim_confidence_hi",
    "sim_sigma_min",
    "sim_sigma_max",
}
_STR_KEYS = {"fusion_mode", "nms_preset", "submission_version"}

_POSITIVE_KEYS = {
    "stride_frames",
    "fps",
    "window_length",
    "noun_count",
    "verb_count",
    "top_k_nouns",
    "top_k_verbs",
    "epsilon",
    "pre_nms_cap",
    "max_per_video",
    "sim_segments",
    "sim_video_length",
}
_NON_NEGATIVE_KEYS = {"offset_frames", "sim_sigma_min", "sim_sigma_max"}


def _parse_value(key: str, raw: str):
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
        if key == "eval_thresholds":
            return tuple(float(tok) for tok in raw.split(",") if tok.strip())
        return raw
    except ValueError as exc:
        raise ParseError(f"cannot parse value {raw!r}: {exc}", key=key) from None


def _validate(cfg: PipelineConfig) -> PipelineConfig:
    for key in _POSITIVE_KEYS:
        if getattr(cfg, key) <= 0:
            raise ParseError("value must be positive", key=key)
    for key in _NON_NEGATIVE_KEYS:
        if getattr(cfg, key) < 0:
            raise ParseError("value must be non-negative", key=key)
    if not 0.0 <= cfg.window_overlap < 1.0:
        raise ParseError("overlap must lie in [0, 1)", key="window_overlap")
    if cfg.fusion_mode not in FUSION_MODES:
        raise ParseError(f"fusion_mode must be one of {FUSION_MODES}", key="fusion_mode")
    if cfg.nms_preset not in NMS_PRESETS:
        raise ParseError(
            f"nms_preset must be one of {tuple(NMS_PRESETS)}", key="nms_preset"
        )
    if not 0.0 <= cfg.sim_confidence_lo <= cfg.sim_confidence_hi <= 1.0:
        raise ParseError(
            "confidence bounds must satisfy 0 <= lo <= hi <= 1", key="sim_confidence_lo"
        )
    if cfg.sim_sigma_max < cfg.sim_sigma_min:
        raise ParseError("sim_sigma_max must be >= sim_sigma_min", key="sim_sigma_max")
    prev = 0.0
    for t in cfg.eval_thresholds:
        if not 0.0 < t <= 1.0 or t <= prev:
            raise ParseError(
                "thresholds must be strictly increasing in (0, 1]", key="eval_thresholds"
            )
        prev = t
    return cfg


def parse_config_text(text: str) -> PipelineConfig:
    """Parse ``key = value`` lines into a validated PipelineConfig."""
    known = {f.name for f in fields(PipelineConfig)}
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ParseError("expected 'key = value'", line=lineno)
        key, _, raw = stripped.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key not in known:
            raise UnknownKey(f"unknown configuration key {key!r}", line=lineno)
        values[key] = _parse_value(key, raw)
    return _validate(PipelineConfig(**values))


def parse_config(path) -> PipelineConfig:
    """Read a configuration file; an empty or absent body means defaults."""
    with open(path, "r", encoding="utf-8") as handle:
        return parse_config_text(handle.read())
