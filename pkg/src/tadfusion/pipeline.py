"""End-to-end post-processing: compose, fuse, convert, suppress, emit.

Input is a set of aligned noun-verb proposal pairs in window-local
feature coordinates. For each pair the top noun and verb classes are
crossed into scored action candidates, weak candidates are dropped,
boundaries are fused (confidence-weighted or hard mean), converted to
seconds with the window's frame origin, pooled per video, and suppressed
class-wise before serialization.
"""

from __future__ import annotations

import logging

from .composition import compose_actions
from .config import PipelineConfig
from .decode import StreamProposal
from .errors import DegenerateInterval
from .evaluation import (
    EvalConfig,
    GroundTruthInstance,
    MeanApResult,
    mean_ap,
)
from .fusion import dwf_weights, fuse_boundaries, hard_mean_fusion, stream_confidences
from .io import (
    ProposalRecord,
    SubmissionDocument,
    build_submission,
    submission_detections,
)
from .suppression import ActionDetection, suppress_video
from .timeline import boundary_to_seconds

logger = logging.getLogger(__name__)


def fuse_candidate_boundary(
    noun_boundary: tuple[float, float],
    verb_boundary: tuple[float, float],
    noun_scores,
    verb_scores,
    mode: str,
    epsilon: float,
) -> tuple[float, float]:
    """Fuse one aligned boundary pair under the configured mode."""
    if mode == "mean":
        return hard_mean_fusion(noun_boundary, verb_boundary)
    c_noun, c_verb = stream_confidences(noun_scores, verb_scores)
    weights = dwf_weights(c_noun, c_verb, epsilon)
    return fuse_boundaries(noun_boundary, verb_boundary, weights)


def _record_detections(record: ProposalRecord, cfg: PipelineConfig) -> list[ActionDetection]:
    vocab = cfg.vocab()
    min_score = cfg.nms_config().min_score
    noun = StreamProposal(boundary=record.noun_boundary, scores=record.noun_scores)
    verb = StreamProposal(boundary=record.verb_boundary, scores=record.verb_scores)
    candidates = compose_actions(noun, verb, cfg.top_k_nouns, cfg.top_k_verbs, vocab)

    grid = cfg.grid(window_start_frame=record.window_start * cfg.stride_frames)
    detections = []
    for cand in candidates:
        if cand.score < min_score:
            continue
        try:
            fused = fuse_candidate_boundary(
                cand.noun_boundary,
                cand.verb_boundary,
                record.noun_scores,
                record.verb_scores,
                cfg.fusion_mode,
                cfg.epsilon,
            )
            start_s, end_s = boundary_to_seconds(fused, grid)
        except DegenerateInterval:
            continue  # empty after fusion or clamping; nothing to keep
        detections.append(
            ActionDetection(
                video_id=record.video_id,
                start=start_s,
                end=end_s,
                verb_index=cand.verb_index,
                noun_index=cand.noun_index,
                action_id=cand.action_id,
                score=cand.score,
            )
        )
    return detections


def run_pipeline(records: list[ProposalRecord], cfg: PipelineConfig) -> SubmissionDocument:
    """Run the full post-processing chain over parsed proposal records.

    Empty input is not an error: it produces a valid empty submission
    (with a warning), so a video with no surviving proposals still
    yields well-formed output.
    """
    if not records:
        logger.warning("no proposal records; emitting an empty submission")
        return build_submission({}, version=cfg.submission_version)

    by_video: dict[str, list[ActionDetection]] = {}
    for record in records:
        by_video.setdefault(record.video_id, []).extend(_record_detections(record, cfg))

    nms_cfg = cfg.nms_config()
    suppressed = {
        video_id: suppress_video(dets, nms_cfg, class_key="action")
        for video_id, dets in sorted(by_video.items())
    }
    return build_submission(suppressed, version=cfg.submission_version)


def evaluate_detections(
    dets: list[ActionDetection],
    gts: list[GroundTruthInstance],
    thresholds: tuple[float, ...] = (0.1, 0.2, 0.3, 0.4, 0.5),
) -> dict[str, MeanApResult]:
    """Score one detection set on all three tasks."""
    return {
        task: mean_ap(dets, gts, EvalConfig(thresholds=thresholds, task=task))
        for task in ("verb", "noun", "action")
    }


def evaluate_files(
    submission: SubmissionDocument,
    gts: list[GroundTruthInstance],
    thresholds: tuple[float, ...] = (0.1, 0.2, 0.3, 0.4, 0.5),
) -> dict[str, MeanApResult]:
    """Score a parsed submission against parsed ground truth."""
    return evaluate_detections(submission_detections(submission), gts, thresholds)


def format_metrics_table(results: dict[str, MeanApResult]) -> str:
    """Human-readable grid: one row per task, one column per threshold."""
    thresholds = list(next(iter(results.values())).per_threshold)
    header = "task    " + "".join(f"  mAP@{t:.1f}" for t in thresholds) + "     avg"
    lines = [header, "-" * len(header)]
    for task in ("verb", "noun", "action"):
        if task not in results:
            continue
        row = results[task]
        cells = "".join(f"  {row.per_threshold[t]:7.4f}" for t in thresholds)
        lines.append(f"{task:<8}{cells} {row.average:7.4f}")
    return "\n".join(lines)


def format_metrics_keyvalues(results: dict[str, MeanApResult]) -> str:
    """Machine-readable ``key = value`` lines mirroring the table."""
    lines = []
    for task in ("verb", "noun", "action"):
        if task not in results:
            continue
        row = results[task]
        for t, value in row.per_threshold.items():
            lines.append(f"{task}_map_{t:.1f} = {value:.4f}")
        lines.append(f"{task}_map_avg = {row.average:.4f}")
    return "\n".join(lines)
