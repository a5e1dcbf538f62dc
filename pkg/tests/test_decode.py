import numpy as np
import pytest

from tadfusion.decode import (
    HeadOutput,
    StreamProposal,
    decode_anchor_free,
    pool_windows,
    pre_nms_select,
)
from tadfusion.errors import InvalidConfig, WindowMismatch
from tadfusion.timeline import Window


def make_head(stride, distances, scores=None, mask=None):
    n = len(distances)
    if scores is None:
        scores = np.full((n, 3), 0.5)
    if mask is None:
        mask = np.ones(n, dtype=bool)
    return HeadOutput(
        level=1,
        level_stride=stride,
        point_scores=scores,
        point_distances=np.asarray(distances, dtype=float),
        validity_mask=mask,
    )


class TestDecodeAnchorFree:
    def test_boundary_from_distances(self):
        head = make_head(4, [[0, 0]] * 25 + [[2, 3]])
        proposals = decode_anchor_free(head)
        assert len(proposals) == 1
        assert proposals[0].boundary == (92.0, 112.0)

    def test_zero_distance_point_skipped(self):
        head = make_head(4, [[0, 0], [1, 1]])
        proposals = decode_anchor_free(head)
        assert len(proposals) == 1
        assert proposals[0].boundary == (0.0, 8.0)

    def test_stride_one(self):
        head = make_head(1, [[0, 0]] * 10 + [[1, 1]])
        proposals = decode_anchor_free(head)
        assert proposals[0].boundary == (9.0, 11.0)

    def test_masked_points_skipped(self):
        head = make_head(2, [[1, 1], [1, 1]], mask=np.array([True, False]))
        assert len(decode_anchor_free(head)) == 1

    def test_interval_length_matches_distances(self):
        rng = np.random.default_rng(3)
        distances = rng.uniform(0.1, 5.0, size=(20, 2))
        for stride in (1, 4, 64):
            head = make_head(stride, distances)
            for t, proposal in enumerate(decode_anchor_free(head)):
                length = proposal.boundary[1] - proposal.boundary[0]
                assert length == pytest.approx(distances[t].sum() * stride)

    def test_window_attached(self):
        window = Window(128, 64)
        head = make_head(2, [[1, 2]])
        proposals = decode_anchor_free(head, window=window)
        assert proposals[0].source_window == window

    def test_invariants_validated(self):
        with pytest.raises(InvalidConfig):
            make_head(4, [[1, -1]])
        with pytest.raises(InvalidConfig):
            make_head(4, [[1, 1]], scores=np.array([[1.5, 0.2, 0.1]]))


def proposal(start, end, max_score, vocab=3):
    scores = np.zeros(vocab)
    scores[0] = max_score
    return StreamProposal(boundary=(start, end), scores=scores)


class TestPreNmsSelect:
    def test_threshold_filter(self):
        proposals = [proposal(0, 1, 0.9), proposal(1, 2, 0.004), proposal(2, 3, 0.5)]
        kept = pre_nms_select(proposals, min_score=0.005)
        assert [p.max_score for p in kept] == [0.9, 0.5]

    def test_top_k_cap(self):
        rng = np.random.default_rng(11)
        proposals = [proposal(i, i + 1, s) for i, s in enumerate(rng.uniform(0.1, 1.0, 6000))]
        kept = pre_nms_select(proposals, min_score=0.0, top_k=5000)
        assert len(kept) == 5000
        cutoff = sorted((p.max_score for p in proposals), reverse=True)[4999]
        assert all(p.max_score >= cutoff for p in kept)

    def test_empty_input(self):
        assert pre_nms_select([], min_score=0.1) == []

    def test_scores_non_increasing_and_ties_by_start(self):
        proposals = [proposal(5, 6, 0.5), proposal(1, 2, 0.5), proposal(0, 9, 0.7)]
        kept = pre_nms_select(proposals, min_score=0.0)
        assert [p.max_score for p in kept] == [0.7, 0.5, 0.5]
        assert kept[1].boundary[0] == 1


class TestPoolWindows:
    def test_identity_shift(self):
        w = Window(0, 100)
        pooled = pool_windows([(w, [proposal(10, 20, 0.5)])])
        assert pooled[0].boundary == (10.0, 20.0)

    def test_additive_shift(self):
        w = Window(2304, 100)
        p = StreamProposal(boundary=(10, 20), scores=np.ones(3), source_window=w)
        pooled = pool_windows([(w, [p])])
        assert pooled[0].boundary == (2314.0, 2324.0)

    def test_duplicates_from_overlapping_windows_retained(self):
        w1, w2 = Window(0, 100), Window(50, 100)
        pooled = pool_windows([(w1, [proposal(60, 70, 0.5)]), (w2, [proposal(10, 20, 0.5)])])
        assert len(pooled) == 2
        assert pooled[0].boundary == (60.0, 70.0)
        assert pooled[1].boundary == (60.0, 70.0)

    def test_window_mismatch_rejected(self):
        w1, w2 = Window(0, 100), Window(50, 100)
        p = StreamProposal(boundary=(10, 20), scores=np.ones(3), source_window=w1)
        with pytest.raises(WindowMismatch):
            pool_windows([(w2, [p])])

    def test_lengths_preserved_and_order_by_window_start(self):
        w1, w2 = Window(200, 100), Window(0, 100)
        pooled = pool_windows([(w1, [proposal(1, 4, 0.5)]), (w2, [proposal(2, 3, 0.5)])])
        # sorted by window start regardless of input order
        assert pooled[0].source_window == w2
        lengths = [p.boundary[1] - p.boundary[0] for p in pooled]
        assert lengths == [1.0, 3.0]
