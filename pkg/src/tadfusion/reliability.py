"""Cross-stream reliability arithmetic: uncertainty gating and attention.

A dual-stream detector variant lets each stream peek at the other
stream's features. Before attending, auxiliary snippets are down-scaled
by a reliability weight derived from caller-supplied uncertainty scores;
min-max normalization turns larger uncertainty into smaller reliability.
The attention update itself is plain single-head scaled dot-product with
identity projections (callers pre-project if they need learned heads),
added residually onto the main stream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, EmptySequence, InvalidConfig, LengthMismatch

DEFAULT_GATE_EPSILON = 1e-6


@dataclass(eq=False)
class GatedSequence:
    """Reliability-weighted auxiliary features with their weights."""

    features: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=float)
        self.weights = np.asarray(self.weights, dtype=float)
        if len(self.features) != len(self.weights):
            raise LengthMismatch("features and weights must have equal length")
        if self.weights.size and (self.weights.min() < 0.0 or self.weights.max() > 1.0):
            raise InvalidConfig("gate weights must lie in [0, 1]")


def uncertainty_gate(
    uncertainties: np.ndarray, epsilon: float = DEFAULT_GATE_EPSILON
) -> np.ndarray:
    """Map per-snippet uncertainty scores to reliability weights in [0, 1].

    ``w_t = 1 - (u_t - min u) / (max u - min u + epsilon)``. A constant
    sequence has zero range, so every snippet keeps full weight 1.
    """
    if epsilon <= 0.0:
        raise InvalidConfig("epsilon must be positive")
    u = np.asarray(uncertainties, dtype=float)
    if u.size == 0:
        raise EmptySequence("uncertainty sequence is empty")
    lo = u.min()
    span = u.max() - lo
    weights = 1.0 - (u - lo) / (span + epsilon)
    return np.clip(weights, 0.0, 1.0)


def apply_gate(auxiliary: np.ndarray, weights: np.ndarray) -> GatedSequence:
    """Scale each auxiliary feature vector by its reliability weight."""
    aux = np.asarray(auxiliary, dtype=float)
    w = np.asarray(weights, dtype=float)
    if len(aux) != len(w):
        raise LengthMismatch(f"{len(aux)} feature vectors vs {len(w)} weights")
    return GatedSequence(features=aux * w[:, None], weights=w)


def attention_weights(main: np.ndarray, gated: GatedSequence, scale: float) -> np.ndarray:
    """Softmax attention matrix (queries = main rows, keys = gated rows)."""
    if scale <= 0.0:
        raise InvalidConfig("scale must be positive")
    queries = np.asarray(main, dtype=float)
    keys = gated.features
    if queries.ndim != 2 or keys.ndim != 2 or queries.shape[1] != keys.shape[1]:
        raise DimensionMismatch(
            f"main features {queries.shape} incompatible with gated {keys.shape}"
        )
    logits = queries @ keys.T * scale
    logits -= logits.max(axis=1, keepdims=True)
    exp = np.exp(logits)
    return exp / exp.sum(axis=1, keepdims=True)


def cross_window_attention(
    main: np.ndarray, gated: GatedSequence, scale: float
) -> np.ndarray:
    """Residual cross-attention update of the main stream.

    Queries come from the main stream; keys and values are the gated
    auxiliary features. The caller passes ``scale`` (conventionally
    ``1/sqrt(d)``). Returns ``main + softmax(Q K^T * scale) V``.
    """
    weights = attention_weights(main, gated, scale)
    return np.asarray(main, dtype=float) + weights @ gated.features
