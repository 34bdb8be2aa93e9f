"""Copy-attention arithmetic for pointer-style decoding.

Given a decoder state ``s`` and per-head encoder states ``H_h``, each
head scores source position ``i`` as

    e_i = (W_s s)^T (W_h h_i) / sqrt(d_k)

and softmaxes the scores into an attention distribution. The copy
distribution is the plain average of the per-head attentions. Final
word probabilities mix a (masked, renormalized) vocabulary distribution
with the copy distribution through a generation gate:

    P(w) = p_gen * P_vocab(w) + (1 - p_gen) * P_copy(w)

All functions operate on numpy arrays and validate shapes eagerly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMaskError, DimensionError

PROB_FLOOR = 1e-12


@dataclass
class AttentionInputs:
    """State and projections for one decoding step.

    ``heads`` stacks one encoder-state matrix per head: shape
    ``(n_heads, n_src, d_h)``. ``W_s`` is ``(d_k, d_s)``; ``W_h`` is
    ``(d_k, d_h)``; ``s`` is ``(d_s,)``.
    """

    s: np.ndarray
    heads: np.ndarray
    W_s: np.ndarray
    W_h: np.ndarray

    def validate(self) -> None:
        s = np.asarray(self.s, dtype=float)
        heads = np.asarray(self.heads, dtype=float)
        W_s = np.asarray(self.W_s, dtype=float)
        W_h = np.asarray(self.W_h, dtype=float)
        if s.ndim != 1 or heads.ndim != 3 or W_s.ndim != 2 or W_h.ndim != 2:
            raise DimensionError("expected s:(d_s,), heads:(n,H,d_h), W_s:(d_k,d_s), W_h:(d_k,d_h)")
        if W_s.shape[1] != s.shape[0]:
            raise DimensionError(f"W_s columns {W_s.shape[1]} != d_s {s.shape[0]}")
        if W_h.shape[1] != heads.shape[2]:
            raise DimensionError(f"W_h columns {W_h.shape[1]} != d_h {heads.shape[2]}")
        if W_s.shape[0] != W_h.shape[0]:
            raise DimensionError(f"key dims disagree: {W_s.shape[0]} vs {W_h.shape[0]}")
        if heads.shape[0] < 1 or heads.shape[1] < 1:
            raise DimensionError("need at least one head and one source position")


def softmax(scores: np.ndarray) -> np.ndarray:
    """Max-shifted softmax along the last axis."""
    scores = np.asarray(scores, dtype=float)
    shifted = scores - scores.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=-1, keepdims=True)


def head_attentions(inputs: AttentionInputs) -> np.ndarray:
    """Per-head attention over source positions, shape ``(n_heads, n_src)``."""
    inputs.validate()
    s = np.asarray(inputs.s, dtype=float)
    heads = np.asarray(inputs.heads, dtype=float)
    W_s = np.asarray(inputs.W_s, dtype=float)
    W_h = np.asarray(inputs.W_h, dtype=float)
    d_k = W_s.shape[0]
    query = W_s @ s                                   # (d_k,)
    keys = heads @ W_h.T                              # (n_heads, n_src, d_k)
    scores = keys @ query / np.sqrt(d_k)              # (n_heads, n_src)
    return softmax(scores)


def copy_distribution(inputs: AttentionInputs) -> np.ndarray:
    """Head-averaged attention: a distribution over source positions."""
    return head_attentions(inputs).mean(axis=0)


def scatter_to_vocab(
    positions: np.ndarray, token_ids: np.ndarray, vocab_size: int
) -> np.ndarray:
    """Fold a source-position distribution onto vocabulary entries.

    Mass from repeated occurrences of the same token accumulates."""
    positions = np.asarray(positions, dtype=float)
    token_ids = np.asarray(token_ids, dtype=int)
    if positions.shape != token_ids.shape:
        raise DimensionError(f"{positions.shape} positions vs {token_ids.shape} token ids")
    if token_ids.size and (token_ids.min() < 0 or token_ids.max() >= vocab_size):
        raise DimensionError("token id outside vocabulary")
    out = np.zeros(vocab_size, dtype=float)
    np.add.at(out, token_ids, positions)
    return out


def mix(
    p_gen: float,
    p_vocab: np.ndarray,
    p_copy: np.ndarray,
    source_mask: np.ndarray | None = None,
) -> np.ndarray:
    """Gate the vocabulary and copy distributions together.

    When ``source_mask`` is given, vocabulary mass outside the mask is
    zeroed and the remainder renormalized before mixing; a mask that
    removes all mass raises :class:`DegenerateMaskError`.
    """
    if not 0.0 <= p_gen <= 1.0:
        raise ValueError(f"p_gen {p_gen} outside [0, 1]")
    p_vocab = np.asarray(p_vocab, dtype=float)
    p_copy = np.asarray(p_copy, dtype=float)
    if p_vocab.shape != p_copy.shape:
        raise DimensionError(f"{p_vocab.shape} vocab vs {p_copy.shape} copy")
    if source_mask is not None:
        mask = np.asarray(source_mask, dtype=bool)
        if mask.shape != p_vocab.shape:
            raise DimensionError(f"mask shape {mask.shape} != {p_vocab.shape}")
        masked = np.where(mask, p_vocab, 0.0)
        total = masked.sum()
        if total <= 0.0:
            raise DegenerateMaskError("source mask removed all vocabulary mass")
        p_vocab = masked / total
    return p_gen * p_vocab + (1.0 - p_gen) * p_copy


def nll_loss(step_distributions: np.ndarray, targets: np.ndarray) -> float:
    """Mean negative log-likelihood of the target ids, floored at 1e-12."""
    dists = np.asarray(step_distributions, dtype=float)
    targets = np.asarray(targets, dtype=int)
    if dists.ndim != 2 or targets.ndim != 1 or dists.shape[0] != targets.shape[0]:
        raise DimensionError("expected (T, V) distributions and (T,) targets")
    if targets.size == 0:
        raise DimensionError("no decoding steps to score")
    if targets.min() < 0 or targets.max() >= dists.shape[1]:
        raise DimensionError("target id outside vocabulary")
    picked = dists[np.arange(targets.shape[0]), targets]
    return float(-np.log(np.clip(picked, PROB_FLOOR, None)).mean())
