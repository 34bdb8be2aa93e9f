"""Copy-attention arithmetic: softmax scores, gating, and loss.

The FROZEN_* constants were computed by hand (scalar arithmetic on a
2-head, 3-position instance with identity projections) before the module
was written, and pin the implementation at 1e-12.
"""

import math

import numpy as np
import pytest

from lpwb.copymix import (
    PROB_FLOOR,
    AttentionInputs,
    copy_distribution,
    head_attentions,
    mix,
    nll_loss,
    scatter_to_vocab,
    softmax,
)
from lpwb.errors import DegenerateMaskError, DimensionError

# s = (1, 2); W_s = W_h = I; head 1 states (1,0),(0,1),(1,1);
# head 2 states (2,0),(0,0),(0,1); scores e_i = q . h_i / sqrt(2)
FROZEN_INPUTS = AttentionInputs(
    s=np.array([1.0, 2.0]),
    heads=np.array(
        [
            [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]],
            [[2.0, 0.0], [0.0, 0.0], [0.0, 1.0]],
        ]
    ),
    W_s=np.eye(2),
    W_h=np.eye(2),
)
FROZEN_ALPHA = (
    (0.14002924504337802, 0.28399540974126003, 0.57597534521536187),
    (0.44580827410760315, 0.10838345178479356, 0.44580827410760315),
)
FROZEN_P_COPY = (0.29291875957549057, 0.19618943076302681, 0.51089180966148251)


def random_instance(rng: np.random.Generator) -> AttentionInputs:
    n_heads = int(rng.integers(1, 4))
    n_src = int(rng.integers(2, 7))
    d_s, d_h, d_k = (int(rng.integers(1, 5)) for _ in range(3))
    return AttentionInputs(
        s=rng.normal(size=d_s),
        heads=rng.normal(size=(n_heads, n_src, d_h)),
        W_s=rng.normal(size=(d_k, d_s)),
        W_h=rng.normal(size=(d_k, d_h)),
    )


def random_simplex(rng: np.random.Generator, size: int) -> np.ndarray:
    raw = rng.random(size) + 1e-6
    return raw / raw.sum()


def test_frozen_two_head_fixture():
    alpha = head_attentions(FROZEN_INPUTS)
    assert alpha.shape == (2, 3)
    for got, want in zip(alpha, FROZEN_ALPHA):
        assert np.max(np.abs(got - np.array(want))) <= 1e-12
    p_copy = copy_distribution(FROZEN_INPUTS)
    assert np.max(np.abs(p_copy - np.array(FROZEN_P_COPY))) <= 1e-12


def test_equal_scores_split_evenly():
    inputs = AttentionInputs(
        s=np.array([1.0]),
        heads=np.array([[[1.0], [1.0]]]),
        W_s=np.eye(1),
        W_h=np.eye(1),
    )
    assert np.allclose(head_attentions(inputs), [[0.5, 0.5]], atol=1e-12)
    assert np.allclose(copy_distribution(inputs), [0.5, 0.5], atol=1e-12)


def test_softmax_is_shift_invariant():
    rng = np.random.default_rng(3)
    for _ in range(200):
        scores = rng.normal(size=(int(rng.integers(1, 4)), int(rng.integers(2, 7))))
        shift = rng.normal() * 50
        base = softmax(scores)
        assert np.max(np.abs(softmax(scores + shift) - base)) <= 1e-9
        # shifting one row leaves that row's distribution alone
        bumped = scores.copy()
        bumped[0] += shift
        assert np.max(np.abs(softmax(bumped)[0] - base[0])) <= 1e-9


def test_softmax_is_stable_at_extreme_scores():
    out = softmax(np.array([1e4, 0.0]))
    assert np.isfinite(out).all()
    assert out.sum() == pytest.approx(1.0, abs=1e-12)


def test_scores_scale_inversely_with_key_dimension():
    # zero-padding the projections fixes q and k but grows d_k 2 -> 8,
    # so every score shrinks by sqrt(2/8) = 1/2
    q = FROZEN_INPUTS.W_s @ FROZEN_INPUTS.s
    base_scores = (FROZEN_INPUTS.heads @ FROZEN_INPUTS.W_h.T) @ q / math.sqrt(2)
    padded = AttentionInputs(
        s=FROZEN_INPUTS.s,
        heads=FROZEN_INPUTS.heads,
        W_s=np.vstack([FROZEN_INPUTS.W_s, np.zeros((6, 2))]),
        W_h=np.vstack([FROZEN_INPUTS.W_h, np.zeros((6, 2))]),
    )
    assert np.allclose(
        head_attentions(padded), softmax(base_scores / 2), atol=1e-12
    )


def test_fuzzed_distributions_stay_on_the_simplex():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        inputs = random_instance(rng)
        alpha = head_attentions(inputs)
        assert np.all(alpha >= 0)
        assert np.max(np.abs(alpha.sum(axis=-1) - 1.0)) <= 1e-9
        p_copy = copy_distribution(inputs)
        assert abs(p_copy.sum() - 1.0) <= 1e-9

        size = int(rng.integers(2, 9))
        p_vocab = random_simplex(rng, size)
        p_other = random_simplex(rng, size)
        mask = rng.random(size) < 0.6
        mask[int(rng.integers(size))] = True  # keep some vocab mass
        mixed = mix(float(rng.random()), p_vocab, p_other, mask)
        assert np.all(mixed >= 0)
        assert abs(mixed.sum() - 1.0) <= 1e-9


def test_mixture_endpoints():
    rng = np.random.default_rng(23)
    for _ in range(1000):
        size = int(rng.integers(2, 9))
        p_vocab = random_simplex(rng, size)
        p_copy = random_simplex(rng, size)
        assert np.max(np.abs(mix(1.0, p_vocab, p_copy) - p_vocab)) <= 1e-12
        assert np.max(np.abs(mix(0.0, p_vocab, p_copy) - p_copy)) <= 1e-12


def test_mixture_is_affine_in_the_gate():
    rng = np.random.default_rng(29)
    for _ in range(1000):
        size = int(rng.integers(2, 9))
        p_vocab = random_simplex(rng, size)
        p_copy = random_simplex(rng, size)
        mask = np.ones(size, dtype=bool)
        lo = mix(0.0, p_vocab, p_copy, mask)
        hi = mix(1.0, p_vocab, p_copy, mask)
        mid = mix(0.5, p_vocab, p_copy, mask)
        assert np.max(np.abs(mid - (lo + hi) / 2)) <= 1e-9


def test_hand_mixture_value():
    mixed = mix(
        0.5,
        np.array([0.5, 0.5, 0.0]),
        np.array([0.0, 0.2, 0.8]),
        np.array([True, True, True]),
    )
    assert np.max(np.abs(mixed - np.array([0.25, 0.35, 0.4]))) <= 1e-12


def test_masking_renormalizes_before_mixing():
    p_vocab = np.array([0.5, 0.25, 0.25])
    p_copy = np.array([1.0, 0.0, 0.0])
    mixed = mix(0.5, p_vocab, p_copy, np.array([True, True, False]))
    # masked vocab becomes (2/3, 1/3, 0)
    assert np.allclose(mixed, [0.5 * 2 / 3 + 0.5, 0.5 / 3, 0.0], atol=1e-12)
    assert mixed.sum() == pytest.approx(1.0, abs=1e-12)
    # words outside the source keep zero vocabulary mass
    assert mixed[2] == 0.0


def test_degenerate_mask_raises():
    with pytest.raises(DegenerateMaskError):
        mix(
            0.5,
            np.array([0.5, 0.5, 0.0]),
            np.array([0.0, 0.0, 1.0]),
            np.array([False, False, True]),
        )


def test_mix_validates_inputs():
    with pytest.raises(ValueError):
        mix(1.5, np.array([1.0]), np.array([1.0]))
    with pytest.raises(DimensionError):
        mix(0.5, np.array([1.0]), np.array([0.5, 0.5]))
    with pytest.raises(DimensionError):
        mix(0.5, np.array([1.0]), np.array([1.0]), np.array([True, False]))


def test_scatter_accumulates_repeated_tokens():
    out = scatter_to_vocab(
        np.array([0.2, 0.3, 0.5]), np.array([1, 3, 1]), vocab_size=5
    )
    assert np.allclose(out, [0.0, 0.7, 0.0, 0.3, 0.0], atol=1e-12)
    with pytest.raises(DimensionError):
        scatter_to_vocab(np.array([0.5]), np.array([0, 1]), vocab_size=2)
    with pytest.raises(DimensionError):
        scatter_to_vocab(np.array([0.5]), np.array([9]), vocab_size=2)


def test_nll_loss_values():
    certain = np.array([[0.0, 1.0], [1.0, 0.0]])
    assert nll_loss(certain, np.array([1, 0])) == pytest.approx(0.0, abs=1e-12)

    uniform = np.full((4, 8), 1 / 8)
    assert nll_loss(uniform, np.zeros(4, dtype=int)) == pytest.approx(
        math.log(8), abs=1e-12
    )

    steps = np.array([[0.5, 0.5], [0.25, 0.75], [0.125, 0.875]])
    want = (math.log(2) + math.log(4) + math.log(8)) / 3
    assert nll_loss(steps, np.array([0, 0, 0])) == pytest.approx(want, abs=1e-12)
    assert want == pytest.approx(1.3862943611198906, abs=1e-12)


def test_nll_loss_floors_zero_probabilities():
    dists = np.array([[1.0, 0.0]])
    assert nll_loss(dists, np.array([1])) == pytest.approx(
        -math.log(PROB_FLOOR), abs=1e-9
    )


def test_nll_loss_validates():
    with pytest.raises(DimensionError):
        nll_loss(np.array([[1.0, 0.0]]), np.array([0, 1]))
    with pytest.raises(DimensionError):
        nll_loss(np.zeros((0, 3)), np.array([], dtype=int))
    with pytest.raises(DimensionError):
        nll_loss(np.array([[1.0, 0.0]]), np.array([5]))


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(s=np.zeros((2, 2)), heads=np.zeros((1, 2, 2)), W_s=np.eye(2), W_h=np.eye(2)),
        dict(s=np.zeros(2), heads=np.zeros((1, 2)), W_s=np.eye(2), W_h=np.eye(2)),
        dict(s=np.zeros(3), heads=np.zeros((1, 2, 2)), W_s=np.eye(2), W_h=np.eye(2)),
        dict(s=np.zeros(2), heads=np.zeros((1, 2, 3)), W_s=np.eye(2), W_h=np.eye(2)),
        dict(s=np.zeros(2), heads=np.zeros((1, 2, 2)), W_s=np.eye(2), W_h=np.zeros((3, 2))),
        dict(s=np.zeros(2), heads=np.zeros((0, 2, 2)), W_s=np.eye(2), W_h=np.eye(2)),
    ],
)
def test_attention_inputs_validate(kwargs):
    with pytest.raises(DimensionError):
        head_attentions(AttentionInputs(**kwargs))
