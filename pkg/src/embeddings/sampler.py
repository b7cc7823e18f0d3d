"""
Negative sampling pieces shared by the skip-gram and paragraph-vector trainers.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import expit, log_expit


class NegativeSampler:
    """Draws token ids from the unigram distribution raised to a power."""

    def __init__(self, counts: np.ndarray, rng: np.random.Generator, power: float = 0.75):
        """
        Initialize NegativeSampler.

        Args:
            counts: Token frequencies (all >= 0, at least one > 0)
            rng: Generator the draws come from
            power: Exponent applied to the counts
        """
        counts = np.asarray(counts, dtype=np.float64)
        if counts.ndim != 1 or counts.size == 0 or np.any(counts < 0) or counts.sum() <= 0:
            raise ValueError("Sampler needs non-negative counts with a positive total")
        weights = counts ** power
        self.probabilities = weights / weights.sum()
        self._cumulative = np.cumsum(self.probabilities)
        self._cumulative[-1] = 1.0
        self.rng = rng

    def __len__(self) -> int:
        return len(self.probabilities)

    def draw(self, size) -> np.ndarray:
        """Token ids of the given shape."""
        uniform = self.rng.random(size)
        ids = np.searchsorted(self._cumulative, uniform, side="right")
        return np.minimum(ids, len(self.probabilities) - 1)


@dataclass(frozen=True)
class LinearDecay:
    """Learning rate falling linearly from `initial` to `floor` over `total` steps."""

    initial: float
    floor: float
    total: int

    def __post_init__(self):
        if self.total < 1:
            raise ValueError("Decay needs at least one scheduled step")
        if self.floor > self.initial:
            raise ValueError("Floor must not exceed the initial rate")

    def __call__(self, step: int) -> float:
        progress = min(max(step, 0), self.total) / self.total
        return max(self.floor, self.initial - (self.initial - self.floor) * progress)


def pair_loss_and_grads(
    v_in: np.ndarray,
    u_pos: np.ndarray,
    u_negs: np.ndarray,
    neg_mask: Optional[np.ndarray] = None,
):
    """
    Negative-sampling loss of (input, positive target, negatives) and its gradients.

    loss = -ln s(u_pos . v) - sum_k ln s(-u_neg_k . v), s = logistic sigmoid.

    Works on a single pair (v_in: d, u_pos: d, u_negs: k x d) or a batch
    (b x d, b x d, b x k x d); the loss of a batch is the sum over pairs.

    Args:
        v_in: Input-side vector(s)
        u_pos: Output-side vector(s) of the true target
        u_negs: Output-side vectors of the sampled negatives
        neg_mask: Optional (b x k) / (k,) boolean, False drops a negative
            (used when a draw equals the positive target)

    Returns:
        (loss, grad_v_in, grad_u_pos, grad_u_negs), shaped like the inputs
    """
    single = np.ndim(v_in) == 1
    v = np.atleast_2d(v_in)
    pos = np.atleast_2d(u_pos)
    negs = u_negs[np.newaxis] if single else u_negs
    if neg_mask is None:
        weight = np.ones(negs.shape[:2])
    else:
        weight = np.asarray(neg_mask, dtype=np.float64).reshape(negs.shape[:2])

    pos_score = np.einsum("bd,bd->b", v, pos)
    neg_score = np.einsum("bkd,bd->bk", negs, v)

    loss = float(-log_expit(pos_score).sum() - (weight * log_expit(-neg_score)).sum())

    g_pos = expit(pos_score) - 1.0
    g_neg = expit(neg_score) * weight

    grad_v = g_pos[:, np.newaxis] * pos + np.einsum("bk,bkd->bd", g_neg, negs)
    grad_pos = g_pos[:, np.newaxis] * v
    grad_negs = g_neg[:, :, np.newaxis] * v[:, np.newaxis, :]

    if single:
        return loss, grad_v[0], grad_pos[0], grad_negs[0]
    return loss, grad_v, grad_pos, grad_negs
