"""
Adam optimiser over a dict of named numpy parameters.
"""
from dataclasses import dataclass, field

import numpy as np

from src.constants import ADAM_BETA1, ADAM_BETA2, ADAM_EPSILON


@dataclass
class AdamState:
    """First/second moment buffers per parameter and the step counter."""

    learning_rate: float
    beta1: float = ADAM_BETA1
    beta2: float = ADAM_BETA2
    epsilon: float = ADAM_EPSILON
    step: int = 0
    first_moment: dict[str, np.ndarray] = field(default_factory=dict)
    second_moment: dict[str, np.ndarray] = field(default_factory=dict)


def adam_step(
    params: dict[str, np.ndarray],
    grads: dict[str, np.ndarray],
    state: AdamState,
) -> dict[str, np.ndarray]:
    """
    Apply one bias-corrected Adam update.

    Args:
        params: Parameter arrays by name
        grads: Gradients with the same names and shapes
        state: Optimiser state, advanced in place

    Returns:
        New parameter dict (inputs are not modified)

    Raises:
        ValueError: If names or shapes of params and grads differ
    """
    if params.keys() != grads.keys():
        raise ValueError(f"Gradient names {sorted(grads)} do not match parameters {sorted(params)}")

    state.step += 1
    correction1 = 1.0 - state.beta1 ** state.step
    correction2 = 1.0 - state.beta2 ** state.step

    updated = {}
    for name, value in params.items():
        grad = grads[name]
        if grad.shape != value.shape:
            raise ValueError(f"Gradient for {name} has shape {grad.shape}, expected {value.shape}")
        m = state.first_moment.get(name, np.zeros_like(value))
        v = state.second_moment.get(name, np.zeros_like(value))
        m = state.beta1 * m + (1.0 - state.beta1) * grad
        v = state.beta2 * v + (1.0 - state.beta2) * grad ** 2
        state.first_moment[name] = m
        state.second_moment[name] = v

        m_hat = m / correction1
        v_hat = v / correction2
        updated[name] = value - state.learning_rate * m_hat / (np.sqrt(v_hat) + state.epsilon)
    return updated
