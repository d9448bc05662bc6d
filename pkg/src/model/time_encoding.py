"""Trainable cosine time kernel."""

import numpy as np

from graph.temporal_graph import SECONDS_PER_DAY
from tensor import Module, Tensor, cos, get_default_dtype, mul
from utils.errors import GraphError


def initial_frequencies(d_t: int, timespan: float) -> np.ndarray:
    """
    Geometric frequencies from 1 down to 1/timespan.

    The slowest component then completes less than one cycle across the
    dataset, the fastest resolves unit time differences.
    """
    span = max(float(timespan), 1.0)
    return np.geomspace(1.0, 1.0 / span, num=d_t)


class TimeEncoder(Module):
    """Phi(dt) = [cos(w_1 dt), ..., cos(w_{d_t} dt)] with trainable w."""

    def __init__(self, d_t: int, timespan: float = SECONDS_PER_DAY):
        self.d_t = d_t
        self.omega = Tensor(initial_frequencies(d_t, timespan), requires_grad=True, dtype=get_default_dtype())

    def __call__(self, delta_t) -> Tensor:
        """
        Encode an array of non-negative time differences.

        Returns:
            Tensor of shape delta_t.shape + (d_t,)

        Raises:
            GraphError: If any difference is negative
        """
        delta_t = np.asarray(delta_t, dtype=get_default_dtype())
        if np.any(delta_t < 0):
            raise GraphError(f"time difference must be non-negative, got {delta_t.min()}")
        return cos(mul(Tensor(delta_t[..., None]), self.omega))
