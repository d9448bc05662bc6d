"""Adam with L2 weight decay."""

from typing import Dict, Iterable, Tuple

import numpy as np

from tensor import Tensor
from utils.errors import CheckpointError, ConfigError, NumericalError
from utils.logger import get_logger

logger = get_logger(__name__)


class Adam:
    """
    Adam over named parameters.

    Weight decay is added to the gradient (g + wd * theta) before the moment
    updates. Moments and the step counter persist across steps and can be
    saved with a checkpoint.
    """

    def __init__(
        self,
        named_parameters: Iterable[Tuple[str, Tensor]],
        lr: float = 1e-4,
        betas: Tuple[float, float] = (0.9, 0.999),
        eps: float = 1e-8,
        weight_decay: float = 0.0,
    ):
        if lr <= 0:
            raise ConfigError(f"must be > 0, got {lr}", "lr")
        if not (0.0 <= betas[0] < 1.0 and 0.0 <= betas[1] < 1.0):
            raise ConfigError(f"must be in [0, 1), got {betas}", "betas")
        if weight_decay < 0:
            raise ConfigError(f"must be >= 0, got {weight_decay}", "weight_decay")
        self.params: Dict[str, Tensor] = dict(named_parameters)
        self.lr = lr
        self.beta1, self.beta2 = betas
        self.eps = eps
        self.weight_decay = weight_decay
        self.step_count = 0
        self.m = {name: np.zeros_like(p.data) for name, p in self.params.items()}
        self.v = {name: np.zeros_like(p.data) for name, p in self.params.items()}

    def zero_grad(self) -> None:
        for p in self.params.values():
            p.grad = np.zeros_like(p.data)

    def step(self) -> None:
        """
        Apply one update from the gradients currently held by the parameters.

        Raises:
            NumericalError: If a gradient is NaN/Inf or an update would make a
                parameter non-finite; nothing is updated in either case
        """
        for name, p in self.params.items():
            if p.grad is not None and not np.all(np.isfinite(p.grad)):
                raise NumericalError(f"non-finite gradient in {name}")

        t = self.step_count + 1
        correction1 = 1.0 - self.beta1 ** t
        correction2 = 1.0 - self.beta2 ** t
        updates = {}
        for name, p in self.params.items():
            grad = p.grad if p.grad is not None else np.zeros_like(p.data)
            if self.weight_decay:
                grad = grad + self.weight_decay * p.data
            m = self.beta1 * self.m[name] + (1.0 - self.beta1) * grad
            v = self.beta2 * self.v[name] + (1.0 - self.beta2) * grad * grad
            data = p.data - self.lr * (m / correction1) / (np.sqrt(v / correction2) + self.eps)
            if not np.all(np.isfinite(data)):
                raise NumericalError(f"parameter {name} would become non-finite at step {t}")
            updates[name] = (m, v, data)

        # commit only once every parameter passed the guard
        for name, (m, v, data) in updates.items():
            self.m[name], self.v[name] = m, v
            self.params[name].data = data.astype(self.params[name].data.dtype, copy=False)
        self.step_count = t

    def state_dict(self) -> Dict[str, object]:
        return {
            "step": self.step_count,
            "m": {name: a.copy() for name, a in self.m.items()},
            "v": {name: a.copy() for name, a in self.v.items()},
        }

    def load_state_dict(self, state: Dict[str, object]) -> None:
        """
        Raises:
            CheckpointError: If moment names or shapes do not match the parameters
        """
        for key in ("m", "v"):
            moments = state[key]
            if set(moments) != set(self.params):
                raise CheckpointError(f"optimizer {key} moments do not match the model parameters")
            for name, array in moments.items():
                if array.shape != self.params[name].shape:
                    raise CheckpointError(f"optimizer {key}[{name}] has shape {array.shape}")
        self.step_count = int(state["step"])
        self.m = {name: np.array(a, dtype=self.params[name].data.dtype) for name, a in state["m"].items()}
        self.v = {name: np.array(a, dtype=self.params[name].data.dtype) for name, a in state["v"].items()}
