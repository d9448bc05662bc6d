"""Parameter containers on top of Tensor."""

from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from utils.errors import CheckpointError
from .tensor import Tensor, get_default_dtype, matmul, add


def glorot_uniform(shape: Tuple[int, ...], rng: np.random.Generator) -> Tensor:
    """Trainable tensor drawn from U(-a, a), a = sqrt(6 / (fan_in + fan_out))."""
    fan_in, fan_out = (shape[0], shape[-1]) if len(shape) > 1 else (shape[0], shape[0])
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return Tensor(rng.uniform(-limit, limit, size=shape), requires_grad=True, dtype=get_default_dtype())


def zeros_param(shape: Tuple[int, ...]) -> Tensor:
    return Tensor(np.zeros(shape), requires_grad=True, dtype=get_default_dtype())


class Module:
    """
    Base class for anything holding trainable tensors.

    Attributes that are trainable Tensors, Modules, or lists of either are
    discovered automatically, in attribute definition order.
    """

    training: bool = True

    def named_parameters(self, prefix: str = "") -> Iterator[Tuple[str, Tensor]]:
        for name, value in vars(self).items():
            full = f"{prefix}{name}"
            if isinstance(value, Tensor):
                if value.requires_grad:
                    yield full, value
            elif isinstance(value, Module):
                yield from value.named_parameters(full + ".")
            elif isinstance(value, (list, tuple)):
                for i, item in enumerate(value):
                    if isinstance(item, Tensor) and item.requires_grad:
                        yield f"{full}.{i}", item
                    elif isinstance(item, Module):
                        yield from item.named_parameters(f"{full}.{i}.")

    def parameters(self) -> List[Tensor]:
        return [p for _, p in self.named_parameters()]

    def modules(self) -> Iterator["Module"]:
        yield self
        for value in vars(self).values():
            if isinstance(value, Module):
                yield from value.modules()
            elif isinstance(value, (list, tuple)):
                for item in value:
                    if isinstance(item, Module):
                        yield from item.modules()

    def train(self, mode: bool = True) -> "Module":
        for module in self.modules():
            module.training = mode
        return self

    def eval(self) -> "Module":
        return self.train(False)

    def zero_grad(self) -> None:
        """Reset every gradient to zeros (leaves outside the loss keep a zero grad)."""
        for p in self.parameters():
            p.grad = np.zeros_like(p.data)

    def parameter_count(self) -> int:
        return int(sum(p.size for p in self.parameters()))

    def state_dict(self) -> Dict[str, np.ndarray]:
        return {name: p.data.copy() for name, p in self.named_parameters()}

    def load_state_dict(self, state: Dict[str, np.ndarray], strict: bool = True) -> None:
        """
        Copy arrays into the matching parameters.

        Raises:
            CheckpointError: On missing/unexpected names (strict) or shape mismatch
        """
        own = dict(self.named_parameters())
        if strict:
            missing = sorted(set(own) - set(state))
            unexpected = sorted(set(state) - set(own))
            if missing or unexpected:
                raise CheckpointError(f"state mismatch: missing={missing} unexpected={unexpected}")
        for name, array in state.items():
            if name not in own:
                continue
            if own[name].shape != tuple(array.shape):
                raise CheckpointError(
                    f"shape mismatch for {name}: expected {own[name].shape}, got {tuple(array.shape)}"
                )
            own[name].data = np.array(array, dtype=own[name].data.dtype)


class Linear(Module):
    """Affine map x @ W (+ b) with Glorot-initialized W."""

    def __init__(self, in_dim: int, out_dim: int, rng: np.random.Generator, bias: bool = True):
        self.weight = glorot_uniform((in_dim, out_dim), rng)
        self.bias: Optional[Tensor] = zeros_param((out_dim,)) if bias else None

    def __call__(self, x: Tensor) -> Tensor:
        out = matmul(x, self.weight)
        return add(out, self.bias) if self.bias is not None else out
