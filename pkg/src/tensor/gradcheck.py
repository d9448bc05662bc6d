"""Finite-difference verification of analytic gradients."""

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from utils.logger import get_logger
from .tensor import Tensor

logger = get_logger(__name__)

# Relative errors are measured against max(|analytic|, |numeric|, ABS_FLOOR)
ABS_FLOOR = 1e-6


@dataclass
class CoordinateError:
    name: str
    index: Tuple[int, ...]
    analytic: float
    numeric: float
    rel_error: float


@dataclass
class GradCheckReport:
    max_rel_error: float = 0.0
    n_checked: int = 0
    tol: float = 1e-4
    failures: List[CoordinateError] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def worst(self) -> Optional[CoordinateError]:
        return max(self.failures, key=lambda c: c.rel_error) if self.failures else None


Inputs = Union[Tensor, Sequence[Tensor], Dict[str, Tensor]]


def _named_inputs(inputs: Inputs) -> List[Tuple[str, Tensor]]:
    if isinstance(inputs, Tensor):
        return [("x", inputs)]
    if isinstance(inputs, dict):
        return list(inputs.items())
    return [(f"x{i}", t) for i, t in enumerate(inputs)]


def finite_diff_check(
    f: Callable[[], Tensor],
    inputs: Inputs,
    eps: float = 1e-5,
    tol: float = 1e-4,
    max_coords: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
) -> GradCheckReport:
    """
    Compare backprop gradients of a scalar function with central differences.

    Args:
        f: Zero-argument closure recomputing the scalar output from the current
            values of `inputs`; it must be deterministic (dropout disabled)
        inputs: Tensors to perturb (a tensor, a list, or a name -> tensor dict)
        eps: Perturbation size
        tol: Coordinates with relative error >= tol are reported as failures
        max_coords: Optional cap on coordinates checked per tensor (random subset)
        rng: Generator for picking the subset

    Returns:
        GradCheckReport with the maximum error and every failing coordinate
    """
    named = _named_inputs(inputs)
    for _, tensor in named:
        tensor.grad = None
    f().backward()
    analytic = {
        name: (t.grad.copy() if t.grad is not None else np.zeros_like(t.data)) for name, t in named
    }

    report = GradCheckReport(tol=tol)
    rng = rng if rng is not None else np.random.default_rng(0)
    for name, tensor in named:
        coords = list(np.ndindex(tensor.shape))
        if max_coords is not None and len(coords) > max_coords:
            picks = rng.choice(len(coords), size=max_coords, replace=False)
            coords = [coords[i] for i in sorted(picks)]
        for index in coords:
            original = tensor.data[index]
            tensor.data[index] = original + eps
            plus = f().item()
            tensor.data[index] = original - eps
            minus = f().item()
            tensor.data[index] = original

            numeric = (plus - minus) / (2.0 * eps)
            exact = float(analytic[name][index])
            rel = abs(exact - numeric) / max(abs(exact), abs(numeric), ABS_FLOOR)
            report.n_checked += 1
            report.max_rel_error = max(report.max_rel_error, rel)
            if rel >= tol:
                report.failures.append(CoordinateError(name, tuple(int(i) for i in index), exact, numeric, rel))

    logger.debug(
        "gradcheck: %d coordinates, max rel error %.3e, %d failures",
        report.n_checked, report.max_rel_error, len(report.failures),
    )
    return report
