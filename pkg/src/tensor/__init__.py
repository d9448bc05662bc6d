"""Minimal dense-tensor core with reverse-mode automatic differentiation."""

from .tensor import (
    Tensor,
    as_tensor,
    set_default_dtype,
    get_default_dtype,
    add,
    sub,
    neg,
    mul,
    scale,
    matmul,
    transpose,
    reshape,
    concat,
    getitem,
    take_rows,
    relu,
    sigmoid,
    log_sigmoid,
    cos,
    log,
    masked_softmax,
    dropout,
    tsum,
    mean,
)
from .module import Module, Linear, glorot_uniform, zeros_param
from .gradcheck import finite_diff_check, GradCheckReport

__all__ = [
    'Tensor', 'as_tensor', 'set_default_dtype', 'get_default_dtype',
    'add', 'sub', 'neg', 'mul', 'scale', 'matmul', 'transpose', 'reshape', 'concat',
    'getitem', 'take_rows', 'relu', 'sigmoid', 'log_sigmoid', 'cos', 'log',
    'masked_softmax', 'dropout', 'tsum', 'mean',
    'Module', 'Linear', 'glorot_uniform', 'zeros_param',
    'finite_diff_check', 'GradCheckReport',
]
