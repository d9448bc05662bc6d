"""Building blocks of one TIP-GNN layer."""

from typing import List, Tuple

import numpy as np

from tensor import (
    Linear,
    Module,
    Tensor,
    add,
    concat,
    glorot_uniform,
    masked_softmax,
    matmul,
    relu,
    scale,
    sigmoid,
)


class MLP(Module):
    """`depth` Linear(d, d) maps with ReLU in between; depth 0 is the identity."""

    def __init__(self, d: int, depth: int, rng: np.random.Generator):
        self.layers = [Linear(d, d, rng) for _ in range(depth)]

    def __call__(self, x: Tensor) -> Tensor:
        for i, layer in enumerate(self.layers):
            x = layer(x)
            if i < len(self.layers) - 1:
                x = relu(x)
        return x


class FeatureInitializer(Module):
    """Z0 = W ReLU(W_n H_N + W_e (B H_S)) + b, one row per neighbor."""

    def __init__(self, d: int, d_edge: int, rng: np.random.Generator):
        self.W_n = Linear(d, d, rng, bias=False)
        self.W_e = Linear(d_edge, d, rng, bias=False)
        self.W = Linear(d, d, rng, bias=True)

    def __call__(self, B: np.ndarray, H_S: Tensor, H_N: Tensor) -> Tensor:
        """
        Args:
            B: (..., n, |S|) incidence matrix
            H_S: (..., |S|, d_e + d_t) stacked edge features
            H_N: (..., n, d) previous-layer neighbor embeddings
        """
        aggregated = matmul(Tensor(B), H_S)
        return self.W(relu(add(self.W_n(H_N), self.W_e(aggregated))))


class TransitionPropagation(Module):
    """
    K steps of Z^{k+1} = alpha Z^k + (1 - alpha) A_tilde MLP_k(Z^k).

    alpha == 1 returns Z^0 at every step without touching the MLPs, so the
    damping limit holds exactly.
    """

    def __init__(self, d: int, steps: int, mlp_depth: int, rng: np.random.Generator):
        self.mlps = [MLP(d, mlp_depth, rng) for _ in range(steps)]

    @property
    def steps(self) -> int:
        return len(self.mlps)

    def __call__(self, Z0: Tensor, A_tilde: np.ndarray, alpha: float) -> List[Tensor]:
        A = Tensor(A_tilde)
        outputs = [Z0]
        for mlp in self.mlps:
            previous = outputs[-1]
            if alpha >= 1.0:
                outputs.append(previous)
                continue
            propagated = matmul(A, mlp(previous))
            if alpha <= 0.0:
                outputs.append(propagated)
            else:
                outputs.append(add(scale(previous, alpha), scale(propagated, 1.0 - alpha)))
        return outputs


class TransitionPooling(Module):
    """
    Multi-head attention from the node's previous embedding to its neighbors.

    Heads share packed (d, d) projections split into `heads` slices; head
    outputs are concatenated and projected back to d. Without any valid
    neighbor the output is the zero vector.
    """

    def __init__(self, d: int, heads: int, rng: np.random.Generator):
        self.d = d
        self.heads = heads
        self.W_Q = Linear(d, d, rng, bias=False)
        self.W_K = Linear(d, d, rng, bias=False)
        self.W_V = Linear(d, d, rng, bias=False)
        self.W_O = Linear(d, d, rng, bias=False)

    def __call__(self, h_prev: Tensor, Z: Tensor, mask: np.ndarray, return_weights: bool = False):
        """
        Args:
            h_prev: (M, d) query embeddings
            Z: (M, n, d) neighbor embeddings at one propagation step
            mask: (M, n) True for valid neighbors

        Returns:
            (M, d) pooled embeddings, plus (M, heads, n) weights if requested
        """
        m, n, _ = Z.shape
        h, dh = self.heads, self.d // self.heads
        query = self.W_Q(h_prev).reshape(m, h, 1, dh)
        keys = self.W_K(Z).reshape(m, n, h, dh).transpose(0, 2, 3, 1)
        values = self.W_V(Z).reshape(m, n, h, dh).transpose(0, 2, 1, 3)
        weights = masked_softmax(matmul(query, keys), np.asarray(mask, dtype=bool)[:, None, None, :])
        pooled = matmul(weights, values).reshape(m, self.d)
        out = self.W_O(pooled)
        if return_weights:
            return out, weights.data.reshape(m, h, n)
        return out


class AttentionFusion(Module):
    """
    Projection attention across propagation steps.

    w_k = q . sigmoid(W^(k) h_k + b^(k)) with per-step (W^(k), b^(k)) and one
    q shared by all steps of the layer; the output is sum_k softmax(w)_k h_k.
    """

    def __init__(self, d: int, steps: int, rng: np.random.Generator):
        self.step_proj = [Linear(d, d, rng, bias=True) for _ in range(steps + 1)]
        self.q = glorot_uniform((d, 1), rng)

    def __call__(self, h_list: List[Tensor]) -> Tuple[Tensor, Tensor]:
        """
        Args:
            h_list: K+1 tensors of shape (M, d)

        Returns:
            (fused (M, d), weights (M, K+1))
        """
        m, d = h_list[0].shape
        scores = concat([matmul(sigmoid(proj(hk)), self.q) for proj, hk in zip(self.step_proj, h_list)], axis=-1)
        weights = masked_softmax(scores)
        stacked = concat([hk.reshape(m, 1, d) for hk in h_list], axis=1)
        fused = matmul(weights.reshape(m, 1, len(h_list)), stacked).reshape(m, d)
        return fused, weights


class LinkPredictor(Module):
    """p(u, v, t) = sigmoid(W ReLU(W_u h_u + W_v h_v) + b); returns logits."""

    def __init__(self, d: int, rng: np.random.Generator):
        self.W_u = Linear(d, d, rng, bias=False)
        self.W_v = Linear(d, d, rng, bias=False)
        self.W = Linear(d, 1, rng, bias=True)

    def __call__(self, h_u: Tensor, h_v: Tensor) -> Tensor:
        hidden = relu(add(self.W_u(h_u), self.W_v(h_v)))
        return self.W(hidden).reshape(-1)

