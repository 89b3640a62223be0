"""Finite-difference verification of backpropagation.

The oracle costs two forward passes per parameter, so it is capped to
small networks. Inputs should sit at least ~1e-3 away from relu
pre-activation zeros: the subgradient at the kink is ill-defined and the
central difference straddles it.
"""

from __future__ import annotations

import numpy as np

from .network import Network

MAX_PARAMS = 10_000


def grad_check(net: Network, inputs, target_classes, epsilon: float = 1e-5) -> float:
    """Max relative error between analytic and central-difference gradients."""
    if epsilon <= 0:
        raise ValueError(f"epsilon must be > 0, got {epsilon}")
    n_params = net.n_parameters()
    if n_params > MAX_PARAMS:
        raise ValueError(f"network has {n_params} parameters; oracle is capped at {MAX_PARAMS}")

    inputs = np.asarray(inputs, dtype=np.float64)
    net.forward(inputs)
    net.backward(target_classes)
    analytic = [g.copy() for g in net.gradients()]

    worst = 0.0
    for param, grad in zip(net.parameters(), analytic):
        flat_p = param.reshape(-1)
        flat_g = grad.reshape(-1)
        for i in range(flat_p.size):
            saved = flat_p[i]
            flat_p[i] = saved + epsilon
            loss_plus = net.loss(inputs, target_classes)
            flat_p[i] = saved - epsilon
            loss_minus = net.loss(inputs, target_classes)
            flat_p[i] = saved
            numeric = (loss_plus - loss_minus) / (2.0 * epsilon)
            denom = max(abs(flat_g[i]), abs(numeric), 1e-8)
            worst = max(worst, abs(flat_g[i] - numeric) / denom)
    return worst


def relu_preactivation_margin(net: Network, inputs) -> float:
    """Smallest |pre-activation| feeding any relu; used to avoid kink inputs."""
    inputs = np.asarray(inputs, dtype=np.float64)
    net.forward(inputs)
    margin = np.inf
    for layer, pre in zip(net.layers, net.activations[:-1]):
        if layer.spec()["kind"] == "relu":
            margin = min(margin, float(np.min(np.abs(pre))))
    return margin
