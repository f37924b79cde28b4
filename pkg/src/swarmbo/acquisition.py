"""Acquisition functions over GP posteriors: UCB, EI and PI (maximization)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import erfc

from .gp import GpModel, Posterior, predict

UCB = "ucb"
EI = "ei"
PI = "pi"

_KINDS = (UCB, EI, PI)


@dataclass(frozen=True)
class AcquisitionSpec:
    kind: str = UCB
    gamma: float = 2.0  # UCB exploration weight
    xi: float = 0.01  # EI/PI improvement margin
    incumbent: float = float("-inf")  # best observed value, used by EI/PI

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown acquisition kind {self.kind!r}")
        if self.gamma < 0:
            raise ValueError("gamma must be non-negative")
        if self.xi < 0:
            raise ValueError("xi must be non-negative")


def _norm_cdf(z):
    return 0.5 * erfc(-z / np.sqrt(2.0))


def _norm_pdf(z):
    # |z| can be astronomically large when sigma underflows; exp(-inf) -> 0 is right
    with np.errstate(over="ignore"):
        return np.exp(-0.5 * z * z) / np.sqrt(2.0 * np.pi)


def ucb(post: Posterior, gamma: float):
    """Upper confidence bound mu + gamma*sigma."""
    return post.mean + gamma * np.sqrt(post.var)


def ei(post: Posterior, incumbent: float, xi: float = 0.0):
    """Expected improvement over the incumbent, with margin xi."""
    mu = np.asarray(post.mean, dtype=float)
    sigma = np.sqrt(np.asarray(post.var, dtype=float))
    gap = mu - incumbent - xi
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(sigma > 0, gap / np.where(sigma > 0, sigma, 1.0), 0.0)
        val = np.where(sigma > 0, gap * _norm_cdf(z) + sigma * _norm_pdf(z), np.maximum(gap, 0.0))
    val = np.maximum(val, 0.0)
    return float(val) if val.ndim == 0 else val


def pi(post: Posterior, incumbent: float, xi: float = 0.0):
    """Probability of improving on the incumbent by at least xi."""
    mu = np.asarray(post.mean, dtype=float)
    sigma = np.sqrt(np.asarray(post.var, dtype=float))
    gap = mu - incumbent - xi
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.where(sigma > 0, _norm_cdf(np.where(sigma > 0, gap / np.where(sigma > 0, sigma, 1.0), 0.0)),
                       (gap > 0).astype(float))
    return float(val) if val.ndim == 0 else val


def evaluate(spec: AcquisitionSpec, model: GpModel, x):
    """Score a point (or batch) under the configured acquisition."""
    post = predict(model, x)
    if spec.kind == UCB:
        return ucb(post, spec.gamma)
    if spec.kind == EI:
        return ei(post, spec.incumbent, spec.xi)
    return pi(post, spec.incumbent, spec.xi)
