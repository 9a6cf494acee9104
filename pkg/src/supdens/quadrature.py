"""Composite Simpson quadrature on evenly spaced nodes."""

from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import ConfigError

__all__ = ["simpson_weights", "composite_simpson"]


def simpson_weights(nodes: int) -> np.ndarray:
    """Weights (1, 4, 2, ..., 2, 4, 1)/3 for an odd number of nodes."""
    if nodes < 3 or nodes % 2 == 0:
        raise ConfigError("composite Simpson needs an odd node count >= 3")
    w = np.ones(nodes)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w / 3.0


def composite_simpson(f: Callable[[np.ndarray], np.ndarray], a: float, b: float, nodes: int = 2001) -> float:
    """Integrate f over [a, b] with composite Simpson on `nodes` even nodes.

    An even node count is bumped to the next odd one.
    """
    if nodes <= 0:
        raise ConfigError("node count must be positive")
    if nodes % 2 == 0:
        nodes += 1
    if nodes < 3:
        nodes = 3
    xs = np.linspace(a, b, nodes)
    step = (b - a) / (nodes - 1)
    return float(step * np.dot(simpson_weights(nodes), np.asarray(f(xs), dtype=float)))
