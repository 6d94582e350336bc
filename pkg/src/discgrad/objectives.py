"""Objective functions: the black-box contract plus the concrete objectives
used in the experiments (single-variable toys, random quadratics for the
oracle suites, and the max-clique objective)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import RngStream


@dataclass(frozen=True)
class Objective:
    """Black-box function contract.

    ``eval_discrete`` is the function on discrete points; ``eval_relaxed``
    must agree with it exactly on binary/one-hot vertices and extend it to
    the relaxed domain; ``grad_relaxed`` is the analytic gradient of
    ``eval_relaxed``.
    """

    eval_discrete: Callable[[np.ndarray], float]
    eval_relaxed: Callable[[np.ndarray], float]
    grad_relaxed: Callable[[np.ndarray], np.ndarray]


def _quadratic_toy(sign: float) -> Objective:
    def value(x):
        return float(sign * (x[0] - 0.45) ** 2)

    def grad(x):
        return np.array([sign * 2.0 * (x[0] - 0.45)])

    return Objective(eval_discrete=value, eval_relaxed=value, grad_relaxed=grad)


def toy_binary(sign: str = "convex") -> Objective:
    """Single-variable toy f(z) = +-(z - 0.45)^2.

    The convex case has its discrete minimum at z=0, the concave case at z=1;
    both place the other vertex at a higher value so a biased estimator can
    get trapped there.
    """
    if sign not in ("convex", "concave"):
        raise ValueError("sign must be 'convex' or 'concave'")
    return _quadratic_toy(+1.0 if sign == "convex" else -1.0)


TOY_CATEGORICAL_TARGET = np.array([0.9, 1.1] + [1.0] * 8)


def toy_categorical(sign: str = "convex") -> Objective:
    """Single categorical variable with 10 classes, f(y) = +-sum_a (g^a - y^a)^2.

    g = (0.9, 1.1, 1, ..., 1); the convex variant is minimized at the one-hot
    y^1 = 1, the concave variant at y^0 = 1.
    """
    if sign not in ("convex", "concave"):
        raise ValueError("sign must be 'convex' or 'concave'")
    s = +1.0 if sign == "convex" else -1.0
    g = TOY_CATEGORICAL_TARGET

    def value(y):
        return float(s * np.sum((g - y[0]) ** 2))

    def grad(y):
        return (-2.0 * s * (g - y[0]))[None, :]

    return Objective(eval_discrete=value, eval_relaxed=value, grad_relaxed=grad)


def clique_objective(graph, kappa: float, degenerate_eps: float = 1e-6) -> Objective:
    """Max-clique surrogate f(z) = -(z^T A z) / (d (d - 1 + kappa)), d = sum z.

    Defined on discrete or relaxed vertex-inclusion vectors.  When the total
    mass d falls below ``degenerate_eps`` the value and gradient are 0 (the
    expression is 0/0 near the empty set; optimization never starts there).
    """
    if not 0.0 <= kappa <= 1.0:
        raise ValueError("kappa must lie in [0, 1]")
    adj = np.asarray(graph.adjacency, dtype=np.float64)

    def value(z):
        d = z.sum()
        if d <= degenerate_eps:
            return 0.0
        return float(-(z @ adj @ z) / (d * (d - 1.0 + kappa)))

    def grad(z):
        d = z.sum()
        if d <= degenerate_eps:
            return np.zeros_like(z)
        az = adj @ z
        s = z @ az
        denom = d * (d - 1.0 + kappa)
        return -(2.0 * az * denom - s * (2.0 * d - 1.0 + kappa)) / denom**2

    return Objective(eval_discrete=value, eval_relaxed=value, grad_relaxed=grad)


def random_quadratic(dim: int, rng: RngStream, shape: tuple[int, ...] | None = None) -> Objective:
    """Random quadratic test fixture f(x) = x^T B x + c^T x on flattened input.

    ``shape`` declares the sample layout (e.g. ``(M, A)`` for categorical
    one-hots); inputs are flattened row-major before the form is applied and
    the gradient is reshaped back.
    """
    if dim > 60:
        raise ValueError("random quadratics are a small-scale test fixture (dim <= 60)")
    u, rng = rng.uniform(dim * dim)
    b = (u.reshape(dim, dim) - 0.5)
    b = 0.5 * (b + b.T)
    v, rng = rng.uniform(dim)
    c = 2.0 * (v - 0.5)
    bsym = b + b.T

    def value(x):
        x = np.asarray(x, dtype=np.float64).ravel()
        return float(x @ b @ x + c @ x)

    def grad(x):
        x = np.asarray(x, dtype=np.float64)
        g = bsym @ x.ravel() + c
        return g.reshape(shape) if shape is not None else g

    return Objective(eval_discrete=value, eval_relaxed=value, grad_relaxed=grad)
