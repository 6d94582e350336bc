"""Exact enumeration of expectations/gradients for small systems, and the
Monte-Carlo bias/variance benchmarking harness."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass

import numpy as np

from .core import (
    BinaryLogits,
    CategoricalLogits,
    HierarchicalBernoulliSpec,
    RngStream,
    clamp_prob,
    probs_from_logits,
    sigmoid,
)
from .objectives import Objective

STATE_BUDGET = 2**20

BIAS_CSV_HEADER = "estimator,coord,oracle_grad,mean,bias,stderr,variance,n_evals_mean"


class EnumerationBudgetError(ValueError):
    """State space too large for exact enumeration."""


def _check_budget(count: float):
    if count > STATE_BUDGET:
        raise EnumerationBudgetError(
            f"state space of size {count:.3g} exceeds enumeration budget {STATE_BUDGET}"
        )


def _binary_states(m: int):
    return itertools.product((0.0, 1.0), repeat=m)


def enumerate_expectation(spec, f: Objective) -> float:
    """Exact sum of q(z) f(z) over the full state space."""
    if isinstance(spec, BinaryLogits):
        m = spec.num_vars
        _check_budget(2.0**m)
        q = probs_from_logits(spec)
        total = 0.0
        for state in _binary_states(m):
            z = np.array(state)
            p = np.prod(np.where(z == 1.0, q, 1.0 - q))
            total += p * f.eval_discrete(z)
        return total
    if isinstance(spec, CategoricalLogits):
        m, a = spec.num_vars, spec.num_classes
        _check_budget(float(a) ** m)
        q = probs_from_logits(spec)
        total = 0.0
        eye = np.eye(a)
        for idx in itertools.product(range(a), repeat=m):
            y = eye[list(idx)]
            p = np.prod(q[np.arange(m), list(idx)])
            total += p * f.eval_discrete(y)
        return total
    if isinstance(spec, HierarchicalBernoulliSpec):
        m = spec.num_vars
        _check_budget(2.0**m)
        total = 0.0
        for state in _binary_states(m):
            z = np.array(state)
            total += _hier_prob(spec, z) * f.eval_discrete(z)
        return total
    raise TypeError(f"unsupported spec type {type(spec).__name__}")


def _hier_prob(spec: HierarchicalBernoulliSpec, z: np.ndarray) -> float:
    p = 1.0
    prev: list[np.ndarray] = []
    off = 0
    for k, size in enumerate(spec.layer_sizes):
        q_k = clamp_prob(sigmoid(spec.layer_logits(k, prev)))
        z_k = z[off:off + size]
        p *= float(np.prod(np.where(z_k == 1.0, q_k, 1.0 - q_k)))
        prev.append(z_k)
        off += size
    return p


def enumerate_gradient(spec, f: Objective) -> np.ndarray:
    """Exact gradient w.r.t. logits by marginalizing each variable in turn.

    For every coordinate the two (or A) branch values are accumulated with
    the exact probability of the rest of the configuration, which reproduces
    the zero-variance finite-difference forms coordinate by coordinate.
    """
    if isinstance(spec, BinaryLogits):
        m = spec.num_vars
        _check_budget(2.0**m)
        q = probs_from_logits(spec)
        acc = np.zeros((m, 2))
        for state in _binary_states(m):
            z = np.array(state)
            per = np.where(z == 1.0, q, 1.0 - q)
            p = np.prod(per)
            fz = f.eval_discrete(z)
            # p / per[i] is the probability of z_{\i}
            acc[np.arange(m), z.astype(int)] += (p / per) * fz
        return q * (1.0 - q) * (acc[:, 1] - acc[:, 0])
    if isinstance(spec, CategoricalLogits):
        m, a = spec.num_vars, spec.num_classes
        _check_budget(float(a) ** m)
        q = probs_from_logits(spec)
        acc = np.zeros((m, a))
        rows = np.arange(m)
        eye = np.eye(a)
        for idx in itertools.product(range(a), repeat=m):
            sel = list(idx)
            y = eye[sel]
            per = q[rows, sel]
            p = np.prod(per)
            fy = f.eval_discrete(y)
            acc[rows, sel] += (p / per) * fy
        return q * (acc - (q * acc).sum(axis=1, keepdims=True))
    if isinstance(spec, HierarchicalBernoulliSpec):
        m = spec.num_vars
        _check_budget(2.0**m)
        acc = np.zeros((m, 2))
        for state in _binary_states(m):
            z = np.array(state)
            fz = f.eval_discrete(z)
            prev: list[np.ndarray] = []
            off = 0
            per = np.empty(m)
            dq = np.empty(m)
            for k, size in enumerate(spec.layer_sizes):
                q_k = clamp_prob(sigmoid(spec.layer_logits(k, prev)))
                z_k = z[off:off + size]
                per[off:off + size] = np.where(z_k == 1.0, q_k, 1.0 - q_k)
                dq[off:off + size] = q_k * (1.0 - q_k)
                prev.append(z_k)
                off += size
            p = np.prod(per)
            acc[np.arange(m), z.astype(int)] += (p / per) * dq * fz
        return acc[:, 1] - acc[:, 0]
    raise TypeError(f"unsupported spec type {type(spec).__name__}")


@dataclass
class BiasVarianceReport:
    """Per-coordinate empirical statistics of an estimator against the oracle.

    Coordinates are flattened row-major for categorical specs.  A coordinate
    is flagged biased when |bias| > 4 * stderr.
    """

    oracle_grad: np.ndarray
    mean: np.ndarray
    bias: np.ndarray
    stderr: np.ndarray
    variance: np.ndarray
    n_replicates: int
    n_evals_mean: float
    wall_time: float

    @property
    def significant(self) -> np.ndarray:
        return np.abs(self.bias) > 4.0 * self.stderr

    def csv_rows(self, estimator: str) -> list[str]:
        rows = []
        oracle = self.oracle_grad.ravel()
        for i in range(self.mean.size):
            rows.append(
                f"{estimator},{i},{float(oracle[i])!r},{float(self.mean[i])!r},"
                f"{float(self.bias[i])!r},{float(self.stderr[i])!r},"
                f"{float(self.variance[i])!r},{float(self.n_evals_mean)!r}"
            )
        return rows


def bias_variance_report(estimator, spec, f: Objective, n_replicates: int,
                         rng: RngStream, oracle: np.ndarray | None = None) -> BiasVarianceReport:
    """Run ``n_replicates`` independent single-sample estimates on distinct
    sub-streams and compare their statistics to the enumeration oracle.

    ``oracle`` may be passed to skip re-enumeration (it must match
    ``enumerate_gradient(spec, f)``).  Accumulation is done in replicate
    order, so the result is identical however the replicates are scheduled.
    """
    if n_replicates < 2:
        raise ValueError("need at least 2 replicates")
    if oracle is None:
        oracle = enumerate_gradient(spec, f)
    t0 = time.perf_counter()
    dim = oracle.size
    # Welford accumulation: exact zeros for constant estimators, stable otherwise
    mean = np.zeros(dim)
    m2 = np.zeros(dim)
    evals = 0
    for k in range(n_replicates):
        est = estimator(spec, f, rng.child(k))
        g = est.grad_logits.ravel()
        delta = g - mean
        mean += delta / (k + 1)
        m2 += delta * (g - mean)
        evals += est.n_evals
    variance = m2 / (n_replicates - 1)
    stderr = np.sqrt(variance / n_replicates)
    return BiasVarianceReport(
        oracle_grad=oracle,
        mean=mean,
        bias=mean - oracle.ravel(),
        stderr=stderr,
        variance=variance,
        n_replicates=n_replicates,
        n_evals_mean=evals / n_replicates,
        wall_time=time.perf_counter() - t0,
    )
