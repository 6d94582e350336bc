"""Adam and the training loop minimizing E_q[f] over distribution logits."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .core import (
    BinaryLogits,
    CategoricalLogits,
    RngStream,
    probs_from_logits,
    sample_discrete,
)
from .estimators import RelaxPlusEstimator
from .objectives import Objective
from .oracle import enumerate_expectation

LOGIT_CLAMP = 15.0


@dataclass
class AdamState:
    """Adam with standard defaults (beta1 0.9, beta2 0.999, eps 1e-8)."""

    params: np.ndarray
    lr: float = 0.01
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step_count: int = 0
    m: np.ndarray = field(init=False)
    v: np.ndarray = field(init=False)

    def __post_init__(self):
        self.params = np.asarray(self.params, dtype=np.float64).copy()
        self.m = np.zeros_like(self.params)
        self.v = np.zeros_like(self.params)


def adam_step(state: AdamState, grad: np.ndarray) -> np.ndarray:
    """One bias-corrected update; returns (and stores) the new parameters."""
    grad = np.asarray(grad, dtype=np.float64)
    if grad.shape != state.params.shape:
        raise ValueError(f"gradient shape {grad.shape} != parameter shape {state.params.shape}")
    if not np.all(np.isfinite(grad)):
        raise ValueError(f"non-finite gradient at step {state.step_count + 1}")
    state.step_count += 1
    state.m = state.beta1 * state.m + (1.0 - state.beta1) * grad
    state.v = state.beta2 * state.v + (1.0 - state.beta2) * grad * grad
    m_hat = state.m / (1.0 - state.beta1**state.step_count)
    v_hat = state.v / (1.0 - state.beta2**state.step_count)
    state.params = state.params - state.lr * m_hat / (np.sqrt(v_hat) + state.eps)
    return state.params


def entropy(spec) -> float:
    """Total entropy in nats of a factorial binary or categorical spec."""
    q = probs_from_logits(spec)
    if isinstance(spec, BinaryLogits):
        return float(-(q * np.log(q) + (1.0 - q) * np.log(1.0 - q)).sum())
    if isinstance(spec, CategoricalLogits):
        return float(-(q * np.log(q)).sum())
    raise TypeError("entropy is defined for factorial specs only")


@dataclass
class TrainConfig:
    iters: int = 2000
    batch: int = 100
    lr: float = 0.01
    seed: int = 0
    clamp_logit: float = LOGIT_CLAMP
    record_q: bool = True
    # per-iteration scalar computed from the probability vector/matrix
    metric_fn: Optional[Callable[[np.ndarray], float]] = None
    # exact objective when the state space is at most this big, else one
    # Monte-Carlo evaluation per iteration
    exact_objective_states: int = 256
    cv_lr: Optional[float] = None  # RELAX+ control-variate learning rate

    def __post_init__(self):
        if self.iters < 1 or self.batch < 1 or self.lr <= 0:
            raise ValueError("iters and batch must be >= 1 and lr > 0")


@dataclass
class TrainTrace:
    objective: np.ndarray
    entropy: np.ndarray
    q: Optional[np.ndarray]  # iters x (flattened probability dim) when recorded
    metric: Optional[np.ndarray]  # metric_fn value per iteration
    best_metric: Optional[np.ndarray]  # running maximum of the metric

    def __len__(self):
        return self.objective.shape[0]


def _rebuild(spec, logits: np.ndarray):
    if isinstance(spec, BinaryLogits):
        return BinaryLogits(logits)
    if isinstance(spec, CategoricalLogits):
        return CategoricalLogits(logits.reshape(spec.l.shape))
    raise TypeError("training supports factorial binary and categorical specs")


def _num_states(spec) -> float:
    if isinstance(spec, BinaryLogits):
        return 2.0**spec.num_vars
    if isinstance(spec, CategoricalLogits):
        return float(spec.num_classes) ** spec.num_vars
    return np.inf


def train_distribution(spec0, f: Objective, estimator, config: TrainConfig):
    """Minimize E_q[f] with Adam on the logits.

    Each iteration averages ``batch`` independent single-sample gradient
    estimates drawn from per-(iteration, sample) sub-streams, so a run is
    reproducible from (config, seed) alone.  When ``estimator`` is a
    :class:`RelaxPlusEstimator` its control-variate parameters receive an
    Adam update from the averaged residual-penalty gradient each iteration
    (same settings as the logits unless ``cv_lr`` overrides).

    Returns ``(final_spec, TrainTrace)``.
    """
    root = RngStream(seed=config.seed)
    logits = spec0.l.ravel().copy()
    adam = AdamState(params=logits, lr=config.lr)
    relax_plus = isinstance(estimator, RelaxPlusEstimator)
    cv_adam = None
    if relax_plus:
        cv_lr = config.lr if config.cv_lr is None else config.cv_lr
        cv_adam = AdamState(params=estimator.cv.to_flat(), lr=cv_lr)

    exact = _num_states(spec0) <= config.exact_objective_states
    obj_trace = np.empty(config.iters)
    ent_trace = np.empty(config.iters)
    q_trace = np.empty((config.iters, spec0.l.size)) if config.record_q else None
    metric_trace = np.empty(config.iters) if config.metric_fn is not None else None
    best_trace = np.empty(config.iters) if config.metric_fn is not None else None
    best_metric = -np.inf

    spec = _rebuild(spec0, logits)
    for it in range(config.iters):
        it_stream = root.child(it)
        grad = np.zeros(spec0.l.size)
        psi_grad = np.zeros(cv_adam.params.size) if relax_plus else None
        n_evals = 0
        for b in range(config.batch):
            s = it_stream.child(b)
            if relax_plus:
                est, pg = estimator.estimate(spec, f, s)
                psi_grad += pg
            else:
                est = estimator(spec, f, s)
            grad += est.grad_logits.ravel()
            n_evals += est.n_evals
        grad /= config.batch

        logits = np.clip(adam_step(adam, grad), -config.clamp_logit, config.clamp_logit)
        adam.params = logits
        spec = _rebuild(spec0, logits)
        if relax_plus:
            estimator.cv.set_flat(adam_step(cv_adam, psi_grad / config.batch))

        q = probs_from_logits(spec)
        ent_trace[it] = entropy(spec)
        if q_trace is not None:
            q_trace[it] = q.ravel()
        if exact:
            obj_trace[it] = enumerate_expectation(spec, f)
        else:
            z, _, _ = sample_discrete(spec, it_stream.child(0x7FFFFFFF))
            obj_trace[it] = f.eval_discrete(z)
        if metric_trace is not None:
            current = config.metric_fn(q)
            best_metric = max(best_metric, current)
            metric_trace[it] = current
            best_trace[it] = best_metric

    trace = TrainTrace(objective=obj_trace, entropy=ent_trace, q=q_trace,
                       metric=metric_trace, best_metric=best_trace)
    return spec, trace
