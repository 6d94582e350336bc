"""Gradient estimators.

Every estimator is a pure per-sample function
``(spec, objective, rng, ...) -> GradientEstimate`` returning a gradient with
respect to the distribution logits plus the number of objective evaluations it
consumed.  Batch averaging lives in :mod:`discgrad.optim`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .controlvariate import ControlVariate, cv_input_grad, cv_param_grad, cv_value
from .core import (
    BinaryLogits,
    CategoricalLogits,
    GradientEstimate,
    HierarchicalBernoulliSpec,
    RngStream,
    clamp_prob,
    grad_log_prob,
    logit,
    probs_from_logits,
    sample_discrete,
    sigmoid,
)
from .objectives import Objective
from .relaxations import (
    CR,
    GSM,
    ICR,
    PWL,
    gsm_binary,
    gsm_categorical,
    pwl_binary,
    pwl_categorical_edge,
    sample_edge,
    select_derivative,
)


@dataclass(frozen=True)
class EstimatorConfig:
    """Shared hyperparameters.

    ``beta`` is the relaxation sharpness used by CR/ICR/REBAR/RELAX+,
    ``sampled_ram_beta`` the subsampling scale of sampled RAM, ``eps`` the
    ARGMAX step scale, ``gamma`` the RELAX+ score-term weight, and
    ``mode``/``relaxation`` pick the CR variant.
    """

    beta: float = 2.0
    eps: float = 0.01
    sampled_ram_beta: float = 2.0
    gamma: float = 1.0
    mode: str = ICR
    relaxation: str = PWL
    baseline: float = 0.0

    def __post_init__(self):
        if self.beta <= 0 or self.eps <= 0 or self.sampled_ram_beta <= 0:
            raise ValueError("beta, eps and sampled_ram_beta must be positive")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError("gamma must lie in [0, 1]")


# --------------------------------------------------------------------------
# finite-difference estimators
# --------------------------------------------------------------------------


def ram_factorial(spec: BinaryLogits, f: Objective, rng: RngStream) -> GradientEstimate:
    """Marginalize each variable exactly at a single shared sample of the rest.

    Costs M+1 evaluations; unbiased, and the minimum-variance single-sample
    estimator (zero variance at M=1).
    """
    q = probs_from_logits(spec)
    m = spec.num_vars
    z, _, rng = sample_discrete(spec, rng)
    f_base = f.eval_discrete(z)
    diffs = np.empty(m)
    for i in range(m):
        flipped = z.copy()
        flipped[i] = 1.0 - z[i]
        f_other = f.eval_discrete(flipped)
        diffs[i] = (f_base - f_other) if z[i] == 1.0 else (f_other - f_base)
    return GradientEstimate(q * (1.0 - q) * diffs, n_evals=m + 1)


def ram_hierarchical(spec: HierarchicalBernoulliSpec, f: Objective, rng: RngStream) -> GradientEstimate:
    """RAM for a layered distribution with common random variates downstream.

    Flipping variable i re-propagates the deeper layers through their
    conditional logits using the *same* uniforms as the base sample, so the
    branch matching the sampled value reproduces the base configuration and
    the estimate picks up both the direct effect of z_i and the chain effect
    through downstream conditionals.
    """
    sizes = spec.layer_sizes
    m = spec.num_vars
    rho, rng = rng.uniform(m)
    offsets = np.concatenate(([0], np.cumsum(sizes)))

    def propagate(prefix_layers: list[np.ndarray], start: int) -> list[np.ndarray]:
        layers = list(prefix_layers)
        for k in range(start, len(sizes)):
            q_k = clamp_prob(sigmoid(spec.layer_logits(k, layers)))
            lo = offsets[k]
            layers.append((rho[lo:lo + sizes[k]] > 1.0 - q_k).astype(np.float64))
        return layers

    base_layers = propagate([], 0)
    z = np.concatenate(base_layers)
    f_base = f.eval_discrete(z)

    grad = np.empty(m)
    for k, size in enumerate(sizes):
        q_k = clamp_prob(sigmoid(spec.layer_logits(k, base_layers[:k])))
        for j in range(size):
            i = offsets[k] + j
            branch_layer = base_layers[k].copy()
            branch_layer[j] = 1.0 - branch_layer[j]
            branch = propagate(base_layers[:k] + [branch_layer], k + 1)
            f_other = f.eval_discrete(np.concatenate(branch))
            diff = (f_base - f_other) if z[i] == 1.0 else (f_other - f_base)
            grad[i] = q_k[j] * (1.0 - q_k[j]) * diff
    return GradientEstimate(grad, n_evals=m + 1)


def ram_categorical(spec: CategoricalLogits, f: Objective, rng: RngStream) -> GradientEstimate:
    """Per-row marginalization over all A classes at a shared sample of the
    other rows; M*A evaluation cost (the base evaluation is shared)."""
    q = probs_from_logits(spec)
    m, a = q.shape
    y, _, rng = sample_discrete(spec, rng)
    sampled = y.argmax(axis=1)
    f_base = f.eval_discrete(y)
    fvals = np.empty((m, a))
    eye = np.eye(a)
    for i in range(m):
        for c in range(a):
            if c == sampled[i]:
                fvals[i, c] = f_base
            else:
                flipped = y.copy()
                flipped[i] = eye[c]
                fvals[i, c] = f.eval_discrete(flipped)
    grad = q * (fvals - (q * fvals).sum(axis=1, keepdims=True))
    return GradientEstimate(grad, n_evals=m * a)


def sampled_ram_factorial(spec: BinaryLogits, f: Objective, rng: RngStream,
                          beta: float = 2.0) -> GradientEstimate:
    """RAM with per-variable subsampling: variable i enters with probability
    p_i = min(1, 4 q_i (1-q_i) / beta) and weight q_i(1-q_i)/p_i.

    Off the clip the weight is the flat beta/4; clipping with the importance
    weight keeps the estimate unbiased when 4q(1-q) > beta.
    """
    q = probs_from_logits(spec)
    m = spec.num_vars
    z, _, rng = sample_discrete(spec, rng)
    xi, rng = rng.uniform(m)
    p = np.minimum(1.0, 4.0 * q * (1.0 - q) / beta)
    include = xi < p
    f_base = f.eval_discrete(z)
    grad = np.zeros(m)
    n_evals = 1
    for i in np.nonzero(include)[0]:
        flipped = z.copy()
        flipped[i] = 1.0 - z[i]
        f_other = f.eval_discrete(flipped)
        n_evals += 1
        diff = (f_base - f_other) if z[i] == 1.0 else (f_other - f_base)
        grad[i] = q[i] * (1.0 - q[i]) / p[i] * diff
    return GradientEstimate(grad, n_evals=n_evals)


def sampled_ram_categorical(spec: CategoricalLogits, f: Objective, rng: RngStream,
                            beta: float = 2.0) -> GradientEstimate:
    """Categorical RAM with simplex-edge subsampling: row i keeps edge (a, b)
    with probability min(1, 4 q^a q^b / beta) and weight q^a q^b / p."""
    q = probs_from_logits(spec)
    m, a_count = q.shape
    y, _, rng = sample_discrete(spec, rng)
    sampled = y.argmax(axis=1)
    pairs = [(a, b) for a in range(a_count) for b in range(a + 1, a_count)]
    u, rng = rng.uniform(m * len(pairs))
    u = u.reshape(m, len(pairs))
    f_base = f.eval_discrete(y)
    n_evals = 1
    eye = np.eye(a_count)
    cache: dict[tuple[int, int], float] = {}

    def f_at(i: int, c: int) -> float:
        nonlocal n_evals
        if c == sampled[i]:
            return f_base
        key = (i, c)
        if key not in cache:
            flipped = y.copy()
            flipped[i] = eye[c]
            cache[key] = f.eval_discrete(flipped)
            n_evals += 1
        return cache[key]

    grad = np.zeros((m, a_count))
    for i in range(m):
        for e, (a, b) in enumerate(pairs):
            p = min(1.0, 4.0 * q[i, a] * q[i, b] / beta)
            if u[i, e] < p:
                w = q[i, a] * q[i, b] / p
                term = w * (f_at(i, a) - f_at(i, b))
                grad[i, a] += term
                grad[i, b] -= term
    return GradientEstimate(grad, n_evals=n_evals)


def argmax_binary(spec: BinaryLogits, f: Objective, rng: RngStream,
                  eps: float = 0.01) -> GradientEstimate:
    """Perturbed-argmax finite-difference identity, evaluated at finite eps.

    Biased O(eps) with variance O(1/eps); each coordinate uses its own fresh
    uniform while the remaining coordinates are fixed at a shared sample.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    q = probs_from_logits(spec)
    m = spec.num_vars
    z, _, rng = sample_discrete(spec, rng)
    rho, rng = rng.uniform(m)
    s = logit(rho)
    f_base = f.eval_discrete(z)
    grad = np.empty(m)
    for i in range(m):
        flipped = z.copy()
        flipped[i] = 1.0 - z[i]
        f_other = f.eval_discrete(flipped)
        f1, f0 = (f_base, f_other) if z[i] == 1.0 else (f_other, f_base)
        hi = 1.0 if eps * f1 + spec.l[i] + s[i] > 0 else 0.0
        lo = 1.0 if eps * f0 + spec.l[i] + s[i] > 0 else 0.0
        grad[i] = (hi - lo) / eps
    return GradientEstimate(grad, n_evals=m + 1)


def arm_factorial(spec: BinaryLogits, f: Objective, rng: RngStream) -> GradientEstimate:
    """Antithetic two-evaluation estimator: z1 = Θ(q - ρ), z2 = Θ(ρ - 1 + q),
    gradient (f(z2) - f(z1)) (ρ - 0.5) per coordinate."""
    q = probs_from_logits(spec)
    rho, rng = rng.uniform(spec.num_vars)
    z1 = (rho < q).astype(np.float64)
    z2 = (rho > 1.0 - q).astype(np.float64)
    diff = f.eval_discrete(z2) - f.eval_discrete(z1)
    return GradientEstimate(diff * (rho - 0.5), n_evals=2)


# --------------------------------------------------------------------------
# continuous-relaxation estimators
# --------------------------------------------------------------------------


def _relax_binary(rho, q, relaxation: str, beta: float):
    if relaxation == GSM:
        return gsm_binary(rho, q, beta)
    if relaxation == PWL:
        return pwl_binary(rho, q, beta)
    raise ValueError(f"unknown relaxation {relaxation!r}")


def cr_gradient(spec, f: Objective, rng: RngStream, mode: str = ICR,
                relaxation: str = PWL, beta: float = 2.0) -> GradientEstimate:
    """Pathwise gradient through a relaxed sample; one evaluation pass.

    ``mode`` picks the local derivative: CR differentiates the relaxation
    w.r.t. the probability, ICR substitutes the noise derivative for the
    differentiated coordinate (value-preserving; unbiased at M=1).  For PWL
    the two modes coincide.  Factorial binary, layered binary and factorial
    categorical specs are supported; the categorical PWL variant relaxes one
    sampled simplex edge per row.
    """
    if isinstance(spec, BinaryLogits):
        q = probs_from_logits(spec)
        rho, rng = rng.uniform(spec.num_vars)
        point = _relax_binary(rho, q, relaxation, beta)
        d = select_derivative(point, mode)
        w = f.grad_relaxed(point.zeta)
        return GradientEstimate(w * d * q * (1.0 - q), n_evals=1)
    if isinstance(spec, HierarchicalBernoulliSpec):
        return _cr_hierarchical(spec, f, rng, mode, relaxation, beta)
    if isinstance(spec, CategoricalLogits):
        if relaxation == GSM:
            return _cr_categorical_gsm(spec, f, rng, mode, beta)
        if relaxation == PWL:
            return _cr_categorical_pwl(spec, f, rng, beta)
        raise ValueError(f"unknown relaxation {relaxation!r}")
    raise TypeError(f"unsupported spec type {type(spec).__name__}")


def _cr_hierarchical(spec: HierarchicalBernoulliSpec, f: Objective, rng: RngStream,
                     mode: str, relaxation: str, beta: float) -> GradientEstimate:
    """Layer-by-layer relaxed sampling (downstream logits conditioned on the
    relaxed upstream values) with a hand-rolled reverse pass in which every
    local relaxation derivative is the mode-selected one."""
    sizes = spec.layer_sizes
    m = spec.num_vars
    rho, rng = rng.uniform(m)
    offsets = np.concatenate(([0], np.cumsum(sizes)))

    zetas: list[np.ndarray] = []
    d_sel: list[np.ndarray] = []
    dqdl: list[np.ndarray] = []
    for k, size in enumerate(sizes):
        q_k = clamp_prob(sigmoid(spec.layer_logits(k, zetas)))
        point = _relax_binary(rho[offsets[k]:offsets[k] + size], q_k, relaxation, beta)
        zetas.append(np.atleast_1d(point.zeta))
        d_sel.append(np.atleast_1d(select_derivative(point, mode)))
        dqdl.append(q_k * (1.0 - q_k))

    w = f.grad_relaxed(np.concatenate(zetas))
    gbar = [w[offsets[k]:offsets[k] + sizes[k]].copy() for k in range(len(sizes))]
    grad = np.empty(m)
    for k in range(len(sizes) - 1, -1, -1):
        g_l = gbar[k] * d_sel[k] * dqdl[k]  # dL / d logits_k
        grad[offsets[k]:offsets[k] + sizes[k]] = g_l
        if k > 0:
            jac = spec.layer_jacobian(k, zetas[:k])  # d logits_k / d upstream zetas
            upstream = jac.T @ g_l
            for kk in range(k):
                gbar[kk] += upstream[offsets[kk]:offsets[kk] + sizes[kk]]
    return GradientEstimate(grad, n_evals=1)


def _cr_categorical_gsm(spec: CategoricalLogits, f: Objective, rng: RngStream,
                        mode: str, beta: float) -> GradientEstimate:
    q = probs_from_logits(spec)
    m, a = q.shape
    u, rng = rng.uniform(m * a)
    u = u.reshape(m, a)
    zeta = np.empty((m, a))
    jac = np.empty((m, a, a))
    for i in range(m):
        point = gsm_categorical(u[i], q[i], beta)
        zeta[i] = point.zeta
        jac[i] = select_derivative(point, mode)
    w = f.grad_relaxed(zeta)
    grad = np.empty((m, a))
    for i in range(m):
        # chain: dL/dl^c = sum_ab w^a jac^{ab} q^b (delta_bc - q^c)
        v = jac[i].T @ w[i]
        grad[i] = q[i] * v - q[i] * (q[i] @ v)
    return GradientEstimate(grad, n_evals=1)


def _cr_categorical_pwl(spec: CategoricalLogits, f: Objective, rng: RngStream,
                        beta: float) -> GradientEstimate:
    q = probs_from_logits(spec)
    m, a_count = q.shape
    edges = []
    rows = np.empty((m, a_count))
    slopes = np.empty(m)
    gammas = np.empty(m)
    for i in range(m):
        edge, rng = sample_edge(q[i], rng)
        u, rng = rng.uniform(1)
        row, d_slope, gamma = pwl_categorical_edge(u[0], q[i], edge, beta)
        edges.append(edge)
        rows[i] = row
        slopes[i] = d_slope
        gammas[i] = gamma
    w = f.grad_relaxed(rows)
    grad = np.zeros((m, a_count))
    for i, (a, b) in enumerate(edges):
        # d qt / d l^a = q^a q^b / (q^a + q^b)^2 = -d qt / d l^b; other logits drop out
        dqt_dl = q[i, a] * q[i, b] / (q[i, a] + q[i, b]) ** 2
        term = gammas[i] * (w[i, a] - w[i, b]) * slopes[i] * dqt_dl
        grad[i, a] += term
        grad[i, b] -= term
    return GradientEstimate(grad, n_evals=1)


# --------------------------------------------------------------------------
# score-function estimators
# --------------------------------------------------------------------------


class RunningMean:
    """Exponential moving average used as the REINFORCE baseline.

    Initialized on the first observation; ``current`` is read before the
    update so the baseline never peeks at the sample it corrects.
    """

    def __init__(self, decay: float = 0.99):
        self.decay = decay
        self.value: float | None = None

    @property
    def current(self) -> float:
        return 0.0 if self.value is None else self.value

    def update(self, x: float):
        self.value = x if self.value is None else self.decay * self.value + (1.0 - self.decay) * x


def reinforce_gradient(spec, f: Objective, rng: RngStream,
                       baseline: "RunningMean | float" = 0.0) -> GradientEstimate:
    """Plain score-function estimator.

    ``baseline`` is either a frozen scalar (bias measurements) or a
    :class:`RunningMean`, which is read before and updated after the draw.
    """
    z, _, rng = sample_discrete(spec, rng)
    fz = f.eval_discrete(z)
    if isinstance(baseline, RunningMean):
        b = baseline.current
        baseline.update(fz)
    else:
        b = baseline
    return GradientEstimate(grad_log_prob(spec, z) * (fz - b), n_evals=1)


def _rebar_pieces(spec: BinaryLogits, f: Objective, rng: RngStream,
                  beta: float, relaxation: str):
    """Shared draws and terms for REBAR and its ICR + R1 + R2 decomposition."""
    q = probs_from_logits(spec)
    rho, rng = rng.uniform(spec.num_vars)
    z = (rho > 1.0 - q).astype(np.float64)
    point = _relax_binary(rho, q, relaxation, beta)
    fz = f.eval_discrete(z)
    fzeta = f.eval_relaxed(point.zeta)
    w = f.grad_relaxed(point.zeta)
    icr = w * point.d_drho * q * (1.0 - q)
    mult = np.where(z == 1.0, (rho - 1.0 + q) / q, -(rho - 1.0 + q) / (1.0 - q))
    r1 = -icr * mult
    r2 = (z - q) * (fz - fzeta)
    return icr, r1, r2


def rebar_gradient(spec: BinaryLogits, f: Objective, rng: RngStream,
                   beta: float = 2.0, relaxation: str = PWL) -> GradientEstimate:
    """Unbiased score-function estimator using the relaxed objective as a
    control variate with coupled conditional noise.

    Computed as the exact sum of its ICR + R1 + R2 decomposition so the
    decomposition identity holds bitwise; costs two value evaluations plus
    one relaxed-gradient evaluation.
    """
    icr, r1, r2 = _rebar_pieces(spec, f, rng, beta, relaxation)
    return GradientEstimate(icr + r1 + r2, n_evals=3)


def rebar_decomposition(spec: BinaryLogits, f: Objective, rng: RngStream,
                        beta: float = 2.0, relaxation: str = PWL) -> GradientEstimate:
    """REBAR with named components: the ICR part and the two corrections that
    remove its bias.  Components sum exactly to :func:`rebar_gradient` for
    the same stream."""
    icr, r1, r2 = _rebar_pieces(spec, f, rng, beta, relaxation)
    return GradientEstimate(icr + r1 + r2, n_evals=3,
                            components={"icr": icr, "r1": r1, "r2": r2})


def r1_multiplier(q: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """The coupled multiplier inside R1: z(ρ-1+q)/q - (1-z)(ρ-1+q)/(1-q) with
    z = Θ(ρ-1+q).  Distributed as U(0,1): mean 1/2, second moment 1/3."""
    z = (rho > 1.0 - q).astype(np.float64)
    return np.where(z == 1.0, (rho - 1.0 + q) / q, -(rho - 1.0 + q) / (1.0 - q))


def relax_plus_gradient(spec: BinaryLogits, f: Objective, cv: ControlVariate,
                        rng: RngStream, beta: float = 2.0, gamma: float = 1.0,
                        relaxation: str = PWL) -> tuple[GradientEstimate, np.ndarray]:
    """REBAR with a learnable residual control variate c = f + r and a score
    weight gamma in [0, 1] (gamma < 1 trades bias for variance).

    Returns the logits gradient and the parameter gradient of the L1 residual
    penalty |f(z) - f(ζ) - r(ζ)| for the control variate.
    """
    if not 0.0 <= gamma <= 1.0:
        raise ValueError("gamma must lie in [0, 1]")
    q = probs_from_logits(spec)
    rho, rng = rng.uniform(spec.num_vars)
    z = (rho > 1.0 - q).astype(np.float64)
    point = _relax_binary(rho, q, relaxation, beta)
    zeta = point.zeta
    fz = f.eval_discrete(z)
    fzeta = f.eval_relaxed(zeta)
    rv = cv_value(cv, zeta)
    w = f.grad_relaxed(zeta) + cv_input_grad(cv, zeta)
    icr = w * point.d_drho * q * (1.0 - q)
    mult = np.where(z == 1.0, (rho - 1.0 + q) / q, -(rho - 1.0 + q) / (1.0 - q))
    r1 = -icr * mult
    score = (z - q) * (fz - (fzeta + rv))
    grad = gamma * score + (icr + r1)
    residual = fz - fzeta - rv
    psi_grad = cv_param_grad(cv, zeta, -float(np.sign(residual)))
    return GradientEstimate(grad, n_evals=3), psi_grad


# --------------------------------------------------------------------------
# dispatching and the estimator registry
# --------------------------------------------------------------------------


def ram(spec, f: Objective, rng: RngStream) -> GradientEstimate:
    if isinstance(spec, BinaryLogits):
        return ram_factorial(spec, f, rng)
    if isinstance(spec, HierarchicalBernoulliSpec):
        return ram_hierarchical(spec, f, rng)
    if isinstance(spec, CategoricalLogits):
        return ram_categorical(spec, f, rng)
    raise TypeError(f"unsupported spec type {type(spec).__name__}")


def sampled_ram(spec, f: Objective, rng: RngStream, beta: float = 2.0) -> GradientEstimate:
    if isinstance(spec, BinaryLogits):
        return sampled_ram_factorial(spec, f, rng, beta)
    if isinstance(spec, CategoricalLogits):
        return sampled_ram_categorical(spec, f, rng, beta)
    raise TypeError(f"unsupported spec type {type(spec).__name__}")


class RelaxPlusEstimator:
    """Stateful wrapper pairing RELAX+ with its control variate.

    Calling it returns only the logits gradient; :meth:`estimate` also
    returns the control-variate parameter gradient for trainers.
    """

    def __init__(self, cv: ControlVariate, beta: float = 2.0, gamma: float = 1.0,
                 relaxation: str = PWL):
        self.cv = cv
        self.beta = beta
        self.gamma = gamma
        self.relaxation = relaxation

    def estimate(self, spec, f, rng) -> tuple[GradientEstimate, np.ndarray]:
        return relax_plus_gradient(spec, f, self.cv, rng, self.beta, self.gamma,
                                   self.relaxation)

    def __call__(self, spec, f, rng) -> GradientEstimate:
        return self.estimate(spec, f, rng)[0]


ESTIMATOR_NAMES = ("ram", "sampled-ram", "arm", "argmax", "gsm", "igsm", "pwl",
                   "rebar", "relax+", "reinforce")


def make_estimator(name: str, config: EstimatorConfig = EstimatorConfig(),
                   cv: ControlVariate | None = None):
    """Per-sample estimator callable by name.

    ``gsm`` is CR mode with the sigmoid/softmax relaxation, ``igsm`` the same
    relaxation in ICR mode, ``pwl`` the piecewise-linear relaxation (CR and
    ICR coincide).  ``relax+`` requires a control variate and returns a
    :class:`RelaxPlusEstimator`.
    """
    c = config
    if name == "ram":
        return ram
    if name == "sampled-ram":
        return lambda spec, f, rng: sampled_ram(spec, f, rng, c.sampled_ram_beta)
    if name == "arm":
        return arm_factorial
    if name == "argmax":
        return lambda spec, f, rng: argmax_binary(spec, f, rng, c.eps)
    if name == "gsm":
        return lambda spec, f, rng: cr_gradient(spec, f, rng, CR, GSM, c.beta)
    if name == "igsm":
        return lambda spec, f, rng: cr_gradient(spec, f, rng, ICR, GSM, c.beta)
    if name == "pwl":
        return lambda spec, f, rng: cr_gradient(spec, f, rng, ICR, PWL, c.beta)
    if name == "cr":  # generic: mode and relaxation from the config
        return lambda spec, f, rng: cr_gradient(spec, f, rng, c.mode, c.relaxation, c.beta)
    if name == "rebar":
        return lambda spec, f, rng: rebar_gradient(spec, f, rng, c.beta, c.relaxation)
    if name == "relax+":
        if cv is None:
            raise ValueError("relax+ needs a control variate")
        return RelaxPlusEstimator(cv, c.beta, c.gamma, c.relaxation)
    if name == "reinforce":
        ema = RunningMean()
        return lambda spec, f, rng: reinforce_gradient(spec, f, rng, ema)
    raise ValueError(f"unknown estimator {name!r}; known: {', '.join(ESTIMATOR_NAMES)}")
