"""Continuous relaxations of binary and categorical variables.

Each relaxation maps (noise, probability, sharpness beta) to a relaxed value
in [0, 1] together with its local derivatives w.r.t. the probability and the
noise.  Derivative *selection* (the CR vs ICR distinction) is a separate,
value-preserving step done by :func:`select_derivative`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import RngStream, logit, sigmoid

CR = "cr"
ICR = "icr"
GSM = "gsm"
PWL = "pwl"


@dataclass(frozen=True)
class RelaxationPoint:
    """A relaxed sample with its local derivatives.

    Binary: scalars or vectors ``zeta``, ``d_dq``, ``d_drho``.
    Categorical: ``zeta`` is a simplex row and the derivative fields hold the
    Jacobians ``jac_q[a, b] = d zeta^a / d q^b`` and
    ``jac_rho[a, b] = d zeta^a / d rho^b``.
    """

    zeta: np.ndarray
    d_dq: np.ndarray | None = None
    d_drho: np.ndarray | None = None
    jac_q: np.ndarray | None = None
    jac_rho: np.ndarray | None = None


def gsm_binary(rho, q, beta: float) -> RelaxationPoint:
    """Sigmoid relaxation zeta = sigma(beta * (logit(q) + logit(rho)))."""
    rho = np.asarray(rho, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if beta <= 0:
        raise ValueError("beta must be positive")
    if np.any(rho <= 0) or np.any(rho >= 1) or np.any(q <= 0) or np.any(q >= 1):
        raise ValueError("gsm_binary needs rho and q strictly inside (0, 1)")
    zeta = sigmoid(beta * (logit(q) + logit(rho)))
    core = beta * zeta * (1.0 - zeta)
    return RelaxationPoint(zeta=zeta, d_dq=core / (q * (1.0 - q)), d_drho=core / (rho * (1.0 - rho)))


def pwl_slope(q, beta: float):
    """Slope of the linear segment, floored so both endpoints keep mass."""
    q = np.asarray(q, dtype=np.float64)
    return np.maximum(beta / (4.0 * q * (1.0 - q)), 0.5 / np.minimum(q, 1.0 - q))


def pwl_binary(rho, q, beta: float) -> RelaxationPoint:
    """Hard-sigmoid relaxation: zeta = clip(0.5 + alpha * (rho - (1 - q)), 0, 1).

    The linear segment is centered at rho = 1 - q, so round(zeta) reproduces
    the threshold sample Θ(rho - 1 + q).  On the linear segment the q- and
    rho-derivatives are both alpha (the slope is treated as q-independent);
    on the clipped segments both are 0.
    """
    rho = np.asarray(rho, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if beta <= 0:
        raise ValueError("beta must be positive")
    if np.any(q <= 0) or np.any(q >= 1):
        raise ValueError("pwl_binary needs q strictly inside (0, 1)")
    alpha = pwl_slope(q, beta)
    raw = 0.5 + alpha * (rho - (1.0 - q))
    zeta = np.clip(raw, 0.0, 1.0)
    interior = (raw > 0.0) & (raw < 1.0)
    d = np.where(interior, alpha, 0.0)
    return RelaxationPoint(zeta=zeta, d_dq=d, d_drho=d)


def gsm_categorical(u: np.ndarray, q: np.ndarray, beta: float) -> RelaxationPoint:
    """Softmax relaxation of one categorical variable.

    Noise rho^a = log u^a / sum_b log u^b from A uniforms, then
    zeta = softmax(beta * (log q - log rho)).  Jacobians are analytic.
    """
    u = np.asarray(u, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if beta <= 0:
        raise ValueError("beta must be positive")
    if np.any(u <= 0) or np.any(u >= 1):
        raise ValueError("gsm_categorical needs uniforms strictly inside (0, 1)")
    if np.any(q <= 0):
        raise ValueError("gsm_categorical needs an interior simplex row")
    lu = np.log(u)
    rho = lu / lu.sum()
    s = beta * (np.log(q) - np.log(rho))
    s = s - s.max()
    e = np.exp(s)
    zeta = e / e.sum()
    # d zeta^a / d s^c = zeta^a (delta_ac - zeta^c); s depends elementwise on q and rho
    outer = zeta[:, None] * zeta[None, :]
    dz_ds = np.diag(zeta) - outer
    jac_q = dz_ds * (beta / q)[None, :]
    jac_rho = dz_ds * (-beta / rho)[None, :]
    return RelaxationPoint(zeta=zeta, jac_q=jac_q, jac_rho=jac_rho)


def select_derivative(point: RelaxationPoint, mode: str):
    """Derivative used in place of d zeta / d q by the chosen estimator mode.

    CR keeps the plain q-derivative.  ICR substitutes the noise derivative:
    +d zeta/d rho for binary relaxations, -jac_rho for the categorical
    softmax (the shifted-noise constructions differ in sign between the two
    cases).  The relaxed value itself never changes between modes.
    """
    if mode not in (CR, ICR):
        raise ValueError(f"unknown mode {mode!r}")
    if point.jac_q is not None:
        return point.jac_q if mode == CR else -point.jac_rho
    return point.d_dq if mode == CR else point.d_drho


def edge_probabilities(q: np.ndarray) -> tuple[list[tuple[int, int]], np.ndarray]:
    """All simplex edges (a, b), a < b, with probabilities (q^a + q^b)/(A - 1)."""
    a_count = q.shape[0]
    if a_count < 2:
        raise ValueError("need at least two classes")
    edges = [(a, b) for a in range(a_count) for b in range(a + 1, a_count)]
    p = np.array([(q[a] + q[b]) / (a_count - 1) for a, b in edges])
    return edges, p


def sample_edge(q: np.ndarray, rng: RngStream) -> tuple[tuple[int, int], RngStream]:
    """Sample one simplex edge (a, b), a < b, with probability (q^a+q^b)/(A-1)."""
    edges, p = edge_probabilities(np.asarray(q, dtype=np.float64))
    u, rng = rng.uniform(1)
    idx = min(int((u[0] > np.cumsum(p)).sum()), len(edges) - 1)
    return edges[idx], rng


def pwl_categorical_edge(rho: float, q: np.ndarray, edge: tuple[int, int], beta: float):
    """PWL relaxation along one simplex edge.

    Returns ``(row, d_slope, gamma)``: the relaxed row with
    row[a] + row[b] = 1 and zeros elsewhere, the local derivative of row[a]
    w.r.t. the edge-conditional probability qt = q^a/(q^a+q^b) (equal to the
    rho-derivative, as for binary PWL), and the gradient scale
    gamma = (A-1)(q^a + q^b).
    """
    q = np.asarray(q, dtype=np.float64)
    a, b = edge
    qt = q[a] / (q[a] + q[b])
    point = pwl_binary(rho, qt, beta)
    row = np.zeros_like(q)
    row[a] = float(point.zeta)
    row[b] = 1.0 - float(point.zeta)
    gamma = (q.shape[0] - 1) * (q[a] + q[b])
    return row, float(point.d_dq), float(gamma)
