"""Learnable residual control variate r(ζ) = Σ_i ζ_i (1 - ζ_i) g_i(ζ).

The ζ(1-ζ) factors make r vanish identically at every binary vertex, so the
augmented control c = f + r always agrees with f on discrete points.  g is a
single-hidden-layer tanh network with a separate linear skip from the input
into the output head:

    g(ζ) = W2 tanh(W1 ζ + b1) + Wr ζ + b2

All derivatives are hand-derived (no autodiff); the output head (W2, Wr, b2)
is zero-initialized so a fresh control variate is exactly r = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import RngStream


@dataclass
class ControlVariate:
    w1: np.ndarray  # (hidden, n)
    b1: np.ndarray  # (hidden,)
    w2: np.ndarray  # (n, hidden)
    wr: np.ndarray  # (n, n)
    b2: np.ndarray  # (n,)

    @property
    def n_inputs(self) -> int:
        return self.w1.shape[1]

    @property
    def n_hidden(self) -> int:
        return self.w1.shape[0]

    @property
    def n_params(self) -> int:
        return self.w1.size + self.b1.size + self.w2.size + self.wr.size + self.b2.size

    def to_flat(self) -> np.ndarray:
        """Flat layout: [W1 row-major, b1, W2 row-major, Wr row-major, b2]."""
        return np.concatenate([self.w1.ravel(), self.b1, self.w2.ravel(),
                               self.wr.ravel(), self.b2])

    def set_flat(self, flat: np.ndarray):
        if flat.shape != (self.n_params,):
            raise ValueError(f"expected {self.n_params} parameters, got {flat.shape}")
        n, h = self.n_inputs, self.n_hidden
        off = 0
        for name, shape in (("w1", (h, n)), ("b1", (h,)), ("w2", (n, h)),
                            ("wr", (n, n)), ("b2", (n,))):
            size = int(np.prod(shape))
            setattr(self, name, flat[off:off + size].reshape(shape).copy())
            off += size


def init_control_variate(n_inputs: int, n_hidden: int = 32,
                         rng: RngStream | None = None) -> ControlVariate:
    """Hidden weights uniform in [-1/sqrt(n), 1/sqrt(n)], output head zero, so
    RELAX+ starts exactly at REBAR behavior."""
    rng = rng if rng is not None else RngStream(seed=0)
    u, rng = rng.uniform(n_hidden * n_inputs)
    scale = 1.0 / np.sqrt(n_inputs)
    w1 = (2.0 * u.reshape(n_hidden, n_inputs) - 1.0) * scale
    return ControlVariate(
        w1=w1,
        b1=np.zeros(n_hidden),
        w2=np.zeros((n_inputs, n_hidden)),
        wr=np.zeros((n_inputs, n_inputs)),
        b2=np.zeros(n_inputs),
    )


def _forward(cv: ControlVariate, zeta: np.ndarray):
    h = np.tanh(cv.w1 @ zeta + cv.b1)
    g = cv.w2 @ h + cv.wr @ zeta + cv.b2
    phi = zeta * (1.0 - zeta)
    return h, g, phi


def cv_value(cv: ControlVariate, zeta: np.ndarray) -> float:
    """r(ζ); exactly 0 at binary vertices by the factor structure."""
    zeta = np.asarray(zeta, dtype=np.float64)
    if zeta.shape != (cv.n_inputs,):
        raise ValueError(f"expected input of shape ({cv.n_inputs},), got {zeta.shape}")
    _, g, phi = _forward(cv, zeta)
    return float(phi @ g)


def cv_input_grad(cv: ControlVariate, zeta: np.ndarray) -> np.ndarray:
    """d r / d ζ via the product rule and a hand-rolled backward pass."""
    zeta = np.asarray(zeta, dtype=np.float64)
    h, g, phi = _forward(cv, zeta)
    # through the factors, then through the network: g depends on zeta via h and the skip
    back_h = (cv.w2.T @ phi) * (1.0 - h * h)
    return (1.0 - 2.0 * zeta) * g + cv.w1.T @ back_h + cv.wr.T @ phi


def cv_param_grad(cv: ControlVariate, zeta: np.ndarray, upstream: float) -> np.ndarray:
    """Gradient of upstream * r(ζ) w.r.t. the flat parameter vector."""
    zeta = np.asarray(zeta, dtype=np.float64)
    h, g, phi = _forward(cv, zeta)
    t = (cv.w2.T @ phi) * (1.0 - h * h)
    d_w1 = np.outer(t, zeta)
    d_b1 = t
    d_w2 = np.outer(phi, h)
    d_wr = np.outer(phi, zeta)
    d_b2 = phi
    return upstream * np.concatenate([d_w1.ravel(), d_b1, d_w2.ravel(),
                                      d_wr.ravel(), d_b2])
