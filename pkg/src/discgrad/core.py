"""Domain types, deterministic random streams and distribution primitives.

Array conventions used across the package:

* binary samples ``z`` are float vectors of 0.0/1.0 with shape ``(M,)``
* categorical samples ``y`` are one-hot float matrices with shape ``(M, A)``
* relaxed samples ``zeta`` share those shapes with entries in ``[0, 1]``
  (categorical rows sum to 1)
* gradients w.r.t. logits share the shape of the spec's logits

The canonical distribution parameter is the logit; probabilities are always
derived through :func:`probs_from_logits` and kept inside
``[PROB_EPS, 1 - PROB_EPS]`` so logits never saturate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

PROB_EPS = 1e-12

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix64(x: int) -> int:
    """splitmix64 finalizer on a python int (exact 64-bit arithmetic)."""
    x &= _MASK64
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9 & _MASK64
    x = (x ^ (x >> 27)) * 0x94D049BB133111EB & _MASK64
    return x ^ (x >> 31)


@dataclass(frozen=True)
class RngStream:
    """Counter-based splittable random stream.

    A stream is an immutable token ``(seed, stream_id, counter)``.  The k-th
    variate of a stream is a pure function of the token, so replaying a token
    reproduces the exact same draws, and distinct ``stream_id`` values give
    independent streams.  Drawing returns the values together with an advanced
    token; nothing is mutated.
    """

    seed: int
    stream_id: int = 0
    counter: int = 0

    def _base(self) -> int:
        return _mix64(_mix64(self.seed) ^ (self.stream_id * 0xD1342543DE82EF95))

    def uniform(self, n: int) -> tuple[np.ndarray, "RngStream"]:
        """Draw ``n`` uniforms in (0, 1); returns (values, advanced stream).

        The k-th variate is a pure function of (seed, stream_id, counter + k),
        so splitting one draw into several produces the same sequence.
        """
        base = (self._base() + self.counter * _GOLDEN) & _MASK64
        if n <= 16:
            # scalar path: same arithmetic as below, cheaper for tiny draws
            out = np.empty(n)
            x0 = base
            for k in range(n):
                x = (x0 ^ (x0 >> 30)) * 0xBF58476D1CE4E5B9 & _MASK64
                x = (x ^ (x >> 27)) * 0x94D049BB133111EB & _MASK64
                x ^= x >> 31
                out[k] = (x >> 11) * (2.0**-53) + 2.0**-54
                x0 = (x0 + _GOLDEN) & _MASK64
            return out, RngStream(self.seed, self.stream_id, self.counter + n)
        idx = np.arange(n, dtype=np.uint64)
        x = np.uint64(base) + idx * np.uint64(_GOLDEN)
        x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        x = x ^ (x >> np.uint64(31))
        # 53-bit mantissa, then shift off exact zero; stays strictly inside (0,1)
        u = (x >> np.uint64(11)).astype(np.float64) * (2.0**-53) + 2.0**-54
        return u, RngStream(self.seed, self.stream_id, self.counter + n)

    def child(self, i: int) -> "RngStream":
        """Independent sub-stream ``i`` (fresh counter)."""
        return RngStream(self.seed, _mix64(self.stream_id * 0xA24BAED4963EE407 + i + 1), 0)


# --------------------------------------------------------------------------
# distribution specs
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class BinaryLogits:
    """Factorial Bernoulli distribution over M binary variables, one logit each.

    The logit array is copied and frozen so derived probabilities can be
    cached on the instance.
    """

    l: np.ndarray

    def __post_init__(self):
        arr = np.atleast_1d(np.array(self.l, dtype=np.float64))
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError("binary logits must be a vector with M >= 1")
        if not np.all(np.isfinite(arr)):
            raise ValueError("binary logits must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "l", arr)

    @property
    def num_vars(self) -> int:
        return self.l.shape[0]


@dataclass(frozen=True)
class CategoricalLogits:
    """Factorial categorical distribution: M variables with A classes each."""

    l: np.ndarray

    def __post_init__(self):
        arr = np.array(self.l, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[1] < 2:
            raise ValueError("categorical logits must be an M x A matrix with A >= 2")
        if not np.all(np.isfinite(arr)):
            raise ValueError("categorical logits must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "l", arr)

    @property
    def num_vars(self) -> int:
        return self.l.shape[0]

    @property
    def num_classes(self) -> int:
        return self.l.shape[1]


@dataclass(frozen=True)
class HierarchicalBernoulliSpec:
    """Layered Bernoulli distribution: layer k logits condition on layers < k.

    ``logits_fn(k, prev)`` maps a layer index and the list of previous layer
    value vectors (discrete 0/1 during sampling, possibly relaxed during CR
    estimation) to that layer's logit vector.  It must be deterministic, and
    ``logits_fn(0, [])`` must be constant.

    ``logits_jac(k, prev)``, when given, returns the analytic Jacobian of
    layer k's logits w.r.t. the concatenation of ``prev`` (shape
    ``layer_sizes[k] x sum(layer_sizes[:k])``).  Continuous-relaxation
    estimators need this chain; without it they fall back to central finite
    differences on ``logits_fn``.
    """

    layer_sizes: tuple[int, ...]
    logits_fn: Callable[[int, list[np.ndarray]], np.ndarray]
    logits_jac: Optional[Callable[[int, list[np.ndarray]], np.ndarray]] = None

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.layer_sizes)
        if len(sizes) < 1 or any(s < 1 for s in sizes):
            raise ValueError("layer_sizes must be non-empty positive ints")
        object.__setattr__(self, "layer_sizes", sizes)

    @property
    def num_vars(self) -> int:
        return sum(self.layer_sizes)

    def layer_logits(self, k: int, prev: list[np.ndarray]) -> np.ndarray:
        l = np.asarray(self.logits_fn(k, prev), dtype=np.float64)
        if l.shape != (self.layer_sizes[k],):
            raise ValueError(
                f"conditional logits for layer {k} have shape {l.shape}, "
                f"expected ({self.layer_sizes[k]},)"
            )
        if not np.all(np.isfinite(l)):
            raise ValueError(f"conditional logits for layer {k} are not finite")
        return l

    def layer_jacobian(self, k: int, prev: list[np.ndarray]) -> np.ndarray:
        """d logits_k / d concat(prev); analytic if provided, else central FD."""
        n_in = sum(p.shape[0] for p in prev)
        if self.logits_jac is not None:
            jac = np.asarray(self.logits_jac(k, prev), dtype=np.float64)
            if jac.shape != (self.layer_sizes[k], n_in):
                raise ValueError(f"layer {k} jacobian shape {jac.shape} != "
                                 f"({self.layer_sizes[k]}, {n_in})")
            return jac
        h = 1e-6
        flat = np.concatenate(prev) if prev else np.zeros(0)
        sizes = [p.shape[0] for p in prev]
        jac = np.zeros((self.layer_sizes[k], n_in))

        def split(v):
            out, off = [], 0
            for s in sizes:
                out.append(v[off:off + s])
                off += s
            return out

        for j in range(n_in):
            hi = flat.copy(); hi[j] += h
            lo = flat.copy(); lo[j] -= h
            jac[:, j] = (self.layer_logits(k, split(hi)) - self.layer_logits(k, split(lo))) / (2 * h)
        return jac


DistributionSpec = BinaryLogits | CategoricalLogits | HierarchicalBernoulliSpec


@dataclass
class GradientEstimate:
    """A gradient w.r.t. logits plus the objective-evaluation cost of producing it."""

    grad_logits: np.ndarray
    n_evals: int
    components: Optional[dict[str, np.ndarray]] = field(default=None)

    def __post_init__(self):
        if self.n_evals < 0:
            raise ValueError("n_evals must be >= 0")


# --------------------------------------------------------------------------
# transforms and primitives
# --------------------------------------------------------------------------


def sigmoid(x: np.ndarray | float) -> np.ndarray | float:
    # exp overflow saturates to 0/1, which the probability clamp handles
    with np.errstate(over="ignore"):
        return 1.0 / (1.0 + np.exp(-np.asarray(x, dtype=np.float64)))


def logit(q: np.ndarray | float) -> np.ndarray | float:
    q = np.asarray(q, dtype=np.float64)
    return np.log(q) - np.log1p(-q)


def clamp_prob(q: np.ndarray) -> np.ndarray:
    return np.clip(q, PROB_EPS, 1.0 - PROB_EPS)


def probs_from_logits(spec: DistributionSpec | np.ndarray) -> np.ndarray:
    """Probabilities from logits: elementwise sigmoid (binary, clamped to keep
    logits invertible) or numerically stable row-softmax (categorical).

    Results are cached on spec instances (their logits are immutable).
    """
    if isinstance(spec, (BinaryLogits, CategoricalLogits)):
        q = getattr(spec, "_probs_cache", None)
        if q is None:
            q = clamp_prob(sigmoid(spec.l)) if isinstance(spec, BinaryLogits) \
                else _row_softmax(spec.l)
            q.flags.writeable = False
            object.__setattr__(spec, "_probs_cache", q)
        return q
    arr = np.asarray(spec, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValueError("logits must be finite")
    if arr.ndim == 1:
        return clamp_prob(sigmoid(arr))
    if arr.ndim == 2:
        return _row_softmax(arr)
    raise ValueError("logits must be a vector (binary) or matrix (categorical)")


def _row_softmax(l: np.ndarray) -> np.ndarray:
    shifted = l - l.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def sample_discrete(spec: DistributionSpec, rng: RngStream):
    """Sample a discrete configuration; returns ``(sample, noise, rng)``.

    Binary variables use the threshold convention z = Θ(ρ - 1 + q) so that
    coupled estimators can reuse the returned uniform record ρ.  Categorical
    rows use inverse-CDF on a single uniform per row.
    """
    if isinstance(spec, BinaryLogits):
        q = probs_from_logits(spec)
        rho, rng = rng.uniform(q.shape[0])
        z = (rho > 1.0 - q).astype(np.float64)
        return z, rho, rng
    if isinstance(spec, CategoricalLogits):
        q = probs_from_logits(spec)
        u, rng = rng.uniform(q.shape[0])
        cum = np.cumsum(q, axis=1)
        idx = np.minimum((u[:, None] > cum).sum(axis=1), q.shape[1] - 1)
        y = np.zeros_like(q)
        y[np.arange(q.shape[0]), idx] = 1.0
        return y, u, rng
    if isinstance(spec, HierarchicalBernoulliSpec):
        rho, rng = rng.uniform(spec.num_vars)
        z = np.empty(spec.num_vars)
        prev: list[np.ndarray] = []
        off = 0
        for k, size in enumerate(spec.layer_sizes):
            q_k = clamp_prob(sigmoid(spec.layer_logits(k, prev)))
            z_k = (rho[off:off + size] > 1.0 - q_k).astype(np.float64)
            z[off:off + size] = z_k
            prev.append(z_k)
            off += size
        return z, rho, rng
    raise TypeError(f"unsupported spec type {type(spec).__name__}")


def grad_log_prob(spec: DistributionSpec, z: np.ndarray) -> np.ndarray:
    """Score function d log q(z) / d logits at a discrete sample."""
    z = np.asarray(z, dtype=np.float64)
    if isinstance(spec, BinaryLogits):
        if z.shape != spec.l.shape:
            raise ValueError(f"sample shape {z.shape} != logits shape {spec.l.shape}")
        return z - probs_from_logits(spec)
    if isinstance(spec, CategoricalLogits):
        if z.shape != spec.l.shape:
            raise ValueError(f"sample shape {z.shape} != logits shape {spec.l.shape}")
        return z - probs_from_logits(spec)
    if isinstance(spec, HierarchicalBernoulliSpec):
        if z.shape != (spec.num_vars,):
            raise ValueError(f"sample shape {z.shape} != ({spec.num_vars},)")
        out = np.empty(spec.num_vars)
        prev: list[np.ndarray] = []
        off = 0
        for k, size in enumerate(spec.layer_sizes):
            q_k = clamp_prob(sigmoid(spec.layer_logits(k, prev)))
            out[off:off + size] = z[off:off + size] - q_k
            prev.append(z[off:off + size])
            off += size
        return out
    raise TypeError(f"unsupported spec type {type(spec).__name__}")
