"""Shallow additive and multiplicative scalar networks.

Two single-hidden-layer families approximate functions R^m -> R:

* additive (``MlpArch``):

      G(x) = c + sum_j alpha_j * sigma(w_j . x + b_j)

  with n ridge units, parameter count (m + 2) * n + 1.

* multiplicative (``MmlpArch``):

      F(x) = c + sum_j alpha_j * prod_i sigma(w_ij * x_i + b_ij)

  with n_b product blocks whose factors are axis-aligned (each factor sees a
  single coordinate through a scalar weight), parameter count
  (2 * m + 1) * n_b + 1.

For m = 2 the two counts match along 4 n = 5 n_b, which is how the
parameter-matched comparison pairs are built.

Flat parameter layout (used by the optimizer and by checkpoints):

    additive:       [w row-major (n, m) | b (n) | alpha (n) | c]
    multiplicative: [w row-major (n_b, m) | b row-major (n_b, m) | alpha (n_b) | c]
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._seeds import ROLE_INIT, stream

__all__ = [
    "Activation",
    "TANH",
    "GAUSSIAN_BUMP",
    "activation_by_name",
    "MlpArch",
    "MmlpArch",
    "MlpParams",
    "MmlpParams",
    "param_count",
    "matched_additive_width",
    "init_params",
    "pack_params",
    "unpack_params",
    "forward",
    "grad_params",
    "weighted_grad_sum",
    "predictor",
    "near_zero_factor_weights",
]


@dataclass(frozen=True)
class Activation:
    """Scalar activation with its exact derivative.

    df_from_f recovers the derivative from z and the already-computed value
    sigma(z), sparing a second transcendental evaluation in hot loops; it must
    agree with df bitwise.
    """

    name: str
    f: Callable[[np.ndarray], np.ndarray]
    df: Callable[[np.ndarray], np.ndarray]
    df_from_f: Callable[[np.ndarray, np.ndarray], np.ndarray]


TANH = Activation(
    "tanh",
    np.tanh,
    lambda z: 1.0 - np.tanh(z) ** 2,
    lambda z, s: 1.0 - s**2,
)
# smooth, even, rapidly decaying bump; integrable on the line unlike tanh
GAUSSIAN_BUMP = Activation(
    "gaussian",
    lambda z: np.exp(-(z * z)),
    lambda z: -2.0 * z * np.exp(-(z * z)),
    lambda z, s: -2.0 * z * s,
)

_ACTIVATIONS = {a.name: a for a in (TANH, GAUSSIAN_BUMP)}


def activation_by_name(name: str) -> Activation:
    try:
        return _ACTIVATIONS[name]
    except KeyError:
        raise ValueError(f"unknown activation {name!r}; expected one of {sorted(_ACTIVATIONS)}")


# ---------------------------------------------------------------------------
# architectures and parameter containers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MlpArch:
    """Additive architecture: n ridge units on R^m."""

    n: int
    m: int = 2

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError(f"need n >= 1 and m >= 1, got n={self.n}, m={self.m}")


@dataclass(frozen=True)
class MmlpArch:
    """Multiplicative architecture: n_b product blocks on R^m."""

    n_b: int
    m: int = 2

    def __post_init__(self):
        if self.n_b < 1 or self.m < 1:
            raise ValueError(f"need n_b >= 1 and m >= 1, got n_b={self.n_b}, m={self.m}")


@dataclass
class MlpParams:
    w: np.ndarray      # (n, m)
    b: np.ndarray      # (n,)
    alpha: np.ndarray  # (n,)
    c: float

    @property
    def arch(self) -> MlpArch:
        return MlpArch(n=self.w.shape[0], m=self.w.shape[1])


@dataclass
class MmlpParams:
    w: np.ndarray      # (n_b, m)
    b: np.ndarray      # (n_b, m)
    alpha: np.ndarray  # (n_b,)
    c: float

    @property
    def arch(self) -> MmlpArch:
        return MmlpArch(n_b=self.w.shape[0], m=self.w.shape[1])


Arch = MlpArch | MmlpArch
NetworkParams = MlpParams | MmlpParams


def param_count(arch: Arch) -> int:
    """Number of trainable scalars."""
    if isinstance(arch, MlpArch):
        return (arch.m + 2) * arch.n + 1
    if isinstance(arch, MmlpArch):
        return (2 * arch.m + 1) * arch.n_b + 1
    raise TypeError(f"not an architecture descriptor: {arch!r}")


def matched_additive_width(n_b: int, m: int = 2) -> int:
    """Additive width n with the same parameter count as n_b product blocks.

    Solves (m + 2) n = (2 m + 1) n_b; raises if no integer solution exists.
    """
    num = (2 * m + 1) * n_b
    if num % (m + 2) != 0:
        raise ValueError(
            f"no parameter-matched additive width for n_b={n_b}, m={m}: "
            f"{2 * m + 1} * n_b must be divisible by {m + 2}"
        )
    return num // (m + 2)


def init_params(arch: Arch, seed: int) -> NetworkParams:
    """Deterministic random initialization.

    Hidden weights and biases are uniform on [-1, 1]; outer coefficients are
    uniform on [-1, 1] scaled by 1/sqrt(units) so the initial output stays
    O(1) regardless of width; the constant offset starts at 0.  Draw order is
    fixed (w, then b, then alpha), so the values are a pure function of
    (arch, seed).
    """
    rng = stream(seed, ROLE_INIT)
    if isinstance(arch, MlpArch):
        w = rng.uniform(-1.0, 1.0, size=(arch.n, arch.m))
        b = rng.uniform(-1.0, 1.0, size=arch.n)
        alpha = rng.uniform(-1.0, 1.0, size=arch.n) / np.sqrt(arch.n)
        return MlpParams(w=w, b=b, alpha=alpha, c=0.0)
    if isinstance(arch, MmlpArch):
        w = rng.uniform(-1.0, 1.0, size=(arch.n_b, arch.m))
        b = rng.uniform(-1.0, 1.0, size=(arch.n_b, arch.m))
        alpha = rng.uniform(-1.0, 1.0, size=arch.n_b) / np.sqrt(arch.n_b)
        return MmlpParams(w=w, b=b, alpha=alpha, c=0.0)
    raise TypeError(f"not an architecture descriptor: {arch!r}")


def pack_params(p: NetworkParams) -> np.ndarray:
    """Flatten to the documented layout (copy)."""
    return np.concatenate([p.w.ravel(), p.b.ravel(), p.alpha.ravel(), [p.c]])


def unpack_params(arch: Arch, vec: np.ndarray) -> NetworkParams:
    vec = np.asarray(vec, dtype=float)
    expected = param_count(arch)
    if vec.shape != (expected,):
        raise ValueError(
            f"parameter vector has shape {vec.shape}, expected ({expected},) for {arch}"
        )
    if isinstance(arch, MlpArch):
        n, m = arch.n, arch.m
        w = vec[: n * m].reshape(n, m)
        b = vec[n * m : n * m + n]
        alpha = vec[n * m + n : n * m + 2 * n]
        return MlpParams(w=w, b=b, alpha=alpha, c=float(vec[-1]))
    n, m = arch.n_b, arch.m
    w = vec[: n * m].reshape(n, m)
    b = vec[n * m : 2 * n * m].reshape(n, m)
    alpha = vec[2 * n * m : 2 * n * m + n]
    return MmlpParams(w=w, b=b, alpha=alpha, c=float(vec[-1]))


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


def _as_batch(x: np.ndarray, m: int):
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    if single:
        x = x[None, :]
    if x.ndim != 2 or x.shape[1] != m:
        raise ValueError(f"points must have shape (..., {m}), got {x.shape}")
    return x, single


def _loo_products(s: np.ndarray) -> np.ndarray:
    """Leave-one-out products along the last axis.

    loo[..., i] = prod_{k != i} s[..., k], computed with prefix/suffix
    cumulative products so factors that are exactly zero stay well defined.
    """
    left = np.ones_like(s)
    right = np.ones_like(s)
    left[..., 1:] = np.cumprod(s[..., :-1], axis=-1)
    right[..., :-1] = np.cumprod(s[..., :0:-1], axis=-1)[..., ::-1]
    return left * right


def _forward_cache(p: NetworkParams, act: Activation, xb: np.ndarray):
    """Batch forward pass returning (values, cache of intermediates).

    The cache feeds _weighted_grad_cached so a loss step evaluates each
    transcendental exactly once.
    """
    if isinstance(p, MlpParams):
        z = xb @ p.w.T + p.b            # (batch, n)
        s = act.f(z)
        return s @ p.alpha + p.c, (z, s, None)
    if isinstance(p, MmlpParams):
        z = xb[:, None, :] * p.w[None, :, :] + p.b[None, :, :]  # (batch, n_b, m)
        s = act.f(z)
        prod = s[..., 0] * s[..., 1] if p.w.shape[1] == 2 else s.prod(axis=2)
        return prod @ p.alpha + p.c, (z, s, prod)
    raise TypeError(f"not a parameter container: {p!r}")


def _weighted_grad_cached(p: NetworkParams, act: Activation, xb: np.ndarray,
                          coef: np.ndarray, cache) -> np.ndarray:
    z, s, prod = cache
    if isinstance(p, MlpParams):
        t = act.df_from_f(z, s) * p.alpha[None, :]   # dF/db per sample, (batch, n)
        d_alpha = coef @ s
        d_b = coef @ t
        d_w = (t * coef[:, None]).T @ xb             # (n, m)
        d_c = coef.sum()
        return np.concatenate([d_w.ravel(), d_b, d_alpha, [d_c]])
    if p.w.shape[1] == 2:
        loo = np.stack((s[..., 1], s[..., 0]), axis=-1)
    else:
        loo = _loo_products(s)
    t = p.alpha[None, :, None] * act.df_from_f(z, s) * loo       # dF/db_ij
    d_alpha = coef @ prod
    d_b = np.einsum("k,kjm->jm", coef, t)
    d_w = np.einsum("k,kjm,km->jm", coef, t, xb)
    d_c = coef.sum()
    return np.concatenate([d_w.ravel(), d_b.ravel(), d_alpha, [d_c]])


def forward(p: NetworkParams, act: Activation, x: np.ndarray):
    """Evaluate the network at x of shape (m,) or (batch, m)."""
    xb, single = _as_batch(x, p.w.shape[1])
    out, _ = _forward_cache(p, act, xb)
    return float(out[0]) if single else out


def weighted_grad_sum(p: NetworkParams, act: Activation, x: np.ndarray, coef: np.ndarray) -> np.ndarray:
    """sum_k coef[k] * d F(x[k]) / d theta, flat in the documented layout.

    This is the single accumulation primitive behind all loss gradients: any
    loss whose derivative is a weighted combination of network gradients at a
    set of points reduces to one call.
    """
    xb, _ = _as_batch(x, p.w.shape[1])
    coef = np.asarray(coef, dtype=float)
    if coef.shape != (xb.shape[0],):
        raise ValueError(f"coef must have shape ({xb.shape[0]},), got {coef.shape}")
    _, cache = _forward_cache(p, act, xb)
    return _weighted_grad_cached(p, act, xb, coef, cache)


def grad_params(p: NetworkParams, act: Activation, x: np.ndarray) -> np.ndarray:
    """Gradient of F(x) with respect to every trainable scalar, flat layout."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError(f"grad_params takes a single point of shape (m,), got {x.shape}")
    return weighted_grad_sum(p, act, x[None, :], np.ones(1))


def predictor(p: NetworkParams, act: Activation):
    """Close over (params, activation) as a plain vectorized callable."""
    return lambda x: forward(p, act, x)


def near_zero_factor_weights(p: NetworkParams, tol: float = 1e-6) -> int:
    """Count hidden weights with |w| < tol.

    Multiplicative blocks with a near-zero factor weight degenerate toward a
    function constant in that coordinate; the library reports the count but
    never rejects such parameters.
    """
    return int(np.count_nonzero(np.abs(p.w) < tol))
