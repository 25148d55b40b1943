"""Monotone-operator zoo: resolvent-evaluable operators and cocoercive forward operators.

Resolvents J_{gA} = (Id + g A)^{-1} are single-valued, total and firmly
nonexpansive; the concrete kinds here all have closed forms (soft-threshold,
projections, identity).

Cocoercivity follows the convention used throughout this library:
``T`` is beta-cocoercive when  <Tx - Ty, x - y> >= (1/beta) * ||Tx - Ty||^2,
so beta is simultaneously a Lipschitz constant of T.  Note this is the
reciprocal of the other common convention; every stepsize bound in this
library (gamma < 2/mu, schedules capped below 2/beta) assumes it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, StructuralError


def soft_threshold(v, t):
    """Componentwise soft-threshold; the tie |v_i| == t maps to exactly 0."""
    return np.sign(v) * np.maximum(np.abs(v) - t, 0.0)


def _check_gamma(gamma):
    if not gamma > 0:
        raise ParameterError(f"resolvent stepsize must be positive, got {gamma}")


class ResolventOp:
    """A maximally monotone operator A exposed through resolve(gamma, v) = J_{gamma A}(v)."""

    def resolve(self, gamma, v):
        raise NotImplementedError


@dataclass(frozen=True)
class L1Subdiff(ResolventOp):
    """A = weight * subdifferential of the l1-norm; resolvent = soft-threshold."""

    weight: float

    def __post_init__(self):
        if not self.weight > 0:
            raise ParameterError("l1 weight must be positive")

    def resolve(self, gamma, v):
        _check_gamma(gamma)
        return soft_threshold(np.asarray(v, dtype=float), gamma * self.weight)


@dataclass(frozen=True)
class BoxNormalCone(ResolventOp):
    """A = normal cone of the box [-bound, bound]^d; resolvent = clamp (gamma-free)."""

    bound: float

    def __post_init__(self):
        if not self.bound > 0:
            raise ParameterError("box bound must be positive")

    def resolve(self, gamma, v):
        _check_gamma(gamma)
        return np.clip(np.asarray(v, dtype=float), -self.bound, self.bound)


@dataclass(frozen=True)
class NonnegNormalCone(ResolventOp):
    """A = normal cone of the nonnegative orthant; resolvent = positive part."""

    def resolve(self, gamma, v):
        _check_gamma(gamma)
        return np.maximum(np.asarray(v, dtype=float), 0.0)


@dataclass(frozen=True)
class ZeroOp(ResolventOp):
    """A = 0; resolvent = identity."""

    def resolve(self, gamma, v):
        _check_gamma(gamma)
        return np.asarray(v, dtype=float)


def check_resolvent_identity(op, gamma, delta, v, tol=1e-12):
    """Check J_{dA}((d/g) v + (1 - d/g) J_{gA} v) == J_{gA} v to within tol."""
    _check_gamma(gamma)
    _check_gamma(delta)
    v = np.asarray(v, dtype=float)
    jg = op.resolve(gamma, v)
    r = delta / gamma
    lhs = op.resolve(delta, r * v + (1.0 - r) * jg)
    return bool(np.linalg.norm(lhs - jg) <= tol)


def lambda_max(gram, tol=1e-10, maxit=None, seed=0):
    """Largest eigenvalue of a PSD matrix by power iteration, dense fallback.

    The iteration stops when the Rayleigh quotient moves by less than
    ``tol`` (relative); if that does not happen within ``maxit`` iterations
    (default 10*d) the dense symmetric eigensolver value is returned instead.
    """
    gram = np.asarray(gram, dtype=float)
    d = gram.shape[0]
    if d == 0:
        return 0.0
    if maxit is None:
        maxit = 10 * d
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(d)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(maxit):
        w = gram @ v
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v = w / nw
        lam_new = float(v @ (gram @ v))
        if abs(lam_new - lam) <= tol * max(1.0, abs(lam_new)):
            return lam_new
        lam = lam_new
    return float(np.linalg.eigvalsh(0.5 * (gram + gram.T))[-1])


class CocoerciveOp:
    """Single-valued beta-cocoercive operator (beta also a Lipschitz constant)."""

    beta: float = 0.0

    def apply(self, x):
        raise NotImplementedError


class LeastSquaresGrad(CocoerciveOp):
    """B(x) = scale * A^T (A x - b), the gradient of (scale/2)||Ax - b||^2.

    beta = scale * lambda_max(A^T A); the default scale 1 is the gradient of
    the half quadratic, scale 2 the gradient of the unhalved one.
    """

    def __init__(self, A, b, scale=1.0):
        A = np.asarray(A, dtype=float)
        b = np.asarray(b, dtype=float)
        if A.ndim != 2 or b.ndim != 1 or A.shape[0] != b.shape[0]:
            raise StructuralError(f"incompatible shapes A {A.shape}, b {b.shape}")
        if not scale > 0:
            raise ParameterError("scale must be positive")
        self.A = A
        self.b = b
        self.scale = float(scale)
        self._gram = scale * (A.T @ A)
        self._atb = scale * (A.T @ b)
        self.beta = lambda_max(self._gram)
        self.dim = A.shape[1]

    def apply(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise StructuralError(f"expected vector of dim {self.dim}, got shape {x.shape}")
        return self._gram @ x - self._atb


@dataclass(frozen=True)
class ScaledIdentity(CocoerciveOp):
    """B(x) = c x with c > 0; beta = c."""

    c: float

    def __post_init__(self):
        if not self.c > 0:
            raise ParameterError("scaling must be positive")

    @property
    def beta(self):
        return self.c

    def apply(self, x):
        return self.c * np.asarray(x, dtype=float)


@dataclass(frozen=True)
class ZeroForward(CocoerciveOp):
    """B = 0; beta = 0 sentinel (the convention 1/0 = +inf applies downstream)."""

    @property
    def beta(self):
        return 0.0

    def apply(self, x):
        return np.zeros_like(np.asarray(x, dtype=float))
