"""Evaluation of the distributed forward-backward iteration operator.

The sequential resolvent sweep x(gamma, z) computes, for a scheme
(D, M, N, P, R), n resolvent operators A_i and p cocoercive operators B_j:

    x_1 = J_{(gamma/d_1) A_1}( (M z)_1 / d_1 )
    x_i = J_{(gamma/d_i) A_i}( (M z)_i / d_i
                               + sum_{j<i} (N_ij / d_i) x_j
                               - (gamma/d_i) sum_j P_ij B_j( (R x)_j ) )

where (R x)_j uses the lower-triangular row j of R (entries up to the
diagonal), so every B_j input is available when first needed and each B_j is
evaluated exactly once per sweep (cached across i). The iteration operator is
T_{theta,gamma} z = z - theta * M* x(gamma, z), whose fixed points are the
block vectors z with all x_i equal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, StructuralError
from .linalg import as_blocks


@dataclass(frozen=True, eq=False)
class SplitProblem:
    """Operator lists bound to a scheme: n resolvents, p forwards, shared modulus beta."""

    resolvents: tuple
    forwards: tuple
    beta: float
    dim: int

    def __post_init__(self):
        object.__setattr__(self, "resolvents", tuple(self.resolvents))
        object.__setattr__(self, "forwards", tuple(self.forwards))
        if self.beta < 0:
            raise ParameterError("beta must be nonnegative")
        if self.dim < 1:
            raise ParameterError("dim must be positive")


@dataclass
class SweepResult:
    """Resolvent outputs (n, d) plus the cached forward evaluations B_j((Rx)_j)."""

    x: np.ndarray
    forward_values: list
    resolvent_evals: int
    forward_evals: int


def _check_bindings(s, prob, z):
    if len(prob.resolvents) != s.n:
        raise StructuralError(f"scheme has n = {s.n} but {len(prob.resolvents)} resolvents given")
    if len(prob.forwards) != s.p:
        raise StructuralError(f"scheme has p = {s.p} but {len(prob.forwards)} forwards given")
    z = as_blocks(z, s.m)
    if z.shape[1] != prob.dim:
        raise StructuralError(f"blocks have dim {z.shape[1]}, problem dim {prob.dim}")
    return z


def sweep(s, prob, gamma, z, x1=None):
    """Run the resolvent sweep at stepsize gamma from block vector z.

    When ``x1`` is supplied it is used as the first resolvent output without
    re-evaluation (the recycling hook for the cheap relocators, which
    guarantee x_1 at the relocated point equals x_1 at the pre-relocation
    point).
    """
    if not gamma > 0:
        raise ParameterError(f"stepsize must be positive, got {gamma}")
    z = _check_bindings(s, prob, z)
    n_rows, p_rows, r_rows = s.sweep_plan
    d = s.d
    mz = s.M @ z
    x = np.empty((s.n, z.shape[1]))
    forward_values = [None] * s.p
    r_evals = 0
    f_evals = 0
    if x1 is None:
        x[0] = prob.resolvents[0].resolve(gamma / d[0], mz[0] / d[0])
        r_evals += 1
    else:
        x[0] = x1
    for i in range(1, s.n):
        arg = mz[i] / d[i]
        js, nij = n_rows[i]
        for j, c in zip(js, nij):
            arg = arg + (c / d[i]) * x[j]
        ks, pij = p_rows[i]
        for j, c in zip(ks, pij):
            if forward_values[j] is None:
                cols, vals = r_rows[j]
                forward_values[j] = prob.forwards[j].apply(vals @ x[cols])
                f_evals += 1
            arg = arg - (gamma * c / d[i]) * forward_values[j]
        x[i] = prob.resolvents[i].resolve(gamma / d[i], arg)
        r_evals += 1
    return SweepResult(x, forward_values, r_evals, f_evals)


def first_block(s, prob, gamma, z):
    """Only x_1 of the sweep (one resolvent evaluation)."""
    if not gamma > 0:
        raise ParameterError(f"stepsize must be positive, got {gamma}")
    z = _check_bindings(s, prob, z)
    return prob.resolvents[0].resolve(gamma / s.d[0], (s.M[0] @ z) / s.d[0])


def apply_T(s, prob, theta, gamma, z):
    """One application of T_{theta,gamma}: returns (z - theta * M* x, sweep)."""
    sw = sweep(s, prob, gamma, z)
    z = as_blocks(z, s.m)
    return z - theta * (s.M.T @ sw.x), sw


def residuals(s, sw):
    """(fix_res, consensus): ||M* x|| and max_{i<j} ||x_i - x_j||."""
    fix_res = float(np.linalg.norm(s.M.T @ sw.x))
    consensus = 0.0
    for i in range(s.n):
        for j in range(i + 1, s.n):
            consensus = max(consensus, float(np.linalg.norm(sw.x[i] - sw.x[j])))
    return fix_res, consensus
