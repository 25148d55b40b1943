"""Relocated fixed-point iteration loops.

The general loop iterates, per stepsize sequence (gamma_k):

    x_k     = sweep(gamma_k, z_k)                       (resolvent outputs)
    w_k     = z_k - lambda_k * theta_k * M* x_k
    z_{k+1} = Q_{gamma_{k+1} <- gamma_k}(w_k)

For the cheap relocator kinds, relocation needs only x_1 at (gamma_k, w_k),
and the recycling identity x_1(gamma_{k+1}, z_{k+1}) = x_1(gamma_k, w_k)
lets the next sweep start from block 2; the loop then costs n resolvent
evaluations per iteration (n*(K+1) + 1 in total through iteration K), the
same as the non-relocated method. The general relocator needs a full second
sweep at w_k (2n per iteration).

``run_davis_yin`` is the three-operator scheme written out directly:

    y_k     = J_{gamma_k A_2}(2 x_k - z_k - gamma_k B x_k)
    w_k     = z_k + lambda_k theta_k (y_k - x_k)
    x_{k+1} = J_{gamma_k A_1}(w_k)
    z_{k+1} = (gamma_{k+1}/gamma_k) w_k + (1 - gamma_{k+1}/gamma_k) x_{k+1}

with x_0 = J_{gamma_0 A_1}(z_0). It produces iterates identical to ``run``
on the two-node chain scheme with the davis-yin relocator.

Feasibility is enforced every iteration: the margin
2 - gamma_k*mu - 2*lambda_k*theta_k must stay at or above the plan's floor
and gamma_{k+1} must stay inside (0, 2/mu); violations abort the run and
return the partial trace with an abort marker.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import engine, relocator, scheme as schememod
from .errors import ParameterError, StructuralError
from .linalg import as_blocks
from .schedule import Observables, RelaxationPlan, ScheduleSpec

CSV_HEADER = "k,gamma,theta,lambda,fix_res,consensus,objective,rel_err_x,rel_err_f,sweeps"


@dataclass
class RunConfig:
    """Bound inputs of one run: scheme, problem, relocator kind, schedules, limits."""

    scheme: object
    problem: object
    relocator: str = relocator.GENERAL
    schedule: ScheduleSpec = field(default_factory=ScheduleSpec)
    relaxation: RelaxationPlan = field(default_factory=RelaxationPlan)
    max_iters: int = 1000
    fix_res_tol: float = 1e-10
    record_every: int = 1
    record_paths: bool = False
    objective: object | None = None          # callable x -> float, for the trace
    reference: tuple | None = None           # (x_star, phi_star) for relative errors

    def __post_init__(self):
        if self.max_iters < 1:
            raise ParameterError("max_iters must be >= 1")
        if not self.fix_res_tol > 0:
            raise ParameterError("fix_res_tol must be positive")
        if self.record_every < 1:
            raise ParameterError("record_every must be >= 1")
        if self.relocator not in relocator.KINDS:
            raise ParameterError(f"unknown relocator kind {self.relocator!r}")
        if self.relocator in relocator.CHEAP_KINDS:
            relocator.require_graph_scheme(self.relocator, self.scheme)


@dataclass
class Trace:
    """Per-iteration records plus final state; rows are ordered by k."""

    k: list = field(default_factory=list)
    gamma: list = field(default_factory=list)
    theta: list = field(default_factory=list)
    lam: list = field(default_factory=list)
    fix_res: list = field(default_factory=list)
    consensus: list = field(default_factory=list)
    objective: list = field(default_factory=list)
    rel_err_x: list = field(default_factory=list)
    rel_err_f: list = field(default_factory=list)
    sweeps: list = field(default_factory=list)
    x_path: list = field(default_factory=list)
    z_path: list = field(default_factory=list)
    z_final: np.ndarray | None = None
    x_final: np.ndarray | None = None
    iterations: int = 0
    resolvent_evals: int = 0
    forward_evals: int = 0
    converged: bool = False
    aborted: str | None = None

    def to_csv(self, path):
        """Write the trace with the fixed header; floats carry 17 significant digits."""
        with open(path, "w") as fh:
            fh.write(CSV_HEADER + "\n")
            for row in zip(self.k, self.gamma, self.theta, self.lam, self.fix_res,
                           self.consensus, self.objective, self.rel_err_x,
                           self.rel_err_f, self.sweeps):
                k, *floats, sweeps = row
                fh.write("%d,%s,%d\n" % (k, ",".join("%.17g" % v for v in floats), sweeps))

    def summary(self):
        return {
            "iterations": self.iterations,
            "fix_res": self.fix_res[-1] if self.fix_res else float("nan"),
            "consensus": self.consensus[-1] if self.consensus else float("nan"),
            "objective": self.objective[-1] if self.objective else float("nan"),
            "rel_err_x": self.rel_err_x[-1] if self.rel_err_x else float("nan"),
            "rel_err_f": self.rel_err_f[-1] if self.rel_err_f else float("nan"),
            "sweeps": self.resolvent_evals,
            "converged": self.converged,
            "aborted": self.aborted,
        }


class _Recorder:
    def __init__(self, objective=None, reference=None, record_paths=False):
        self.objective = objective
        self.record_paths = record_paths
        self.trace = Trace()
        if reference is not None:
            x_star, phi_star = reference
            self.x_star = np.asarray(x_star, dtype=float)
            self.x_den = max(float(np.linalg.norm(self.x_star)), 1e-30)
            self.phi_star = float(phi_star)
            self.f_den = max(abs(self.phi_star), 1e-30)
        else:
            self.x_star = None

    def row(self, k, gamma, theta, lam, fix_res, consensus, xbar, evals, z=None):
        t = self.trace
        t.k.append(k)
        t.gamma.append(gamma)
        t.theta.append(theta)
        t.lam.append(lam)
        t.fix_res.append(fix_res)
        t.consensus.append(consensus)
        phi = float(self.objective(xbar)) if self.objective is not None else float("nan")
        t.objective.append(phi)
        if self.x_star is not None:
            t.rel_err_x.append(float(np.linalg.norm(xbar - self.x_star)) / self.x_den)
            t.rel_err_f.append(abs(phi - self.phi_star) / self.f_den)
        else:
            t.rel_err_x.append(float("nan"))
            t.rel_err_f.append(float("nan"))
        t.sweeps.append(evals)
        if self.record_paths:
            t.x_path.append(np.array(xbar))
            if z is not None:
                t.z_path.append(np.array(z))


def _infeasible(k, gamma, lam, margin, floor):
    if lam <= 0:
        return (f"no positive relaxation keeps the margin at k={k} "
                f"(gamma={gamma:.6g}, gamma*mu too close to 2)")
    return (f"feasibility margin {margin:.3e} below floor {floor:.1e} "
            f"at k={k} (gamma={gamma:.6g}, lambda={lam:.4g})")


def default_z0(s, prob, seed=None, scale=1.0):
    """Zero initial point, or a seeded standard-normal one when seed is given."""
    if seed is None:
        return np.zeros((s.m, prob.dim))
    rng = np.random.default_rng(seed)
    return scale * rng.standard_normal((s.m, prob.dim))


def run(cfg, z0=None):
    """Relocated fixed-point iteration on a coefficient scheme; returns the Trace."""
    s, prob, kind = cfg.scheme, cfg.problem, cfg.relocator
    mu_value = schememod.mu(s, prob.beta)
    sup = schememod.stepsize_sup(mu_value)
    sched = cfg.schedule.build(mu_value, prob.beta)
    plan = cfg.relaxation
    z = as_blocks(z0, s.m) if z0 is not None else default_z0(s, prob)
    if z.shape != (s.m, prob.dim):
        raise StructuralError(f"z0 must have shape ({s.m}, {prob.dim}), got {z.shape}")
    cheap = kind in relocator.CHEAP_KINDS
    rec = _Recorder(cfg.objective, cfg.reference, cfg.record_paths)
    trace = rec.trace
    gamma = sched.gamma
    if not 0 < gamma < sup:
        raise ParameterError(f"initial gamma = {gamma} outside (0, {sup})")
    evals = 0
    f_evals = 0
    x1 = None
    sw = None
    for k in range(cfg.max_iters):
        lam, theta = plan.pair(gamma, mu_value)
        margin = schememod.feasibility_margin(gamma, lam, theta, mu_value)
        if lam <= 0 or margin < plan.margin_floor - 1e-12:
            trace.aborted = _infeasible(k, gamma, lam, margin, plan.margin_floor)
            break
        sw = engine.sweep(s, prob, gamma, z, x1=x1)
        evals += sw.resolvent_evals
        f_evals += sw.forward_evals
        fix_res, consensus = engine.residuals(s, sw)
        done = fix_res <= cfg.fix_res_tol
        if done or k % cfg.record_every == 0 or k == cfg.max_iters - 1:
            rec.row(k, gamma, theta, lam, fix_res, consensus, sw.x[0], evals, z=z)
        trace.iterations = k + 1
        if done:
            trace.converged = True
            break
        w = z - (lam * theta) * (s.M.T @ sw.x)
        if cheap:
            x1w = engine.first_block(s, prob, gamma, w)
            evals += 1
            sww = None
        else:
            sww = engine.sweep(s, prob, gamma, w)
            evals += sww.resolvent_evals
            f_evals += sww.forward_evals
            x1w = sww.x[0]
        obs = Observables(
            x_next_norm=float(np.linalg.norm(x1w)),
            x_next_minus_w_norm=float(np.linalg.norm(x1w[None, :] - w)),
            L=prob.beta if prob.beta > 0 else None,
        )
        gamma_next = sched.next_gamma(obs)
        if not 0 < gamma_next < sup:
            trace.aborted = f"gamma_{k + 1} = {gamma_next:.6g} outside (0, {sup:.6g})"
            break
        z = relocator.relocate(kind, s, prob, gamma_next, gamma, w,
                               sweep=sww, x1=x1w)
        x1 = x1w if cheap else None
        gamma = gamma_next
    trace.z_final = z
    trace.x_final = sw.x[0] if sw is not None else None
    trace.resolvent_evals = evals
    trace.forward_evals = f_evals
    return trace


def run_davis_yin(a1, a2, b, schedule_spec, plan, z0, *, max_iters, fix_res_tol=1e-10,
                  record_every=1, record_paths=False, objective=None, reference=None,
                  beta=None):
    """Relocated three-operator splitting for 0 in A1 x + A2 x + B x.

    ``z0`` is a vector in R^d. The cocoercivity modulus defaults to B's own
    beta. Returns a Trace whose consensus column is ||x_k - y_k|| (the
    two-block consensus residual) and whose shadow iterate is x_k.
    """
    z = np.asarray(z0, dtype=float)
    if z.ndim != 1:
        raise StructuralError("run_davis_yin expects a flat vector z0")
    if max_iters < 1:
        raise ParameterError("max_iters must be >= 1")
    beta = float(b.beta if beta is None else beta)
    mu_value = beta
    sup = schememod.stepsize_sup(mu_value)
    sched = schedule_spec.build(mu_value, beta)
    rec = _Recorder(objective, reference, record_paths)
    trace = rec.trace
    gamma = sched.gamma
    if not 0 < gamma < sup:
        raise ParameterError(f"initial gamma = {gamma} outside (0, {sup})")
    x = a1.resolve(gamma, z)
    evals = 1
    f_evals = 0
    for k in range(max_iters):
        lam, theta = plan.pair(gamma, mu_value)
        margin = schememod.feasibility_margin(gamma, lam, theta, mu_value)
        if lam <= 0 or margin < plan.margin_floor - 1e-12:
            trace.aborted = _infeasible(k, gamma, lam, margin, plan.margin_floor)
            break
        y = a2.resolve(gamma, 2.0 * x - z - gamma * b.apply(x))
        evals += 1
        f_evals += 1
        fix_res = float(np.linalg.norm(x - y))
        done = fix_res <= fix_res_tol
        if done or k % record_every == 0 or k == max_iters - 1:
            rec.row(k, gamma, theta, lam, fix_res, fix_res, x, evals, z=z)
        trace.iterations = k + 1
        if done:
            trace.converged = True
            break
        w = z + (lam * theta) * (y - x)
        x_next = a1.resolve(gamma, w)
        evals += 1
        obs = Observables(
            x_next_norm=float(np.linalg.norm(x_next)),
            x_next_minus_w_norm=float(np.linalg.norm(x_next - w)),
            L=beta if beta > 0 else None,
        )
        gamma_next = sched.next_gamma(obs)
        if not 0 < gamma_next < sup:
            trace.aborted = f"gamma_{k + 1} = {gamma_next:.6g} outside (0, {sup:.6g})"
            break
        ratio = gamma_next / gamma
        z = ratio * w + (1.0 - ratio) * x_next
        x = x_next
        gamma = gamma_next
    trace.z_final = z
    trace.x_final = x
    trace.resolvent_evals = evals
    trace.forward_evals = f_evals
    return trace
