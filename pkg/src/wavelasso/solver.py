"""Proximal-gradient solver with Barzilai-Borwein steps for the three penalties.

Solves ``min_z f(z) + weight * penalty(z)`` where ``f`` is a least-squares
data term, optionally augmented with a quadratic master/replica coupling:

* ``lasso``:  f = 0.5*||y - A z||^2,             penalty = l1 on z;
* ``oglr``:   f = 0.5*||y - A_rep z||^2,         penalty = group l2 over the
  disjoint replicated groups (z lives in replica space);
* ``ogl``:    z = [masters | replicas],
  f = 0.5*||y - A z_m||^2 + 0.5*tau^2*sum_i sum_{j in J_i} (z_m[i]-z_r[j])^2,
  penalty = group l2 on the replica block only.

Each iteration takes a spectral (BB) step through the penalty's prox and is
accepted under a nonmonotone decrease test over a sliding window, doubling
the curvature estimate on rejection.  The engine is deterministic: no
randomness, so a given problem and config reproduce the objective trace
bitwise.
"""

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, DivergenceError
from .linop import LinearOperator, replicate_columns
from .penalty import PenaltySpec


@dataclass
class SolverConfig:
    """Iteration budget, tolerances and step-size safeguards."""

    max_iters: int = 2000
    rel_obj_tol: float = 1e-6
    alpha_min: float = 1e-8
    alpha_max: float = 1e8
    window: int = 5
    sufficient_decrease: float = 1e-2
    backtrack_factor: float = 2.0
    initial_alpha: float | None = None

    def __post_init__(self):
        if not 0 < self.alpha_min <= self.alpha_max:
            raise ValueError("need 0 < alpha_min <= alpha_max")
        if self.rel_obj_tol <= 0 or self.max_iters < 1 or self.window < 1:
            raise ValueError("tolerances and iteration counts must be positive")


@dataclass
class Problem:
    """A prepared instance: data operator, observations, penalty, coupling."""

    kind: str
    op: LinearOperator
    y: np.ndarray
    penalty: PenaltySpec
    dim: int
    repmap: object = None
    tau: float = 0.0
    n_master: int = 0

    def __post_init__(self):
        self.y = np.asarray(self.y, dtype=np.float64)
        if self.y.shape != (self.op.range_dim,):
            raise DimensionError(
                f"y has shape {self.y.shape}, operator range is {self.op.range_dim}"
            )
        if self.tau > 0 and self.repmap is None:
            raise ValueError("coupling weight tau requires a replication map")

    def collapse(self, z):
        """Solution in original coordinates: identity / replica sums / masters."""
        z = np.asarray(z, dtype=np.float64)
        if self.kind == "lasso":
            return z.copy()
        if self.kind == "oglr":
            return self.repmap.collapse(z)
        return z[: self.n_master].copy()


def lasso_problem(A, y, lam):
    """l1-penalized least squares on the operator's domain."""
    return Problem("lasso", A, y, PenaltySpec("l1", lam), A.domain_dim)


def oglr_problem(A, y, lam, repmap):
    """Group-penalized least squares on the replicated (disjoint) structure."""
    a_rep = replicate_columns(A, repmap)
    pen = PenaltySpec("group_l2", lam, repmap.replicated_groups())
    return Problem("oglr", a_rep, y, pen, repmap.total_replicas, repmap=repmap)


def ogl_problem(A, y, lam, tau, repmap):
    """Master/replica formulation: data term on masters, group penalty on replicas,
    quadratic coupling of weight tau^2 tying each replica to its master."""
    if repmap.n != A.domain_dim:
        raise DimensionError(
            f"replication map covers {repmap.n} coordinates, operator domain {A.domain_dim}"
        )
    if tau <= 0:
        raise ValueError(f"coupling weight tau must be positive, got {tau}")
    n = A.domain_dim
    groups = [n + g for g in repmap.replicated_groups()]
    pen = PenaltySpec("group_l2", lam, groups)
    return Problem(
        "ogl", A, y, pen, n + repmap.total_replicas, repmap=repmap, tau=tau, n_master=n
    )


def _residual_state(problem, z):
    """Smooth-term residuals; value and gradient both derive from these."""
    if problem.kind == "ogl":
        n = problem.n_master
        masters = z[:n]
        replicas = z[n:]
        r = problem.op.apply(masters) - problem.y
        d = replicas - masters[problem.repmap.replica_of]
        return r, d
    return problem.op.apply(z) - problem.y, None


def _value_from_state(problem, state):
    r, d = state
    val = 0.5 * float(np.dot(r, r))
    if d is not None:
        val += 0.5 * problem.tau**2 * float(np.dot(d, d))
    return val


def _grad_from_state(problem, state):
    r, d = state
    if problem.kind != "ogl":
        return problem.op.adjoint(r)
    n = problem.n_master
    tau2 = problem.tau**2
    g = np.empty(problem.dim, dtype=np.float64)
    g[:n] = problem.op.adjoint(r) - tau2 * np.bincount(
        problem.repmap.replica_of, weights=d, minlength=n
    )
    g[n:] = tau2 * d
    return g


def smooth_value_grad(problem, z):
    """Value and gradient of the smooth part at ``z``."""
    z = np.asarray(z, dtype=np.float64)
    if z.shape != (problem.dim,):
        raise DimensionError(f"z has shape {z.shape}, problem dimension is {problem.dim}")
    state = _residual_state(problem, z)
    return _value_from_state(problem, state), _grad_from_state(problem, state)


def _hessian_quadform(problem, v):
    """<v, H v> for the smooth-term Hessian (curvature along v)."""
    if problem.kind != "ogl":
        av = problem.op.apply(v)
        return float(np.dot(av, av))
    n = problem.n_master
    av = problem.op.apply(v[:n])
    dv = v[n:] - v[:n][problem.repmap.replica_of]
    return float(np.dot(av, av)) + problem.tau**2 * float(np.dot(dv, dv))


@dataclass
class SolveReport:
    """Solver output: iterate, collapsed coordinates, and diagnostics."""

    solution: np.ndarray
    collapsed: np.ndarray
    objective_trace: np.ndarray
    iterations: int
    termination: str
    backtracks: int = 0


def solve(problem, config=None, x0=None):
    """Run the proximal-gradient iteration until the objective stabilizes.

    Parameters
    ----------
    problem : Problem
        Built by one of :func:`lasso_problem`, :func:`oglr_problem`,
        :func:`ogl_problem`.
    config : SolverConfig, optional
    x0 : array, optional
        Warm start; defaults to zero.

    Returns
    -------
    SolveReport
        ``termination`` is "converged" when the relative objective change
        dropped below ``config.rel_obj_tol``, else "max_iters".  The final
        objective never exceeds the initial one.
    """
    cfg = config or SolverConfig()
    if x0 is None:
        x = np.zeros(problem.dim, dtype=np.float64)
    else:
        x = np.array(x0, dtype=np.float64, copy=True)
        if x.shape != (problem.dim,):
            raise DimensionError(f"x0 has shape {x.shape}, expected ({problem.dim},)")

    state = _residual_state(problem, x)
    f = _value_from_state(problem, state)
    g = _grad_from_state(problem, state)
    obj = f + problem.penalty.value(x)
    if not np.isfinite(obj):
        raise DivergenceError(f"non-finite objective at start: {obj}")
    trace = [obj]
    recent = deque([obj], maxlen=cfg.window)

    if cfg.initial_alpha is not None:
        alpha = cfg.initial_alpha
    else:
        gnorm2 = float(np.dot(g, g))
        alpha = _hessian_quadform(problem, g) / gnorm2 if gnorm2 > 0 else 1.0
    alpha = float(np.clip(alpha, cfg.alpha_min, cfg.alpha_max))

    termination = "max_iters"
    iterations = 0
    backtracks = 0
    for _ in range(cfg.max_iters):
        ref = max(recent)
        while True:
            xt = problem.penalty.prox(x - g / alpha, 1.0 / alpha)
            state_t = _residual_state(problem, xt)
            ft = _value_from_state(problem, state_t)
            objt = ft + problem.penalty.value(xt)
            if not np.isfinite(objt):
                raise DivergenceError(f"non-finite objective at iteration {iterations}")
            step = xt - x
            if objt <= ref - 0.5 * cfg.sufficient_decrease * alpha * float(
                np.dot(step, step)
            ):
                break
            if alpha >= cfg.alpha_max:
                break  # curvature estimate saturated; accept to keep moving
            alpha = min(alpha * cfg.backtrack_factor, cfg.alpha_max)
            backtracks += 1

        gt = _grad_from_state(problem, state_t)
        iterations += 1
        trace.append(objt)
        recent.append(objt)
        delta_obj = abs(objt - obj)
        dg = gt - g
        denom = float(np.dot(step, step))
        num = float(np.dot(step, dg))
        x, g, obj = xt, gt, objt
        if delta_obj <= cfg.rel_obj_tol * max(abs(objt), 1e-12):
            termination = "converged"
            break
        if denom > 0 and np.isfinite(num) and num > 0:
            alpha = float(np.clip(num / denom, cfg.alpha_min, cfg.alpha_max))
        else:
            alpha = 1.0

    return SolveReport(
        solution=x,
        collapsed=problem.collapse(x),
        objective_trace=np.array(trace),
        iterations=iterations,
        termination=termination,
        backtracks=backtracks,
    )


@dataclass
class KKTReport:
    """First-order optimality certificate for a candidate solution."""

    max_violation: float
    violations: list = field(default_factory=list)

    def ok(self, tol):
        return self.max_violation <= tol


def check_kkt(problem, solution, tol=1e-6):
    """Measure first-order optimality violations at ``solution``.

    For l1: off-support coordinates need ``|grad_i| <= weight`` and support
    coordinates ``grad_i = -weight * sign(x_i)``.  For disjoint group l2:
    zero groups need ``||grad_g|| <= weight``, active groups
    ``grad_g = -weight * x_g / ||x_g||``.  Master coordinates of the coupled
    formulation carry no penalty, so their gradient must vanish.  Returns
    every violation exceeding ``tol`` plus the maximum over all conditions.
    """
    x = np.asarray(solution, dtype=np.float64)
    _, g = smooth_value_grad(problem, x)
    lam = problem.penalty.weight
    violations = []
    worst = 0.0

    def note(kind, index, excess):
        nonlocal worst
        worst = max(worst, excess)
        if excess > tol:
            violations.append((kind, int(index), float(excess)))

    if problem.kind == "lasso":
        for i in range(problem.dim):
            if x[i] == 0.0:
                note("zero", i, max(abs(g[i]) - lam, 0.0))
            else:
                note("support", i, abs(g[i] + lam * np.sign(x[i])))
    else:
        if problem.kind == "ogl":
            for i in range(problem.n_master):
                note("master", i, abs(g[i]))
        for gi, idx in enumerate(problem.penalty.groups):
            xg = x[idx]
            gg = g[idx]
            norm_xg = np.linalg.norm(xg)
            if norm_xg == 0.0:
                note("zero_group", gi, max(np.linalg.norm(gg) - lam, 0.0))
            else:
                note("active_group", gi, float(np.max(np.abs(gg + lam * xg / norm_xg))))
    return KKTReport(max_violation=worst, violations=violations)
