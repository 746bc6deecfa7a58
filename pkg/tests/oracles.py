"""Independent reference implementations used to certify the package.

Nothing here imports wavelasso: the oracles must stay decoupled from the
code paths they check.  Heavy convex references go through cvxpy.
"""

import numpy as np

_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


def golden_min(fn, lo, hi, iters=80):
    """Golden-section minimizer of a unimodal scalar function on [lo, hi]."""
    a, b = float(lo), float(hi)
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = fn(d)
    return (a + b) / 2.0


def prox_l1_scalar_oracle(v, t, grid_points=4001):
    """Brute-force minimizer of 0.5*(u - v)^2 + t*|u| (grid + golden refine)."""
    span = abs(v) + t + 1.0
    grid = np.linspace(-span, span, grid_points)
    objective = 0.5 * (grid - v) ** 2 + t * np.abs(grid)
    k = int(np.argmin(objective))
    lo = grid[max(k - 1, 0)]
    hi = grid[min(k + 1, grid_points - 1)]
    return golden_min(lambda u: 0.5 * (u - v) ** 2 + t * abs(u), lo, hi)


def prox_group_radial_oracle(v, t, grid_points=4001):
    """Brute-force block-shrinkage via radial search along v.

    The minimizer of 0.5*||u - v||^2 + t*||u|| lies on the ray through v;
    search the radius numerically.
    """
    v = np.asarray(v, dtype=np.float64)
    nv = np.linalg.norm(v)
    if nv == 0.0:
        return np.zeros_like(v)
    direction = v / nv

    def objective(s):
        return 0.5 * (s - nv) ** 2 + t * abs(s)

    grid = np.linspace(0.0, nv + t + 1.0, grid_points)
    k = int(np.argmin([objective(s) for s in grid]))
    lo = grid[max(k - 1, 0)]
    hi = grid[min(k + 1, grid_points - 1)]
    s_star = golden_min(objective, lo, hi)
    if objective(0.0) < objective(s_star):
        s_star = 0.0
    return s_star * direction


def cd_lasso(A, y, lam, sweeps=20000, tol=1e-13):
    """Cyclic coordinate descent for 0.5*||y - A x||^2 + lam*||x||_1."""
    A = np.asarray(A, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    m, n = A.shape
    col_sq = (A**2).sum(axis=0)
    x = np.zeros(n)
    r = y.copy()
    for _ in range(sweeps):
        max_delta = 0.0
        for i in range(n):
            if col_sq[i] == 0.0:
                continue
            old = x[i]
            rho = A[:, i] @ r + col_sq[i] * old
            new = np.sign(rho) * max(abs(rho) - lam, 0.0) / col_sq[i]
            if new != old:
                r -= A[:, i] * (new - old)
                x[i] = new
                max_delta = max(max_delta, abs(new - old))
        if max_delta < tol:
            break
    return x


def lasso_objective(A, y, lam, x):
    r = y - A @ x
    return 0.5 * float(r @ r) + lam * float(np.abs(x).sum())


def cvxpy_lasso(A, y, lam):
    import cvxpy as cp

    x = cp.Variable(A.shape[1])
    prob = cp.Problem(cp.Minimize(0.5 * cp.sum_squares(y - A @ x) + lam * cp.norm1(x)))
    prob.solve(solver=cp.CLARABEL)
    return np.asarray(x.value), float(prob.value)


def cvxpy_overlap_group_lasso(A, y, lam, groups):
    """Reference minimizer of the overlapping-group objective
    0.5*||y - A x||^2 + lam * sum_g ||x_g||_2."""
    import cvxpy as cp

    x = cp.Variable(A.shape[1])
    pen = cp.sum([cp.norm2(x[list(g)]) for g in groups])
    prob = cp.Problem(cp.Minimize(0.5 * cp.sum_squares(y - A @ x) + lam * pen))
    prob.solve(solver=cp.CLARABEL)
    return np.asarray(x.value), float(prob.value)


def cvxpy_group_lasso_disjoint(A, y, lam, groups):
    return cvxpy_overlap_group_lasso(A, y, lam, groups)


def cvxpy_latent_norm(theta, replica_groups, replica_of):
    """Reference value of min sum_g ||xt_g|| s.t. replicas of i sum to theta_i."""
    import cvxpy as cp

    theta = np.asarray(theta, dtype=np.float64)
    total = len(replica_of)
    xt = cp.Variable(total)
    constraints = []
    for i in range(theta.shape[0]):
        members = [r for r in range(total) if replica_of[r] == i]
        constraints.append(cp.sum(xt[members]) == theta[i])
    pen = cp.sum([cp.norm2(xt[list(g)]) for g in replica_groups])
    prob = cp.Problem(cp.Minimize(pen), constraints)
    prob.solve(solver=cp.CLARABEL)
    return float(prob.value)


def finite_diff_grad(fn, z, eps=1e-6):
    z = np.asarray(z, dtype=np.float64)
    g = np.zeros_like(z)
    for i in range(z.shape[0]):
        zp = z.copy()
        zm = z.copy()
        zp[i] += eps
        zm[i] -= eps
        g[i] = (fn(zp) - fn(zm)) / (2.0 * eps)
    return g


def dense_matrix_of(op):
    """Materialize a LinearOperator-like object column by column."""
    cols = []
    for k in range(op.domain_dim):
        e = np.zeros(op.domain_dim)
        e[k] = 1.0
        cols.append(op.apply(e))
    return np.column_stack(cols)
