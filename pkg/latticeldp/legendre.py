"""Convex-analysis engine for the local jump laws

For a point (s, u) the jump law defines the exponential family

    Φ(v) = L(s, u, v) = log Σ_δ exp((v, δ) + f(s, u, δ))

whose mean is ∇Φ(v) and whose covariance is the Hessian. The Lagrangian
L*(s, u, ·) is the Legendre transform of Φ; its effective domain is the
convex hull of the support of the jump law.
"""
from functools import lru_cache
from math import comb
import numpy as np
import pandas as pd
import attr
import gin
from scipy.special import xlogy
from latticeldp.exceptions import (ValidationError, LegendreConvergenceError,
                                   BudgetExceededError)
from latticeldp.functions import softmax, masked_logsumexp
from latticeldp.model.rates import check_mode
from latticeldp.utils import as_points
import logging
logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())

INTERIOR = 'interior'
RELATIVE_BOUNDARY = 'relative-boundary'
OUTSIDE = 'outside-domain'

HULL_TOL = 1e-9


@attr.s(frozen=True, eq=False)
class TiltedMeasure:
    """Tilted jump law ν^v(δ) ∝ exp((v, δ) + f(s, u, δ))

    Attributes:
      probs: probabilities (m,), one per jump vector
      v: tilt vector (d,)
      s, u: base point
      jumps: jump vectors (m, d)
    """
    probs = attr.ib()
    v = attr.ib()
    s = attr.ib()
    u = attr.ib()
    jumps = attr.ib()

    @property
    def support(self):
        return self.probs > 0

    @property
    def mean(self):
        return self.probs @ self.jumps

    @property
    def covariance(self):
        centered = self.jumps - self.mean
        return (centered * self.probs[:, np.newaxis]).T @ centered

    def log_probs(self):
        with np.errstate(divide='ignore'):
            return np.log(self.probs)


@attr.s(frozen=True, eq=False)
class LegendrePoint:
    """Value of L*(s, u, v*) with its dual maximizer and solver diagnostics

    Attributes:
      value: L* in nats (+inf outside the effective domain)
      dual_max: λ* with ∇Φ(λ*) = v*; on the relative boundary the dual of
        the problem restricted to the minimal face
      residual: ‖∇Φ(λ*) − v*‖
      boundary_flag: 'interior', 'relative-boundary' or 'outside-domain'
      iterations: Newton iterations used
      measure: TiltedMeasure at λ* (the entropy minimizer on the boundary)
      face: indices of the jump vectors spanning the minimal face
    """
    value = attr.ib()
    dual_max = attr.ib()
    residual = attr.ib()
    boundary_flag = attr.ib()
    iterations = attr.ib(default=0)
    measure = attr.ib(default=None)
    face = attr.ib(default=None)
    vstar = attr.ib(default=None)

    @property
    def is_finite(self):
        return bool(np.isfinite(self.value))


# --------------------------------------------
# exponential family of the local jump law


def jump_log_weights(spec, s, u, mode='finite'):
    """Log jump weights at a single point

    Jumps leaving Λ (x ∉ Λ^(δ,ε), or x ∉ Λ^(δ) in limit mode) are -inf, and
    all of them are when u ∉ Λ.
    """
    check_mode(mode)
    u = as_points(u, spec.d).reshape((spec.d,))
    lw = np.asarray(spec.log_weights(s, u, mode), dtype=float).reshape((spec.jump_set.m,))
    if mode == 'limit':
        allowed = spec.domain.limit_allowed_jumps(u, spec.jump_set)
    else:
        allowed = spec.domain.allowed_jumps(u, spec.epsilon, spec.jump_set)
    return np.where(allowed, lw, -np.inf)


def _phi(lw, jumps, v):
    return masked_logsumexp(v @ jumps.T + lw, axis=-1)


def _moments(lw, jumps, v):
    p = softmax(v @ jumps.T + lw, axis=-1)
    mean = p @ jumps
    second = np.einsum('...m,mi,mj->...ij', p, jumps, jumps)
    return p, mean, second - mean[..., :, np.newaxis] * mean[..., np.newaxis, :]


def _require_support(lw, s, u):
    if not np.any(np.isfinite(lw)):
        raise ValidationError(f"Empty jump support at s={s}, u={np.ravel(u).tolist()}")


def log_mgf(spec, s, u, v, mode='finite'):
    """L(s, u, v) = log Σ_δ exp((v, δ) + f(s, u, δ)) over supported δ

    Args:
      spec: ChainSpec
      s, u: time and point
      v: tilt (d,) or batch (..., d)
      mode: 'finite', 'leading' or 'limit'

    Returns:
      float or array; -inf when u ∉ Λ or the support is empty
    """
    lw = jump_log_weights(spec, s, u, mode)
    v = as_points(v, spec.d)
    out = _phi(lw, spec.jump_set.float_vectors, v)
    return float(out) if np.ndim(out) == 0 else out


def mgf_grad(spec, s, u, v, mode='finite'):
    """∇_v L: mean of δ under the tilted law
    """
    lw = jump_log_weights(spec, s, u, mode)
    _require_support(lw, s, u)
    return _moments(lw, spec.jump_set.float_vectors, as_points(v, spec.d))[1]


def mgf_hess(spec, s, u, v, mode='finite'):
    """∇²_v L: covariance of δ under the tilted law
    """
    lw = jump_log_weights(spec, s, u, mode)
    _require_support(lw, s, u)
    return _moments(lw, spec.jump_set.float_vectors, as_points(v, spec.d))[2]


def tilted_measure(spec, s, u, v, mode='finite'):
    """Tilted jump law at (s, u); v = 0 gives the jump law of the chosen mode
    """
    lw = jump_log_weights(spec, s, u, mode)
    _require_support(lw, s, u)
    v = as_points(v, spec.d).reshape((spec.d,))
    jumps = spec.jump_set.float_vectors
    probs = softmax(v @ jumps.T + lw)
    return TiltedMeasure(probs=probs, v=v, s=s, u=as_points(u, spec.d).reshape((spec.d,)), jumps=jumps)


def mgf_grad_u(spec, s, u, v, mode='finite', step=1e-6):
    """∂L/∂u at (s, u, v); central differences when the field has no closed form
    """
    u = as_points(u, spec.d).reshape((spec.d,))
    v = as_points(v, spec.d).reshape((spec.d,))
    grad_f = spec.rate_field.grad_x_log_weights(s, u, spec.epsilon, mode)
    if grad_f is not None:
        lw = jump_log_weights(spec, s, u, mode)
        p = softmax(v @ spec.jump_set.float_vectors.T + lw)
        return np.einsum('m,mi->i', p, np.where(np.isfinite(lw)[:, np.newaxis], grad_f, 0.0))
    out = np.zeros(spec.d)
    for k in range(spec.d):
        e = np.zeros(spec.d)
        e[k] = step
        out[k] = (log_mgf(spec, s, u + e, v, mode) - log_mgf(spec, s, u - e, v, mode)) / (2 * step)
    return out


# --------------------------------------------
# convex-hull position


@lru_cache(maxsize=256)
def _hull_equations(points_bytes, shape):
    from scipy.spatial import ConvexHull
    points = np.frombuffer(points_bytes, dtype=float).reshape(shape)
    return ConvexHull(points).equations


def hull_halfspaces(points):
    """(A, b) with conv(points) = {v : A v ≤ b} for a full-dimensional point set
    """
    points = np.asarray(points, dtype=float)
    d = points.shape[1]
    if d == 1:
        x = points[:, 0]
        return np.array([[1.0], [-1.0]]), np.array([x.max(), -x.min()])
    eq = _hull_equations(np.ascontiguousarray(points).tobytes(), points.shape)
    return eq[:, :d], -eq[:, d]


def _affine_rank(points):
    if len(points) <= 1:
        return 0
    return int(np.linalg.matrix_rank(points - points.mean(axis=0), tol=1e-10))


def _face_lp(points, vstar, tol):
    """Indices of points carrying positive mass in some representation of v*
    """
    from scipy.optimize import linprog
    k, d = points.shape
    # |Σ μ p − v*| ≤ tol componentwise, Σ μ = 1, μ ≥ 0
    A_ub = np.concatenate([points.T, -points.T])
    b_ub = np.concatenate([vstar + tol, -(vstar - tol)])
    A_eq = np.ones((1, k))
    # masses at the constraint tolerance are LP round-off
    min_mass = max(1e3 * tol, 1e-9)
    face = []
    for i in range(k):
        c = np.zeros(k)
        c[i] = -1.0
        res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=[1.0],
                      bounds=[(0, None)] * k, method='highs')
        if res.status == 2:
            return None
        if res.status == 0 and -res.fun > min_mass:
            face.append(i)
    return np.array(face, dtype=int)


def _hull_distance_lp(points, vstar):
    """L1 distance from v* to conv(points)
    """
    from scipy.optimize import linprog
    k, d = points.shape
    # variables: μ (k), s+ (d), s- (d)
    c = np.concatenate([np.zeros(k), np.ones(2 * d)])
    A_eq = np.zeros((d + 1, k + 2 * d))
    A_eq[:d, :k] = points.T
    A_eq[:d, k:k + d] = np.eye(d)
    A_eq[:d, k + d:] = -np.eye(d)
    A_eq[d, :k] = 1.0
    b_eq = np.concatenate([vstar, [1.0]])
    res = linprog(c, A_eq=A_eq, b_eq=b_eq, bounds=[(0, None)] * (k + 2 * d), method='highs')
    return float(res.fun)


def hull_position(points, vstar, tol=HULL_TOL):
    """Locate v* relative to conv(points)

    Args:
      points: array (k, d)
      vstar: array (d,)
      tol: distance tolerance

    Returns:
      (flag, face) where flag ∈ {'interior', 'relative-boundary', 'outside-domain'}
      and face holds the indices of the points spanning the minimal face containing v*
    """
    points = np.asarray(points, dtype=float)
    vstar = np.asarray(vstar, dtype=float).reshape(points.shape[1])
    k, d = points.shape
    everything = np.arange(k)
    if k == 1:
        if np.linalg.norm(points[0] - vstar) <= tol:
            return RELATIVE_BOUNDARY, everything
        return OUTSIDE, None
    rank = _affine_rank(points)
    if rank == d:
        if d == 1:
            x = points[:, 0]
            lo, hi, v = x.min(), x.max(), vstar[0]
            if v < lo - tol or v > hi + tol:
                return OUTSIDE, None
            if abs(v - lo) <= tol:
                return RELATIVE_BOUNDARY, np.where(x == lo)[0]
            if abs(v - hi) <= tol:
                return RELATIVE_BOUNDARY, np.where(x == hi)[0]
            return INTERIOR, everything
        eq = _hull_equations(np.ascontiguousarray(points).tobytes(), points.shape)
        signed = eq[:, :d] @ vstar + eq[:, d]
        if np.all(signed < -tol):
            return INTERIOR, everything
        if np.any(signed > tol):
            return OUTSIDE, None
    elif _hull_distance_lp(points, vstar) > tol:
        return OUTSIDE, None
    face = _face_lp(points, vstar, tol)
    if face is None or len(face) == 0:
        return OUTSIDE, None
    if len(face) == k and _affine_rank(points) == rank:
        return (INTERIOR if rank == d else RELATIVE_BOUNDARY), face
    return RELATIVE_BOUNDARY, face


def project_to_hull(points, v, shrink=1e-6):
    """Euclidean projection of v onto the shrunk hull c + (1 − shrink)(conv(points) − c)

    c is the barycenter of the points.
    """
    from scipy.optimize import minimize
    points = np.asarray(points, dtype=float)
    v = np.asarray(v, dtype=float)
    c = points.mean(axis=0)
    scale = 1.0 - shrink
    target = c + (v - c) / scale
    flag, _ = hull_position(points, target, tol=0.0)
    if flag == INTERIOR:
        return v.copy()
    d = points.shape[1]
    if d == 1:
        lo, hi = points[:, 0].min(), points[:, 0].max()
        return c + scale * (np.clip(target, lo, hi) - c)
    k = len(points)
    res = minimize(lambda mu: 0.5 * np.sum((mu @ points - target) ** 2),
                   np.full(k, 1.0 / k),
                   jac=lambda mu: points @ (mu @ points - target),
                   bounds=[(0, 1)] * k,
                   constraints=[dict(type='eq', fun=lambda mu: mu.sum() - 1.0,
                                     jac=lambda mu: np.ones_like(mu))],
                   method='SLSQP', options=dict(ftol=1e-15, maxiter=200))
    return c + scale * (res.x @ points - c)


# --------------------------------------------
# Legendre transform


def _newton_on_face(lw, jumps, vstar, tol, max_iter):
    """Maximize (v, v*) − Φ(v) over v in the span of the face directions

    Returns:
      (value, λ, residual, iterations)
    """
    k, d = jumps.shape
    if k == 1:
        return -float(lw[0]), np.zeros(d), float(np.linalg.norm(jumps[0] - vstar)), 0
    centered = jumps - jumps.mean(axis=0)
    _, sv, wt = np.linalg.svd(centered, full_matrices=False)
    rank = int(np.sum(sv > 1e-10 * max(sv[0], 1.0)))
    B = wt[:rank].T                                  # (d, r) orthonormal

    def objective(w):
        v = B @ w
        return float(_phi(lw, jumps, v) - v @ vstar)

    w = np.zeros(rank)
    h = objective(w)
    for it in range(1, max_iter + 1):
        _, mean, cov = _moments(lw, jumps, B @ w)
        g = B.T @ (mean - vstar)
        if np.linalg.norm(g) <= tol:
            v = B @ w
            return float(v @ vstar - _phi(lw, jumps, v)), v, float(np.linalg.norm(mean - vstar)), it - 1
        H = B.T @ cov @ B
        try:
            step = -np.linalg.solve(H, g)
        except np.linalg.LinAlgError:
            step = -np.linalg.lstsq(H, g, rcond=None)[0]
        slope = g @ step
        if slope >= 0:
            step, slope = -g, -(g @ g)
        t = 1.0
        while True:
            h_new = objective(w + t * step)
            if h_new <= h + 1e-4 * t * slope or t < 1e-14:
                break
            t /= 2
        w = w + t * step
        h = h_new
    _, mean, _ = _moments(lw, jumps, B @ w)
    residual = float(np.linalg.norm(mean - vstar))
    raise LegendreConvergenceError(f"Newton did not converge in {max_iter} iterations "
                                   f"(residual {residual:.3e}); the point may be close to the "
                                   "relative boundary, use entropy_rate",
                                   residual=residual, iterations=max_iter)


@gin.configurable
def newton_settings(tol=1e-10, max_iter=100):
    """Default convergence threshold ‖∇Φ(v) − v*‖ and iteration cap of the Newton solver
    """
    return tol, max_iter


def legendre_transform(spec, s, u, vstar, mode='finite', tol=None, max_iter=None):
    """L*(s, u, v*) = sup_v {(v, v*) − L(s, u, v)}

    Interior points are solved by damped Newton on ∇Φ(v) = v*. Points on the
    relative boundary of conv(supp) are solved on the minimal face, where the
    value equals the entropy program restricted to that face; vertices give
    −log ν(δ). Points outside give +inf.

    Args:
      spec: ChainSpec
      s, u: time and point
      vstar: velocity (d,)
      mode: 'finite' (default, f0 + ε f1 at spec.epsilon), 'leading' (f0) or
        'limit' (the rate-function Lagrangian); action-level callers pass
        'limit' explicitly
      tol, max_iter: Newton settings (defaults from `newton_settings`)

    Returns:
      LegendrePoint
    """
    default_tol, default_iter = newton_settings()
    tol = default_tol if tol is None else tol
    max_iter = default_iter if max_iter is None else max_iter

    d = spec.d
    vstar = as_points(vstar, d).reshape((d,))
    lw = jump_log_weights(spec, s, u, mode)
    nan = np.full(d, np.nan)
    if not np.any(np.isfinite(lw)):
        if not spec.domain.contains(as_points(u, d)):
            return LegendrePoint(value=np.inf, dual_max=nan, residual=np.nan,
                                 boundary_flag=OUTSIDE, vstar=vstar)
        _require_support(lw, s, u)
    jumps = spec.jump_set.float_vectors
    support = np.where(np.isfinite(lw))[0]
    flag, face = hull_position(jumps[support], vstar)
    if flag == OUTSIDE:
        return LegendrePoint(value=np.inf, dual_max=nan, residual=np.nan,
                             boundary_flag=OUTSIDE, vstar=vstar)
    idx = support[face]
    value, lam, residual, iterations = _newton_on_face(lw[idx], jumps[idx], vstar, tol, max_iter)
    if -1e-12 < value < 0:
        value = 0.0
    face_lw = np.full_like(lw, -np.inf)
    face_lw[idx] = lw[idx]
    measure = TiltedMeasure(probs=softmax(lam @ jumps.T + face_lw), v=lam, s=s,
                            u=as_points(u, d).reshape((d,)), jumps=jumps)
    return LegendrePoint(value=value, dual_max=lam, residual=residual, boundary_flag=flag,
                         iterations=iterations, measure=measure, face=idx, vstar=vstar)


def legendre_value(spec, s, u, vstar, mode='finite'):
    """Value of `legendre_transform`; the default mode is the finite-ε Lagrangian
    """
    return legendre_transform(spec, s, u, vstar, mode=mode).value


# --------------------------------------------
# independent oracles


def _box_grid(box, d, n_grid):
    lo, hi = box
    lo = np.broadcast_to(np.asarray(lo, dtype=float), (d,))
    hi = np.broadcast_to(np.asarray(hi, dtype=float), (d,))
    n_axis = max(int(round(n_grid ** (1.0 / d))), 2)
    axes = [np.linspace(a, b, n_axis) for a, b in zip(lo, hi)]
    return np.stack(np.meshgrid(*axes, indexing='ij'), axis=-1).reshape((-1, d)), lo, hi


def _oracle_max(spec, s, u, vstar, box, n_grid, mode, chunk=200000):
    d = spec.d
    vstar = as_points(vstar, d).reshape((d,))
    grid, lo, hi = _box_grid(box, d, n_grid)
    lw = jump_log_weights(spec, s, u, mode)
    jumps = spec.jump_set.float_vectors
    best, arg = -np.inf, None
    for start in range(0, len(grid), chunk):
        g = grid[start:start + chunk]
        vals = g @ vstar - _phi(lw, jumps, g)
        i = int(np.argmax(vals))
        if vals[i] > best:
            best, arg = float(vals[i]), g[i]
    return best, arg, lo, hi


def legendre_oracle_grid(spec, s, u, vstar, box=(-5.0, 5.0), n_grid=100000, mode='finite'):
    """Grid lower bound max_v {(v, v*) − L(s, u, v)} over a box

    Args:
      box: (lower, upper) scalars or d-vectors
      n_grid: total number of grid points (split evenly over axes)
    """
    return _oracle_max(spec, s, u, vstar, box, n_grid, mode)[0]


@attr.s(frozen=True)
class OracleSweep:
    table = attr.ib()
    unbounded = attr.ib()


def legendre_oracle_sweep(spec, s, u, vstar, half_widths=(1, 2, 4, 8, 16), n_grid=10001,
                          mode='finite', growth_tol=1e-6):
    """Grid oracle over growing boxes [-w, w]^d

    The value is flagged unbounded when it keeps growing and its maximizer
    sits on the box boundary of the largest box.
    """
    rows = []
    for w in half_widths:
        value, arg, lo, hi = _oracle_max(spec, s, u, vstar, (-w, w), n_grid, mode)
        on_edge = bool(np.any(np.isclose(arg, lo)) or np.any(np.isclose(arg, hi)))
        rows.append(dict(half_width=float(w), value=value, on_edge=on_edge))
    table = pd.DataFrame(rows)
    growing = bool(np.all(np.diff(table.value.values) > growth_tol)) if len(table) > 1 else False
    return OracleSweep(table=table, unbounded=growing and bool(table.on_edge.iloc[-1]))


def entropy_rate(spec, s, u, vstar, step=1e-3, mode='finite', constraint_tol=1e-9,
                 max_points=5000000):
    """L* as min Σ μ(δ) log(μ(δ) / e^{f(δ)}) over jump laws μ with mean v*

    The mean and normalization constraints fix d+1 coordinates of μ; the
    remaining ones are enumerated on a grid of the given step, so vertices
    (single-point feasible sets) are exact.

    Returns:
      float; +inf if v* is outside conv(supp)
    """
    d = spec.d
    vstar = as_points(vstar, d).reshape((d,))
    lw = jump_log_weights(spec, s, u, mode)
    support = np.isfinite(lw)
    if not np.any(support):
        return np.inf
    from scipy.linalg import qr
    P = spec.jump_set.float_vectors[support]
    lw = lw[support]
    k = len(P)
    A = np.concatenate([np.ones((1, k)), P.T])
    b = np.concatenate([[1.0], vstar])
    _, R, piv = qr(A, pivoting=True)
    diag = np.abs(np.diag(R))
    rank = int(np.sum(diag > 1e-10 * max(diag[0], 1.0)))
    basis, free = piv[:rank], piv[rank:]
    n = int(round(1.0 / step))
    n_free = len(free)
    count = comb(n + n_free, n_free)
    if count > max_points:
        raise BudgetExceededError(f"entropy_rate grid needs {count} points (> {max_points})",
                                  required=count)
    if n_free == 0:
        mu_free = np.zeros((1, 0))
    else:
        ticks = np.arange(n + 1)
        mesh = np.stack(np.meshgrid(*([ticks] * n_free), indexing='ij'), -1).reshape((-1, n_free))
        mu_free = mesh[mesh.sum(axis=1) <= n] * step
    A_B, A_F = A[:, basis], A[:, free]
    rhs = b[np.newaxis, :] - mu_free @ A_F.T
    mu_basis = np.linalg.lstsq(A_B, rhs.T, rcond=None)[0].T
    resid = np.linalg.norm(mu_basis @ A_B.T - rhs, axis=1)
    ok = (resid <= constraint_tol) & np.all(mu_basis >= -1e-12, axis=1)
    if not np.any(ok):
        return np.inf
    mu = np.zeros((int(ok.sum()), k))
    mu[:, basis] = np.maximum(mu_basis[ok], 0.0)
    mu[:, free] = mu_free[ok]
    objective = xlogy(mu, mu).sum(axis=1) - mu @ lw
    return float(objective.min())


# --------------------------------------------
# regularized Lagrangians


def _reg_grid(spec, s, u, r, n_time, n_space):
    d = spec.d
    u = as_points(u, d).reshape((d,))
    field = spec.rate_field
    if r == 0:
        return np.array([s]), u[np.newaxis]
    if field.time_homogeneous or n_time <= 1:
        s_grid = np.array([s])
    else:
        s_grid = np.linspace(max(s - r, 0.0), s + r, n_time)
    if field.space_homogeneous or n_space <= 1:
        u_grid = u[np.newaxis]
    else:
        ax = np.linspace(-r, r, n_space)
        offsets = np.stack(np.meshgrid(*([ax] * d), indexing='ij'), -1).reshape((-1, d))
        offsets = offsets[np.linalg.norm(offsets, axis=1) <= r * (1 + 1e-12)]
        u_grid = u + offsets
    return s_grid, u_grid


def reg_lagrangian(spec, s, u, v, r, n_time=5, n_space=11, mode='finite'):
    """L^(r)(s, u, v) = sup over |s'−s| ≤ r, |u'−u| ≤ r of L(s', u', v) on a product grid
    """
    s_grid, u_grid = _reg_grid(spec, s, u, r, n_time, n_space)
    v = as_points(v, spec.d)
    jumps = spec.jump_set.float_vectors
    best = np.full(v.shape[:-1], -np.inf)
    for sp in s_grid:
        for up in u_grid:
            lw = jump_log_weights(spec, sp, up, mode)
            if np.any(np.isfinite(lw)):
                best = np.maximum(best, _phi(lw, jumps, v))
    return float(best) if best.ndim == 0 else best


def reg_legendre(spec, s, u, vstar, r, n_time=5, n_space=11, mode='finite'):
    """L^(r)*(s, u, v*) = inf over |s'−s| ≤ r, |u'−u| ≤ r of L*(s', u', v*) on a product grid
    """
    s_grid, u_grid = _reg_grid(spec, s, u, r, n_time, n_space)
    best = np.inf
    for sp in s_grid:
        for up in u_grid:
            if not spec.domain.contains(up):
                continue
            best = min(best, legendre_transform(spec, sp, up, vstar, mode=mode).value)
    return float(best)


@attr.s(frozen=True)
class EnvelopeResult:
    radii = attr.ib()
    values = attr.ib()

    @property
    def value(self):
        """Value at the smallest radius
        """
        return float(self.values[-1])


def envelope_lagrangian(spec, s, u, vstar, r_sequence, n_time=5, n_space=11, mode='limit'):
    """Sequence L^(r_k)*(s, u, v*) for decreasing r_k approximating the envelope L̄*
    """
    r_sequence = np.asarray(r_sequence, dtype=float)
    if np.any(np.diff(r_sequence) >= 0):
        raise ValidationError(f"r_sequence has to be strictly decreasing. Got {r_sequence.tolist()}")
    values = np.array([reg_legendre(spec, s, u, vstar, r, n_time=n_time, n_space=n_space, mode=mode)
                       for r in r_sequence])
    return EnvelopeResult(radii=r_sequence, values=values)
