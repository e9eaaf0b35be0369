"""Action functional of piecewise-linear paths and its constrained minimization

The action of a path φ on the grid 0 = t_0 < ... < t_n = T is the
left-endpoint sum

    A(φ) = Σ_i Δt_i L*(t_{i-1}, φ(t_{i-1}), (φ(t_i) − φ(t_{i-1})) / Δt_i)
"""
import numpy as np
import attr
import gin
from latticeldp.exceptions import (ValidationError, DomainError,
                                   LegendreConvergenceError)
from latticeldp.legendre import (legendre_transform, hull_position, hull_halfspaces,
                                 mgf_grad_u, jump_log_weights, INTERIOR, OUTSIDE)
from latticeldp.paths import Path
import logging
logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())

SCHEME = 'left-riemann'


# --------------------------------------------
# admissibility


@attr.s(frozen=True)
class Admissibility:
    """Membership of a path in the admissible classes

    Attributes:
      E: every chord velocity lies in conv Δ
      E_ri: every chord velocity lies in ri(conv Δ)
      D_bar: knots in Λ and segment velocities in D_φ(t) = dom L̄*(t, φ(t), ·)
      D_int: knots in int Λ and segment velocities in conv Δ
    """
    E = attr.ib()
    E_ri = attr.ib()
    D_bar = attr.ib()
    D_int = attr.ib()

    @property
    def classification(self):
        """'E_ri', 'E' or 'inadmissible'
        """
        if self.E_ri:
            return 'E_ri'
        if self.E:
            return 'E'
        return 'inadmissible'

    @property
    def classes(self):
        return [name for name in ['D_bar', 'D_int', 'E', 'E_ri'] if getattr(self, name)]


def _velocity_flags(points, velocities, tol):
    flags = [hull_position(points, v, tol=tol)[0] for v in velocities]
    return (all(f != OUTSIDE for f in flags),
            all(f == INTERIOR for f in flags))


def admissibility(path, spec, tol=1e-9):
    """Classify a piecewise-linear path

    For piecewise-linear paths every chord velocity is a convex combination
    of segment velocities, so the chord classes follow from the segments.
    The velocity domain D_u is the hull of the jumps supported by the limit
    law at the segment midpoint.

    Returns:
      Admissibility
    """
    if path.d != spec.d:
        raise ValidationError(f"Path dimension {path.d} != model dimension {spec.d}")
    jumps = spec.jump_set.float_vectors
    velocities = path.velocities
    in_E, in_E_ri = _velocity_flags(jumps, velocities, tol)

    knots_in = bool(np.all(spec.domain.contains(path.knots, tol=tol)))
    knots_int = bool(np.all(spec.domain.in_interior(path.knots, tol=tol)))

    in_D_bar = knots_in and in_E
    if in_D_bar:
        mids = (path.knots[:-1] + path.knots[1:]) / 2
        t_mid = (path.times[:-1] + path.times[1:]) / 2
        for s, u, v in zip(t_mid, mids, velocities):
            lw = jump_log_weights(spec, s, u, mode='limit')
            support = np.isfinite(lw)
            if not np.any(support) or hull_position(jumps[support], v, tol=tol)[0] == OUTSIDE:
                in_D_bar = False
                break
    return Admissibility(E=in_E, E_ri=in_E_ri, D_bar=in_D_bar, D_int=knots_int and in_E)


# --------------------------------------------
# action


@attr.s(frozen=True, eq=False)
class ActionValue:
    """Value of the action functional

    Attributes:
      value: action in nats (+inf if any segment is infinite)
      scheme: quadrature scheme id
      contributions: per-segment terms Δt_i L*_i
      error_bound: (θ + ϑ(S) diam Δ) Σ Δt_i² / 2 over the bounding box S of the knots
      n_refinements: number of bisection rounds applied
    """
    value = attr.ib()
    scheme = attr.ib(default=SCHEME)
    contributions = attr.ib(default=None)
    error_bound = attr.ib(default=np.nan)
    n_refinements = attr.ib(default=0)

    @property
    def is_finite(self):
        return bool(np.isfinite(self.value))


def _error_bound(path, spec):
    field = spec.rate_field
    lower, upper = path.knots.min(axis=0), path.knots.max(axis=0)
    theta = field.time_lipschitz()
    vartheta = field.space_lipschitz(lower, upper)
    coef = theta + vartheta * spec.jump_set.diameter
    if coef == 0:
        return 0.0
    return float(coef * np.sum(path.dt ** 2) / 2)


def _segment_points(path, spec, mode):
    """Legendre points of every segment, in segment order
    """
    out = []
    for i, (s, u, v) in enumerate(zip(path.times[:-1], path.knots[:-1], path.velocities)):
        try:
            out.append(legendre_transform(spec, s, u, v, mode=mode))
        except LegendreConvergenceError as e:
            raise LegendreConvergenceError(f"segment {i}: {e}", residual=e.residual,
                                           iterations=e.iterations) from e
    return out


def _riemann(path, spec, mode):
    if not admissibility(path, spec).E:
        return np.inf, np.full(path.n_segments, np.inf)
    points = _segment_points(path, spec, mode)
    contributions = path.dt * np.array([p.value for p in points])
    return float(np.sum(contributions)), contributions


def action(path, spec, mode='limit', refine_tol=None, max_refine=8):
    """Action of a piecewise-linear path

    Args:
      path: Path
      spec: ChainSpec
      mode: Lagrangian evaluation mode ('limit' is the rate function)
      refine_tol: if given, bisect all segments until successive values
        differ by less than refine_tol (at most `max_refine` rounds)

    Returns:
      ActionValue
    """
    if path.d != spec.d:
        raise ValidationError(f"Path dimension {path.d} != model dimension {spec.d}")
    value, contributions = _riemann(path, spec, mode)
    n_ref = 0
    if refine_tol is not None and np.isfinite(value):
        for n_ref in range(1, max_refine + 1):
            path = path.refine(2)
            new_value, contributions = _riemann(path, spec, mode)
            done = abs(new_value - value) < refine_tol
            value = new_value
            if done:
                break
        else:
            logger.warning(f"action: no quadrature convergence to {refine_tol} after {max_refine} bisections")
    return ActionValue(value=value, contributions=contributions,
                       error_bound=_error_bound(path, spec), n_refinements=n_ref)


def _knot_gradient(path, spec, mode, points=None):
    """Derivative of the action with respect to every knot, (n + 1, d)

    With v_i the velocity of segment i (knots i−1 to i):
        ∂A/∂φ_j = λ*_j − λ*_{j+1} + Δt_{j+1} ∂_u L*(t_j, φ_j, v_{j+1})
    and ∂_u L* = −∂_u L(·, λ*).
    """
    if points is None:
        points = _segment_points(path, spec, mode)
    n, d = path.n_segments, path.d
    lam = np.zeros((n, d))
    du = np.zeros((n, d))
    for i, (p, s, u) in enumerate(zip(points, path.times[:-1], path.knots[:-1])):
        if p.boundary_flag != INTERIOR:
            raise ValidationError(f"Segment {i} velocity {p.vstar.tolist()} is not in the relative interior "
                                  "of the velocity polytope; restrict to ri(conv Δ) paths",
                                  code="inadmissible")
        lam[i] = p.dual_max
        du[i] = -mgf_grad_u(spec, s, u, p.dual_max, mode=mode)
    grad = np.zeros((n + 1, d))
    grad[1:] += lam
    grad[:-1] -= lam
    grad[:-1] += path.dt[:, np.newaxis] * du
    return grad


def action_gradient(path, spec, mode='limit'):
    """Gradient of the action with respect to the interior knots, (n − 1, d)
    """
    return _knot_gradient(path, spec, mode)[1:-1]


# --------------------------------------------
# minimization


@gin.configurable
@attr.s(frozen=True)
class DescentOptions:
    """Settings of the projected gradient descent on path knots

    Attributes:
      tol: stop when the projected-gradient norm is below tol
      max_iter: iteration cap
      step0: initial step in units of the smallest Δt
      armijo: sufficient-decrease constant
      backtrack: step shrink factor
      min_step: smallest step tried before giving up
      shrink: velocities are kept in (1 − shrink)-shrunk conv Δ
      domain_margin: knots are kept at least this far from Λᶜ
    """
    tol = attr.ib(default=1e-6)
    max_iter = attr.ib(default=500)
    step0 = attr.ib(default=1.0)
    armijo = attr.ib(default=1e-4)
    backtrack = attr.ib(default=0.5)
    min_step = attr.ib(default=1e-14)
    shrink = attr.ib(default=1e-6)
    domain_margin = attr.ib(default=1e-6)


@attr.s(frozen=True, eq=False)
class MinimizationResult:
    path = attr.ib()
    action = attr.ib()
    converged = attr.ib()
    grad_norm = attr.ib()
    n_iter = attr.ib()

    @property
    def value(self):
        return self.action.value


def _shrunk_points(spec, shrink):
    jumps = spec.jump_set.float_vectors
    c = jumps.mean(axis=0)
    return c + (1 - shrink) * (jumps - c)


def _velocities_feasible(points, velocities):
    return all(hull_position(points, v, tol=0.0)[0] == INTERIOR for v in velocities)


def _descent(spec, path, free, project, options, mode):
    """Projected gradient descent on the free knots

    Args:
      path: feasible start path
      free: bool mask (n + 1,) of knots that move
      project: maps knots (n + 1, d) onto the feasible knot set
    """
    points = _shrunk_points(spec, options.shrink)
    x = path.knots.copy()
    value, _ = _riemann(path, spec, mode)
    t0 = options.step0 * float(path.dt.min())
    t = t0
    grad_norm = np.inf
    for it in range(1, options.max_iter + 1):
        g = _knot_gradient(path.with_knots(x), spec, mode)
        g[~free] = 0.0
        tau = 1e-8
        pg = (x - project(x - tau * g)) / tau
        pg[~free] = 0.0
        grad_norm = float(np.linalg.norm(pg))
        if grad_norm <= options.tol:
            return x, value, True, grad_norm, it - 1
        t = min(2 * t, 1e6 * t0)
        while t >= options.min_step:
            cand = project(x - t * g)
            cand[~free] = x[~free]
            cand_path = path.with_knots(cand)
            if _velocities_feasible(points, cand_path.velocities):
                cand_value, _ = _riemann(cand_path, spec, mode)
                if cand_value <= value - options.armijo * float(np.sum(g * (x - cand))):
                    break
            t *= options.backtrack
        else:
            logger.info(f"descent: line search stalled at iteration {it} (grad norm {grad_norm:.3e})")
            return x, value, grad_norm <= 10 * options.tol, grad_norm, it
        x, value = cand, cand_value
    logger.warning(f"descent: not converged after {options.max_iter} iterations (grad norm {grad_norm:.3e})")
    return x, value, False, grad_norm, options.max_iter


def minimize_action(spec, start, end, n_segments, horizon=None, options=None, mode='limit'):
    """Minimize the action over piecewise-linear paths with fixed endpoints

    The search starts at the straight chord and runs projected gradient
    descent over the interior knots; segment velocities stay in the shrunk
    velocity polytope and knots stay in int Λ.

    Args:
      spec: ChainSpec
      start, end: endpoints in Λ
      n_segments: number of uniform segments
      horizon: final time (default: spec.horizon)
      options: DescentOptions

    Returns:
      MinimizationResult
    """
    options = options or DescentOptions()
    horizon = spec.horizon if horizon is None else float(horizon)
    if n_segments < 1:
        raise ValidationError(f"n_segments has to be >= 1. Got {n_segments}")
    start = np.atleast_1d(np.asarray(start, dtype=float))
    end = np.atleast_1d(np.asarray(end, dtype=float))
    for name, p in [('start', start), ('end', end)]:
        if len(p) != spec.d:
            raise ValidationError(f"{name} has dimension {len(p)}, the model has dimension {spec.d}")
        if not spec.domain.contains(p):
            raise DomainError(f"{name}={p.tolist()} is not in the domain")
    chord = Path.straight_line(start, end, horizon, n_segments)
    flag, _ = hull_position(spec.jump_set.float_vectors, (end - start) / horizon)
    if flag == OUTSIDE:
        raise ValidationError(f"Chord velocity {((end - start) / horizon).tolist()} is outside the velocity "
                              "polytope; no admissible path joins the endpoints", code="inadmissible")
    chord_action = action(chord, spec, mode=mode)
    points = _shrunk_points(spec, options.shrink)
    if n_segments == 1 or not _velocities_feasible(points, chord.velocities):
        # a chord on the boundary of the polytope forces every velocity onto that face
        return MinimizationResult(path=chord, action=chord_action, converged=True,
                                  grad_norm=0.0, n_iter=0)

    def project(knots):
        return spec.domain.project_interior(knots, margin=options.domain_margin)

    init = chord.with_knots(np.concatenate([start[np.newaxis], project(chord.knots[1:-1]), end[np.newaxis]]))
    if not _velocities_feasible(points, init.velocities):
        init = chord
    free = np.ones(n_segments + 1, dtype=bool)
    free[[0, -1]] = False
    knots, value, converged, grad_norm, n_iter = _descent(spec, init, free, project, options, mode)
    result = init.with_knots(knots)
    final = action(result, spec, mode=mode)
    if chord_action.value <= final.value:
        result, final = chord, chord_action
    return MinimizationResult(path=result, action=final, converged=converged,
                              grad_norm=grad_norm, n_iter=n_iter)


@attr.s(frozen=True, eq=False)
class BallInfimum:
    """Infimum of the action over paths in a sup-norm ball around `center`

    Attributes:
      value: infimum estimate (+inf if no admissible path fits the ball)
      path: argmin Path (None if infeasible)
      active: True if the ball constraint binds at some knot
      radius: radius used (ρ, or ρ(1 − shrink) for the open ball)
      converged, grad_norm, n_iter: descent diagnostics
    """
    value = attr.ib()
    path = attr.ib()
    active = attr.ib()
    radius = attr.ib()
    converged = attr.ib(default=True)
    grad_norm = attr.ib(default=np.nan)
    n_iter = attr.ib(default=0)


def _ball_projector(spec, center_knots, radius, margin):
    def project(knots):
        diff = knots - center_knots
        norm = np.linalg.norm(diff, axis=-1, keepdims=True)
        scale = np.where(norm > radius, radius / np.maximum(norm, 1e-300), 1.0)
        return spec.domain.project_interior(center_knots + diff * scale, margin=margin)
    return project


def _ball_halfspaces(d, n_facets=32):
    """Unit normals N and offset h with {x : N x ≤ h} inside the unit ball

    Exact for d = 1, an inscribed polygon for d = 2 and the inscribed cube above.
    """
    if d == 1:
        return np.array([[1.0], [-1.0]]), 1.0
    if d == 2:
        angles = np.pi * (2 * np.arange(n_facets) + 1) / n_facets
        return np.stack([np.cos(angles), np.sin(angles)], axis=-1), float(np.cos(np.pi / n_facets))
    eye = np.eye(d)
    return np.concatenate([eye, -eye]), 1.0 / np.sqrt(d)


def _knot_constraints(spec, center, points, margin):
    """Linear constraints G z ≤ g on z = (ψ_1, ..., ψ_n, t) with ψ_0 = φ₀

    At slack t ≥ 0 every segment velocity lies in conv(points) and every
    knot at least `margin` inside Λ.
    """
    d = spec.d
    n = len(center.times) - 1
    dt = np.diff(center.times)
    A_v, b_v = hull_halfspaces(points)
    A_dom, b_dom = spec.domain.A, spec.domain.b
    dom_norms = np.linalg.norm(A_dom, axis=1)
    rows, rhs = [], []
    for k in range(1, n + 1):
        r = np.zeros((len(A_v), n * d + 1))
        r[:, (k - 1) * d:k * d] = A_v
        const = dt[k - 1] * b_v
        if k > 1:
            r[:, (k - 2) * d:(k - 1) * d] = -A_v
        else:
            const = const + A_v @ spec.phi0
        r[:, -1] = dt[k - 1]
        rows.append(r)
        rhs.append(const)
        if len(A_dom):
            r = np.zeros((len(A_dom), n * d + 1))
            r[:, (k - 1) * d:k * d] = A_dom
            r[:, -1] = dom_norms
            rows.append(r)
            rhs.append(b_dom - margin * dom_norms)
    return np.concatenate(rows), np.concatenate(rhs)


def _ball_constraints(center, radius, normals, offset):
    """Rows N(ψ_k − c_k) + t ≤ h r for every knot k ≥ 1
    """
    d = center.d
    n = len(center.times) - 1
    rows, rhs = [], []
    for k in range(1, n + 1):
        r = np.zeros((len(normals), n * d + 1))
        r[:, (k - 1) * d:k * d] = normals
        r[:, -1] = 1.0
        rows.append(r)
        rhs.append(offset * radius + normals @ center.knots[k])
    return np.concatenate(rows), np.concatenate(rhs)


def _max_slack_lp(G, g, radius):
    from scipy.optimize import linprog
    n_var = G.shape[1]
    c = np.zeros(n_var)
    c[-1] = -1.0
    res = linprog(c, A_ub=G, b_ub=g, bounds=[(None, None)] * (n_var - 1) + [(None, radius)],
                  method='highs')
    if res.status != 0:
        return -np.inf, None
    return float(res.x[-1]), res.x


def _max_slack_ball(G, g, center, radius, z0):
    """Largest slack with the exact Euclidean balls, started at z0
    """
    from scipy.optimize import minimize
    n = len(center.times) - 1
    targets = center.knots[1:]

    def ball(z):
        psi = z[:-1].reshape((n, center.d))
        return radius - np.linalg.norm(psi - targets, axis=1) - z[-1]

    objective_jac = np.zeros(len(z0))
    objective_jac[-1] = -1.0
    res = minimize(lambda z: -z[-1], z0, jac=lambda z: objective_jac,
                   constraints=[dict(type='ineq', fun=lambda z: g - G @ z, jac=lambda z: -G),
                                dict(type='ineq', fun=ball)],
                   bounds=[(None, None)] * (len(z0) - 1) + [(None, radius)],
                   method='SLSQP', options=dict(ftol=1e-12, maxiter=500))
    z = res.x.copy()
    z[-1] = 0.0
    if np.min(g - G @ z) >= -1e-12 and np.min(ball(z)) >= -1e-12 * max(radius, 1.0):
        return 0.0, z
    return -np.inf, None


def _feasible_start(spec, center, radius, options):
    """Path on the center's grid inside the ball with velocities in the shrunk hull

    The largest common slack of the knot constraints is found by a linear
    program over a polyhedral ball. For d > 1 that polyhedron is an inner
    approximation; when it is empty but the circumscribed cube is not, the
    exact ball decides.

    Returns:
      Path, or None when no such path exists
    """
    d = spec.d
    n = len(center.times) - 1
    G, g = _knot_constraints(spec, center, _shrunk_points(spec, 2 * options.shrink), options.domain_margin)
    B, b = _ball_constraints(center, radius, *_ball_halfspaces(d))
    t, z = _max_slack_lp(np.concatenate([G, B]), np.concatenate([g, b]), radius)
    if t < 0 and d > 1:
        eye = np.eye(d)
        B_out, b_out = _ball_constraints(center, radius, np.concatenate([eye, -eye]), 1.0)
        t_out, z_out = _max_slack_lp(np.concatenate([G, B_out]), np.concatenate([g, b_out]), radius)
        if t_out >= 0:
            t, z = _max_slack_ball(G, g, center, radius, z_out)
    if t < 0:
        return None
    knots = np.concatenate([spec.phi0[np.newaxis], z[:-1].reshape((n, d))])
    # clip LP round-off back onto the ball
    diff = knots - center.knots
    norm = np.linalg.norm(diff, axis=-1, keepdims=True)
    knots = center.knots + diff * np.where(norm > radius, radius / np.maximum(norm, 1e-300), 1.0)
    path = center.with_knots(knots)
    if not _velocities_feasible(_shrunk_points(spec, options.shrink), path.velocities):
        return None
    return path


def ball_infimum(spec, center, rho, options=None, mode='limit', open_ball=False):
    """Infimum of the action over paths ψ with ψ(0) = φ₀ and sup_t ‖ψ(t) − center(t)‖ ≤ ρ

    Paths live on the center's grid. For two piecewise-linear functions on
    the same grid the distance is largest at a knot, so the ball constraint
    is exact as a per-knot Euclidean-ball constraint. The end point is free.

    Args:
      spec: ChainSpec (start φ₀ taken from it)
      center: Path
      rho: ball radius (> 0)
      options: DescentOptions
      open_ball: use the open ball, approximated by radius ρ(1 − shrink)

    Returns:
      BallInfimum
    """
    options = options or DescentOptions()
    if not rho > 0:
        raise ValidationError(f"rho has to be > 0. Got {rho}")
    if center.d != spec.d:
        raise ValidationError(f"Center dimension {center.d} != model dimension {spec.d}")
    radius = rho * (1 - options.shrink) if open_ball else float(rho)
    if np.linalg.norm(spec.phi0 - center.knots[0]) > radius:
        return BallInfimum(value=np.inf, path=None, active=True, radius=radius)
    init = _feasible_start(spec, center, radius, options)
    if init is None:
        logger.info(f"ball_infimum: no admissible path found inside the ball of radius {radius}")
        return BallInfimum(value=np.inf, path=None, active=True, radius=radius)
    project = _ball_projector(spec, center.knots, radius, options.domain_margin)
    free = np.ones(len(center.times), dtype=bool)
    free[0] = False
    knots, value, converged, grad_norm, n_iter = _descent(spec, init, free, project, options, mode)
    dist = np.linalg.norm(knots - center.knots, axis=-1)
    return BallInfimum(value=value, path=center.with_knots(knots),
                       active=bool(np.any(dist >= radius * (1 - 1e-6))), radius=radius,
                       converged=converged, grad_norm=grad_norm, n_iter=n_iter)


# --------------------------------------------
# zero-cost flow


def mean_flow_path(spec, start=None, horizon=None, step=1e-4, mode='limit', record_every=1):
    """Forward-Euler solution of φ̇ = ∇Φ(0)(t, φ), the mean jump of the local law

    Args:
      start: start point (default φ₀)
      horizon: final time (default spec.horizon)
      step: Euler step
      record_every: keep every k-th Euler point as a knot (the final point is always kept)

    Returns:
      Path
    """
    start = spec.phi0 if start is None else np.atleast_1d(np.asarray(start, dtype=float))
    horizon = spec.horizon if horizon is None else float(horizon)
    if not step > 0:
        raise ValidationError(f"step has to be > 0. Got {step}")
    n = int(np.ceil(horizon / step - 1e-9))
    times = np.minimum(np.arange(n + 1) * step, horizon)
    jumps = spec.jump_set.float_vectors
    knots = np.zeros((n + 1, spec.d))
    knots[0] = start
    for k in range(n):
        w = np.exp(jump_log_weights(spec, times[k], knots[k], mode))
        knots[k + 1] = knots[k] + (times[k + 1] - times[k]) * (w @ jumps)
    keep = np.unique(np.append(np.arange(0, n + 1, record_every), n))
    return Path(times[keep], knots[keep])
