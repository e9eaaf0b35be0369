"""Chain specification and model audits
"""
import itertools
import numpy as np
import attr
from latticeldp.exceptions import ValidationError, DomainError
from latticeldp.utils import as_points
import logging
logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())

NORMALIZATION_TOL = 1e-12


def _as_vector(x):
    return np.atleast_1d(np.asarray(x, dtype=float)).copy()


@attr.s(frozen=True, eq=False)
class ChainSpec:
    """Lattice Markov chain: X(k+1) = X(k) + εδ with probability g_ε(εk, X(k), δ)

    Attributes:
      epsilon: lattice scale (inverse system size)
      rate_field: RateField holding the jump set Δ and the domain Λ
      phi0: macroscopic start point in Λ
      horizon: macroscopic time T
      model_id: free-form identifier copied into outputs
    """
    epsilon = attr.ib(converter=float)
    rate_field = attr.ib()
    phi0 = attr.ib(converter=_as_vector)
    horizon = attr.ib(converter=float, default=1.0)
    model_id = attr.ib(default=None)

    def __attrs_post_init__(self):
        if not self.epsilon > 0:
            raise ValidationError(f"epsilon has to be > 0. Got {self.epsilon}")
        if not self.horizon > 0:
            raise ValidationError(f"horizon has to be > 0. Got {self.horizon}")
        if self.epsilon > self.rate_field.eps_max:
            raise ValidationError(f"epsilon={self.epsilon} exceeds the model's eps_max={self.rate_field.eps_max}")
        if len(self.phi0) != self.d:
            raise ValidationError(f"phi0 has dimension {len(self.phi0)}, the model has dimension {self.d}")
        if not self.domain.contains(self.phi0):
            raise DomainError(f"phi0={self.phi0.tolist()} is not in the domain {self.domain}")
        if self.n_steps < 1:
            raise ValidationError(f"[T/ε] = {self.n_steps} has to be >= 1 (T={self.horizon}, ε={self.epsilon})")
        if self.model_id is None:
            object.__setattr__(self, 'model_id', self.rate_field.name)

    @property
    def jump_set(self):
        return self.rate_field.jump_set

    @property
    def domain(self):
        return self.rate_field.domain

    @property
    def d(self):
        return self.rate_field.d

    @property
    def n_steps(self):
        """K = [T/ε], the last microscopic index at or before T
        """
        return int(np.floor(self.horizon / self.epsilon + 1e-9))

    @property
    def n_sim_steps(self):
        """Number of simulated steps; one more than K when T/ε is not an integer
        """
        frac = self.horizon / self.epsilon - self.n_steps
        return self.n_steps + (1 if frac > 1e-9 else 0)

    @property
    def lattice_spacing(self):
        return self.epsilon * self.jump_set.spacing.astype(float)

    def log_weights(self, s, x, mode='finite'):
        return self.rate_field.log_weights(s, x, self.epsilon, mode)

    def weights(self, s, x, mode='finite'):
        return np.exp(self.log_weights(s, x, mode))

    def with_epsilon(self, epsilon):
        return attr.evolve(self, epsilon=epsilon)

    def initial_support(self):
        """Lattice points of Λ ∩ εΓ in the closed ball of radius ε·√d·γ/2 around φ₀

        γ is the largest lattice spacing, so the ball always contains a
        lattice point and shrinks to {φ₀} when φ₀ is itself a lattice point.

        Returns:
          array (n, d)
        """
        h = self.lattice_spacing
        radius = np.sqrt(self.d) * h.max() / 2
        tol = 1e-9 * h.min()
        ranges = [np.arange(np.ceil((p - radius - tol) / hk), np.floor((p + radius + tol) / hk) + 1)
                  for p, hk in zip(self.phi0, h)]
        pts = np.array(list(itertools.product(*ranges)), dtype=float).reshape((-1, self.d)) * h
        keep = (np.linalg.norm(pts - self.phi0, axis=1) <= radius + tol) & self.domain.contains(pts)
        pts = pts[keep]
        if len(pts) == 0:
            raise ValidationError(f"No lattice point of the domain lies near phi0={self.phi0.tolist()}")
        return pts

    def describe(self):
        return dict(model_id=self.model_id, epsilon=self.epsilon, horizon=self.horizon,
                    phi0=self.phi0.tolist(), **self.rate_field.describe())


# --------------------------------------------
# normalization


@attr.s(frozen=True)
class NormalizationReport:
    max_deviation = attr.ib()
    worst_index = attr.ib()
    n_points = attr.ib()
    tol = attr.ib(default=NORMALIZATION_TOL)

    @property
    def passed(self):
        return bool(self.max_deviation <= self.tol)


def normalization_check(spec, sample_points, mode='finite', tol=NORMALIZATION_TOL):
    """Check Σ_δ g_ε(s, x, δ) = 1 on sample points

    Args:
      spec: ChainSpec
      sample_points: iterable of (s, x) pairs with s >= 0 and x in Λ
      mode: weight evaluation mode
      tol: pass threshold

    Returns:
      NormalizationReport
    """
    sample_points = list(sample_points)
    if len(sample_points) == 0:
        raise ValidationError("normalization_check needs at least one sample point")
    s = np.array([float(p[0]) for p in sample_points])
    x = np.array([as_points(p[1], spec.d) for p in sample_points]).reshape((-1, spec.d))
    inside = spec.domain.contains(x)
    for i, (si, ok) in enumerate(zip(s, inside)):
        if si < 0 or not ok:
            raise DomainError(f"Sample point {i} (s={si}, x={x[i].tolist()}) is outside R+ x Λ", index=i)
    dev = np.abs(spec.weights(s, x, mode).sum(axis=-1) - 1.0)
    worst = int(np.argmax(dev))
    return NormalizationReport(max_deviation=float(dev[worst]), worst_index=worst,
                               n_points=len(sample_points), tol=tol)


# --------------------------------------------
# hypothesis audit


@attr.s(frozen=True, eq=False)
class ProbePlan:
    """Compact set S = [lower, upper] ⊂ int Λ and grids on which constants are probed

    Attributes:
      lower, upper: corners of S
      s_grid: increasing time grid
      n_points: grid points per space axis
    """
    lower = attr.ib(converter=_as_vector)
    upper = attr.ib(converter=_as_vector)
    s_grid = attr.ib(converter=_as_vector, default=np.linspace(0, 1, 11))
    n_points = attr.ib(converter=int, default=21)


@attr.s(frozen=True)
class ProbeReport:
    theta_hat = attr.ib()
    vartheta_hat = attr.ib()
    K_hat = attr.ib()
    c_hat = attr.ib()
    theta = attr.ib()
    vartheta = attr.ib()
    K = attr.ib()
    c = attr.ib()
    violations = attr.ib(factory=list)

    @property
    def passed(self):
        return len(self.violations) == 0


def _probe_grid(plan, d):
    axes = [np.linspace(lo, hi, plan.n_points) for lo, hi in zip(plan.lower, plan.upper)]
    mesh = np.meshgrid(*axes, indexing='ij')
    return axes, np.stack(mesh, axis=-1)


def hypothesis_probe(spec, plan, slack=1.01):
    """Finite-difference estimates of θ, ϑ(S), K(S) and the positivity floor

    Estimates are compared against the rate field's declared constants; an
    estimate above `slack` times its declared bound (below for the floor) is
    recorded as a violation.

    Returns:
      ProbeReport
    """
    field = spec.rate_field
    d = spec.d
    if np.any(plan.lower > plan.upper) or plan.n_points < 2 or len(plan.s_grid) < 1:
        raise ValidationError("Probe plan needs lower <= upper, n_points >= 2 and a non-empty time grid")
    axes, grid = _probe_grid(plan, d)
    corners = np.array(list(itertools.product(*zip(plan.lower, plan.upper))))
    if not np.all(spec.domain.in_interior(corners)):
        raise ValidationError(f"S = [{plan.lower.tolist()}, {plan.upper.tolist()}] is not inside int Λ")
    if not np.all(spec.domain.eps_interior(grid.reshape((-1, d)), spec.epsilon, spec.jump_set)):
        raise ValidationError(f"S is not inside int_ε Λ for ε={spec.epsilon}")

    n_s = len(plan.s_grid)
    s = plan.s_grid.reshape((n_s,) + (1,) * d)
    shape = (n_s,) + grid.shape[:-1] + (spec.jump_set.m,)
    f0 = np.broadcast_to(field.f0(s, grid[np.newaxis], spec.epsilon), shape)
    f1 = np.broadcast_to(field.f1(s, grid[np.newaxis], spec.epsilon), shape)
    if not np.all(np.isfinite(f0)):
        raise ValidationError("-inf weight encountered inside S", code="hypothesis_violation")

    theta_hat = 0.0
    if n_s > 1:
        ds = np.diff(plan.s_grid).reshape((-1,) + (1,) * (d + 1))
        theta_hat = float(np.max(np.abs(np.diff(f0, axis=0)) / ds))
    vartheta_hat = 0.0
    for k, ax in enumerate(axes):
        dx = np.diff(ax)
        if np.all(dx == 0):
            continue
        shape_k = [1] * (d + 2)
        shape_k[k + 1] = -1
        diff = np.abs(np.diff(f0, axis=k + 1)) / dx.reshape(shape_k)
        vartheta_hat = max(vartheta_hat, float(np.max(diff)))
    K_hat = float(np.max(np.abs(f1)))
    c_hat = float(np.min(np.exp(f0 + spec.epsilon * f1)))

    declared = dict(theta=field.time_lipschitz(),
                    vartheta=field.space_lipschitz(plan.lower, plan.upper),
                    K=field.f1_bound(plan.lower, plan.upper),
                    c=field.positivity_floor(plan.lower, plan.upper))
    violations = []
    for name, est in [('theta', theta_hat), ('vartheta', vartheta_hat), ('K', K_hat)]:
        if est > declared[name] * slack + 1e-12:
            violations.append(f"{name}: estimate {est} exceeds declared {declared[name]}")
    if c_hat < declared['c'] / slack - 1e-15:
        violations.append(f"c: estimate {c_hat} is below declared floor {declared['c']}")
    for v in violations:
        logger.warning(f"hypothesis_probe: {v}")
    return ProbeReport(theta_hat=theta_hat, vartheta_hat=vartheta_hat, K_hat=K_hat, c_hat=c_hat,
                       violations=violations, **declared)
