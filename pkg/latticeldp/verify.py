"""Empirical large-deviation checks

Reporting tools: the ε-sweep compares −ε log p̂ with the ball infimum of the
action, the convergence tables measure L_ε → L and L*_ε → L*, and the
conjugacy check compares the two regularizations. Nothing here asserts the
limit theorem itself.
"""
import numpy as np
import pandas as pd
import attr
from joblib import Parallel, delayed
from tqdm import tqdm
from latticeldp.exceptions import ValidationError, NumericalError, DomainError
from latticeldp.action import ball_infimum
from latticeldp.legendre import (log_mgf, legendre_transform, reg_lagrangian, reg_legendre,
                                 hull_position, INTERIOR)
from latticeldp.simulate import (tube_probability_mc, tube_probability_tilted, make_tilt_schedule,
                                 covering_count)
from latticeldp.stats import ols_slope, is_nonincreasing
from latticeldp.utils import as_points
import logging
logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())


def _family(spec_or_family):
    if callable(spec_or_family):
        return spec_or_family
    return spec_or_family.with_epsilon


def _check_decreasing(eps_list):
    eps_list = np.asarray(eps_list, dtype=float)
    if len(eps_list) == 0 or np.any(eps_list <= 0) or np.any(np.diff(eps_list) >= 0):
        raise ValidationError(f"The ε list has to be positive and strictly decreasing. Got {eps_list.tolist()}")
    return eps_list


@attr.s(frozen=True, eq=False)
class SweepReport:
    """One row per ε, sorted by decreasing ε

    Attributes:
      table: pd.DataFrame with columns epsilon, estimator, p_hat, stderr,
        ci_low, ci_high, n_samples, ess, rate (−ε log p̂), I_ball, I_ball_open,
        gap, zero_p, gap_defined, consistent and, when corrected, covering_entropy
        and rate_corrected
      model_id: model identifier
      tube: center description and radius
    """
    table = attr.ib()
    model_id = attr.ib()
    tube = attr.ib()

    def plot_data(self):
        """(ε, −ε log p̂, I_ball) columns for external plotting
        """
        return self.table[['epsilon', 'rate', 'I_ball']]

    def gap_trend(self, n_last=3):
        """True if |gap| is nonincreasing over the last `n_last` rows with a defined gap
        """
        gaps = self.table.loc[self.table.gap_defined, 'gap'].abs().values
        return is_nonincreasing(gaps[-n_last:])


def _sweep_row(spec, center, rho, n_samples, seed, threads, corrected, estimator, options):
    closed = ball_infimum(spec, center, rho, options=options, mode='limit')
    opened = ball_infimum(spec, center, rho, options=options, mode='limit', open_ball=True)
    schedule = None
    if estimator != 'direct' and closed.path is not None:
        try:
            schedule = make_tilt_schedule(spec, closed.path)
        except (ValidationError, NumericalError) as e:
            if estimator == 'tilted':
                raise
            logger.info(f"ε={spec.epsilon}: no tilt schedule ({e}); using direct Monte Carlo")
    if schedule is None:
        est = tube_probability_mc(spec, center, rho, n_samples, seed, threads=threads)
    else:
        est = tube_probability_tilted(spec, center, rho, schedule, n_samples, seed, threads=threads)
    zero_p = est.p_hat <= 0
    rate = np.inf if zero_p else float(-spec.epsilon * np.log(est.p_hat))
    gap_defined = bool(np.isfinite(rate) and np.isfinite(closed.value))
    gap = rate - closed.value if gap_defined else np.nan
    row = dict(epsilon=spec.epsilon, estimator=est.estimator, p_hat=est.p_hat, stderr=est.stderr,
               ci_low=est.ci_low, ci_high=est.ci_high, n_samples=est.n_samples, ess=est.ess,
               rate=rate, I_ball=closed.value, I_ball_open=opened.value, gap=gap,
               zero_p=bool(zero_p), gap_defined=gap_defined,
               consistent=bool(opened.value >= closed.value - 1e-6 or not np.isfinite(closed.value)))
    if corrected:
        eta = rho / 4
        cover = covering_count(rho, eta, center.n_segments, spec.d)
        row['covering_entropy'] = spec.epsilon * np.log(cover.bound)
        row['rate_corrected'] = rate + row['covering_entropy']
    logger.info(f"ε={spec.epsilon}: p̂={est.p_hat} ({est.estimator}), rate={rate}, I_ball={closed.value}")
    return row


def ldp_sweep(spec_family, eps_list, center, rho, n_samples, seed=0, threads=1,
              corrected=False, estimator='auto', options=None, verbose=False):
    """Compare −ε log p̂ of the tube around `center` with its ball infimum

    For every ε the ball infimum is computed in limit mode for the closed
    ball (D̄ paths) and the open ball (D° paths). The tube probability is
    estimated by importance sampling around the closed-ball argmin and falls
    back to direct Monte Carlo when no tilt schedule can be built.

    Args:
      spec_family: ChainSpec (varied through `with_epsilon`) or a callable ε -> ChainSpec
      eps_list: strictly decreasing ε values
      center: Path of the tube center
      rho: tube radius
      n_samples: Monte Carlo budget per row
      seed: run seed; row i uses seed + i
      threads: rows run on up to `threads` threads, each splitting the rest over
        its Monte Carlo blocks; the table does not depend on it
      corrected: add the covering-entropy column ε d n (log(ρ/η) + 2) with η = ρ/4
      estimator: 'auto', 'tilted' or 'direct'
      options: DescentOptions for the ball infimum

    Returns:
      SweepReport
    """
    family = _family(spec_family)
    eps_list = _check_decreasing(eps_list)
    if estimator not in ('auto', 'tilted', 'direct'):
        raise ValidationError(f"estimator has to be 'auto', 'tilted' or 'direct'. Got {estimator}")
    if threads < 1:
        raise ValidationError(f"threads has to be >= 1. Got {threads}")
    specs = [family(float(eps)) for eps in eps_list]
    # rows share the gin bindings of this process, so they run on threads
    n_jobs = min(threads, len(specs))
    jobs = (delayed(_sweep_row)(spec, center, rho, n_samples, seed + i, max(1, threads // n_jobs),
                                corrected, estimator, options)
            for i, spec in enumerate(specs))
    rows = Parallel(n_jobs=n_jobs, backend='threading')(tqdm(jobs, total=len(specs), disable=not verbose))
    table = pd.DataFrame(rows).sort_values('epsilon', ascending=False).reset_index(drop=True)
    return SweepReport(table=table, model_id=specs[0].model_id,
                       tube=dict(rho=float(rho), n_segments=center.n_segments, horizon=center.horizon))


# --------------------------------------------
# convergence of the Lagrangians


@attr.s(frozen=True, eq=False)
class ConvergenceTable:
    """sup-norm gaps per ε with OLS slope fits of gap against ε

    Attributes:
      table: pd.DataFrame with columns epsilon, sup_L, sup_Lstar
      slope_L, slope_Lstar: pd.Series (intercept, slope, slope_se)
    """
    table = attr.ib()
    slope_L = attr.ib()
    slope_Lstar = attr.ib()

    def monotone(self, rtol=0.05, atol=1e-12):
        return (is_nonincreasing(self.table.sup_L.values, rtol=rtol, atol=atol) and
                is_nonincreasing(self.table.sup_Lstar.values, rtol=rtol, atol=atol))


def _box_points(lower, upper, n_points):
    lower = np.atleast_1d(np.asarray(lower, dtype=float))
    upper = np.atleast_1d(np.asarray(upper, dtype=float))
    axes = [np.linspace(lo, hi, n_points) for lo, hi in zip(lower, upper)]
    return np.stack(np.meshgrid(*axes, indexing='ij'), -1).reshape((-1, len(lower)))


def _ri_velocities(spec, n_points, scale):
    """Grid of velocities in the scaled hull c + scale (conv Δ − c)
    """
    jumps = spec.jump_set.float_vectors
    c = jumps.mean(axis=0)
    pts = _box_points(jumps.min(axis=0), jumps.max(axis=0), n_points)
    pts = c + scale * (pts - c)
    shrunk = c + scale * (jumps - c)
    return np.array([p for p in pts if hull_position(shrunk, p)[0] == INTERIOR]).reshape((-1, spec.d))


def convergence_check_lagrangian(spec_family, eps_list, lower, upper, s_grid=(0.0,),
                                 v_grid=None, n_points=5, n_velocities=7, vstar_scale=0.9):
    """sup |L_ε − L| and sup |L*_ε − L*| over a grid of S = [lower, upper] ⊂ int Λ

    Velocities v* are restricted to the scaled hull c + vstar_scale (conv Δ − c)
    so that no grid point sits near a vertex.

    Returns:
      ConvergenceTable
    """
    family = _family(spec_family)
    eps_list = _check_decreasing(eps_list)
    rows = []
    for eps in eps_list:
        spec = family(float(eps))
        points = _box_points(lower, upper, n_points)
        if not np.all(spec.domain.eps_interior(points, spec.epsilon, spec.jump_set)):
            raise ValidationError(f"S = [{lower}, {upper}] is not inside int_ε Λ for ε={spec.epsilon}")
        vs = as_points(np.linspace(-2, 2, 9) if v_grid is None else v_grid, spec.d).reshape((-1, spec.d))
        vstars = _ri_velocities(spec, n_velocities, vstar_scale)
        sup_L, sup_Ls = 0.0, 0.0
        for s in s_grid:
            for u in points:
                gap = np.abs(log_mgf(spec, s, u, vs, mode='finite') - log_mgf(spec, s, u, vs, mode='limit'))
                sup_L = max(sup_L, float(np.max(gap)))
                for vstar in vstars:
                    a = legendre_transform(spec, s, u, vstar, mode='finite').value
                    b = legendre_transform(spec, s, u, vstar, mode='limit').value
                    sup_Ls = max(sup_Ls, abs(a - b))
        rows.append(dict(epsilon=spec.epsilon, sup_L=sup_L, sup_Lstar=sup_Ls))
    table = pd.DataFrame(rows)
    return ConvergenceTable(table=table,
                            slope_L=ols_slope(table.epsilon, table.sup_L),
                            slope_Lstar=ols_slope(table.epsilon, table.sup_Lstar))


# --------------------------------------------
# regularization conjugacy


@attr.s(frozen=True, eq=False)
class ConjugacyReport:
    """Discrepancy between the Legendre transform of L^(r) and L^(r)*

    Attributes:
      table: per test point s, u, v*, lhs (transform of L^(r) on the v grid),
        rhs (L^(r)*) and discrepancy
      v_step, space_step: grid steps used
    """
    table = attr.ib()
    v_step = attr.ib()
    space_step = attr.ib()
    r = attr.ib()

    @property
    def max_discrepancy(self):
        return float(self.table.discrepancy.max())


def conjugacy_check(spec, r, test_points, v_step=1e-3, v_box=(-10.0, 10.0), space_step=1e-3,
                    n_time=5, mode='finite'):
    """Compare sup_v {(v, v*) − L^(r)(s, u, v)} on a v grid with L^(r)*(s, u, v*)

    Args:
      spec: ChainSpec
      r: regularization radius (r = 0 compares L* with the grid transform of L)
      test_points: iterable of (s, u, v*) with v* ∈ ri(conv Δ)
      v_step: step of the v grid on `v_box` (per axis)
      space_step: step of the u' grid of both regularizations

    Returns:
      ConjugacyReport
    """
    if r < 0:
        raise ValidationError(f"r has to be >= 0. Got {r}")
    d = spec.d
    n_space = int(round(2 * r / space_step)) + 1 if r > 0 else 1
    n_axis = int(round((v_box[1] - v_box[0]) / v_step)) + 1
    axes = [np.linspace(v_box[0], v_box[1], n_axis)] * d
    v_grid = np.stack(np.meshgrid(*axes, indexing='ij'), -1).reshape((-1, d))
    rows = []
    for s, u, vstar in test_points:
        u = as_points(u, d).reshape((d,))
        vstar = as_points(vstar, d).reshape((d,))
        L_r = reg_lagrangian(spec, s, u, v_grid, r, n_time=n_time, n_space=n_space, mode=mode)
        lhs = float(np.max(v_grid @ vstar - L_r))
        rhs = reg_legendre(spec, s, u, vstar, r, n_time=n_time, n_space=n_space, mode=mode)
        row = dict(s=float(s))
        row.update({f"u{k + 1}": u[k] for k in range(d)})
        row.update({f"vstar{k + 1}": vstar[k] for k in range(d)})
        row.update(lhs=lhs, rhs=rhs, discrepancy=abs(lhs - rhs))
        rows.append(row)
    return ConjugacyReport(table=pd.DataFrame(rows), v_step=v_step,
                           space_step=2 * r / (n_space - 1) if n_space > 1 else 0.0, r=r)


# --------------------------------------------
# boundary behaviour


def boundary_cost_probe(spec, vstar, approach, s=0.0, mode='limit'):
    """L*(s, u_k, v*) along points u_k approaching ∂Λ

    The product dist · L* tending to 0 is the sufficient condition for the
    action to stay controlled near the boundary.

    Returns:
      pd.DataFrame with columns u1..ud, dist, L_star, product
    """
    if spec.domain.is_whole_space:
        raise ValidationError("The domain is the whole space; there is no boundary to approach")
    d = spec.d
    approach = as_points(approach, d).reshape((-1, d))
    inside = spec.domain.in_interior(approach)
    if not np.all(inside):
        bad = int(np.where(~inside)[0][0])
        raise DomainError(f"Approach point {bad} ({approach[bad].tolist()}) is not in int Λ", index=bad)
    rows = []
    for u in approach:
        dist = float(spec.domain.dist_to_complement(u))
        value = legendre_transform(spec, s, u, vstar, mode=mode).value
        row = {f"u{k + 1}": u[k] for k in range(d)}
        row.update(dist=dist, L_star=value, product=dist * value)
        rows.append(row)
    return pd.DataFrame(rows)
