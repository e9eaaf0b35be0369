"""Chain simulation, tube probabilities and exact enumeration

All estimators share one streaming engine: replicas are advanced step by
step and a `CheckpointEvent` is checked at its checkpoint times using the
linear interpolation Y_ε between consecutive states. Tubes and pinning
windows are both checkpoint events.
"""
from math import prod
import numpy as np
import pandas as pd
import attr
from joblib import Parallel, delayed
from tqdm import tqdm
from latticeldp.exceptions import ValidationError, NumericalError, BudgetExceededError
from latticeldp.legendre import legendre_transform, INTERIOR
from latticeldp.paths import Path
from latticeldp.samplers import mc_block_size, get_block_sizes, stream_rng, categorical_draw
from latticeldp.stats import wilson_interval, normal_interval, exact_binomial_band
from latticeldp.utils import as_points
import logging
logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())

DEFAULT_CAP = 2 ** 20


# --------------------------------------------
# trajectories


@attr.s(frozen=True, eq=False)
class Trajectory:
    """Microscopic trajectory X(0), ..., X(n) in macroscopic coordinates (X ∈ εΓ)

    n = [T/ε], plus one step when T is not a multiple of ε so that Y_ε(T)
    is defined.
    """
    states = attr.ib()
    epsilon = attr.ib()
    horizon = attr.ib()
    seed = attr.ib(default=None)
    model_id = attr.ib(default=None)
    replica = attr.ib(default=0)
    log_weight = attr.ib(default=0.0)

    @property
    def d(self):
        return self.states.shape[1]

    @property
    def times(self):
        return np.arange(len(self.states)) * self.epsilon

    @property
    def increments(self):
        """ε⁻¹(X(k+1) − X(k)), rounded to the integer jump vectors
        """
        return np.rint(np.diff(self.states, axis=0) / self.epsilon).astype(np.int64)

    def to_path(self):
        """Linear interpolation Y_ε on [0, T]
        """
        t = self.times
        grid = t[t <= self.horizon + 1e-12 * self.horizon]
        if grid[-1] < self.horizon - 1e-12 * self.horizon:
            grid = np.append(grid, self.horizon)
        else:
            grid[-1] = self.horizon
        return Path(grid, interpolate(self, grid, mode='linear'))

    def to_frame(self):
        df = pd.DataFrame(self.states, columns=[f"x{k + 1}" for k in range(self.d)])
        df.insert(0, 'k', np.arange(len(self.states)))
        return df


def interpolate(traj, times, mode='linear'):
    """Macroscopic path of a trajectory at the given times

    Args:
      traj: Trajectory
      times: array of times in [0, n ε]
      mode: 'linear' for Y_ε(t) = X([t/ε]) + (t/ε − [t/ε])(X([t/ε]+1) − X([t/ε])),
        'step' for Z_ε(t) = X([t/ε])

    Returns:
      array (len(times), d)
    """
    times = np.atleast_1d(np.asarray(times, dtype=float))
    grid = traj.times
    if np.any(times < -1e-12) or np.any(times > grid[-1] + 1e-12):
        raise ValidationError(f"Interpolation times have to lie in [0, {grid[-1]}]")
    if mode == 'linear':
        return np.stack([np.interp(times, grid, traj.states[:, k]) for k in range(traj.d)], axis=-1)
    elif mode == 'step':
        k = np.clip(np.floor(times / traj.epsilon + 1e-9).astype(int), 0, len(grid) - 1)
        return traj.states[k]
    else:
        raise ValidationError(f"mode has to be 'linear' or 'step'. Got {mode}")


# --------------------------------------------
# checkpoint events


@attr.s(frozen=True, eq=False)
class CheckpointEvent:
    """{‖Y_ε(t_j) − y_j‖ < radius for all j} (≤ radius when not strict)
    """
    times = attr.ib(converter=lambda x: np.atleast_1d(np.asarray(x, dtype=float)))
    targets = attr.ib(converter=lambda x: np.atleast_2d(np.asarray(x, dtype=float)))
    radius = attr.ib(converter=float)
    strict = attr.ib(default=True)

    def check(self, y, j):
        dist = np.linalg.norm(y - self.targets[j], axis=-1)
        if self.strict:
            return dist < self.radius
        return dist <= self.radius * (1 + 1e-12)


def tube_event(spec, center, rho):
    """Open sup-norm tube of radius ρ around `center`

    Checkpoints are the union of the center's grid and the trajectory grid
    kε ≤ T, plus T. Between them both functions are linear, so checking the
    breakpoints is exact.
    """
    if not rho > 0:
        raise ValidationError(f"rho has to be > 0. Got {rho}")
    if center.d != spec.d:
        raise ValidationError(f"Center dimension {center.d} != model dimension {spec.d}")
    if abs(center.horizon - spec.horizon) > 1e-12 * max(1.0, spec.horizon):
        raise ValidationError(f"Center horizon {center.horizon} != model horizon {spec.horizon}")
    grid = np.arange(spec.n_steps + 1) * spec.epsilon
    times = np.union1d(center.times, grid[grid <= spec.horizon])
    times = np.union1d(times[times < spec.horizon], [spec.horizon])
    return CheckpointEvent(times=times, targets=center.evaluate(times), radius=rho, strict=True)


def pinning_event(times, points, eta, d):
    """{‖Y_ε(t_i) − x_i‖ ≤ 2η for all i}
    """
    if not eta > 0:
        raise ValidationError(f"eta has to be > 0. Got {eta}")
    times = np.atleast_1d(np.asarray(times, dtype=float))
    points = as_points(points, d).reshape((len(times), d))
    order = np.argsort(times)
    return CheckpointEvent(times=times[order], targets=points[order], radius=2 * eta, strict=False)


def _checkpoint_plan(spec, event):
    """Checkpoint indices at t = 0 and, per step k, those with kε < t ≤ (k+1)ε
    """
    if np.any(event.times < 0) or np.any(event.times > spec.n_sim_steps * spec.epsilon + 1e-12):
        raise ValidationError("Checkpoint times have to lie in [0, T]")
    step = np.ceil(event.times / spec.epsilon - 1e-9).astype(int) - 1
    initial = np.where(step < 0)[0]
    per_step = [np.where(step == k)[0] for k in range(spec.n_sim_steps)]
    return initial, per_step


# --------------------------------------------
# tilt schedules


@attr.s(frozen=True, eq=False)
class TiltSchedule:
    """Per-segment duals λ*_i and tilted laws ν_i frozen at (t_{i-1}, ψ(t_{i-1}))

    Attributes:
      times: partition of the reference path
      duals: λ*_i, array (n, d)
      probs: ν_i, array (n, m)
      reference: reference Path
      residuals: ‖E_{ν_i} δ − segment velocity‖
      mode: evaluation mode of the frozen laws
    """
    times = attr.ib()
    duals = attr.ib()
    probs = attr.ib()
    reference = attr.ib()
    residuals = attr.ib()
    jumps = attr.ib()
    mode = attr.ib(default='finite')

    @property
    def log_probs(self):
        with np.errstate(divide='ignore'):
            return np.log(self.probs)

    @property
    def n_segments(self):
        return len(self.duals)

    def segment_index(self, s):
        i = np.searchsorted(self.times, s + 1e-12, side='right') - 1
        return int(np.clip(i, 0, self.n_segments - 1))

    def variance_bound(self):
        """σ² = T max_i tr Cov_{ν_i}(δ), at most T (diam Δ)²
        """
        traces = []
        for p in self.probs:
            mean = p @ self.jumps
            traces.append(float(p @ np.sum((self.jumps - mean) ** 2, axis=1)))
        return float(self.times[-1] * max(traces))

    def chebyshev_bound(self, epsilon, rho):
        """Chebyshev lower bound 1 − ε σ² / (ρ − ε√d)² on staying in the tube under the tilted law
        """
        d = self.jumps.shape[1]
        gap = rho - epsilon * np.sqrt(d)
        if gap <= 0:
            raise ValidationError(f"rho={rho} has to exceed ε√d={epsilon * np.sqrt(d)}")
        return 1.0 - epsilon * self.variance_bound() / gap ** 2


def make_tilt_schedule(spec, reference, mode='finite', defensive=1e-3):
    """Tilt schedule whose segment means equal the reference velocities

    A frozen law that misses a jump (one leaving Λ at the reference knot)
    is mixed with the uniform law on Δ at weight `defensive`, so every path
    of the chain can be proposed.

    Args:
      spec: ChainSpec
      reference: Path with velocities in ri(conv supp) at every segment start
      mode: evaluation mode of the frozen laws ('finite' reproduces g_ε at λ* = 0)
      defensive: mixture weight in [0, 1); 0 rejects laws with zero mass

    Returns:
      TiltSchedule
    """
    if reference.d != spec.d:
        raise ValidationError(f"Reference dimension {reference.d} != model dimension {spec.d}")
    duals, probs, residuals = [], [], []
    for i, (s, u, v) in enumerate(zip(reference.times[:-1], reference.knots[:-1], reference.velocities)):
        point = legendre_transform(spec, s, u, v, mode=mode)
        if point.boundary_flag != INTERIOR:
            raise ValidationError(f"Reference segment {i} has velocity {v.tolist()} "
                                  f"({point.boundary_flag}); the tilt is unbounded there",
                                  code="inadmissible")
        duals.append(point.dual_max)
        probs.append(point.measure.probs)
        residuals.append(np.linalg.norm(point.measure.mean - v))
    probs = np.array(probs)
    residuals = np.array(residuals)
    missing = np.any(probs == 0, axis=1)
    if np.any(missing):
        if not 0 < defensive < 1:
            i = int(np.where(missing)[0][0])
            raise ValidationError(f"Tilted law of segment {i} has zero mass on some jumps and "
                                  f"defensive={defensive}; paths using those jumps are never proposed",
                                  code="inadmissible")
        logger.info(f"Mixing {int(missing.sum())} tilted laws with the uniform law at weight {defensive}")
        probs[missing] = (1 - defensive) * probs[missing] + defensive / probs.shape[1]
        means = probs @ spec.jump_set.float_vectors
        residuals = np.linalg.norm(means - reference.velocities, axis=1)
    return TiltSchedule(times=reference.times.copy(), duals=np.array(duals), probs=probs,
                        reference=reference, residuals=residuals,
                        jumps=spec.jump_set.float_vectors, mode=mode)


# --------------------------------------------
# streaming engine


def _propagate(spec, n, rng, event=None, schedule=None, record=False):
    """Advance n replicas through all steps

    Returns:
      dict with final states `x`, event indicator `ok`, log likelihood ratio
      `logw` (true law over proposal) and the state history if `record`
    """
    d = spec.d
    jumps = spec.jump_set.float_vectors
    eps = spec.epsilon
    init = spec.initial_support()
    x = init[rng.integers(len(init), size=n)]
    ok = np.ones(n, dtype=bool)
    logw = np.zeros(n)
    history = [x] if record else None
    if event is not None:
        initial, per_step = _checkpoint_plan(spec, event)
        for j in initial:
            ok &= event.check(x, j)
    rows = np.arange(n)
    with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
        for k in range(spec.n_sim_steps):
            s = k * eps
            lw = np.asarray(spec.log_weights(s, x, 'finite')).reshape((n, len(jumps)))
            if schedule is None:
                probs = np.exp(lw)
                if np.any(probs.sum(axis=-1) <= 0):
                    bad = int(np.where(probs.sum(axis=-1) <= 0)[0][0])
                    raise NumericalError(f"Zero jump mass at s={s}, x={x[bad].tolist()}", code="zero_mass")
            else:
                i = schedule.segment_index(s)
                probs = np.broadcast_to(schedule.probs[i], lw.shape)
            idx = categorical_draw(probs, rng.random(n))
            if schedule is not None:
                logw += lw[rows, idx] - schedule.log_probs[i, idx]
            x_new = x + eps * jumps[idx]
            if event is not None:
                for j in per_step[k]:
                    frac = np.clip(event.times[j] / eps - k, 0.0, 1.0)
                    ok &= event.check(x + frac * (x_new - x), j)
            x = x_new
            if record:
                history.append(x)
    out = dict(x=x, ok=ok, logw=logw)
    if record:
        out['history'] = np.stack(history, axis=1).reshape((n, -1, d))
    return out


def _block_stats(spec, n, seed, block, event, schedule):
    res = _propagate(spec, n, stream_rng(seed, block), event=event, schedule=schedule)
    w = np.exp(res['logw'])
    c = np.where(res['ok'], w, 0.0)
    return dict(n=n, hits=int(res['ok'].sum()), sum_c=float(c.sum()), sum_c2=float((c ** 2).sum()),
                sum_w=float(w.sum()), max_w=float(w.max()),
                n_zero=int(np.sum(np.isneginf(res['logw']))))


def _run_blocks(spec, n_samples, seed, event, schedule, threads, verbose):
    sizes = get_block_sizes(n_samples, mc_block_size())
    jobs = (delayed(_block_stats)(spec, int(size), seed, b, event, schedule)
            for b, size in enumerate(sizes))
    stats = Parallel(n_jobs=threads)(tqdm(jobs, total=len(sizes), disable=not verbose))
    total = dict(n=0, hits=0, sum_c=0.0, sum_c2=0.0, sum_w=0.0, max_w=0.0, n_zero=0)
    # reduction in block order
    for st in stats:
        for key in ['n', 'hits', 'sum_c', 'sum_c2', 'sum_w', 'n_zero']:
            total[key] += st[key]
        total['max_w'] = max(total['max_w'], st['max_w'])
    return total


@attr.s(frozen=True)
class TubeEstimate:
    """Probability estimate with its uncertainty

    Attributes:
      estimator: 'direct', 'tilted' or 'exhaustive'
      p_hat: estimate
      stderr: standard error (0 for exhaustive)
      n_samples: number of replicas (number of enumerated sequences for exhaustive)
      ci_low, ci_high: 95% interval (Wilson for direct, normal for tilted)
      hits: replicas inside the event
      weight_mean, weight_max: likelihood-ratio statistics (tilted)
      ess: Kish effective sample size of the weighted indicators (tilted)
      n_zero_weights: proposed paths with zero true probability (tilted)
    """
    estimator = attr.ib()
    p_hat = attr.ib()
    stderr = attr.ib()
    n_samples = attr.ib()
    ci_low = attr.ib()
    ci_high = attr.ib()
    hits = attr.ib(default=None)
    weight_mean = attr.ib(default=np.nan)
    weight_max = attr.ib(default=np.nan)
    ess = attr.ib(default=np.nan)
    n_zero_weights = attr.ib(default=0)

    def to_dict(self):
        return attr.asdict(self)


def _direct_estimate(total):
    n, hits = total['n'], total['hits']
    p = hits / n
    lo, hi = wilson_interval(hits, n)
    return TubeEstimate(estimator='direct', p_hat=p, stderr=float(np.sqrt(p * (1 - p) / n)),
                        n_samples=n, ci_low=lo, ci_high=hi, hits=hits, weight_mean=1.0,
                        weight_max=1.0, ess=float(hits))


def _tilted_estimate(total):
    n = total['n']
    p = total['sum_c'] / n
    var = max(total['sum_c2'] / n - p ** 2, 0.0) * n / max(n - 1, 1)
    stderr = float(np.sqrt(var / n))
    lo, hi = normal_interval(p, stderr)
    ess = total['sum_c'] ** 2 / total['sum_c2'] if total['sum_c2'] > 0 else 0.0
    if total['n_zero']:
        logger.info(f"{total['n_zero']} of {n} tilted paths used a jump with zero true probability (weight 0)")
    return TubeEstimate(estimator='tilted', p_hat=p, stderr=stderr, n_samples=n, ci_low=lo, ci_high=hi,
                        hits=total['hits'], weight_mean=total['sum_w'] / n, weight_max=total['max_w'],
                        ess=float(ess), n_zero_weights=total['n_zero'])


def tube_probability_mc(spec, center, rho, n_samples, seed, threads=1, verbose=False):
    """Direct Monte Carlo estimate of P(sup_t ‖Y_ε(t) − center(t)‖ < ρ)

    Replicas are simulated in blocks; block b draws from stream (seed, b),
    so the estimate does not depend on `threads`.

    Returns:
      TubeEstimate
    """
    event = tube_event(spec, center, rho)
    total = _run_blocks(spec, n_samples, seed, event, None, threads, verbose)
    return _direct_estimate(total)


def tube_probability_tilted(spec, center, rho, schedule, n_samples, seed, threads=1, verbose=False):
    """Importance-sampling estimate of the tube probability

    Steps are proposed from the frozen tilted law of the current segment;
    each path carries the exact likelihood ratio of the true law g_ε at the
    visited states against the proposal, so the estimator is unbiased.

    Returns:
      TubeEstimate
    """
    event = tube_event(spec, center, rho)
    total = _run_blocks(spec, n_samples, seed, event, schedule, threads, verbose)
    return _tilted_estimate(total)


def pinning_probability_mc(spec, times, points, eta, n_samples, seed, threads=1, verbose=False):
    """Direct Monte Carlo estimate of P(‖Y_ε(t_i) − x_i‖ ≤ 2η for all i)
    """
    event = pinning_event(times, points, eta, spec.d)
    total = _run_blocks(spec, n_samples, seed, event, None, threads, verbose)
    return _direct_estimate(total)


def sample_chains(spec, n_chains, seed, schedule=None):
    """Sample full trajectories from stream (seed, 0)

    With a schedule, steps are drawn from the tilted laws and every
    trajectory carries its log likelihood ratio.
    """
    if n_chains < 1:
        raise ValidationError(f"n_chains has to be >= 1. Got {n_chains}")
    res = _propagate(spec, n_chains, stream_rng(seed, 0), schedule=schedule, record=True)
    return [Trajectory(states=res['history'][r], epsilon=spec.epsilon, horizon=spec.horizon,
                       seed=seed, model_id=spec.model_id, replica=r, log_weight=float(res['logw'][r]))
            for r in range(n_chains)]


def sample_chain(spec, seed):
    """One trajectory of the chain; deterministic given the seed

    X(0) is uniform on the initial support and each step is drawn from
    g_ε(εk, X(k), ·).
    """
    return sample_chains(spec, 1, seed)[0]


# --------------------------------------------
# exhaustive enumeration


def _enumerate(spec, event, schedule=None, cap=DEFAULT_CAP):
    """All initial points and step sequences that stay in the event

    Returns:
      (logp, logq): log probabilities under the true law and the proposal
    """
    init = spec.initial_support()
    m = spec.jump_set.m
    required = len(init) * m ** spec.n_sim_steps
    if required > cap:
        raise BudgetExceededError(f"Exhaustive enumeration needs {required} sequences (cap {cap})",
                                  required=required)
    jumps = spec.jump_set.float_vectors
    eps = spec.epsilon
    initial, per_step = _checkpoint_plan(spec, event)
    x = init.copy()
    logp = np.full(len(x), -np.log(len(init)))
    logq = logp.copy()
    ok = np.ones(len(x), dtype=bool)
    for j in initial:
        ok &= event.check(x, j)
    with np.errstate(divide='ignore'):
        for k in range(spec.n_sim_steps):
            x, logp, logq = x[ok], logp[ok], logq[ok]
            n = len(x)
            ok = np.ones(n, dtype=bool)
            if n == 0:
                break
            s = k * eps
            lw = np.asarray(spec.log_weights(s, x, 'finite')).reshape((n, m))
            lq = lw if schedule is None else np.broadcast_to(schedule.log_probs[schedule.segment_index(s)], (n, m))
            x_new = (x[:, np.newaxis, :] + eps * jumps).reshape((-1, spec.d))
            x_old = np.repeat(x, m, axis=0)
            logp = (logp[:, np.newaxis] + lw).ravel()
            logq = (logq[:, np.newaxis] + lq).ravel()
            ok = np.isfinite(logp) | np.isfinite(logq)
            for j in per_step[k]:
                frac = np.clip(event.times[j] / eps - k, 0.0, 1.0)
                ok &= event.check(x_old + frac * (x_new - x_old), j)
            x = x_new
    return logp[ok], logq[ok], required


def _exact_estimate(logp, required):
    p = float(np.sum(np.exp(logp)))
    return TubeEstimate(estimator='exhaustive', p_hat=p, stderr=0.0, n_samples=int(required),
                        ci_low=p, ci_high=p, hits=int(np.sum(np.isfinite(logp))))


def exhaustive_tube_probability(spec, center, rho, cap=DEFAULT_CAP):
    """Exact tube probability by summing over all initial points and step sequences

    Raises:
      BudgetExceededError when |init| |Δ|^K exceeds `cap`
    """
    logp, _, required = _enumerate(spec, tube_event(spec, center, rho), cap=cap)
    return _exact_estimate(logp, required)


def pinning_probability_exhaustive(spec, times, points, eta, cap=DEFAULT_CAP):
    """Exact probability of the pinning event ‖Y_ε(t_i) − x_i‖ ≤ 2η for all i
    """
    logp, _, required = _enumerate(spec, pinning_event(times, points, eta, spec.d), cap=cap)
    return _exact_estimate(logp, required)


@attr.s(frozen=True)
class TiltedMoments:
    """Exact moments of the tilted estimator w·1 under the proposal

    Attributes:
      first: E_q[w 1]; equals `exact` (unbiasedness)
      second: E_q[w² 1]
      exact: exact tube probability
    """
    first = attr.ib()
    second = attr.ib()
    exact = attr.ib()

    @property
    def variance(self):
        return self.second - self.first ** 2


def exhaustive_tilted_moments(spec, center, rho, schedule, cap=DEFAULT_CAP):
    """Exact first and second moments of the tilted estimator over all sequences
    """
    logp, logq, _ = _enumerate(spec, tube_event(spec, center, rho), schedule=schedule, cap=cap)
    q = np.exp(logq)
    with np.errstate(invalid='ignore'):
        w = np.where(np.isfinite(logq), np.exp(logp - logq), 0.0)
    return TiltedMoments(first=float(np.sum(q * w)), second=float(np.sum(q * w ** 2)),
                         exact=float(np.sum(np.exp(logp))))


# --------------------------------------------
# diagnostics


def step_frequencies(spec, trajectories, n_sigma=4):
    """Empirical jump frequencies per visited state against g_ε

    For each visited state and jump the count is compared with the mean
    jump probability over the visits through a Clopper-Pearson band with the
    coverage of `n_sigma` normal standard deviations.

    Returns:
      pd.DataFrame with columns x1..xd, jump, n_visits, count, expected, lower, upper, within
    """
    d = spec.d
    frames = []
    for traj in trajectories:
        n = len(traj.states) - 1
        x = traj.states[:-1]
        s = np.arange(n) * spec.epsilon
        w = np.exp(np.asarray(spec.log_weights(s, x, "finite")).reshape((n, -1)))
        idx = np.array([spec.jump_set.index(delta) for delta in traj.increments])
        df = pd.DataFrame(np.round(x / spec.epsilon).astype(np.int64), columns=[f"x{k + 1}" for k in range(d)])
        for j in range(spec.jump_set.m):
            df[f"p{j}"] = w[:, j]
            df[f"c{j}"] = (idx == j).astype(int)
        frames.append(df)
    df = pd.concat(frames, ignore_index=True)
    keys = [f"x{k + 1}" for k in range(d)]
    grouped = df.groupby(keys)
    rows = []
    for state, g in grouped:
        state = np.atleast_1d(state)
        for j, delta in enumerate(spec.jump_set.vectors.tolist()):
            count = int(g[f"c{j}"].sum())
            expected = float(g[f"p{j}"].mean())
            lo, hi = exact_binomial_band(count, len(g), n_sigma=n_sigma)
            row = {k: float(v) * spec.epsilon for k, v in zip(keys, state)}
            row.update(jump=str(delta), n_visits=len(g), count=count, expected=expected,
                       lower=lo, upper=hi, within=bool(lo <= expected <= hi))
            rows.append(row)
    return pd.DataFrame(rows)


@attr.s(frozen=True, eq=False)
class Covering:
    """Covering-number bound, with the explicit lattice covering when built

    Attributes:
      bound: e^{d n (log(ρ/η) + 2)}
      sets: per grid time, lattice points of spacing η/√d within ρ of the center
    """
    bound = attr.ib()
    sets = attr.ib(default=None)

    @property
    def size(self):
        if self.sets is None:
            return None
        return prod(len(s) for s in self.sets)


def covering_count(rho, eta, n, d, center=None, max_explicit=12):
    """Upper bound on the number of η-tubes needed to cover a ρ-ball of paths

    Args:
      rho, eta: radii with ρ > 2η
      n: number of partition intervals
      d: dimension
      center: optional knots (n + 1, d) of the ball's center; with d·n ≤
        `max_explicit` the explicit covering is built around them

    Returns:
      Covering
    """
    if not eta > 0 or not rho > 2 * eta:
        raise ValidationError(f"The covering needs ρ > 2η > 0. Got ρ={rho}, η={eta}")
    if n < 1 or d < 1:
        raise ValidationError(f"n and d have to be >= 1. Got n={n}, d={d}")
    bound = float(np.exp(d * n * (np.log(rho / eta) + 2)))
    sets = None
    if center is not None:
        center = as_points(center, d).reshape((-1, d))
        if len(center) != n + 1:
            raise ValidationError(f"center needs n + 1 = {n + 1} knots. Got {len(center)}")
        if d * n > max_explicit:
            raise BudgetExceededError(f"Explicit covering for d·n = {d * n} exceeds {max_explicit}",
                                      required=d * n)
        h = eta / np.sqrt(d)
        sets = []
        for y in center:
            axes = [np.arange(np.ceil((c - rho) / h), np.floor((c + rho) / h) + 1) * h for c in y]
            pts = np.stack(np.meshgrid(*axes, indexing='ij'), -1).reshape((-1, d))
            sets.append(pts[np.linalg.norm(pts - y, axis=1) <= rho])
    return Covering(bound=bound, sets=sets)


def covering_contains(covering, knots, eta):
    """True if some covering path ψ has ‖knots_i − ψ(t_i)‖ ≤ 2η at every grid time
    """
    if covering.sets is None:
        raise ValidationError("The covering has no explicit point sets")
    knots = np.atleast_2d(np.asarray(knots, dtype=float))
    if len(knots) != len(covering.sets):
        raise ValidationError(f"Expected {len(covering.sets)} knots. Got {len(knots)}")
    for y, pts in zip(knots, covering.sets):
        if len(pts) == 0 or np.min(np.linalg.norm(pts - y, axis=1)) > 2 * eta * (1 + 1e-12):
            return False
    return True
