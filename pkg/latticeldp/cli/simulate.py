"""Monte Carlo tube probabilities and trajectory dumps
"""
import time
import numpy as np
import pandas as pd
from argh.decorators import named, arg
from latticeldp.action import mean_flow_path
from latticeldp.cli.common import parse_gin, provenance, emit, setup_output, resolve_threads
from latticeldp.exceptions import ValidationError
from latticeldp.modelspec import load_model
from latticeldp.paths import Path
from latticeldp.simulate import (tube_probability_mc, tube_probability_tilted, make_tilt_schedule,
                                 exhaustive_tube_probability, sample_chain, DEFAULT_CAP)
import logging
logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())


def _default_center(spec):
    """Mean flow of the limit law resampled on the grid kε
    """
    flow = mean_flow_path(spec, step=min(spec.epsilon, 1e-3))
    times = np.union1d(np.arange(spec.n_steps + 1) * spec.epsilon, [spec.horizon])
    times = times[times <= spec.horizon]
    return Path(times, flow.evaluate(times))


@named('simulate')
@arg('--model', required=True, help='model config JSON file')
@arg('--n', type=int, help='number of replicas')
@arg('--seed', type=int, help='run seed')
@arg('--tube', help='center path CSV of the tube (default: the mean flow from phi0)')
@arg('--rho', type=float, help='tube radius')
@arg('--tilt', help='reference path CSV for the exponentially tilted estimator')
@arg('--exhaustive', help='compute the exact probability by enumeration instead of sampling')
@arg('--cap', type=int, help='maximal number of enumerated sequences')
@arg('--threads', type=int, help='worker processes (default: $LATTICELDP_THREADS or all cores)')
@arg('--timing', help='add the wall time to the output row')
@arg('--out', help='output CSV file. If not specified, the row is printed to stdout')
@arg('--config', help='gin config file (e.g. mc_block_size.block_size = 4096)')
@arg('--override', help='semicolon-separated gin bindings')
def cmd_simulate(model, n=100000, seed=0, tube=None, rho=0.1, tilt=None, exhaustive=False,
                 cap=DEFAULT_CAP, threads=None, timing=False, out=None, config=None, override=None):
    """Estimate the probability that the interpolated chain stays in a tube
    """
    kwargs = dict(model=model, n=n, seed=seed, tube=tube, rho=rho, tilt=tilt, exhaustive=exhaustive,
                  cap=cap, threads=threads, config=config, override=override)
    bindings = parse_gin(config, override)
    _, spec, sha = load_model(model)
    setup_output(out, 'simulate', kwargs)
    threads = resolve_threads(threads)
    center = Path.read_csv(tube) if tube is not None else _default_center(spec)
    if tilt is not None and exhaustive:
        raise ValidationError("--tilt and --exhaustive are mutually exclusive")
    t0 = time.time()
    if exhaustive:
        est = exhaustive_tube_probability(spec, center, rho, cap=cap)
    elif tilt is not None:
        schedule = make_tilt_schedule(spec, Path.read_csv(tilt))
        est = tube_probability_tilted(spec, center, rho, schedule, n, seed, threads=threads)
    else:
        est = tube_probability_mc(spec, center, rho, n, seed, threads=threads)
    wall = time.time() - t0
    logger.info(f"simulate: {est.estimator} estimate {est.p_hat} in {wall:.2f}s")
    row = dict(estimator=est.estimator, p_hat=est.p_hat, stderr=est.stderr, ess=est.ess,
               ci_low=est.ci_low, ci_high=est.ci_high, n_samples=est.n_samples,
               n_zero_weights=est.n_zero_weights)
    if timing:
        row['wall_time'] = wall
    emit(pd.DataFrame([row]), out, provenance('simulate', sha, seed=seed, bindings=bindings))


@named('trajectory')
@arg('--model', required=True, help='model config JSON file')
@arg('--seed', type=int, help='run seed')
@arg('--out', help='output CSV file with columns k,x1,...,xd. If not specified, printed to stdout')
@arg('--config', help='gin config file')
@arg('--override', help='semicolon-separated gin bindings')
def cmd_trajectory(model, seed=0, out=None, config=None, override=None):
    """Dump one sampled trajectory of the chain
    """
    kwargs = dict(model=model, seed=seed, config=config, override=override)
    bindings = parse_gin(config, override)
    _, spec, sha = load_model(model)
    setup_output(out, 'trajectory', kwargs)
    traj = sample_chain(spec, seed)
    emit(traj.to_frame(), out, provenance('trajectory', sha, seed=seed, bindings=bindings))
