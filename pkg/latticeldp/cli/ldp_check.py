"""Empirical check of the large-deviation rate over a sequence of ε
"""
from argh.decorators import named, arg
from latticeldp.action import DescentOptions
from latticeldp.cli.common import parse_gin, provenance, emit, setup_output, resolve_threads
from latticeldp.exceptions import ValidationError
from latticeldp.modelspec import load_model
from latticeldp.paths import Path
from latticeldp.utils import parse_float_list
from latticeldp.verify import ldp_sweep
import logging
logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())


@named('ldp-check')
@arg('--model', required=True, help='model config JSON file; its epsilon is replaced by each value of --eps')
@arg('--center', required=True, help='center path CSV of the tube')
@arg('--rho', type=float, help='tube radius')
@arg('--eps', required=True, help='comma-separated, strictly decreasing ε values')
@arg('--budget', type=float, help='Monte Carlo samples per ε')
@arg('--estimator', help="'auto' (tilted with direct fallback), 'tilted' or 'direct'")
@arg('--corrected', help='add the covering-entropy corrected rate column')
@arg('--seed', type=int, help='run seed; row i uses seed + i')
@arg('--threads', type=int, help='worker processes (default: $LATTICELDP_THREADS or all cores)')
@arg('--out', help='output CSV report. If not specified, printed to stdout')
@arg('--plot-data', help='write (epsilon, rate, I_ball) as TSV to this file')
@arg('--config', help='gin config file')
@arg('--override', help='semicolon-separated gin bindings')
def cmd_ldp_check(model, center, eps, rho=0.1, budget=1e6, estimator='auto', corrected=False,
                  seed=0, threads=None, out=None, plot_data=None, config=None, override=None):
    """Compare -ε log p̂ of a tube with the ball infimum of the action
    """
    kwargs = dict(model=model, center=center, eps=eps, rho=rho, budget=budget, estimator=estimator,
                  corrected=corrected, seed=seed, threads=threads, plot_data=plot_data,
                  config=config, override=override)
    bindings = parse_gin(config, override)
    config_obj, _, sha = load_model(model)
    setup_output(out, 'ldp-check', kwargs)
    threads = resolve_threads(threads)
    eps_list = parse_float_list(eps, name='--eps')
    if not rho > 0:
        raise ValidationError(f"--rho has to be > 0. Got {rho}")
    n_samples = int(budget)
    if n_samples < 1:
        raise ValidationError(f"--budget has to be >= 1. Got {budget}")
    c = Path.read_csv(center)

    def family(e):
        return config_obj.with_epsilon(e).build()

    report = ldp_sweep(family, eps_list, c, rho, n_samples, seed=seed, threads=threads,
                       corrected=corrected, estimator=estimator, options=DescentOptions(),
                       verbose=out is not None)
    if report.table.zero_p.any():
        logger.warning("Some rows have p̂ = 0; their rate is +inf and the gap is undefined")
    header = provenance('ldp-check', sha, seed=seed, bindings=bindings)
    emit(report.table, out, header)
    if plot_data is not None:
        emit(report.plot_data(), plot_data, header, sep='\t')
