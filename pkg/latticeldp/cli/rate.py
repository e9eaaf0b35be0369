"""Evaluate the Lagrangian L*(s, u, v*) of a model
"""
import pandas as pd
from argh.decorators import named, arg
from latticeldp.cli.common import parse_gin, provenance, emit, setup_output
from latticeldp.legendre import legendre_transform, legendre_oracle_grid, entropy_rate
from latticeldp.modelspec import load_model
from latticeldp.model import check_mode
from latticeldp.utils import parse_float_list
from latticeldp.exceptions import ValidationError
import logging
logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())


@named('rate')
@arg('--model', required=True, help='model config JSON file')
@arg('--at', required=True, help='comma-separated point s,u1,...,ud')
@arg('--vstar', required=True, help='comma-separated velocity v*')
@arg('--mode', help="'limit' (rate function, default), 'finite' (f0 + ε f1) or 'leading' (f0)")
@arg('--oracle', help='also report the grid oracle and the entropy-program value')
@arg('--out', help='output CSV file. If not specified, the row is printed to stdout')
@arg('--config', help='gin config file')
@arg('--override', help="semicolon-separated gin bindings, e.g. 'newton_settings.tol=1e-12'")
def cmd_rate(model, at, vstar, mode='limit', oracle=False, out=None, config=None, override=None):
    """Compute L*(s, u, v*) with its dual maximizer and boundary flag
    """
    kwargs = dict(model=model, at=at, vstar=vstar, mode=mode, oracle=oracle, config=config, override=override)
    bindings = parse_gin(config, override)
    check_mode(mode)
    _, spec, sha = load_model(model)
    setup_output(out, 'rate', kwargs)
    d = spec.d
    point = parse_float_list(at, name='--at')
    if len(point) != d + 1:
        raise ValidationError(f"--at needs s followed by {d} coordinates. Got {at}")
    s, u = point[0], point[1:]
    if s < 0:
        raise ValidationError(f"s has to be >= 0. Got {s}")
    v = parse_float_list(vstar, n=d, name='--vstar')

    res = legendre_transform(spec, s, u, v, mode=mode)
    row = dict(s=s)
    row.update({f"u{k + 1}": u[k] for k in range(d)})
    row.update({f"vstar{k + 1}": v[k] for k in range(d)})
    row['value'] = res.value
    row.update({f"lambda{k + 1}": res.dual_max[k] for k in range(d)})
    row.update(boundary_flag=res.boundary_flag, residual=res.residual, iterations=res.iterations)
    if oracle:
        row['oracle_grid'] = legendre_oracle_grid(spec, s, u, v, mode=mode)
        row['entropy_rate'] = entropy_rate(spec, s, u, v, mode=mode)
    emit(pd.DataFrame([row]), out, provenance('rate', sha, bindings=bindings))
    return None
