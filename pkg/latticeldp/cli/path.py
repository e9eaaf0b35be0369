"""Action of paths and action-minimizing paths
"""
import pandas as pd
from argh.decorators import named, arg
from latticeldp.action import action, admissibility, minimize_action, DescentOptions
from latticeldp.cli.common import parse_gin, provenance, emit, setup_output
from latticeldp.exceptions import ValidationError
from latticeldp.model import check_mode
from latticeldp.modelspec import load_model
from latticeldp.paths import Path
from latticeldp.utils import parse_float_list, sha256_file
import logging
logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())


@named('action')
@arg('--path', required=True, help='path CSV file with columns t,x1,...,xd')
@arg('--model', required=True, help='model config JSON file')
@arg('--mode', help="Lagrangian mode: 'limit' (default), 'finite' or 'leading'")
@arg('--refine-tol', type=float,
     help='bisect all segments until successive action values differ by less than this')
@arg('--out', help='output CSV file. If not specified, the row is printed to stdout')
@arg('--config', help='gin config file')
@arg('--override', help='semicolon-separated gin bindings')
def cmd_action(path, model, mode='limit', refine_tol=None, out=None, config=None, override=None):
    """Action functional of a piecewise-linear path
    """
    kwargs = dict(path=path, model=model, mode=mode, refine_tol=refine_tol, config=config, override=override)
    bindings = parse_gin(config, override)
    check_mode(mode)
    _, spec, sha = load_model(model)
    setup_output(out, 'action', kwargs)
    p = Path.read_csv(path)
    if p.d != spec.d:
        raise ValidationError(f"Path dimension {p.d} != model dimension {spec.d}")
    cls = admissibility(p, spec)
    value = action(p, spec, mode=mode, refine_tol=refine_tol)
    row = dict(value=value.value, scheme=value.scheme, error_bound=value.error_bound,
               n_segments=p.n_segments, n_refinements=value.n_refinements,
               classification=cls.classification, classes=";".join(cls.classes))
    header = provenance('action', sha, bindings=bindings) + [f"path_sha256 {sha256_file(path)}"]
    emit(pd.DataFrame([row]), out, header)


@named('minpath')
@arg('--model', required=True, help='model config JSON file')
@arg('--from', required=True, dest='start', help='comma-separated start point')
@arg('--to', required=True, dest='end', help='comma-separated end point')
@arg('--segments', type=int, help='number of path segments')
@arg('--horizon', type=float, help='final time (default: the model horizon)')
@arg('--mode', help="Lagrangian mode: 'limit' (default), 'finite' or 'leading'")
@arg('--out-path', help='write the minimizing path to this CSV file')
@arg('--out', help='output CSV file for the summary row. If not specified, it is printed to stdout')
@arg('--config', help='gin config file (e.g. DescentOptions.max_iter = 1000)')
@arg('--override', help='semicolon-separated gin bindings')
def cmd_minpath(model, start, end, segments=10, horizon=None, mode='limit', out_path=None,
                out=None, config=None, override=None):
    """Minimize the action between two points
    """
    kwargs = dict(model=model, start=start, end=end, segments=segments, horizon=horizon, mode=mode,
                  out_path=out_path, config=config, override=override)
    bindings = parse_gin(config, override)
    check_mode(mode)
    _, spec, sha = load_model(model)
    setup_output(out, 'minpath', kwargs)
    a = parse_float_list(start, n=spec.d, name='--from')
    b = parse_float_list(end, n=spec.d, name='--to')
    res = minimize_action(spec, a, b, int(segments), horizon=horizon, options=DescentOptions(), mode=mode)
    header = provenance('minpath', sha, bindings=bindings)
    if out_path is not None:
        res.path.to_csv(out_path, header_lines=header)
    row = dict(value=res.value, converged=res.converged, grad_norm=res.grad_norm,
               n_iter=res.n_iter, n_segments=res.path.n_segments, error_bound=res.action.error_bound)
    emit(pd.DataFrame([row]), out, header)
