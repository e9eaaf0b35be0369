import os
import json
import hashlib
from pathlib import Path
import numpy as np
import pandas as pd
from latticeldp.exceptions import ValidationError
import logging
logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())

# 17 significant digits re-parse to the same double
FLOAT_FORMAT = '%.17g'


def check_exists(path, what='file'):
    if not os.path.exists(str(path)):
        raise ValidationError(f"{what} {path} doesn't exist", code="missing_file")


def read_json(fname):
    check_exists(fname)
    with open(fname) as f:
        try:
            return json.load(f)
        except json.JSONDecodeError as e:
            raise ValidationError(f"Unable to parse {fname}: {e}", code="invalid_config")


class NumpyAwareJSONEncoder(json.JSONEncoder):

    def default(self, obj):
        if isinstance(obj, Path):
            return str(obj)
        elif isinstance(obj, np.ndarray):
            return obj.tolist()
        elif isinstance(obj, np.generic):
            return obj.item()
        return json.JSONEncoder.default(self, obj)


def write_json(obj, fname, **kwargs):
    with open(fname, "w") as f:
        return json.dump(obj, f, cls=NumpyAwareJSONEncoder, **kwargs)


def sha256_file(fname):
    h = hashlib.sha256()
    with open(fname, 'rb') as f:
        for chunk in iter(lambda: f.read(1 << 16), b''):
            h.update(chunk)
    return h.hexdigest()


def write_csv(df, fname, header_lines=(), sep=','):
    """Write a data-frame with leading `# ` comment lines and 17-digit floats

    Args:
      df: pd.DataFrame
      fname: output path or an open text handle
      header_lines: lines written as `# <line>` before the table
      sep: column separator (',' for CSV, '\\t' for TSV)
    """
    def _write(f):
        for line in header_lines:
            f.write(f"# {line}\n")
        df.to_csv(f, index=False, sep=sep, float_format=FLOAT_FORMAT)

    if hasattr(fname, 'write'):
        _write(fname)
    else:
        if os.path.dirname(str(fname)):
            os.makedirs(os.path.dirname(str(fname)), exist_ok=True)
        with open(fname, 'w', newline='') as f:
            _write(f)


def read_csv(fname, sep=','):
    """Read a table written by `write_csv`, skipping comment lines
    """
    check_exists(fname)
    try:
        return pd.read_csv(fname, sep=sep, comment='#', float_precision='round_trip')
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise ValidationError(f"Unable to parse {fname}: {e}", code="path_format")


def add_file_logging(output_dir, logger, name='stdout'):
    os.makedirs(os.path.join(output_dir, 'log'), exist_ok=True)
    fh = logging.FileHandler(os.path.join(output_dir, 'log', name + '.log'), 'a+')
    fh.setFormatter(logging.Formatter('[%(asctime)s] - [%(levelname)s] - %(message)s'))
    fh.setLevel(logging.INFO)
    logger.addHandler(fh)
    return fh


def default_threads():
    """Default worker count: $LATTICELDP_THREADS or all available cores
    """
    from joblib import cpu_count
    value = os.environ.get('LATTICELDP_THREADS', '')
    if value:
        try:
            n = int(value)
        except ValueError:
            raise ValidationError(f"LATTICELDP_THREADS={value} is not an integer")
        if n < 1:
            raise ValidationError(f"LATTICELDP_THREADS={value} has to be >= 1")
        return n
    return cpu_count()


def parse_float_list(s, n=None, name='value'):
    """Parse '0.1,0.2' into a numpy array of floats
    """
    if isinstance(s, (list, tuple, np.ndarray)):
        out = np.asarray(s, dtype=float)
    else:
        try:
            out = np.array([float(x) for x in str(s).split(",") if x.strip() != ''])
        except ValueError:
            raise ValidationError(f"Unable to parse {name}: {s}")
    if n is not None and len(out) != n:
        raise ValidationError(f"{name} has to have {n} entries. Got {len(out)}: {s}")
    return out


def as_points(x, d):
    """Coerce points to shape (..., d)
    """
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        x = x.reshape((1,))
    if x.shape[-1] != d:
        if d == 1:
            x = x[..., np.newaxis]
        else:
            raise ValidationError(f"Expected points of dimension {d}. Got shape {x.shape}")
    return x
