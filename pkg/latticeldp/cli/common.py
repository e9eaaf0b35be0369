"""Helpers shared by the command-line tools
"""
import os
import sys
import gin
import numpy as np
import scipy
import latticeldp
from latticeldp.utils import (write_csv, write_json, add_file_logging,
                              parse_float_list)
from latticeldp.exceptions import ValidationError
from latticeldp.configurables import mc_threads
import logging
logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())


def parse_gin(config=None, override=None):
    """Parse --config / --override gin bindings

    Returns:
      list of provenance strings: `include <file>` for the config file followed
      by the override bindings (empty if nothing was given)
    """
    files = [config] if config else []
    bindings = [b.strip() for b in override.split(";") if b.strip()] if override else []
    for f in files:
        if not os.path.exists(f):
            raise ValidationError(f"gin config {f} doesn't exist", code="missing_file")
    if files or bindings:
        gin.clear_config()
        try:
            gin.parse_config_files_and_bindings(files, bindings)
        except (ValueError, SyntaxError) as e:
            raise ValidationError(f"Unable to parse gin bindings: {e}", code="invalid_config")
    return [f"include {f}" for f in files] + bindings


def resolve_threads(threads):
    if threads is None:
        return mc_threads()
    threads = int(threads)
    if threads < 1:
        raise ValidationError(f"--threads has to be >= 1. Got {threads}")
    return threads


def provenance(command, config_sha=None, seed=None, bindings=()):
    """Provenance header lines written as CSV comments
    """
    lines = [f"latticeldp {latticeldp.__version__}",
             f"command {command}",
             f"config_sha256 {config_sha if config_sha else 'none'}",
             f"seed {seed if seed is not None else 'none'}",
             f"numpy {np.__version__} scipy {scipy.__version__}"]
    if bindings:
        lines.append("gin " + "; ".join(bindings))
    return lines


def emit(df, out=None, header_lines=(), sep=','):
    """Write a table to `out` or standard output
    """
    if out is None:
        write_csv(df, sys.stdout, header_lines=header_lines, sep=sep)
    else:
        write_csv(df, out, header_lines=header_lines, sep=sep)
        logger.info(f"Wrote {out}")


def setup_output(out, command, kwargs):
    """Attach file logging and write `<command>.kwargs.json` next to the output file
    """
    if out is None:
        return
    output_dir = os.path.dirname(os.path.abspath(str(out)))
    os.makedirs(output_dir, exist_ok=True)
    add_file_logging(output_dir, logging.getLogger('latticeldp'), name=command)
    write_json(kwargs, os.path.join(output_dir, f"{command}.kwargs.json"), indent=2, sort_keys=True)


def parse_point(s, d, name):
    return parse_float_list(s, n=d, name=name)
