"""
"""
from pytest import fixture


@fixture
def run_cli(capsys, clean_gin):
    """Run the command-line entry point and return (exit code, error line)
    """
    from latticeldp.__main__ import main

    def run(argv):
        try:
            main([str(a) for a in argv])
        except SystemExit as e:
            code = e.code
        else:
            code = 0
        err = capsys.readouterr().err
        lines = [line for line in err.splitlines() if line.startswith('error ')]
        return code, (lines[-1] if lines else None)
    return run


@fixture
def read_header():
    """Provenance lines (`# ` comments) of a CSV output
    """
    def read(fname):
        with open(fname) as f:
            return [line[2:].rstrip('\n') for line in f if line.startswith('# ')]
    return read


@fixture(scope='session')
def center_csv(data_dir):
    return data_dir / 'center_half.csv'


@fixture(scope='session')
def constant_csv(data_dir):
    return data_dir / 'constant.csv'
