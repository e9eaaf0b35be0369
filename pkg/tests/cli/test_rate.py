"""Test latticeldp rate
"""
import os
import numpy as np
import pytest
from latticeldp.cli.rate import cmd_rate
from latticeldp.exceptions import ValidationError
from latticeldp.utils import read_csv, sha256_file


def test_rate_row(tmp_path, walk1d_json, read_header):
    out = tmp_path / 'rate.csv'
    cmd_rate(str(walk1d_json), '0,0', '0.5', out=str(out))
    df = read_csv(out)
    assert len(df) == 1
    row = df.iloc[0]
    assert row.value == pytest.approx(0.130812, abs=1e-6)
    assert row.lambda1 == pytest.approx(np.arctanh(0.5), abs=1e-8)
    assert row.boundary_flag == 'interior'
    assert list(df.columns[:3]) == ['s', 'u1', 'vstar1']

    header = read_header(out)
    assert header[0].startswith('latticeldp ')
    assert header[1] == 'command rate'
    assert header[2] == f"config_sha256 {sha256_file(walk1d_json)}"
    assert 'rate.kwargs.json' in os.listdir(tmp_path)
    assert os.path.exists(tmp_path / 'log' / 'rate.log')


def test_rate_boundary_and_oracle(tmp_path, walk1d_json):
    out = tmp_path / 'rate.csv'
    cmd_rate(str(walk1d_json), '0,0', '1', oracle=True, out=str(out))
    row = read_csv(out).iloc[0]
    assert row.boundary_flag == 'relative-boundary'
    assert row.value == pytest.approx(np.log(2), abs=1e-12)
    assert row.entropy_rate == pytest.approx(np.log(2), abs=1e-12)
    assert row.oracle_grid <= row.value


def test_rate_stdout(capsys, walk1d_json):
    cmd_rate(str(walk1d_json), '0,0', '2.0')
    out = capsys.readouterr().out
    assert out.startswith('# latticeldp')
    assert 'outside-domain' in out
    assert ',inf,' in out


def test_rate_arguments(walk1d_json):
    with pytest.raises(ValidationError):
        cmd_rate(str(walk1d_json), '0', '0.5')
    with pytest.raises(ValidationError):
        cmd_rate(str(walk1d_json), '0,0', '0.5,0.1')
    with pytest.raises(ValidationError):
        cmd_rate(str(walk1d_json), '0,0', '0.5', mode='exact')


def test_rate_missing_model(run_cli, tmp_path):
    code, line = run_cli(['rate', '--model', tmp_path / 'nope.json', '--at', '0,0', '--vstar', '0.5'])
    assert code == 2
    assert line.startswith('error code=missing_file exit=2 kind=ValidationError message=')


def test_rate_unknown_key(run_cli, data_dir):
    code, line = run_cli(['rate', '--model', data_dir / 'unknown_key.json', '--at', '0,0', '--vstar', '0'])
    assert code == 2
    assert 'code=unknown_config_key' in line
    assert 'temperature' in line


def test_rate_newton_failure(run_cli, walk1d_json):
    code, line = run_cli(['rate', '--model', walk1d_json, '--at', '0,0', '--vstar', '0.9',
                          '--override', 'newton_settings.max_iter=1'])
    assert code == 3
    assert line.startswith('error code=legendre_convergence exit=3')


def test_rate_bad_override(run_cli, walk1d_json):
    code, line = run_cli(['rate', '--model', walk1d_json, '--at', '0,0', '--vstar', '0.5',
                          '--override', 'no_such_configurable.x=1'])
    assert code == 2
    assert 'code=invalid_config' in line


def test_rate_cli_ok(run_cli, tmp_path, walk1d_json):
    out = tmp_path / 'rate.csv'
    code, line = run_cli(['rate', '--model', walk1d_json, '--at', '0,0', '--vstar', '0.5',
                          '--mode', 'finite', '--out', out])
    assert code == 0
    assert line is None
    assert read_csv(out).value.iloc[0] == pytest.approx(0.130812, abs=1e-6)
