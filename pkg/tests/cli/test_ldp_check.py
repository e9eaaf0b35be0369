"""Test latticeldp ldp-check
"""
import numpy as np
import pytest
from latticeldp.cli.ldp_check import cmd_ldp_check
from latticeldp.utils import read_csv


def test_ldp_check(tmp_path, walk1d_json, center_csv, read_header):
    out = tmp_path / 'check.csv'
    plot = tmp_path / 'check.tsv'
    cmd_ldp_check(str(walk1d_json), str(center_csv), '0.1,0.05', budget=2000, threads=1,
                  out=str(out), plot_data=str(plot))
    df = read_csv(out)
    assert len(df) == 2
    for col in ['epsilon', 'estimator', 'p_hat', 'stderr', 'rate', 'I_ball', 'I_ball_open', 'gap']:
        assert col in df.columns
    np.testing.assert_allclose(df.epsilon, [0.1, 0.05])
    assert (df.p_hat > 0).all()
    assert df.I_ball.values == pytest.approx(0.082283, abs=2e-3)

    tsv = read_csv(plot, sep='\t')
    assert list(tsv.columns) == ['epsilon', 'rate', 'I_ball']
    np.testing.assert_allclose(tsv.rate.values, df.rate.values)

    header = read_header(out)
    assert header[1] == 'command ldp-check'
    assert 'seed 0' in header
    assert read_header(plot) == header


def test_ldp_check_bad_eps(run_cli, walk1d_json, center_csv):
    code, line = run_cli(['ldp-check', '--model', walk1d_json, '--center', center_csv,
                          '--eps', '0.05,0.1', '--budget', 100, '--threads', 1])
    assert code == 2
    assert 'kind=ValidationError' in line


def test_ldp_check_bad_rho(run_cli, walk1d_json, center_csv):
    code, line = run_cli(['ldp-check', '--model', walk1d_json, '--center', center_csv,
                          '--eps', '0.1', '--rho', 0, '--threads', 1])
    assert code == 2
    assert '--rho' in line
