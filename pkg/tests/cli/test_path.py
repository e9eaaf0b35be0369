"""Test latticeldp action and latticeldp minpath
"""
import numpy as np
import pytest
from latticeldp.cli.path import cmd_action, cmd_minpath
from latticeldp.paths import Path
from latticeldp.utils import read_csv, sha256_file


def test_action_constant(tmp_path, walk1d_json, constant_csv, read_header):
    out = tmp_path / 'action.csv'
    cmd_action(str(constant_csv), str(walk1d_json), out=str(out))
    row = read_csv(out).iloc[0]
    assert row.value == 0.0
    assert row.scheme == 'left-riemann'
    assert row.classification == 'E_ri'
    assert row.n_segments == 2
    assert f"path_sha256 {sha256_file(constant_csv)}" in read_header(out)


def test_action_refined(tmp_path, cw_json):
    path = tmp_path / 'path.csv'
    Path([0.0, 1.0, 2.0], [0.2, 0.5, 0.4]).to_csv(path)
    out = tmp_path / 'action.csv'
    cmd_action(str(path), str(cw_json), refine_tol=1e-3, out=str(out))
    row = read_csv(out).iloc[0]
    assert np.isfinite(row.value)
    assert row.n_refinements >= 1
    assert row.classes == 'D_bar;D_int;E;E_ri'


def test_action_inadmissible(tmp_path, walk1d_json):
    path = tmp_path / 'fast.csv'
    Path.straight_line(0.0, 1.5).to_csv(path)
    out = tmp_path / 'action.csv'
    cmd_action(str(path), str(walk1d_json), out=str(out))
    row = read_csv(out).iloc[0]
    assert np.isinf(row.value)
    assert row.classification == 'inadmissible'


def test_action_bad_path(run_cli, data_dir, walk1d_json):
    code, line = run_cli(['action', '--path', data_dir / 'non_monotone.csv', '--model', walk1d_json])
    assert code == 2
    assert line.startswith('error code=path_format exit=2')


def test_action_dimension_mismatch(run_cli, tmp_path, walk1d_json):
    path = tmp_path / 'path2d.csv'
    Path.straight_line([0.0, 0.0], [0.1, 0.1]).to_csv(path)
    code, line = run_cli(['action', '--path', path, '--model', walk1d_json])
    assert code == 2
    assert 'dimension' in line


def test_minpath_roundtrip(run_cli, tmp_path, walk1d_json, read_header):
    out_path = tmp_path / 'minpath.csv'
    out = tmp_path / 'minpath.summary.csv'
    code, _ = run_cli(['minpath', '--model', walk1d_json, '--from', '0', '--to', '0.4',
                       '--segments', 4, '--out-path', out_path, '--out', out])
    assert code == 0
    summary = read_csv(out).iloc[0]
    assert summary.value == pytest.approx(0.082283, abs=1e-6)
    assert summary.n_segments == 4
    assert read_header(out_path)[1] == 'command minpath'

    action_out = tmp_path / 'action.csv'
    cmd_action(str(out_path), str(walk1d_json), out=str(action_out))
    assert read_csv(action_out).value.iloc[0] == pytest.approx(summary.value, abs=1e-12)


def test_minpath_with_config(tmp_path, clean_gin, cw_json, config_gin, read_header):
    out_path = tmp_path / 'minpath.csv'
    out = tmp_path / 'summary.csv'
    cmd_minpath(str(cw_json), '0.2', '0.5', segments=6, out_path=str(out_path), out=str(out),
                config=str(config_gin))
    summary = read_csv(out).iloc[0]
    assert summary.n_iter <= 200
    assert f"gin include {config_gin}" in read_header(out)
    path = Path.read_csv(out_path)
    assert path.knots[0, 0] == pytest.approx(0.2)
    assert path.knots[-1, 0] == pytest.approx(0.5)
    assert path.horizon == pytest.approx(2.0)


def test_minpath_unreachable(run_cli, walk1d_json):
    code, line = run_cli(['minpath', '--model', walk1d_json, '--from', '0', '--to', '1.5'])
    assert code == 2
    assert 'code=inadmissible' in line
