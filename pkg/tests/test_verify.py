"""Test the ε-sweep, convergence tables, conjugacy check and boundary probe
"""
import numpy as np
import pandas as pd
import pytest
from latticeldp.exceptions import ValidationError, DomainError
from latticeldp.paths import Path
from latticeldp.action import DescentOptions
from latticeldp.verify import (ldp_sweep, convergence_check_lagrangian, conjugacy_check,
                               boundary_cost_probe)


@pytest.fixture
def center(data_dir):
    return Path.read_csv(data_dir / 'center_half.csv')


def test_ldp_sweep(walk1d, center):
    report = ldp_sweep(walk1d, [0.1, 0.05], center, 0.1, n_samples=2000, seed=0, corrected=True)
    table = report.table
    assert list(table.epsilon) == [0.1, 0.05]
    for col in ['estimator', 'p_hat', 'stderr', 'ci_low', 'ci_high', 'n_samples', 'ess', 'rate',
                'I_ball', 'I_ball_open', 'gap', 'zero_p', 'gap_defined', 'consistent',
                'covering_entropy', 'rate_corrected']:
        assert col in table.columns, col
    assert (table.estimator == 'tilted').all()
    assert table.consistent.all()
    assert table.gap_defined.all()
    np.testing.assert_allclose(table.I_ball, 0.082283, atol=2e-3)
    np.testing.assert_allclose(table.gap, table.rate - table.I_ball)
    # η = ρ/4 on the 4-segment center grid
    np.testing.assert_allclose(table.covering_entropy, table.epsilon * 4 * (np.log(4) + 2))
    np.testing.assert_allclose(table.rate_corrected, table.rate + table.covering_entropy)
    assert list(report.plot_data().columns) == ['epsilon', 'rate', 'I_ball']
    assert report.model_id == 'symmetric_walk_1d'


def test_ldp_sweep_zero_probability(walk1d):
    # the first lattice step already leaves a tube of radius 0.005 around 0.9 t
    center = Path.straight_line(0.0, 0.9, 1.0, 4)
    report = ldp_sweep(walk1d, [0.1], center, 0.005, n_samples=1000, estimator='direct',
                       options=DescentOptions(max_iter=20))
    row = report.table.iloc[0]
    assert row.zero_p
    assert np.isinf(row.rate)
    assert not row.gap_defined
    assert np.isnan(row.gap)
    assert row.estimator == 'direct'


def test_ldp_sweep_arguments(walk1d, center):
    with pytest.raises(ValidationError):
        ldp_sweep(walk1d, [0.05, 0.1], center, 0.1, n_samples=10)
    with pytest.raises(ValidationError):
        ldp_sweep(walk1d, [0.1], center, 0.1, n_samples=10, estimator='magic')
    with pytest.raises(ValidationError):
        ldp_sweep(walk1d, [], center, 0.1, n_samples=10)
    with pytest.raises(ValidationError):
        ldp_sweep(walk1d, [0.1], center, 0.1, n_samples=10, threads=0)


def test_ldp_sweep_threads(clean_gin, walk1d, center):
    tables = [ldp_sweep(walk1d, [0.1, 0.05, 0.025], center, 0.1, n_samples=2000, seed=3, threads=threads).table
              for threads in [1, 2, 4]]
    # row i always uses seed + i
    pd.testing.assert_frame_equal(tables[0], tables[1])
    pd.testing.assert_frame_equal(tables[0], tables[2])
    single = ldp_sweep(walk1d, [0.05], center, 0.1, n_samples=2000, seed=4).table
    pd.testing.assert_frame_equal(single, tables[0].iloc[[1]].reset_index(drop=True))


def test_convergence_check(cw_field):
    res = convergence_check_lagrangian(cw_field, [0.1, 0.05, 0.025], lower=-0.5, upper=0.5,
                                       s_grid=(0.0, 0.5))
    table = res.table
    assert len(table) == 3
    assert (table.sup_L > 0).all()
    assert res.monotone()
    assert res.slope_L.slope > 0
    # finite-size corrections are O(ε)
    assert 2.5 < table.sup_L.iloc[0] / table.sup_L.iloc[-1] < 6


def test_convergence_check_outside_interior(cw_field):
    with pytest.raises(ValidationError):
        convergence_check_lagrangian(cw_field, [0.1], lower=-1.0, upper=0.5)


def test_conjugacy_unregularized(walk1d):
    report = conjugacy_check(walk1d, 0.0, [(0.0, 0.0, 0.5), (0.0, 0.0, -0.3)])
    assert report.max_discrepancy <= 1e-6
    assert report.space_step == 0.0
    assert list(report.table.columns) == ['s', 'u1', 'vstar1', 'lhs', 'rhs', 'discrepancy']


def test_conjugacy_regularized(cw_field):
    report = conjugacy_check(cw_field, 0.01, [(0.5, 0.2, 0.4), (0.1, -0.3, -0.6)])
    assert report.max_discrepancy <= 5e-3
    assert (report.table.lhs <= report.table.rhs + 1e-6).all()
    assert report.space_step == pytest.approx(1e-3)
    with pytest.raises(ValidationError):
        conjugacy_check(cw_field, -0.1, [(0.5, 0.2, 0.4)])


def test_conjugacy_curie_weiss(cw):
    rng = np.random.RandomState(0)
    points = [(0.0, u, v) for u, v in zip(rng.uniform(-0.7, 0.7, 20), rng.uniform(-1.5, 1.5, 20))]
    report = conjugacy_check(cw, 0.05, points, v_step=1e-3)
    assert len(report.table) == 20
    assert report.space_step == pytest.approx(1e-3)
    assert report.max_discrepancy <= 5e-3
    assert (report.table.lhs <= report.table.rhs + 1e-6).all()


def test_boundary_cost_probe(cw):
    df = boundary_cost_probe(cw, 0.0, [0.9, 0.99, 0.999])
    assert list(df.columns) == ['u1', 'dist', 'L_star', 'product']
    np.testing.assert_allclose(df.dist, [0.1, 0.01, 0.001], rtol=1e-9)
    assert np.all(np.isfinite(df.L_star))
    assert np.all(np.diff(df['product']) < 0)


def test_boundary_cost_probe_errors(cw, walk1d):
    with pytest.raises(ValidationError):
        boundary_cost_probe(walk1d, 0.0, [0.5])
    with pytest.raises(DomainError) as e:
        boundary_cost_probe(cw, 0.0, [0.5, 1.0])
    assert e.value.index == 1


@pytest.mark.slow
def test_ldp_sweep_approaches_ball_infimum(walk1d, center):
    report = ldp_sweep(walk1d, [1 / 50, 1 / 100, 1 / 200, 1 / 400], center, 0.1, n_samples=10 ** 6,
                       seed=42, threads=2, estimator='tilted')
    table = report.table
    assert table.gap_defined.all()
    assert (table.estimator == 'tilted').all()
    assert (table.stderr < table.p_hat).all()
    np.testing.assert_allclose(table.I_ball, 0.082283, atol=2e-3)
    assert abs(table.gap.iloc[-1]) <= 0.05
    # the last two halvings
    assert report.gap_trend(n_last=3)
