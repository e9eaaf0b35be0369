"""Test paths, admissibility, the action functional and its minimization
"""
import numpy as np
import pytest
from scipy.optimize import brentq
from latticeldp.exceptions import ValidationError, DomainError
from latticeldp.paths import Path, chord_velocities
from latticeldp.legendre import hull_position, OUTSIDE
from latticeldp.action import (admissibility, action, action_gradient, minimize_action,
                               ball_infimum, mean_flow_path, DescentOptions)

L_STAR_04 = 0.082283


def walk_rate(v):
    return (1 + v) / 2 * np.log1p(v) + (1 - v) / 2 * np.log1p(-v)


# --------------------------------------------
# paths


def test_path_validation(data_dir):
    with pytest.raises(ValidationError) as e:
        Path.read_csv(data_dir / 'non_monotone.csv')
    assert e.value.code == 'path_format'
    with pytest.raises(ValidationError):
        Path([0.1, 1.0], [0.0, 0.0])
    with pytest.raises(ValidationError):
        Path([0.0, 1.0], [0.0, 0.5, 1.0])
    with pytest.raises(ValidationError):
        Path([0.0], [0.0])
    with pytest.raises(ValidationError):
        Path([0.0, 1.0], [0.0, np.nan])


def test_path_csv(data_dir, tmp_path):
    path = Path.read_csv(data_dir / 'constant.csv')
    assert path.d == 1
    assert path.n_segments == 2
    np.testing.assert_array_equal(path.velocities, 0.0)

    path = Path([0.0, 0.3, 1.0], [[0.1, -0.2], [1 / 3, 0.7], [0.0, 0.0]])
    path.to_csv(tmp_path / 'path.csv', header_lines=['comment'])
    reread = Path.read_csv(tmp_path / 'path.csv')
    np.testing.assert_array_equal(reread.times, path.times)
    np.testing.assert_array_equal(reread.knots, path.knots)
    assert reread.columns == ['t', 'x1', 'x2']


def test_path_geometry():
    path = Path([0.0, 0.5, 1.0], [0.0, 0.5, 0.0])
    np.testing.assert_allclose(path.velocities[:, 0], [1.0, -1.0])
    assert path.evaluate(0.25)[0] == pytest.approx(0.25)
    fine = path.refine(4)
    assert fine.n_segments == 8
    assert fine.sup_distance(path) == pytest.approx(0.0, abs=1e-15)
    assert Path([0.0, 1.0], [0.0, 0.0]).sup_distance(path) == pytest.approx(0.5)
    with pytest.raises(ValidationError):
        path.evaluate(1.5)
    i, j, v = chord_velocities(path)
    assert len(v) == 3
    assert v[(i == 0) & (j == 2)][0, 0] == pytest.approx(0.0)


# --------------------------------------------
# admissibility


def test_admissibility_walk(walk1d):
    assert admissibility(Path.straight_line(0.0, 0.5), walk1d).classification == 'E_ri'
    adm = admissibility(Path([0.0, 0.5, 1.0], [0.0, 0.5, 0.6]), walk1d)
    assert adm.classification == 'E'
    assert adm.D_bar and adm.D_int
    adm = admissibility(Path([0.0, 0.5, 1.0], [0.0, 0.75, 0.6]), walk1d)
    assert adm.classification == 'inadmissible'
    assert adm.classes == []


def test_admissibility_domain_boundary(cw):
    # velocity 2 is the vertex of conv Δ; the end knot sits on ∂Λ
    adm = admissibility(Path([0.0, 0.25], [0.5, 1.0]), cw)
    assert adm.classification == 'E'
    assert adm.classes == ['D_bar', 'E']
    # leaving Λ
    adm = admissibility(Path([0.0, 0.25], [0.8, 1.3]), cw)
    assert not adm.D_bar


@pytest.mark.parametrize("n_paths", [30, pytest.param(1000, marks=pytest.mark.slow)])
def test_admissibility_matches_chords(walk2d, n_paths):
    rng = np.random.RandomState(3)
    jumps = walk2d.jump_set.float_vectors
    for _ in range(n_paths):
        times = np.concatenate([[0.0], np.cumsum(rng.uniform(0.1, 0.3, size=4))])
        path = Path(times, np.cumsum(np.concatenate([[[0.0, 0.0]],
                                                     rng.uniform(-0.3, 0.3, size=(4, 2))]), axis=0))
        _, _, chords = chord_velocities(path)
        in_hull = all(hull_position(jumps, v)[0] != OUTSIDE for v in chords)
        assert admissibility(path, walk2d).E == in_hull


@pytest.mark.parametrize("name", ["walk1d", "walk2d", "cw"])
def test_sampled_paths_admissible(request, name):
    from latticeldp.simulate import sample_chains
    spec = request.getfixturevalue(name)
    for traj in sample_chains(spec, 5, seed=11):
        adm = admissibility(traj.to_path(), spec)
        assert adm.E
        assert adm.classification in ("E", "E_ri")


# --------------------------------------------
# action


def test_action_constant(data_dir, walk1d):
    res = action(Path.read_csv(data_dir / 'constant.csv'), walk1d)
    assert res.value == pytest.approx(0.0, abs=1e-15)
    assert res.scheme == 'left-riemann'


def test_action_straight_line(walk1d):
    res = action(Path.straight_line(0.0, 0.5, 1.0, 4), walk1d)
    assert res.value == pytest.approx(walk_rate(0.5), abs=1e-9)
    assert res.value == pytest.approx(0.130812, abs=1e-6)
    assert len(res.contributions) == 4
    assert res.error_bound == 0.0


def test_action_inadmissible(walk1d):
    res = action(Path.straight_line(0.0, 1.5), walk1d)
    assert np.isinf(res.value)
    assert not res.is_finite
    with pytest.raises(ValidationError):
        action(Path.straight_line([0.0, 0.0], [0.1, 0.1]), walk1d)


def test_action_refinement(cw):
    path = Path([0.0, 0.5, 1.0], [0.2, 0.4, 0.3])
    coarse = action(path, cw)
    fine = action(path, cw, refine_tol=1e-6, max_refine=4)
    assert fine.n_refinements >= 1
    assert np.isfinite(fine.value)
    assert np.isfinite(coarse.error_bound) and coarse.error_bound > 0


@pytest.mark.parametrize("name", ["walk1d", "walk2d"])
def test_action_jensen(request, name):
    spec = request.getfixturevalue(name)
    rng = np.random.RandomState(5)
    for _ in range(20):
        times = np.concatenate([[0.0], np.cumsum(rng.uniform(0.05, 0.4, size=5))])
        # |v1| + |v2| < 1 keeps the velocities inside the diamond
        v = rng.uniform(-0.45, 0.45, size=(5, spec.d))
        knots = np.cumsum(np.concatenate([np.zeros((1, spec.d)), np.diff(times)[:, None] * v]), axis=0)
        path = Path(times, knots)
        chord = Path.straight_line(knots[0], knots[-1], times[-1], 1)
        assert action(chord, spec).value <= action(path, spec).value + 1e-12


@pytest.mark.parametrize("k", [2, 3, 7])
def test_action_refinement_exact(walk2d, k):
    path = Path([0.0, 0.3, 0.5, 1.0], [[0.0, 0.0], [0.2, -0.1], [0.1, 0.05], [0.4, 0.3]])
    base = action(path, walk2d)
    fine = action(path.refine(k), walk2d)
    assert fine.value == pytest.approx(base.value, rel=1e-12)
    assert base.error_bound == 0.0
    res = action(path, walk2d, refine_tol=1e-12)
    assert res.n_refinements == 1
    assert res.value == pytest.approx(base.value, rel=1e-12)


def test_action_gradient(cw):
    path = Path(np.linspace(0, 1, 5), [0.2, 0.3, 0.25, 0.4, 0.35])
    grad = action_gradient(path, cw)
    assert grad.shape == (3, 1)
    h = 1e-5
    fd = np.zeros_like(grad)
    for j in range(1, 4):
        up, down = path.knots.copy(), path.knots.copy()
        up[j] += h
        down[j] -= h
        fd[j - 1] = (action(path.with_knots(up), cw).value -
                     action(path.with_knots(down), cw).value) / (2 * h)
    np.testing.assert_allclose(grad, fd, rtol=1e-5, atol=1e-7)


def test_action_gradient_boundary_velocity(walk1d):
    with pytest.raises(ValidationError) as e:
        action_gradient(Path([0.0, 0.5, 1.0], [0.0, 0.5, 0.6]), walk1d)
    assert e.value.code == 'inadmissible'


# --------------------------------------------
# minimization


def test_minimize_chord(walk1d):
    res = minimize_action(walk1d, 0.0, 0.4, n_segments=4)
    assert res.converged
    assert res.value == pytest.approx(L_STAR_04, abs=1e-6)
    np.testing.assert_allclose(res.path.knots[:, 0], np.linspace(0, 0.4, 5), atol=1e-8)


def test_minimize_improves_on_chord(cw):
    options = DescentOptions(max_iter=50)
    res = minimize_action(cw, 0.2, 0.5, n_segments=8, options=options)
    chord = action(Path.straight_line(0.2, 0.5, cw.horizon, 8), cw)
    assert res.value <= chord.value + 1e-12
    assert res.path.knots[0, 0] == pytest.approx(0.2)
    assert res.path.knots[-1, 0] == pytest.approx(0.5)


def test_minimize_errors(walk1d, cw):
    with pytest.raises(ValidationError) as e:
        minimize_action(walk1d, 0.0, 1.5, n_segments=2)
    assert e.value.code == 'inadmissible'
    with pytest.raises(DomainError):
        minimize_action(cw, 0.0, 1.2, n_segments=2)
    with pytest.raises(ValidationError):
        minimize_action(walk1d, 0.0, 0.4, n_segments=0)


def test_minimize_between_wells(cw):
    m_star = brentq(lambda m: np.tanh(2.0 * m) - m, 0.1, 1.0, xtol=1e-15)
    res = minimize_action(cw, m_star, -m_star, n_segments=16, options=DescentOptions(max_iter=100))
    chord = action(Path.straight_line(m_star, -m_star, cw.horizon, 16), cw)
    # leaving a stable point against the flow costs a positive action
    assert 1e-3 < res.value <= chord.value + 1e-12
    assert res.path.knots[0, 0] == pytest.approx(m_star)
    assert res.path.knots[-1, 0] == pytest.approx(-m_star)
    assert admissibility(res.path, cw).E_ri


def test_ball_infimum(data_dir, walk1d):
    center = Path.read_csv(data_dir / 'center_half.csv')
    res = ball_infimum(walk1d, center, 0.1, options=DescentOptions(max_iter=200))
    # every path in the ball ends at x >= 0.4, so Jensen bounds the action by L*(0.4)
    assert res.value >= L_STAR_04 - 1e-6
    assert res.value == pytest.approx(L_STAR_04, abs=2e-3)
    assert res.active
    assert res.path.knots[-1, 0] == pytest.approx(0.4, abs=1e-3)
    assert np.max(np.abs(res.path.knots - center.knots)) <= 0.1 + 1e-12

    opened = ball_infimum(walk1d, center, 0.1, options=DescentOptions(max_iter=200), open_ball=True)
    assert opened.radius < 0.1
    assert opened.value >= L_STAR_04 - 1e-6


def test_ball_infimum_infeasible(data_dir, walk1d):
    center = Path.read_csv(data_dir / 'center_half.csv')
    shifted = center.with_knots(center.knots + 0.5)
    res = ball_infimum(walk1d, shifted, 0.1)
    assert np.isinf(res.value)
    assert res.path is None
    # center too fast to follow
    fast = Path.straight_line(0.0, 1.5, 1.0, 4)
    assert np.isinf(ball_infimum(walk1d, fast, 0.1).value)
    with pytest.raises(ValidationError):
        ball_infimum(walk1d, center, 0.0)


def test_ball_infimum_monotone_in_radius(data_dir, walk1d):
    center = Path.read_csv(data_dir / 'center_half.csv')
    options = DescentOptions(max_iter=200)
    values = [ball_infimum(walk1d, center, rho, options=options).value for rho in [0.05, 0.1, 0.2, 0.6]]
    assert np.all(np.diff(values) <= 1e-6)
    assert values[0] == pytest.approx(walk_rate(0.45), abs=2e-3)
    # the constant path fits in the widest ball
    assert values[-1] == pytest.approx(0.0, abs=1e-6)


def test_ball_infimum_waiting_center(walk1d):
    # the center waits, then moves at speed 2; a greedy knot-by-knot start falls behind
    center = Path([0.0, 0.25, 0.5], [0.0, 0.0, 0.5])
    rho = 0.13
    explicit = action(center.with_knots([0.0, rho, 0.375]), walk1d).value
    assert explicit == pytest.approx(0.1948, abs=1e-3)
    res = ball_infimum(walk1d, center, rho, options=DescentOptions(max_iter=300))
    assert np.isfinite(res.value)
    assert res.value <= explicit + 1e-9
    # best path: first knot at the ball edge, end knot as far back as the speed limit allows
    best = 0.25 * (walk_rate(0.52) + walk_rate(0.96))
    assert res.value >= best - 1e-6
    assert res.value == pytest.approx(best, abs=1e-3)
    assert np.max(np.abs(res.path.knots - center.knots)) <= rho + 1e-12
    assert admissibility(res.path, walk1d).E


def test_ball_infimum_round_ball(walk2d):
    # feasible only with the round ball: |dx| >= 0.5 - 2 rho just fits under 0.25
    center = Path([0.0, 0.25, 0.5], [[0.0, 0.0], [0.0, 0.0], [0.5, 0.0]])
    rho = 0.1253
    res = ball_infimum(walk2d, center, rho, options=DescentOptions(max_iter=50))
    assert np.isfinite(res.value)
    assert np.max(np.linalg.norm(res.path.knots - center.knots, axis=1)) <= rho + 1e-12
    assert admissibility(res.path, walk2d).E
    assert np.isinf(ball_infimum(walk2d, center, 0.124).value)


# --------------------------------------------
# zero-cost flow


def test_mean_flow_zero_cost(cw):
    path = mean_flow_path(cw, record_every=100)
    assert path.horizon == pytest.approx(cw.horizon)
    assert path.knots[0, 0] == pytest.approx(0.2)
    # flows towards the positive fixed point of m = tanh(2m)
    assert path.knots[-1, 0] > path.knots[0, 0]
    assert action(path, cw).value <= 1e-3


def test_fixed_point_is_free(cw):
    m_star = brentq(lambda m: np.tanh(2.0 * m) - m, 0.1, 1.0, xtol=1e-15)
    path = mean_flow_path(cw, start=m_star, horizon=1.0, step=1e-3, record_every=100)
    np.testing.assert_allclose(path.knots[:, 0], m_star, atol=1e-8)
    constant = Path([0.0, 0.5, 1.0], [m_star] * 3)
    assert action(constant, cw).value <= 1e-10


def test_mean_flow_walk(walk1d):
    path = mean_flow_path(walk1d, step=0.1)
    np.testing.assert_allclose(path.knots, 0.0, atol=1e-15)
    with pytest.raises(ValidationError):
        mean_flow_path(walk1d, step=0.0)
