"""Test IO helpers, statistics and random streams
"""
import numpy as np
import pandas as pd
import pytest
from scipy.special import logsumexp
from latticeldp.exceptions import ValidationError
from latticeldp.utils import write_csv, read_csv, parse_float_list, as_points, default_threads, sha256_file
from latticeldp.stats import (wilson_interval, exact_binomial_band, normal_interval, ols_slope,
                              is_nonincreasing, sigma_alpha)
from latticeldp.samplers import get_block_sizes, stream_rng, categorical_draw, mc_block_size
from latticeldp.functions import softmax, masked_logsumexp


def test_csv_roundtrip(tmp_path):
    df = pd.DataFrame(dict(a=[1 / 3, np.pi, 1e-300], b=['x', 'y', 'z']))
    fname = tmp_path / 'sub' / 'table.csv'
    write_csv(df, fname, header_lines=['latticeldp 0.1.0', 'seed=1'])
    lines = fname.read_text().splitlines()
    assert lines[0] == '# latticeldp 0.1.0'
    assert lines[2] == 'a,b'
    out = read_csv(fname)
    np.testing.assert_array_equal(out.a.values, df.a.values)
    assert list(out.b) == ['x', 'y', 'z']
    assert len(sha256_file(fname)) == 64


def test_tsv(tmp_path):
    df = pd.DataFrame(dict(epsilon=[0.1, 0.05], rate=[0.2, np.inf]))
    write_csv(df, tmp_path / 'plot.tsv', sep='\t')
    out = read_csv(tmp_path / 'plot.tsv', sep='\t')
    assert np.isinf(out.rate.iloc[1])


def test_read_csv_missing(tmp_path):
    with pytest.raises(ValidationError) as e:
        read_csv(tmp_path / 'nothing.csv')
    assert e.value.code == 'missing_file'


def test_parse_float_list():
    np.testing.assert_array_equal(parse_float_list("0.1,0.2"), [0.1, 0.2])
    np.testing.assert_array_equal(parse_float_list("0,0.5", n=2), [0.0, 0.5])
    np.testing.assert_array_equal(parse_float_list([1, 2]), [1.0, 2.0])
    with pytest.raises(ValidationError):
        parse_float_list("0.1,abc")
    with pytest.raises(ValidationError):
        parse_float_list("0.1", n=2)


def test_as_points():
    assert as_points(0.5, 1).shape == (1,)
    assert as_points([0.1, 0.2, 0.3], 1).shape == (3, 1)
    assert as_points([[0.1, 0.2]], 2).shape == (1, 2)
    with pytest.raises(ValidationError):
        as_points([0.1, 0.2, 0.3], 2)


def test_default_threads(monkeypatch):
    monkeypatch.setenv('LATTICELDP_THREADS', '3')
    assert default_threads() == 3
    monkeypatch.setenv('LATTICELDP_THREADS', 'many')
    with pytest.raises(ValidationError):
        default_threads()
    monkeypatch.setenv('LATTICELDP_THREADS', '0')
    with pytest.raises(ValidationError):
        default_threads()
    monkeypatch.delenv('LATTICELDP_THREADS')
    assert default_threads() >= 1


# --------------------------------------------
# statistics


def test_intervals():
    lo, hi = wilson_interval(10, 100)
    assert lo < 0.1 < hi
    assert wilson_interval(0, 100)[0] == pytest.approx(0.0, abs=1e-12)
    assert wilson_interval(0, 0) == (0.0, 1.0)
    lo, hi = exact_binomial_band(0, 50)
    assert lo == 0.0 and 0 < hi < 1
    assert exact_binomial_band(50, 50)[1] == 1.0
    assert normal_interval(0.01, 0.1) == (0.0, pytest.approx(0.01 + 1.959963984540054 * 0.1))
    assert sigma_alpha(4) == pytest.approx(6.334248366623996e-05)


def test_ols_slope():
    x = np.array([0.1, 0.05, 0.025])
    fit = ols_slope(x, 2 * x + 1)
    assert fit.slope == pytest.approx(2)
    assert fit.intercept == pytest.approx(1)
    assert np.isnan(ols_slope([1.0], [2.0]).slope)
    assert np.isnan(ols_slope([1.0, 2.0], [2.0, 3.0]).slope_se)


def test_is_nonincreasing():
    assert is_nonincreasing([3, 2, 2, 1])
    assert not is_nonincreasing([3, 2, 2.1])
    assert is_nonincreasing([3, 2, 2.1], rtol=0.1)
    assert is_nonincreasing([1.0])


# --------------------------------------------
# random streams


def test_block_sizes(clean_gin):
    np.testing.assert_array_equal(get_block_sizes(10, 4), [4, 4, 2])
    np.testing.assert_array_equal(get_block_sizes(8, 4), [4, 4])
    with pytest.raises(ValidationError):
        get_block_sizes(0, 4)
    assert mc_block_size() == 8192
    with pytest.raises(ValidationError):
        mc_block_size(0)


def test_stream_rng():
    a = stream_rng(1, 0).random(5)
    np.testing.assert_array_equal(a, stream_rng(1, 0).random(5))
    assert not np.array_equal(a, stream_rng(1, 1).random(5))
    assert not np.array_equal(a, stream_rng(2, 0).random(5))
    with pytest.raises(ValidationError):
        stream_rng(-1, 0)


def test_categorical_draw():
    probs = np.array([[0.2, 0.0, 0.8]] * 4)
    idx = categorical_draw(probs, np.array([0.0, 0.1999, 0.2001, 0.999999999]))
    np.testing.assert_array_equal(idx, [0, 0, 2, 2])
    # u·total rounding onto the total never selects a trailing zero-probability column
    probs = np.array([[0.5, 0.5, 0.0]])
    assert categorical_draw(probs, np.array([1.0]))[0] == 1
    rng = stream_rng(0, 0)
    probs = np.array([[0.25, 0.25, 0.5]] * 100000)
    counts = np.bincount(categorical_draw(probs, rng.random(100000)), minlength=3) / 100000
    np.testing.assert_allclose(counts, [0.25, 0.25, 0.5], atol=0.01)


def test_masked_logsumexp():
    x = np.array([[np.log(0.25), -np.inf, np.log(0.75)], [-np.inf] * 3])
    out = masked_logsumexp(x, axis=-1)
    assert out[0] == pytest.approx(0.0, abs=1e-15)
    assert np.isneginf(out[1])
    y = np.random.RandomState(0).normal(size=(4, 5))
    np.testing.assert_allclose(masked_logsumexp(y, axis=-1), logsumexp(y, axis=-1))
    p = softmax(x[0])
    np.testing.assert_allclose(p, [0.25, 0.0, 0.75])
