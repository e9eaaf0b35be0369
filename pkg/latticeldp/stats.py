import numpy as np
import pandas as pd
from scipy.stats import norm
from statsmodels.stats.proportion import proportion_confint


def sigma_alpha(n_sigma):
    """Two-sided tail mass outside `n_sigma` standard deviations
    """
    return 2 * norm.sf(n_sigma)


def wilson_interval(count, n, alpha=0.05):
    """Wilson-score confidence interval for a binomial proportion

    Args:
      count: number of successes
      n: number of trials
      alpha: 1 - coverage

    Returns:
      (lower, upper)
    """
    if n == 0:
        return 0.0, 1.0
    lo, hi = proportion_confint(count, n, alpha=alpha, method='wilson')
    return float(lo), float(hi)


def exact_binomial_band(count, n, n_sigma=4):
    """Clopper-Pearson interval with the coverage of an `n_sigma` normal band
    """
    lo, hi = proportion_confint(count, n, alpha=sigma_alpha(n_sigma), method='beta')
    return float(np.nan_to_num(lo)), float(np.nan_to_num(hi, nan=1.0))


def normal_interval(mean, stderr, alpha=0.05):
    """Normal-approximation interval clipped to [0, 1]
    """
    z = norm.isf(alpha / 2)
    return max(0.0, mean - z * stderr), min(1.0, mean + z * stderr)


def ols_slope(x, y):
    """Fit y = a + b x by ordinary least squares

    Returns:
      pd.Series with intercept, slope and the slope's standard error
    """
    import statsmodels.api as sm
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < 2:
        return pd.Series(dict(intercept=np.nan, slope=np.nan, slope_se=np.nan))
    results = sm.OLS(y, sm.add_constant(x, has_constant='add')).fit()
    se = results.bse[1] if len(x) > 2 else np.nan
    return pd.Series(dict(intercept=results.params[0],
                          slope=results.params[1],
                          slope_se=se))


def is_nonincreasing(x, rtol=0.0, atol=0.0):
    """True if consecutive values never increase by more than atol + rtol*|prev|
    """
    x = np.asarray(x, dtype=float)
    if len(x) < 2:
        return True
    prev, nxt = x[:-1], x[1:]
    return bool(np.all(nxt <= prev + atol + rtol * np.abs(prev)))
