"""Piecewise-linear macroscopic paths
"""
import numpy as np
import pandas as pd
import attr
from latticeldp.exceptions import ValidationError
from latticeldp.utils import write_csv, read_csv


def _as_times(x):
    return np.atleast_1d(np.asarray(x, dtype=float)).copy()


def _as_knots(x):
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[:, np.newaxis]
    return x.copy()


@attr.s(frozen=True, eq=False)
class Path:
    """Piecewise-linear path through `knots` at grid `times`

    Attributes:
      times: strictly increasing grid 0 = t_0 < ... < t_n = T
      knots: array (n + 1, d)
    """
    times = attr.ib(converter=_as_times)
    knots = attr.ib(converter=_as_knots)

    def __attrs_post_init__(self):
        t = self.times
        if len(t) < 2:
            raise ValidationError(f"A path needs at least two grid times. Got {len(t)}", code="path_format")
        if t[0] != 0.0:
            raise ValidationError(f"Path grid has to start at t=0. Got {t[0]}", code="path_format")
        if np.any(np.diff(t) <= 0):
            bad = int(np.where(np.diff(t) <= 0)[0][0]) + 1
            raise ValidationError(f"Path times have to be strictly increasing (row {bad})", code="path_format")
        if self.knots.ndim != 2 or len(self.knots) != len(t):
            raise ValidationError(f"Expected {len(t)} knots. Got shape {self.knots.shape}", code="path_format")
        if not np.all(np.isfinite(self.knots)) or not np.all(np.isfinite(t)):
            raise ValidationError("Path contains non-finite values", code="path_format")

    @property
    def d(self):
        return self.knots.shape[1]

    @property
    def n_segments(self):
        return len(self.times) - 1

    @property
    def horizon(self):
        return float(self.times[-1])

    @property
    def dt(self):
        return np.diff(self.times)

    @property
    def velocities(self):
        """Segment velocities (n, d)
        """
        return np.diff(self.knots, axis=0) / self.dt[:, np.newaxis]

    def evaluate(self, t):
        """Path value at times t (scalar or array) -> (..., d)
        """
        t = np.asarray(t, dtype=float)
        if np.any(t < -1e-12) or np.any(t > self.horizon + 1e-12):
            raise ValidationError(f"Evaluation times have to lie in [0, {self.horizon}]")
        out = np.stack([np.interp(t, self.times, self.knots[:, k]) for k in range(self.d)], axis=-1)
        return out

    def refine(self, k=2):
        """Split every segment into k equal pieces; the function is unchanged
        """
        if k < 1:
            raise ValidationError(f"Refinement factor has to be >= 1. Got {k}")
        frac = np.arange(k) / k
        times = (self.times[:-1, np.newaxis] + frac * self.dt[:, np.newaxis]).ravel()
        times = np.append(times, self.horizon)
        return Path(times, self.evaluate(times))

    def with_knots(self, knots):
        return Path(self.times, knots)

    def sup_distance(self, other):
        """sup_t ‖self(t) − other(t)‖, exact for piecewise-linear pairs
        """
        if abs(self.horizon - other.horizon) > 1e-12:
            raise ValidationError(f"Paths have different horizons {self.horizon} and {other.horizon}")
        t = np.union1d(self.times, other.times)
        return float(np.max(np.linalg.norm(self.evaluate(t) - other.evaluate(t), axis=-1)))

    @classmethod
    def straight_line(cls, start, end, horizon=1.0, n_segments=1):
        start = np.atleast_1d(np.asarray(start, dtype=float))
        end = np.atleast_1d(np.asarray(end, dtype=float))
        frac = np.linspace(0, 1, n_segments + 1)[:, np.newaxis]
        return cls(frac[:, 0] * horizon, start + frac * (end - start))

    @classmethod
    def from_function(cls, fn, times):
        times = _as_times(times)
        return cls(times, np.array([np.atleast_1d(fn(t)) for t in times], dtype=float))

    @property
    def columns(self):
        return ['t'] + [f"x{k + 1}" for k in range(self.d)]

    def to_frame(self):
        return pd.DataFrame(np.concatenate([self.times[:, np.newaxis], self.knots], axis=1),
                            columns=self.columns)

    def to_csv(self, fname, header_lines=()):
        write_csv(self.to_frame(), fname, header_lines=header_lines)

    @classmethod
    def from_frame(cls, df):
        cols = list(df.columns)
        d = len(cols) - 1
        if d < 1 or cols != ['t'] + [f"x{k + 1}" for k in range(d)]:
            raise ValidationError(f"Path table needs columns t,x1,...,xd. Got {cols}", code="path_format")
        try:
            values = df.values.astype(float)
        except ValueError as e:
            raise ValidationError(f"Path table contains non-numeric entries: {e}", code="path_format")
        return cls(values[:, 0], values[:, 1:])

    @classmethod
    def read_csv(cls, fname):
        return cls.from_frame(read_csv(fname))

    def __repr__(self):
        return f"Path(n_segments={self.n_segments}, d={self.d}, T={self.horizon})"


def chord_velocities(path):
    """Chord velocities (φ(t_j) − φ(t_i)) / (t_j − t_i) for all grid pairs i < j

    Returns:
      (i, j, velocities) with velocities of shape (n_pairs, d)
    """
    i, j = np.triu_indices(len(path.times), k=1)
    dt = (path.times[j] - path.times[i])[:, np.newaxis]
    return i, j, (path.knots[j] - path.knots[i]) / dt
