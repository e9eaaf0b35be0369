"""Rate fields: log jump weights f_ε = f⁽⁰⁾_ε + ε f⁽¹⁾_ε and their ε → 0 limit f

All evaluators take a time `s` (scalar or array broadcastable against the
point batch) and points `x` of shape (..., d) and return log-weights of
shape (..., m), one column per jump vector. Unsupported jumps are -inf.
"""
import numpy as np
from scipy.special import expit, log_expit
from latticeldp.exceptions import ValidationError
from latticeldp.utils import as_points
from latticeldp.model.lattice import JumpSet, Box, whole_space

MODES = ('finite', 'leading', 'limit')


def check_mode(mode):
    if mode not in MODES:
        raise ValidationError(f"mode has to be one of {MODES}. Got {mode}")
    return mode


class RateField:
    """Base class for rate-field plugins

    Subclasses implement `f0`, `limit` and optionally `f1`, and declare the
    regularity constants used in error bounds. Constants are upper bounds
    valid on compact sets S = [lower, upper] inside int_ε Λ.
    """
    # valid for all ε ≤ eps_max
    eps_max = np.inf
    time_homogeneous = False
    space_homogeneous = False

    def __init__(self, jump_set, domain, name=None):
        if jump_set.d != domain.d:
            raise ValidationError(f"Jump set dimension {jump_set.d} != domain dimension {domain.d}")
        self.jump_set = jump_set
        self.domain = domain
        self.name = name or type(self).__name__

    @property
    def d(self):
        return self.jump_set.d

    def f0(self, s, x, eps):
        raise NotImplementedError

    def f1(self, s, x, eps):
        x = as_points(x, self.d)
        return np.zeros(x.shape[:-1] + (self.jump_set.m,))

    def limit(self, s, x):
        raise NotImplementedError

    def log_weights(self, s, x, eps, mode='finite'):
        """Log jump weights in the given evaluation mode

        Args:
          s: macroscopic time
          x: points (..., d)
          eps: lattice scale (ignored in 'limit' mode)
          mode: 'finite' (f0 + ε f1), 'leading' (f0) or 'limit' (f)
        """
        check_mode(mode)
        if mode == 'limit':
            return self.limit(s, x)
        f0 = self.f0(s, x, eps)
        if mode == 'leading':
            return f0
        f1 = self.f1(s, x, eps)
        return np.where(np.isfinite(f0), f0 + eps * np.where(np.isfinite(f0), f1, 0.0), -np.inf)

    def weights(self, s, x, eps, mode='finite'):
        return np.exp(self.log_weights(s, x, eps, mode))

    def grad_x_log_weights(self, s, x, eps, mode='finite'):
        """Closed-form space derivative (..., m, d), or None if not available
        """
        return None

    # declared constants
    def time_lipschitz(self):
        raise NotImplementedError

    def space_lipschitz(self, lower, upper):
        raise NotImplementedError

    def f1_bound(self, lower, upper):
        return 0.0

    def positivity_floor(self, lower, upper):
        raise NotImplementedError

    def describe(self):
        return dict(name=self.name)

    def __repr__(self):
        return f"{type(self).__name__}({self.describe()})"


class SymmetricWalkField(RateField):
    """Δ = {±e_1, …, ±e_d}, g ≡ 1/(2d), Λ = R^d
    """
    time_homogeneous = True
    space_homogeneous = True

    def __init__(self, d):
        if d < 1:
            raise ValidationError(f"Symmetric walk needs dimension d >= 1. Got {d}")
        eye = np.eye(d, dtype=int)
        super().__init__(JumpSet(np.concatenate([eye, -eye])), whole_space(d),
                         name=f"symmetric_walk_{d}d")

    def _const(self, x):
        x = as_points(x, self.d)
        return np.full(x.shape[:-1] + (self.jump_set.m,), -np.log(self.jump_set.m))

    def f0(self, s, x, eps):
        return self._const(x)

    def limit(self, s, x):
        return self._const(x)

    def grad_x_log_weights(self, s, x, eps, mode='finite'):
        x = as_points(x, self.d)
        return np.zeros(x.shape[:-1] + (self.jump_set.m, self.d))

    def time_lipschitz(self):
        return 0.0

    def space_lipschitz(self, lower, upper):
        return 0.0

    def positivity_floor(self, lower, upper):
        return 1.0 / self.jump_set.m

    def describe(self):
        return dict(name=self.name, d=self.d)


class SinusoidalField:
    """External field h(s) = offset + amplitude·sin(frequency·s)
    """

    def __init__(self, offset=0.0, amplitude=0.0, frequency=1.0):
        self.offset = float(offset)
        self.amplitude = float(amplitude)
        self.frequency = float(frequency)

    def __call__(self, s):
        return self.offset + self.amplitude * np.sin(self.frequency * np.asarray(s, dtype=float))

    @property
    def sup_norm(self):
        return abs(self.offset) + abs(self.amplitude)

    @property
    def lipschitz(self):
        return abs(self.amplitude * self.frequency)

    @property
    def constant(self):
        return self.amplitude == 0.0 or self.frequency == 0.0

    def __repr__(self):
        return f"SinusoidalField(offset={self.offset}, amplitude={self.amplitude}, frequency={self.frequency})"


class FieldFunction:
    """Arbitrary bounded field h(s) with user-declared sup-norm and Lipschitz bounds
    """

    def __init__(self, fn, sup_norm, lipschitz):
        self.fn = fn
        self.sup_norm = float(sup_norm)
        self.lipschitz = float(lipschitz)
        self.constant = self.lipschitz == 0.0

    def __call__(self, s):
        return np.asarray(self.fn(np.asarray(s, dtype=float)), dtype=float)


class CurieWeissField(RateField):
    """Heat-bath (Glauber) dynamics of the mean-field Ising model in the magnetization m

    Δ = {-2, 0, +2}, Λ = [-1, 1]. With `self_interaction=True` the flipping
    spin does not see itself: the local field becomes m ± ε + h, which gives
    the rates of a finite system of N = 1/ε spins and a non-zero f⁽¹⁾.
    """
    # N >= 2 spins
    eps_max = 0.5

    def __init__(self, beta, field=None, self_interaction=False):
        if beta < 0:
            raise ValidationError(f"beta has to be >= 0. Got {beta}")
        super().__init__(JumpSet([[-2], [0], [2]]), Box([-1.0], [1.0]), name="curie_weiss")
        self.beta = float(beta)
        self.field = field if field is not None else SinusoidalField()
        self.self_interaction = bool(self_interaction)
        self.time_homogeneous = bool(self.field.constant)

    def _log_rates(self, s, m, shift_up, shift_down):
        """log of (g(-2), g(0), g(+2)) for magnetizations m (...,)
        """
        a = self.beta * (m + self.field(s))
        with np.errstate(divide='ignore'):
            log_up = np.log((1.0 - m) / 2) + log_expit(2 * (a + self.beta * shift_up))
            log_down = np.log((1.0 + m) / 2) + log_expit(-2 * (a - self.beta * shift_down))
            g_stay = 1.0 - np.exp(log_up) - np.exp(log_down)
            log_stay = np.log(np.maximum(g_stay, 0.0))
        return np.stack([log_down, log_stay, log_up], axis=-1)

    def _masked(self, out, mask):
        # mass of forbidden jumps moves to the lazy step
        if np.all(mask):
            return out
        w = np.exp(out)
        moved = np.where(mask, 0.0, w).sum(axis=-1)
        w = np.where(mask, w, 0.0)
        # outside Λ the lazy step is masked too and nothing survives
        w[..., 1] += np.where(mask[..., 1], moved, 0.0)
        with np.errstate(divide='ignore'):
            return np.log(w)

    def _magnetization(self, x):
        x = as_points(x, 1)
        return np.clip(x[..., 0], -1.0, 1.0), x

    def f0(self, s, x, eps):
        m, x = self._magnetization(x)
        out = self._log_rates(s, m, 0.0, 0.0)
        return self._masked(out, self.domain.allowed_jumps(x, eps, self.jump_set))

    def log_weights_exact(self, s, x, eps):
        """log g_ε including the self-interaction shift
        """
        m, x = self._magnetization(x)
        shift = eps if self.self_interaction else 0.0
        out = self._log_rates(s, m, shift, shift)
        return self._masked(out, self.domain.allowed_jumps(x, eps, self.jump_set))

    def f1(self, s, x, eps):
        if not self.self_interaction:
            return super().f1(s, x, eps)
        f0 = self.f0(s, x, eps)
        exact = self.log_weights_exact(s, x, eps)
        finite = np.isfinite(f0) & np.isfinite(exact)
        return np.where(finite, (np.where(finite, exact, 0.0) - np.where(finite, f0, 0.0)) / eps, 0.0)

    def log_weights(self, s, x, eps, mode='finite'):
        check_mode(mode)
        if mode == 'finite':
            return self.log_weights_exact(s, x, eps)
        return super().log_weights(s, x, eps, mode)

    def limit(self, s, x):
        m, x = self._magnetization(x)
        return self._log_rates(s, m, 0.0, 0.0)

    def drift(self, s, m):
        """Mean jump of the limit law: 2(g(+2) - g(-2))
        """
        w = np.exp(self.limit(s, m))
        return 2 * (w[..., 2] - w[..., 0])

    def _stay_floor(self):
        h = self.field.sup_norm
        return 1.0 / (1.0 + np.exp(2 * self.beta * (1.0 + h + self.eps_max)))

    def _max_abs_m(self, lower, upper):
        return float(np.max(np.abs(np.concatenate([np.atleast_1d(lower), np.atleast_1d(upper)]))))

    def time_lipschitz(self):
        hp = self.field.lipschitz
        return self.beta * hp * max(2.0, 1.0 / self._stay_floor())

    def space_lipschitz(self, lower, upper):
        m_max = self._max_abs_m(lower, upper)
        if m_max >= 1.0:
            return np.inf
        return max(1.0 / (1.0 - m_max) + 2 * self.beta,
                   (1.0 + self.beta) / self._stay_floor())

    def f1_bound(self, lower, upper):
        if not self.self_interaction:
            return 0.0
        return max(2 * self.beta, self.beta / self._stay_floor())

    def positivity_floor(self, lower, upper):
        m_max = self._max_abs_m(lower, upper)
        h = self.field.sup_norm
        flip = (1.0 - m_max) / 2 * expit(-2 * self.beta * (1.0 + h + self.eps_max))
        return float(max(min(flip, self._stay_floor()), 0.0))

    def describe(self):
        return dict(name=self.name, beta=self.beta, field=repr(self.field),
                    self_interaction=self.self_interaction)
