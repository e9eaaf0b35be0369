"""Jump sets and convex state domains
"""
from functools import reduce
from math import gcd
import numpy as np
import attr
from latticeldp.exceptions import ValidationError
from latticeldp.utils import as_points
import logging
logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())


def _int_vectors(vectors):
    arr = np.asarray(vectors)
    if arr.ndim == 1:
        arr = arr[:, np.newaxis]
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise ValidationError(f"Jump set has to be a non-empty list of d-vectors. Got shape {arr.shape}")
    as_int = np.rint(arr).astype(np.int64)
    if not np.all(as_int == arr):
        raise ValidationError("Jump vectors have to be integer lattice vectors")
    return as_int


@attr.s(frozen=True, eq=False)
class JumpSet:
    """Finite set Δ of integer lattice displacements

    Attributes:
      vectors: integer array of shape (m, d)
    """
    vectors = attr.ib(converter=_int_vectors)

    def __attrs_post_init__(self):
        v = self.vectors
        if len({tuple(row) for row in v.tolist()}) != len(v):
            raise ValidationError(f"Jump set contains duplicate vectors: {v.tolist()}")
        centered = v - v.mean(axis=0)
        rank = np.linalg.matrix_rank(centered) if len(v) > 1 else 0
        if rank != self.d:
            raise ValidationError(f"conv Δ has affine dimension {rank}, expected {self.d}")

    @property
    def d(self):
        return self.vectors.shape[1]

    @property
    def m(self):
        return self.vectors.shape[0]

    @property
    def float_vectors(self):
        return self.vectors.astype(float)

    @property
    def diameter(self):
        v = self.float_vectors
        diff = v[:, np.newaxis, :] - v[np.newaxis, :, :]
        return float(np.sqrt((diff ** 2).sum(-1)).max())

    @property
    def barycenter(self):
        return self.float_vectors.mean(axis=0)

    @property
    def spacing(self):
        """Per-axis spacing of the integer lattice Γ generated by the jump coordinates
        """
        return np.array([reduce(gcd, [abs(int(c)) for c in self.vectors[:, k]])
                         for k in range(self.d)], dtype=np.int64)

    def index(self, delta):
        """Row index of jump `delta`
        """
        delta = np.atleast_1d(np.asarray(delta))
        hits = np.where((self.vectors == delta).all(axis=1))[0]
        if len(hits) == 0:
            raise ValidationError(f"{delta.tolist()} is not in the jump set")
        return int(hits[0])

    def __len__(self):
        return self.m

    def __repr__(self):
        return f"JumpSet({self.vectors.tolist()})"


def lattice_spacing(jump_set):
    """Per-axis spacing of Γ; the chain lives on Λ ∩ εΓ
    """
    return jump_set.spacing


class Domain:
    """Convex polyhedral domain Λ = {x : A x ≤ b}

    An empty constraint set represents Λ = R^d.
    """

    def __init__(self, A, b):
        A = np.asarray(A, dtype=float)
        b = np.asarray(b, dtype=float)
        if A.ndim != 2 or b.shape != (A.shape[0],):
            raise ValidationError(f"Half-space representation needs A (k, d) and b (k,). Got {A.shape}, {b.shape}")
        norms = np.linalg.norm(A, axis=1)
        if np.any(norms == 0):
            raise ValidationError("Half-space normals have to be non-zero")
        self.A = A
        self.b = b
        self._norms = norms

    @property
    def d(self):
        return self.A.shape[1]

    @property
    def is_whole_space(self):
        return self.A.shape[0] == 0

    def slack(self, x):
        """b - A x for every constraint, shape (..., k)
        """
        x = as_points(x, self.d)
        return self.b - x @ self.A.T

    def contains(self, x, tol=1e-12):
        x = as_points(x, self.d)
        if self.is_whole_space:
            return np.ones(x.shape[:-1], dtype=bool)
        return np.all(self.slack(x) >= -tol, axis=-1)

    def dist_to_complement(self, x):
        """dist(x, Λᶜ); 0 on the boundary and outside, +inf for Λ = R^d
        """
        x = as_points(x, self.d)
        if self.is_whole_space:
            return np.full(x.shape[:-1], np.inf)
        return np.maximum(np.min(self.slack(x) / self._norms, axis=-1), 0.0)

    def in_interior(self, x, tol=1e-12):
        return self.dist_to_complement(x) > tol

    def allowed_jumps(self, x, eps, jump_set):
        """Mask (..., m) of δ with x ∈ Λ^(δ,ε), i.e. x + εδ ∈ Λ
        """
        x = as_points(x, self.d)
        y = x[..., np.newaxis, :] + eps * jump_set.float_vectors
        return self.contains(y) & self.contains(x)[..., np.newaxis]

    def eps_interior(self, x, eps, jump_set):
        """Membership in int_ε Λ = {x : x + εδ ∈ Λ for all δ ∈ Δ}
        """
        return self.allowed_jumps(x, eps, jump_set).all(axis=-1)

    def limit_allowed_jumps(self, x, jump_set, tol=1e-12):
        """Mask (..., m) of δ with x ∈ Λ^(δ), i.e. x + εδ ∈ Λ for some ε > 0
        """
        x = as_points(x, self.d)
        inside = self.contains(x, tol)[..., np.newaxis]
        if self.is_whole_space:
            return np.broadcast_to(inside, x.shape[:-1] + (jump_set.m,)).copy()
        active = np.abs(self.slack(x)) <= tol                       # (..., k)
        outward = (jump_set.float_vectors @ self.A.T) > tol          # (m, k)
        blocked = (active[..., np.newaxis, :] & outward).any(axis=-1)
        return inside & ~blocked

    def project_interior(self, x, margin=0.0, n_sweeps=50):
        """Move points into {x : dist(x, Λᶜ) ≥ margin} by cyclic half-space projections
        """
        x = np.array(as_points(x, self.d), dtype=float)
        if self.is_whole_space:
            return x
        shape = x.shape
        flat = x.reshape((-1, self.d))
        for _ in range(n_sweeps):
            moved = False
            for a, b, n in zip(self.A, self.b, self._norms):
                excess = np.maximum((flat @ a - (b - margin * n)) / n ** 2, 0.0)
                if np.any(excess > 0):
                    flat = flat - excess[:, np.newaxis] * a
                    moved = True
            if not moved:
                break
        return flat.reshape(shape)

    def bounding_box(self):
        """Smallest axis-aligned box containing Λ (entries may be infinite)
        """
        from scipy.optimize import linprog
        lo = np.full(self.d, -np.inf)
        hi = np.full(self.d, np.inf)
        if self.is_whole_space:
            return lo, hi
        for k in range(self.d):
            c = np.zeros(self.d)
            c[k] = 1.0
            for sign, out in [(1.0, lo), (-1.0, hi)]:
                res = linprog(sign * c, A_ub=self.A, b_ub=self.b,
                              bounds=[(None, None)] * self.d, method='highs')
                if res.status == 0:
                    out[k] = res.x[k]
        return lo, hi

    def __repr__(self):
        if self.is_whole_space:
            return f"Domain(R^{self.d})"
        return f"Domain(A={self.A.tolist()}, b={self.b.tolist()})"


class Box(Domain):
    """Axis-aligned box Π [lower_k, upper_k]; infinite bounds allowed
    """

    def __init__(self, lower, upper):
        lower = np.atleast_1d(np.asarray(lower, dtype=float))
        upper = np.atleast_1d(np.asarray(upper, dtype=float))
        if lower.shape != upper.shape or np.any(lower >= upper):
            raise ValidationError(f"Box needs lower < upper componentwise. Got {lower}, {upper}")
        d = len(lower)
        eye = np.eye(d)
        rows, rhs = [], []
        for k in range(d):
            if np.isfinite(upper[k]):
                rows.append(eye[k])
                rhs.append(upper[k])
            if np.isfinite(lower[k]):
                rows.append(-eye[k])
                rhs.append(-lower[k])
        super().__init__(np.array(rows).reshape((-1, d)), np.array(rhs))
        self.lower = lower
        self.upper = upper

    def project_interior(self, x, margin=0.0, n_sweeps=None):
        x = as_points(x, self.d)
        lo = self.lower + margin
        hi = self.upper - margin
        mid = np.where(lo > hi, (self.lower + self.upper) / 2, np.nan)
        out = np.clip(x, lo, hi)
        return np.where(np.isnan(mid), out, mid)

    def bounding_box(self):
        return self.lower.copy(), self.upper.copy()

    def __repr__(self):
        return f"Box({self.lower.tolist()}, {self.upper.tolist()})"


def whole_space(d):
    """Λ = R^d
    """
    return Domain(np.zeros((0, d)), np.zeros(0))
