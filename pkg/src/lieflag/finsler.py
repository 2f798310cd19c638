"""Left-invariant Randers and Matsumoto metrics.

Both are built from a left-invariant Riemannian metric g and a
left-invariant deformation vector X (the g-dual of the 1-form beta):

    Randers     F(y) = alpha(y) + g(X, y)
    Matsumoto   F(y) = alpha(y)^2 / (alpha(y) - g(X, y))

with alpha(y) = sqrt(g(y, y)).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

from . import _kernels
from .errors import DomainError, InvalidInputError
from .lie_core import (
    RANK_TOL,
    Connection,
    InnerProduct,
    LieAlgebra,
    as_vector,
    parallel_residual,
)

DEFAULT_SEED = 42
HOMOGENEITY_SCALES = (0.5, 2.0, 7.3)


class Kind(enum.Enum):
    RANDERS = "randers"
    MATSUMOTO = "matsumoto"

    @property
    def bound(self) -> float:
        """Strict upper bound on the g-norm of X."""
        return 1.0 if self is Kind.RANDERS else 0.5

    @property
    def code(self) -> int:
        return 0 if self is Kind.RANDERS else 1

    @classmethod
    def parse(cls, value) -> "Kind":
        if isinstance(value, Kind):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise InvalidInputError(f"unknown metric kind {value!r} (expected 'randers' or 'matsumoto')") from None


@dataclass(frozen=True, eq=False)
class FinslerMetric:
    kind: Kind
    g: InnerProduct
    xt: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind.parse(self.kind))
        if not isinstance(self.g, InnerProduct):
            object.__setattr__(self, "g", InnerProduct(self.g))
        xt = as_vector(self.xt).copy()
        xt.setflags(write=False)
        object.__setattr__(self, "xt", xt)

    @classmethod
    def randers(cls, g, xt) -> "FinslerMetric":
        return cls(Kind.RANDERS, g, xt)

    @classmethod
    def matsumoto(cls, g, xt) -> "FinslerMetric":
        return cls(Kind.MATSUMOTO, g, xt)

    @property
    def admissible(self) -> bool:
        return admissibility_check(self.g, self.xt, self.kind).admissible

    def __call__(self, y) -> float:
        return norm(self, y)


@dataclass(frozen=True)
class Admissibility:
    admissible: bool
    norm: float
    bound: float


def admissibility_check(g: InnerProduct, xt, kind) -> Admissibility:
    kind = Kind.parse(kind)
    n = g.norm(xt)
    return Admissibility(admissible=n < kind.bound, norm=n, bound=kind.bound)


def norm(F: FinslerMetric, y) -> float:
    return _kernels.norm_value(F.kind.code, F.g.matrix, F.xt, as_vector(y))


@dataclass(frozen=True)
class BerwaldVerdict:
    is_berwald: bool
    residual: float
    admissible: bool


def berwald_check(alg: LieAlgebra, conn: Connection, F: FinslerMetric, tol: float = RANK_TOL) -> BerwaldVerdict:
    """Berwald iff X is parallel for the Levi-Civita connection of g (and F is admissible)."""
    if conn.algebra != alg or conn.metric != F.g:
        raise InvalidInputError("connection was not derived from this algebra and metric")
    scale = (1.0 + float(np.max(np.abs(conn.gamma)))) * max(1.0, float(np.max(np.abs(F.xt))))
    residual = parallel_residual(conn, F.xt)
    ok = F.admissible
    return BerwaldVerdict(is_berwald=ok and residual < tol * scale, residual=residual, admissible=ok)


def _check_base(Y) -> np.ndarray:
    Y = as_vector(Y)
    if not np.any(Y):
        raise InvalidInputError("fundamental tensor is undefined at Y = 0")
    return Y


def fundamental_tensor(F: FinslerMetric, Y, U, V) -> float:
    """g_Y(U, V) from the exact mixed partial of F^2(Y + sU + tV)."""
    Y = _check_base(Y)
    return _kernels.fundamental_form(F.kind.code, F.g.matrix, F.xt, Y, as_vector(U), as_vector(V))


def fundamental_matrix(F: FinslerMetric, Y) -> np.ndarray:
    """3x3 matrix of g_Y on the frame."""
    Y = _check_base(Y)
    return _kernels.fundamental_matrix(F.kind.code, F.g.matrix, F.xt, Y)


def fundamental_tensor_fd(F: FinslerMetric, Y, U, V, step: float = 1e-4) -> float:
    """Finite-difference oracle for g_Y(U, V).

    Central mixed difference of F^2 at steps h and h/2, combined by one
    Richardson step (error O(h^4)).
    """
    Y = _check_base(Y)
    U, V = as_vector(U), as_vector(V)

    def f2(s, t):
        return norm(F, Y + s * U + t * V) ** 2

    def mixed(h):
        return (f2(h, h) - f2(h, -h) - f2(-h, h) + f2(-h, -h)) / (4.0 * h * h)

    coarse, fine = mixed(step), mixed(step / 2.0)
    return 0.5 * (4.0 * fine - coarse) / 3.0


def sample_directions(samples: int, seed: int = DEFAULT_SEED) -> np.ndarray:
    """Uniform points on the coordinate unit sphere."""
    rng = np.random.default_rng(seed)
    v = rng.normal(size=(samples, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def _min_leading_minor(M: np.ndarray) -> float:
    return min(M[0, 0], M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0], float(np.linalg.det(M)))


@dataclass(frozen=True)
class MinkowskiReport:
    passed: bool
    samples: int
    seed: int
    min_norm: float
    min_norm_direction: tuple
    max_homogeneity_error: float
    min_leading_minor: float
    domain_errors: int

    @property
    def positivity(self) -> bool:
        return self.min_norm > 0 and self.domain_errors == 0

    @property
    def homogeneity(self) -> bool:
        return self.max_homogeneity_error < 1e-12

    @property
    def convexity(self) -> bool:
        return self.min_leading_minor > 0


def minkowski_check(F: FinslerMetric, samples: int = 200, seed: int = DEFAULT_SEED) -> MinkowskiReport:
    """Sample the Finsler axioms on the unit sphere.

    Besides the random directions, -X (the direction where F is smallest)
    is always probed, so an inadmissible Randers metric is caught with a
    concrete witness.
    """
    dirs = sample_directions(samples, seed)
    if np.any(F.xt):
        dirs = np.vstack([dirs, -F.xt / np.linalg.norm(F.xt)])

    min_norm, witness = np.inf, dirs[0]
    worst_hom, worst_minor = 0.0, np.inf
    domain_errors = 0
    usable = []
    for y in dirs:
        try:
            f = norm(F, y)
        except DomainError:
            # alpha <= beta: F is undefined, which counts against positivity
            domain_errors += 1
            continue
        if f < min_norm:
            min_norm, witness = f, y
        if f <= 0:
            continue
        usable.append(y)
        for lam in HOMOGENEITY_SCALES:
            flam = norm(F, lam * y)
            worst_hom = max(worst_hom, abs(flam - lam * f) / abs(flam))
    if usable:
        mats = _kernels.fundamental_matrices(F.kind.code, F.g.matrix, F.xt, np.array(usable))
        worst_minor = min(_min_leading_minor(M) for M in mats)
    report = MinkowskiReport(
        passed=False,
        samples=len(dirs),
        seed=seed,
        min_norm=float(min_norm),
        min_norm_direction=tuple(float(c) for c in witness),
        max_homogeneity_error=float(worst_hom),
        min_leading_minor=float(worst_minor),
        domain_errors=domain_errors,
    )
    ok = report.positivity and report.homogeneity and report.convexity
    return replace(report, passed=ok)
