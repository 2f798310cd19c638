"""Three-dimensional Lie algebras with left-invariant metrics.

Everything lives at the Lie-algebra level: a left-invariant field is a
constant coordinate vector in the fixed frame (x, y, z), so the
Levi-Civita connection, its curvature and the parallel fields all reduce
to small dense linear algebra on 3-vectors.

Index conventions used throughout::

    LieAlgebra.constants[i, j, k]   = c^k_ij,   [e_i, e_j] = sum_k c^k_ij e_k
    Connection.gamma[i, j, k]       = Gamma^k_ij, nabla_{e_i} e_j = sum_k Gamma^k_ij e_k
    CurvatureTensor.r[i, j, k, l]   = R^l_ijk,   R(e_i, e_j) e_k = sum_l R^l_ijk e_l
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DegenerateInputError, InvalidInputError

FRAME = ("x", "y", "z")
# (i, j) pairs with i < j, in the storage order of LieAlgebra.structure
PAIRS = ((0, 1), (0, 2), (1, 2))

IDENTITY_TOL = 1e-12
RANK_TOL = 1e-9


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


def as_vector(v) -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if arr.shape != (3,):
        raise InvalidInputError(f"expected 3 coordinates, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"non-finite coordinates {arr.tolist()}")
    return arr


@dataclass(frozen=True)
class LieAlgebra:
    """Bracket table of a 3-dimensional real Lie algebra.

    ``structure`` holds the brackets [x,y], [x,z], [y,z] as rows; the
    remaining brackets follow from antisymmetry.
    """

    structure: np.ndarray
    constants: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        s = np.asarray(self.structure, dtype=float)
        if s.shape != (3, 3):
            raise InvalidInputError(f"structure must be 3x3 (rows [x,y], [x,z], [y,z]), got {s.shape}")
        if not np.all(np.isfinite(s)):
            raise InvalidInputError("structure constants must be finite")
        c = np.zeros((3, 3, 3))
        for row, (i, j) in enumerate(PAIRS):
            c[i, j] = s[row]
            c[j, i] = -s[row]
        object.__setattr__(self, "structure", _frozen(s))
        object.__setattr__(self, "constants", _frozen(c))

    @classmethod
    def from_brackets(cls, xy, xz, yz) -> "LieAlgebra":
        return cls(np.array([xy, xz, yz], dtype=float))

    @classmethod
    def abelian(cls) -> "LieAlgebra":
        return cls(np.zeros((3, 3)))

    def bracket(self, X, Y) -> np.ndarray:
        return np.einsum("i,j,ijk->k", as_vector(X), as_vector(Y), self.constants)

    def __hash__(self):
        return hash(self.structure.tobytes())

    def __eq__(self, other):
        return isinstance(other, LieAlgebra) and np.array_equal(self.structure, other.structure)


@dataclass(frozen=True)
class InnerProduct:
    """Symmetric positive-definite Gram matrix of a left-invariant metric."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.shape != (3, 3):
            raise InvalidInputError(f"metric must be 3x3, got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise InvalidInputError("metric entries must be finite")
        if not np.array_equal(m, m.T):
            raise InvalidInputError("metric matrix is not symmetric")
        minors = [np.linalg.det(m[:k, :k]) for k in (1, 2, 3)]
        if not all(d > 0 for d in minors):
            raise InvalidInputError(f"metric is not positive definite (leading minors {minors})")
        object.__setattr__(self, "matrix", _frozen(m))

    @classmethod
    def identity(cls) -> "InnerProduct":
        return cls(np.eye(3))

    def __call__(self, U, V) -> float:
        return float(as_vector(U) @ self.matrix @ as_vector(V))

    def norm(self, U) -> float:
        return float(np.sqrt(self(U, U)))

    @property
    def inverse(self) -> np.ndarray:
        return np.linalg.inv(self.matrix)

    def __hash__(self):
        return hash(self.matrix.tobytes())

    def __eq__(self, other):
        return isinstance(other, InnerProduct) and np.array_equal(self.matrix, other.matrix)


@dataclass(frozen=True, eq=False)
class Connection:
    gamma: np.ndarray
    algebra: LieAlgebra
    metric: InnerProduct

    def __post_init__(self):
        object.__setattr__(self, "gamma", _frozen(self.gamma))

    def nabla(self, i: int, j: int) -> np.ndarray:
        """Coordinates of nabla_{e_i} e_j."""
        return self.gamma[i, j].copy()

    def operator(self, i: int) -> np.ndarray:
        """Matrix A with nabla_{e_i} v = A @ v."""
        return self.gamma[i].T.copy()


@dataclass(frozen=True, eq=False)
class CurvatureTensor:
    r: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "r", _frozen(self.r))

    def apply(self, X, Y, Z) -> np.ndarray:
        """R(X, Y)Z for arbitrary (not only frame) vectors."""
        return np.einsum("i,j,k,ijkl->l", as_vector(X), as_vector(Y), as_vector(Z), self.r)

    def lowered(self, g: InnerProduct) -> np.ndarray:
        """(0,4) form Rm[i, j, k, m] = <R(e_i, e_j)e_k, e_m>."""
        return np.einsum("ijkl,lm->ijkm", self.r, g.matrix)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.r)))


@dataclass(frozen=True)
class JacobiReport:
    residual: float
    tol: float
    passed: bool


def validate_lie_algebra(alg: LieAlgebra, tol: float = IDENTITY_TOL) -> JacobiReport:
    """Largest Jacobi cyclic-sum residual over all frame triples."""
    c = alg.constants
    # [[e_i,e_j],e_k] = sum_m c^m_ij c^l_mk
    double = np.einsum("ijm,mkl->ijkl", c, c)
    cyclic = double + np.transpose(double, (1, 2, 0, 3)) + np.transpose(double, (2, 0, 1, 3))
    residual = float(np.max(np.abs(cyclic)))
    return JacobiReport(residual=residual, tol=tol, passed=residual <= tol)


def koszul_connection(alg: LieAlgebra, g: InnerProduct) -> Connection:
    """Levi-Civita connection of a left-invariant metric.

    Inner products of left-invariant fields are constant, so the Koszul
    formula collapses to
    ``2<nabla_X Y, Z> = <[X,Y],Z> - <[Y,Z],X> + <[Z,X],Y>``.
    """
    if not isinstance(g, InnerProduct):
        g = InnerProduct(g)
    # C[i, j, k] = <[e_i, e_j], e_k>
    C = np.einsum("ijl,lk->ijk", alg.constants, g.matrix)
    # transpose (2, 0, 1) reads C[j, k, i]; (1, 2, 0) reads C[k, i, j]
    lowered = 0.5 * (C - np.transpose(C, (2, 0, 1)) + np.transpose(C, (1, 2, 0)))
    gamma = np.einsum("ijm,mk->ijk", lowered, g.inverse)
    return Connection(gamma=gamma, algebra=alg, metric=g)


def covariant_derivative(conn: Connection, X, Y) -> np.ndarray:
    return np.einsum("i,j,ijk->k", as_vector(X), as_vector(Y), conn.gamma)


def torsion_residual(conn: Connection) -> float:
    """max |Gamma^k_ij - Gamma^k_ji - c^k_ij| scaled by 1 + max|Gamma|."""
    t = conn.gamma - np.transpose(conn.gamma, (1, 0, 2)) - conn.algebra.constants
    return float(np.max(np.abs(t)) / (1.0 + np.max(np.abs(conn.gamma))))


def metric_compatibility_residual(conn: Connection) -> float:
    G = conn.metric.matrix
    low = np.einsum("ijl,lk->ijk", conn.gamma, G)  # <nabla_i e_j, e_k>
    t = low + np.transpose(low, (0, 2, 1))
    return float(np.max(np.abs(t)) / (1.0 + np.max(np.abs(low))))


def curvature(alg: LieAlgebra, conn: Connection) -> CurvatureTensor:
    """R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z on frame fields."""
    gam = conn.gamma
    # nabla_i (nabla_j e_k) = sum_m Gamma^m_jk Gamma^l_im
    second = np.einsum("jkm,iml->ijkl", gam, gam)
    bracket_term = np.einsum("ijm,mkl->ijkl", alg.constants, gam)
    return CurvatureTensor(second - np.transpose(second, (1, 0, 2, 3)) - bracket_term)


@dataclass(frozen=True)
class CurvatureSymmetryReport:
    antisymmetry: float
    bianchi: float
    pair_symmetry: float

    def passed(self, tol: float = IDENTITY_TOL) -> bool:
        return max(self.antisymmetry, self.bianchi, self.pair_symmetry) <= tol


def curvature_symmetries(R: CurvatureTensor, g: InnerProduct) -> CurvatureSymmetryReport:
    r = R.r
    scale = 1.0 + R.max_abs()
    anti = r + np.transpose(r, (1, 0, 2, 3))
    bianchi = r + np.transpose(r, (1, 2, 0, 3)) + np.transpose(r, (2, 0, 1, 3))
    rm = R.lowered(g)
    pair = rm - np.transpose(rm, (2, 3, 0, 1))
    return CurvatureSymmetryReport(
        antisymmetry=float(np.max(np.abs(anti)) / scale),
        bianchi=float(np.max(np.abs(bianchi)) / scale),
        pair_symmetry=float(np.max(np.abs(pair)) / (1.0 + np.max(np.abs(rm)))),
    )


def parallel_system(conn: Connection) -> np.ndarray:
    """The 9x3 matrix whose kernel is the space of parallel left-invariant fields."""
    return np.vstack([conn.operator(i) for i in range(3)])


def _canonical_sign(v: np.ndarray, tol: float) -> np.ndarray:
    # last significant coordinate made positive, so -2x+y stays -2x+y
    nz = np.flatnonzero(np.abs(v) > tol)
    if nz.size and v[nz[-1]] < 0:
        return -v
    return v


def parallel_fields(alg: LieAlgebra, conn: Connection, tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis (rows) of {v : nabla_{e_i} v = 0 for every i}.

    Rank is decided from the singular values of the stacked 9x3 system
    against ``tol * sigma_max``. Returns an array of shape (k, 3).
    """
    M = parallel_system(conn)
    _, s, vt = np.linalg.svd(M)
    smax = s[0] if s.size else 0.0
    if smax == 0.0:
        return np.eye(3)
    null = vt[s <= tol * smax]
    if len(null) == 1:
        null = np.array([_canonical_sign(null[0], tol)])
    elif len(null) == 2:
        # fix the plane's basis independent of LAPACK's choice
        q, _ = np.linalg.qr(null.T)
        null = np.array([_canonical_sign(v, tol) for v in q.T])
    return null


def parallel_residual(conn: Connection, v) -> float:
    return float(np.max(np.abs(parallel_system(conn) @ as_vector(v))))


def gram_schmidt(g: InnerProduct, vs: Sequence, tol: float = IDENTITY_TOL) -> list[np.ndarray]:
    vectors = [as_vector(v) for v in vs]
    if not vectors:
        return []
    A = np.array(vectors)
    gram = A @ g.matrix @ A.T
    scale = np.prod(np.diag(gram))
    if scale <= 0 or np.linalg.det(gram) <= tol * scale:
        raise DegenerateInputError("input vectors are linearly dependent")
    out: list[np.ndarray] = []
    for v in vectors:
        w = v.copy()
        # twice is enough for 3x3 conditioning
        for _ in range(2):
            for u in out:
                w = w - g(u, w) * u
        out.append(w / g.norm(w))
    return out


def sectional_curvature(g: InnerProduct, R: CurvatureTensor, U, V, tol: float = IDENTITY_TOL) -> float:
    """<R(V,U)U, V> / (|U|^2 |V|^2 - <U,V>^2)."""
    U, V = as_vector(U), as_vector(V)
    uu, vv, uv = g(U, U), g(V, V), g(U, V)
    den = uu * vv - uv * uv
    if den <= tol * uu * vv:
        raise DegenerateInputError("U and V do not span a plane")
    return g(R.apply(V, U, U), V) / den
