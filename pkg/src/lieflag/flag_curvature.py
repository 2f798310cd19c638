"""Flag curvature of Berwald-type Randers and Matsumoto metrics.

For a Berwald metric the Chern curvature equals the Riemannian curvature
of the underlying g, so the flag curvature of the flag (P = span{U, Y}, Y)
is

    K(P, Y) = g_Y(R(U,Y)Y, U) / (g_Y(Y,Y) g_Y(U,U) - g_Y(Y,U)^2)

with g_Y the fundamental tensor of F. ``flag_curvature_general`` evaluates
this directly. The remaining functions are closed forms for the
non-unimodular group G_0 with metric [[1, 1/2, 0], [1/2, 1, 0], [0, 0, nu]]
and parallel deformation X = -2p x + p y ("case iii").
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, InvalidInputError
from .finsler import FinslerMetric, Kind, admissibility_check, fundamental_tensor
from .lie_core import (
    CurvatureTensor,
    InnerProduct,
    LieAlgebra,
    as_vector,
    gram_schmidt,
)

ORTHONORMAL_TOL = 1e-9
DENOMINATOR_TOL = 1e-12
PARALLEL_DIRECTION = np.array([-2.0, 1.0, 0.0])


def case_iii_algebra() -> LieAlgebra:
    """[x,y] = 0, [x,z] = -y, [y,z] = -2y (the G_c brackets at c = 0)."""
    return LieAlgebra.from_brackets([0, 0, 0], [0, -1, 0], [0, -2, 0])


def case_iii_metric(nu: float) -> InnerProduct:
    if not nu > 0:
        raise InvalidInputError(f"nu must be positive, got {nu!r}")
    return InnerProduct(np.array([[1.0, 0.5, 0.0], [0.5, 1.0, 0.0], [0.0, 0.0, float(nu)]]))


def case_iii_deformation(p: float) -> np.ndarray:
    return float(p) * PARALLEL_DIRECTION


def case_iii_finsler(kind, p: float, nu: float) -> FinslerMetric:
    return FinslerMetric(Kind.parse(kind), case_iii_metric(nu), case_iii_deformation(p))


@dataclass(frozen=True)
class Flag:
    pole: np.ndarray
    transverse: np.ndarray

    def __post_init__(self):
        pole, tr = as_vector(self.pole), as_vector(self.transverse)
        if not np.any(pole):
            raise InvalidInputError("flagpole must be nonzero")
        if np.linalg.norm(np.cross(pole, tr)) <= 1e-12 * np.linalg.norm(pole) * max(np.linalg.norm(tr), 1e-300):
            raise DegenerateInputError("flagpole and transverse vector are linearly dependent")
        object.__setattr__(self, "pole", pole)
        object.__setattr__(self, "transverse", tr)


def flag_curvature_general(F: FinslerMetric, R: CurvatureTensor, flag: Flag) -> float:
    """Flag curvature from the definition; R must be the curvature of F's Berwald connection."""
    if not F.admissible:
        raise InvalidInputError("Finsler metric is not admissible")
    Y, U = flag.pole, flag.transverse
    yy = fundamental_tensor(F, Y, Y, Y)
    uu = fundamental_tensor(F, Y, U, U)
    yu = fundamental_tensor(F, Y, Y, U)
    den = yy * uu - yu * yu
    if den <= DENOMINATOR_TOL * yy * uu:
        raise DegenerateInputError(f"flag denominator {den!r} is not positive")
    return fundamental_tensor(F, Y, R.apply(U, Y, Y), U) / den


@dataclass(frozen=True)
class CaseIIIFlagInput:
    """Parameters of a case-iii flag: U = ax + by + cz is the flagpole, V completes the plane.

    {U, V} must be orthonormal for the case-iii metric.
    """

    p: float
    nu: float
    U: np.ndarray
    V: np.ndarray

    def __post_init__(self):
        U, V = as_vector(self.U), as_vector(self.V)
        object.__setattr__(self, "U", U)
        object.__setattr__(self, "V", V)
        g = case_iii_metric(self.nu)
        gram = np.array([[g(U, U), g(U, V)], [g(V, U), g(V, V)]])
        err = float(np.max(np.abs(gram - np.eye(2))))
        if err > ORTHONORMAL_TOL:
            raise InvalidInputError(f"U, V are not orthonormal for the case-iii metric (Gram error {err:.3g})")

    def require_admissible(self, kind) -> None:
        kind = Kind.parse(kind)
        adm = admissibility_check(case_iii_metric(self.nu), case_iii_deformation(self.p), kind)
        if not adm.admissible:
            raise InvalidInputError(
                f"p = {self.p!r} is inadmissible for {kind.value}: |X| = {adm.norm:.12g} >= {adm.bound}"
            )

    def flag(self) -> Flag:
        return Flag(pole=self.U, transverse=self.V)


def _bracket_factor(inp: CaseIIIFlagInput) -> float:
    """c(a~ + 2b~) - c~(a + 2b); vanishes exactly when R(V,U)U = 0."""
    a, b, c = inp.U
    at, bt, ct = inp.V
    return c * (at + 2 * bt) - ct * (a + 2 * b)


def randers_case_iii_closed_form(inp: CaseIIIFlagInput) -> float:
    inp.require_admissible(Kind.RANDERS)
    a = inp.U[0]
    return -4.0 * (_bracket_factor(inp) / (3.0 * inp.p * a - 2.0)) ** 2


def _matsumoto(inp: CaseIIIFlagInput, at2_coeff: float) -> float:
    inp.require_admissible(Kind.MATSUMOTO)
    a, p = inp.U[0], inp.p
    at = inp.V[0]
    den = 2.0 * (4.0 + 18.0 * a * a * p * p + 18.0 * a * p + at2_coeff * at * at * p * p)
    if abs(den) < DENOMINATOR_TOL:
        raise DegenerateInputError(f"Matsumoto closed-form denominator {den!r} vanishes")
    ap = a * p
    return -((2.0 + 3.0 * ap) ** 3) * (1.0 + 3.0 * ap) * _bracket_factor(inp) ** 2 / den


def matsumoto_case_iii_closed_form(inp: CaseIIIFlagInput) -> float:
    """The published Matsumoto closed form, transcribed as printed.

    Its denominator carries -27 a~^2 p^2, which disagrees with the
    definitional pipeline whenever a~ p != 0; see
    ``matsumoto_case_iii_closed_form_corrected``.
    """
    return _matsumoto(inp, -27.0)


def matsumoto_case_iii_closed_form_corrected(inp: CaseIIIFlagInput) -> float:
    # g_U(V,V) = (1 + 9/2 (a^2p^2 + ap) + 27/4 a~^2 p^2) / (1 + 3ap/2)^4,
    # which turns the denominator's a~^2 p^2 coefficient into +18
    return _matsumoto(inp, 18.0)


def curvature_case_iii(nu: float) -> CurvatureTensor:
    if not nu > 0:
        raise InvalidInputError(f"nu must be positive, got {nu!r}")
    x, y, z = 0, 1, 2
    r = np.zeros((3, 3, 3, 3))
    r[x, z, x, z] = 1.0 / nu
    r[x, z, y, z] = 2.0 / nu
    r[y, z, x, z] = 2.0 / nu
    r[y, z, y, z] = 4.0 / nu
    r[x, z, z, y] = -2.0
    r[y, z, z, y] = -4.0
    r[z, x] = -r[x, z]
    r[z, y] = -r[y, z]
    return CurvatureTensor(r)


def rvuu_case_iii(nu: float, U, V) -> np.ndarray:
    """R(V,U)U = delta z + sigma y for the case-iii curvature."""
    a, b, c = as_vector(U)
    at, bt, ct = as_vector(V)
    T = at * c - ct * a + 2.0 * (bt * c - ct * b)
    delta = (a + 2.0 * b) * T / nu
    sigma = -2.0 * c * T
    return np.array([0.0, sigma, delta])


def case_iii_pipeline(kind, inp: CaseIIIFlagInput) -> float:
    """General flag curvature on the case-iii metric with flagpole U and transverse V."""
    F = case_iii_finsler(kind, inp.p, inp.nu)
    return flag_curvature_general(F, curvature_case_iii(inp.nu), inp.flag())


def random_case_iii_input(rng: np.random.Generator, kind=None, p: float | None = None,
                          nu: float | None = None) -> CaseIIIFlagInput:
    """A random orthonormal flag; p is drawn strictly inside the admissible range of ``kind`` if not given."""
    if nu is None:
        nu = float(np.exp(rng.uniform(np.log(0.1), np.log(10.0))))
    if p is None:
        limit = Kind.parse(kind or Kind.MATSUMOTO).bound / np.sqrt(3.0)
        p = float(rng.uniform(-0.98, 0.98) * limit)
    g = case_iii_metric(nu)
    while True:
        raw = rng.normal(size=(2, 3))
        try:
            U, V = gram_schmidt(g, raw)
        except DegenerateInputError:
            continue
        return CaseIIIFlagInput(p=p, nu=nu, U=U, V=V)
