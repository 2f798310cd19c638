import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lieflag.catalog import instantiate_case
from lieflag.errors import DomainError, InvalidInputError
from lieflag.finsler import (
    FinslerMetric,
    Kind,
    admissibility_check,
    berwald_check,
    fundamental_matrix,
    fundamental_tensor,
    fundamental_tensor_fd,
    minkowski_check,
    norm,
)
from lieflag.flag_curvature import case_iii_finsler, case_iii_metric, random_case_iii_input
from lieflag.lie_core import InnerProduct, koszul_connection

X, Y, Z = np.eye(3)
KINDS = list(Kind)
vec = st.lists(st.floats(-2, 2), min_size=3, max_size=3).map(np.array)


def random_metric(kind, rng, scale=0.9):
    A = rng.normal(size=(3, 3))
    g = InnerProduct(A @ A.T + 0.5 * np.eye(3))
    xt = rng.normal(size=3)
    xt *= scale * kind.bound * rng.uniform(0, 1) / g.norm(xt)
    return FinslerMetric(kind, g, xt)


class TestNorm:
    @pytest.mark.parametrize("kind", KINDS)
    def test_zero_deformation_is_riemannian(self, kind):
        g = case_iii_metric(2.0)
        F = FinslerMetric(kind, g, np.zeros(3))
        y = np.array([0.3, -1.2, 0.7])
        assert norm(F, y) == pytest.approx(g.norm(y), rel=1e-15)

    @pytest.mark.parametrize("p", [-0.3, 0.1, 0.25])
    def test_case_iii_unit_vectors(self, p, rng):
        for _ in range(10):
            U = random_case_iii_input(rng, p=p, nu=1.5).U
            a = U[0]
            assert norm(case_iii_finsler("randers", p, 1.5), U) == pytest.approx(1 - 1.5 * p * a, rel=1e-13)
            assert norm(case_iii_finsler("matsumoto", p, 1.5), U) == pytest.approx(1 / (1 + 1.5 * a * p), rel=1e-13)

    def test_matsumoto_domain_guard(self):
        F = FinslerMetric.matsumoto(InnerProduct.identity(), [1.5, 0, 0])
        with pytest.raises(DomainError):
            norm(F, X)

    @settings(max_examples=80, deadline=None)
    @given(y=vec, lam=st.floats(0.01, 50), seed=st.integers(0, 2**16), kind=st.sampled_from(KINDS))
    def test_homogeneity(self, y, lam, seed, kind):
        if np.linalg.norm(y) < 1e-3:
            return
        F = random_metric(kind, np.random.default_rng(seed))
        assert norm(F, lam * y) == pytest.approx(lam * norm(F, y), rel=1e-12)
        assert norm(F, y) > 0


class TestAdmissibility:
    @pytest.mark.parametrize("kind", KINDS)
    def test_zero_is_admissible(self, kind):
        assert admissibility_check(InnerProduct.identity(), np.zeros(3), kind).admissible

    def test_case_5_bound_at_nu_4(self):
        _, g = instantiate_case(5, {"mu": 1.0, "nu": 4.0})
        assert admissibility_check(g, 0.49 * Z, "randers").admissible
        assert not admissibility_check(g, 0.51 * Z, "randers").admissible
        assert not admissibility_check(g, -0.5 * Z, "randers").admissible

    def test_case_11_half(self):
        g = case_iii_metric(1.0)
        xt = 0.5 * np.array([-2, 1, 0.0])
        r = admissibility_check(g, xt, Kind.RANDERS)
        assert r.norm == pytest.approx(math.sqrt(3) * 0.5)
        assert r.admissible
        assert not admissibility_check(g, xt, Kind.MATSUMOTO).admissible

    def test_boundary_is_inadmissible(self):
        assert not admissibility_check(InnerProduct.identity(), X, "randers").admissible
        assert not admissibility_check(InnerProduct.identity(), 0.5 * X, "matsumoto").admissible

    def test_unknown_kind(self):
        with pytest.raises(InvalidInputError):
            admissibility_check(InnerProduct.identity(), X, "kropina")


class TestBerwald:
    def test_abelian_any_admissible_field(self, rng):
        alg, g = instantiate_case(1)
        conn = koszul_connection(alg, g)
        for _ in range(5):
            xt = rng.normal(size=3)
            xt *= 0.9 / np.linalg.norm(xt)
            assert berwald_check(alg, conn, FinslerMetric.randers(g, xt)).is_berwald

    def test_case_11_parallel_family(self):
        alg, g = instantiate_case(11, {"nu": 2.0})
        conn = koszul_connection(alg, g)
        F = FinslerMetric.randers(g, [-0.6, 0.3, 0.0])
        assert berwald_check(alg, conn, F).is_berwald

    def test_inadmissible_parallel_field_is_not_berwald(self):
        alg, g = instantiate_case(11, {"nu": 2.0})
        conn = koszul_connection(alg, g)
        verdict = berwald_check(alg, conn, FinslerMetric.matsumoto(g, [-0.6, 0.3, 0.0]))
        assert verdict.residual < 1e-12
        assert not verdict.is_berwald

    def test_heisenberg_z_is_not_parallel(self):
        alg, g = instantiate_case(2, {"lambda": 1.0})
        conn = koszul_connection(alg, g)
        verdict = berwald_check(alg, conn, FinslerMetric.randers(g, 0.5 * Z))
        # nabla_x z = -y / (2 lambda), scaled by 0.5
        assert verdict.residual == pytest.approx(0.25)
        assert not verdict.is_berwald

    def test_mismatched_connection(self):
        alg, g = instantiate_case(11, {"nu": 2.0})
        conn = koszul_connection(alg, case_iii_metric(3.0))
        with pytest.raises(InvalidInputError):
            berwald_check(alg, conn, FinslerMetric.randers(g, np.zeros(3)))


class TestFundamentalTensor:
    def test_randers_without_deformation_is_g(self, rng):
        g = case_iii_metric(1.7)
        F = FinslerMetric.randers(g, np.zeros(3))
        for Yv in rng.normal(size=(5, 3)):
            assert np.max(np.abs(fundamental_matrix(F, Yv) - g.matrix)) < 1e-14

    def test_zero_base_rejected(self):
        F = FinslerMetric.randers(InnerProduct.identity(), np.zeros(3))
        with pytest.raises(InvalidInputError):
            fundamental_tensor(F, np.zeros(3), X, Y)

    def test_case_iii_randers_vv(self, rng):
        for _ in range(20):
            inp = random_case_iii_input(rng, "randers")
            F = case_iii_finsler("randers", inp.p, inp.nu)
            a, at = inp.U[0], inp.V[0]
            expected = 1 - 1.5 * inp.p * a + (1.5 * inp.p * at) ** 2
            assert fundamental_tensor(F, inp.U, inp.V, inp.V) == pytest.approx(expected, rel=1e-12)

    def test_case_iii_matsumoto_uv(self, rng):
        for _ in range(20):
            inp = random_case_iii_input(rng, "matsumoto")
            F = case_iii_finsler("matsumoto", inp.p, inp.nu)
            a, at, p = inp.U[0], inp.V[0], inp.p
            expected = -3 * at * p / (2 * (1 + 1.5 * a * p) ** 3)
            assert fundamental_tensor(F, inp.U, inp.U, inp.V) == pytest.approx(expected, rel=1e-10, abs=1e-14)

    @pytest.mark.parametrize("kind", KINDS)
    def test_against_finite_differences(self, kind, rng):
        for _ in range(25):
            F = random_metric(kind, rng)
            Yv, U, V = rng.normal(size=(3, 3))
            Yv /= np.linalg.norm(Yv)
            exact = fundamental_tensor(F, Yv, U, V)
            assert exact == pytest.approx(fundamental_tensor_fd(F, Yv, U, V), abs=1e-6)

    @pytest.mark.parametrize("kind", KINDS)
    def test_homogeneity_identity(self, kind, rng):
        for _ in range(25):
            F = random_metric(kind, rng)
            Yv = rng.normal(size=3)
            assert fundamental_tensor(F, Yv, Yv, Yv) == pytest.approx(norm(F, Yv) ** 2, rel=1e-12)

    @settings(max_examples=60, deadline=None)
    @given(U=vec, V=vec, W=vec, a=st.floats(-3, 3), b=st.floats(-3, 3), seed=st.integers(0, 2**16),
           kind=st.sampled_from(KINDS))
    def test_symmetric_bilinear(self, U, V, W, a, b, seed, kind):
        r = np.random.default_rng(seed)
        F = random_metric(kind, r)
        Yv = r.normal(size=3)
        assert fundamental_tensor(F, Yv, U, V) == pytest.approx(fundamental_tensor(F, Yv, V, U), rel=1e-13, abs=1e-15)
        lhs = fundamental_tensor(F, Yv, U, a * V + b * W)
        rhs = a * fundamental_tensor(F, Yv, U, V) + b * fundamental_tensor(F, Yv, U, W)
        scale = 1 + np.linalg.norm(U) * (abs(a) * np.linalg.norm(V) + abs(b) * np.linalg.norm(W))
        assert abs(lhs - rhs) <= 1e-12 * scale * 10

    def test_matrix_matches_form(self, rng):
        F = random_metric(Kind.MATSUMOTO, rng)
        Yv, U, V = rng.normal(size=(3, 3))
        assert U @ fundamental_matrix(F, Yv) @ V == pytest.approx(fundamental_tensor(F, Yv, U, V), rel=1e-12)

    @pytest.mark.parametrize("kind", KINDS)
    def test_positive_definite_when_admissible(self, kind, rng):
        for _ in range(30):
            F = random_metric(kind, rng, scale=0.999)
            M = fundamental_matrix(F, rng.normal(size=3))
            assert np.all(np.linalg.eigvalsh(M) > 0)


class TestMinkowskiCheck:
    @pytest.mark.parametrize("kind", KINDS)
    def test_riemannian(self, kind):
        assert minkowski_check(FinslerMetric(kind, case_iii_metric(1.0), np.zeros(3)), 50).passed

    def test_case_11_randers_admissible(self):
        assert minkowski_check(case_iii_finsler("randers", 0.5, 1.0), 100).passed

    def test_case_11_randers_inadmissible_has_negative_witness(self):
        F = case_iii_finsler("randers", 0.7, 1.0)
        rep = minkowski_check(F, 100)
        assert not rep.passed and not rep.positivity
        w = np.array(rep.min_norm_direction)
        xt = F.xt
        # witness points along -X and gives alpha(w) (1 - |X|) < 0
        assert np.allclose(np.cross(w, xt), 0, atol=1e-12) and w @ xt < 0
        assert rep.min_norm == pytest.approx(F.g.norm(w) * (1 - math.sqrt(3) * 0.7), rel=1e-12)

    def test_matsumoto_inadmissible_is_flagged(self):
        rep = minkowski_check(case_iii_finsler("matsumoto", 0.7, 1.0), 50)
        assert not rep.passed
        assert rep.domain_errors > 0

    def test_seeded(self):
        F = case_iii_finsler("matsumoto", 0.2, 2.0)
        assert minkowski_check(F, 30, seed=5) == minkowski_check(F, 30, seed=5)
