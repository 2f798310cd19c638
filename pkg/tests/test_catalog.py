import json
import math

import numpy as np
import pytest

from lieflag.catalog import (
    ADMITTING_CASES,
    CASES,
    admissibility_agrees,
    admissible_bound,
    classify,
    export_catalog,
    get_case,
    instantiate_case,
    resolve_params,
    sample_param_sets,
    verify_table_row,
)
from lieflag.cli import load_algebra_spec
from lieflag.errors import InvalidInputError
from lieflag.finsler import Kind
from lieflag.lie_core import koszul_connection, parallel_fields, validate_lie_algebra

X, Y, Z = np.eye(3)


@pytest.fixture(scope="module")
def classification():
    return classify(samples=5, seed=42)


class TestInstantiate:
    def test_case_1(self):
        alg, g = instantiate_case(1)
        assert np.all(alg.structure == 0)
        assert np.array_equal(g.matrix, np.eye(3))

    def test_case_7_su2(self):
        alg, g = instantiate_case(7, {"lambda": 3, "mu": 2, "nu": 1})
        assert np.array_equal(alg.bracket(X, Y), Z)
        assert np.array_equal(alg.bracket(X, Z), -Y)
        assert np.array_equal(alg.bracket(Y, Z), X)
        assert np.array_equal(g.matrix, np.diag([3.0, 2.0, 1.0]))

    def test_case_7_order_violation(self):
        with pytest.raises(InvalidInputError, match="violate"):
            instantiate_case(7, {"lambda": 1, "mu": 2, "nu": 3})

    def test_unknown_and_missing(self):
        with pytest.raises(InvalidInputError):
            instantiate_case(16)
        with pytest.raises(InvalidInputError, match="requires"):
            instantiate_case(2)
        with pytest.raises(InvalidInputError, match="unexpected"):
            instantiate_case(2, {"lambda": 1, "rho": 2})

    def test_case_15_derives_lambda(self):
        q = resolve_params(15, {"c": 0.36, "mu": 0.5, "nu": 1.0})
        assert q["lambda"] == pytest.approx(0.8)
        with pytest.raises(InvalidInputError):
            resolve_params(15, {"c": 0.36, "mu": 1.0, "nu": 1.0})

    def test_pinned_parameters(self):
        q = resolve_params(11, {"nu": 2.0, "c": 0.0})
        assert q["c"] == 0.0
        with pytest.raises(InvalidInputError, match="pins"):
            resolve_params(11, {"nu": 2.0, "c": 1.0})

    @pytest.mark.parametrize("case_id", sorted(CASES))
    def test_samples_are_valid(self, case_id):
        for q in sample_param_sets(case_id, 20, seed=42):
            alg, g = instantiate_case(case_id, q)
            assert validate_lie_algebra(alg).passed
            assert np.all(np.linalg.eigvalsh(g.matrix) > 0)

    def test_sampling_is_per_case_deterministic(self):
        assert sample_param_sets(9, 5, seed=3) == sample_param_sets(9, 5, seed=3)
        assert sample_param_sets(9, 5, seed=3) != sample_param_sets(9, 5, seed=4)

    def test_case_13_mu_is_inert(self):
        a = instantiate_case(13, {"mu": 0.2, "lambda": 0.5, "nu": 2.0})
        b = instantiate_case(13, {"mu": 0.9, "lambda": 0.5, "nu": 2.0})
        assert np.array_equal(a[1].matrix, b[1].matrix)
        assert get_case(13).notes


class TestVerifyTable:
    def test_case_2(self):
        rep = verify_table_row(2, {"lambda": 1.0})
        assert rep.match and rep.identities_hold and not rep.errata
        entry = {e.entry: e.koszul for e in rep.entries}
        assert entry["nabla_x y"] == pytest.approx((0, 0, 0.5))

    def test_case_5_mu_one(self):
        rep = verify_table_row(5, {"mu": 1.0, "nu": 2.0})
        assert rep.match
        entry = {e.entry: np.array(e.koszul) for e in rep.entries}
        assert np.allclose(entry["nabla_z x"], -Y)
        assert np.allclose(entry["nabla_z y"], X)
        others = [v for k, v in entry.items() if k not in ("nabla_z x", "nabla_z y")]
        assert np.allclose(others, 0)

    def test_case_1(self):
        rep = verify_table_row(1)
        assert rep.match and rep.max_residual == 0.0

    @pytest.mark.parametrize("case_id", sorted(CASES))
    def test_all_rows_match(self, case_id):
        for q in sample_param_sets(case_id, 20, seed=42):
            rep = verify_table_row(case_id, q)
            assert rep.identities_hold
            assert rep.match, rep.errata

    def test_tolerance_controls_verdict(self):
        rep = verify_table_row(2, {"lambda": 1.0}, tol=0.0)
        assert not rep.match


class TestClassify:
    def test_theorem(self, classification):
        assert classification.matches_theorem, classification.deviations
        assert classification.clauses() == {"i": 1, "ii": 5, "iii": 11}

    def test_dimensions(self, classification):
        by_id = {c.case_id: c for c in classification.cases}
        assert set(by_id[1].dimensions) == {3}
        assert by_id[5].special["mu=1"]["dimensions"] == [1] * 5
        assert by_id[5].special["0<mu<1"]["dimensions"] == [0] * 5
        assert abs(np.cross(by_id[5].basis[0], Z)).max() < 1e-12
        b11 = np.array(by_id[11].basis[0])
        assert abs(np.cross(b11, [-2, 1, 0])).max() < 1e-12
        for cid in set(CASES) - set(ADMITTING_CASES):
            assert set(by_id[cid].dimensions) == {0}, cid

    def test_case_5_half(self):
        alg, g = instantiate_case(5, {"mu": 0.5, "nu": 1.0})
        assert len(parallel_fields(alg, koszul_connection(alg, g))) == 0

    def test_case_9_example(self):
        alg, g = instantiate_case(9, {"c": 2.0, "mu": 1.0, "nu": 1.0})
        assert len(parallel_fields(alg, koszul_connection(alg, g))) == 0

    def test_deterministic(self, classification):
        assert classify(samples=5, seed=42) == classification

    def test_robust_to_sampling(self):
        res = classify(samples=1, seed=7)
        assert res.matches_theorem and res.clauses() == {"i": 1, "ii": 5, "iii": 11}

    def test_needs_samples(self):
        with pytest.raises(InvalidInputError):
            classify(samples=0)


class TestAdmissibleBound:
    def test_examples(self):
        assert admissible_bound(11, "randers").limit == pytest.approx(0.5774, abs=1e-4)
        assert admissible_bound(11, "matsumoto").limit == pytest.approx(math.sqrt(3) / 6)
        assert admissible_bound(5, "randers", nu=1.0).limit == 1.0
        assert admissible_bound(5, "matsumoto", nu=4.0).limit == 0.25

    def test_non_admitting(self):
        with pytest.raises(InvalidInputError, match="admits no Berwald"):
            admissible_bound(2, "randers")

    @pytest.mark.parametrize("case_id", ADMITTING_CASES)
    @pytest.mark.parametrize("kind", list(Kind))
    def test_agrees_with_admissibility_check(self, case_id, kind, rng):
        nu = 2.7
        limit = admissible_bound(case_id, kind, nu).limit
        ps = list(rng.uniform(-2 * limit, 2 * limit, size=980))
        for eps in (1e-6, 1e-7, 1e-8):
            ps += [limit - eps, limit + eps, -limit + eps, -limit - eps]
        ps += [0.0, limit * 0.999999, limit * 1.000001, -limit * 0.999999, -limit * 1.000001]
        assert all(admissibility_agrees(case_id, kind, p, nu) for p in ps)


class TestExport:
    def test_shape(self):
        doc = export_catalog()
        assert [r["id"] for r in doc["cases"]] == list(range(1, 16))
        assert json.loads(json.dumps(doc)) == doc

    def test_round_trip(self, tmp_path):
        for row in export_catalog()["cases"]:
            path = tmp_path / f"case{row['id']}.json"
            path.write_text(json.dumps({"brackets": row["example"]["brackets"], "metric": row["example"]["metric"]}))
            alg, g, F = load_algebra_spec(path)
            ref_alg, ref_g = instantiate_case(row["id"], row["example"]["params"])
            assert F is None
            assert np.array_equal(alg.structure, ref_alg.structure)
            assert np.array_equal(g.matrix, ref_g.matrix)
