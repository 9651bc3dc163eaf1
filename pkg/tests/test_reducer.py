"""Normalization, the 2-D oracle, verification records and sweeps."""

import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from quadred.catalog import get_rule
from quadred.params import Params, TestIntegrand
from quadred.reducer import (
    CSV_HEADER,
    DivergentIntegralError,
    derivative_check_k7,
    direct_2d,
    normalize,
    run_sweep,
    shift_power,
    verify,
)

SQPI = math.sqrt(math.pi)


class TestShiftPower:
    def test_examples(self):
        assert shift_power((0, 0, 1), -0.5) == (1, 1, 0)
        assert shift_power((4, 0, 0), 2.0) == (0, -4, 4)
        assert shift_power((3, 1, 0), 0.0) == (3, 1, 0)

    def test_rejects_non_half_integer(self):
        with pytest.raises(ValueError):
            shift_power((0, 0, 1), 0.3)

    @given(
        st.integers(-9, 9), st.integers(-9, 9), st.integers(-9, 9),
        st.integers(-4, 4),
    )
    def test_round_trip(self, n, m, nu, twice_delta):
        delta = twice_delta / 2.0
        assert shift_power(shift_power((n, m, nu), delta), -delta) == (n, m, nu)

    def test_round_trip_preserves_value(self):
        # shifting the triple while replacing f by t**-delta f keeps the
        # reduced integral's value
        params = Params(0, 0, 1, p=1.0, q=2.0)
        f = TestIntegrand(1.0, 1.0, 0.5)
        base = get_rule("E1-pbm-corrected").reduce_to_1d(params, f)
        n2, m2, nu2 = shift_power(params.triple, -0.5)
        shifted = get_rule("E2-110").reduce_to_1d(
            Params(n2, m2, nu2, p=1.0, q=2.0), f.shifted(-0.5)
        )
        assert complex(base.value).real == pytest.approx(
            complex(shifted.value).real, rel=1e-10
        )


class TestNormalize:
    def test_exact_triple_wins(self):
        res = normalize(Params(1, 1, 0, p=1.0, q=2.0), TestIntegrand(1.0, 1.0, 0.5))
        assert res is not None
        rule, params2, f2 = res
        assert rule.id == "E2-110"
        assert params2.triple == (1, 1, 0)
        assert f2.mu == 1.0

    def test_soundness_of_match(self):
        params = Params(1, 1, 0, p=1.0, q=2.0)
        f = TestIntegrand(1.0, 1.0, 0.5)
        rule, params2, f2 = normalize(params, f)
        lhs = direct_2d(params, f)
        rhs = rule.reduce_to_1d(params2, f2)
        assert complex(lhs.value).real == pytest.approx(
            complex(rhs.value).real, rel=1e-6
        )

    def test_mirror_route(self):
        # (0,4,0) has no direct entry; the mirrored ladder lands on a
        # Macdonald rule with p and q exchanged
        params = Params(0, 4, 0, p=1.0, q=2.0)
        f = TestIntegrand(1.0, 2.5, 0.5)
        res = normalize(params, f)
        assert res is not None
        rule, params2, f2 = res
        assert params2.p == 2.0 and params2.q == 1.0
        lhs = direct_2d(params, f)
        rhs = rule.reduce_to_1d(params2, f2)
        assert complex(lhs.value).real == pytest.approx(
            complex(rhs.value).real, rel=1e-6
        )

    def test_no_match(self):
        assert normalize(Params(9, 9, 9), TestIntegrand()) is None

    @pytest.mark.parametrize(
        "params,f",
        [
            # power-shifted entries from each family
            (Params(3, 3, -1, p=1.1, q=0.7), TestIntegrand(1.0, 1.3, 0.2)),  # exp family
            (Params(0, 1, 3, a=1.0, b=0.4, c=0.9), TestIntegrand(1.0, 1.0, 0.3)),  # erf family
            (Params(4, 4, 0, a=1.0, b=0.3, c=0.8, h=0.6), TestIntegrand(1.0, 1.5, 0.1)),  # 1F1
            (Params(4, 4, 0, a=1.0, b=0.3, c=0.8, h=0.6, j=0.5), TestIntegrand(1.0, 1.5, 0.1)),
        ],
    )
    def test_soundness_across_families(self, params, f):
        res = normalize(params, f)
        assert res is not None
        rule, params2, f2 = res
        lhs = direct_2d(params, f)
        rhs = rule.reduce_to_1d(params2, f2)
        assert complex(lhs.value).real == pytest.approx(
            complex(rhs.value).real, rel=1e-6
        ), rule.id

    def test_deterministic(self):
        params = Params(0, 4, 0, p=1.0, q=2.0)
        f = TestIntegrand(1.0, 2.5, 0.5)
        a = normalize(params, f)
        b = normalize(params, f)
        assert a[0].id == b[0].id and a[1] == b[1] and a[2] == b[2]


class TestDirect2D:
    def test_seed_value(self):
        res = direct_2d(Params(0, 0, 1, p=1.0, q=1.0), TestIntegrand(1.0, 0.0, 1.0))
        assert res.converged
        assert complex(res.value).real == pytest.approx(2.0 * SQPI / 5.0, rel=1e-8)

    def test_zero_integrand(self):
        res = direct_2d(Params(0, 0, 1, p=1.0, q=1.0), TestIntegrand(0.0, 0.0, 1.0))
        assert complex(res.value).real == 0.0

    def test_divergent_rejected(self):
        # f identically 1 with only the (x+y)^-1/2 weight cannot converge
        with pytest.raises(DivergentIntegralError):
            direct_2d(Params(0, 0, 1), TestIntegrand(1.0, 0.0, 0.0))

    def test_axis_divergence_rejected(self):
        with pytest.raises(DivergentIntegralError, match="x->0"):
            direct_2d(Params(4, 0, 0, p=1.0, q=1.0), TestIntegrand(1.0, 0.0, 1.0))

    def test_gamma_ratio_instance_matches_oracle(self):
        # equal inverse-exponential coefficients at (4,4,0), f = t^(3/2)
        params = Params(4, 4, 0, a=1.0, b=1.0, c=1.0)
        f = TestIntegrand(1.0, 1.5, 0.0)
        lhs = direct_2d(params, f)
        rhs = get_rule("N6-aeqb").reduce_to_1d(params, f)
        assert complex(lhs.value).real > 0.0
        assert complex(lhs.value).real == pytest.approx(
            complex(rhs.value).real, rel=1e-6
        )


class TestVerify:
    def test_corrected_rule_passes(self):
        rec = verify(
            "E1-pbm-corrected", Params(0, 0, 1, p=1.0, q=4.0), TestIntegrand(1.0, 0.0, 1.0)
        )
        assert rec.passed
        assert rec.rel_diff <= 1e-6

    def test_uncorrected_rule_fails_with_known_ratio(self):
        p, q = 1.0, 4.0
        rec = verify(
            "E1-uncorrected-pbm", Params(0, 0, 1, p=p, q=q), TestIntegrand(1.0, 0.0, 1.0)
        )
        assert not rec.passed
        ratio = complex(rec.rhs.value).real / complex(rec.lhs.value).real
        expected = 1.0 / ((math.sqrt(p) + math.sqrt(q)) * math.sqrt(p + q))
        assert ratio == pytest.approx(expected, abs=1e-4)

    def test_macdonald_rule_passes(self):
        rec = verify("K1-111", Params(1, 1, 1, p=2.0, q=2.0), TestIntegrand(1.0, 0.5, 0.0))
        assert rec.passed

    def test_applicability_becomes_failed_record(self):
        rec = verify(
            "E1-pbm-corrected", Params(0, 0, 1, p=0.0, q=1.0), TestIntegrand(1.0, 0.0, 1.0)
        )
        assert not rec.passed
        assert "requires p>0" in rec.failure_reason
        # the NaN diffs serialize as strict-JSON nulls and fit the schema
        import jsonschema

        from quadred.schemas import RECORD_SCHEMA

        doc = rec.to_json_dict()
        assert doc["abs_diff"] is None
        jsonschema.validate(json.loads(json.dumps(doc, allow_nan=False)), RECORD_SCHEMA)

    def test_bitwise_determinism(self):
        args = ("K1-111", Params(1, 1, 1, p=1.0, q=3.0), TestIntegrand(1.0, 0.5, 0.5))
        a = verify(*args)
        b = verify(*args)
        assert json.dumps(a.to_json_dict(), sort_keys=True) == json.dumps(
            b.to_json_dict(), sort_keys=True
        )

    def test_swap_covariance(self):
        # exchanging the axes (n <-> m with p <-> q) leaves pass/fail and
        # the value unchanged
        f = TestIntegrand(1.0, 1.2, 0.4)
        rec = verify("E4-1m12", Params(1, -1, 2, p=1.3, q=0.7), f)
        mirrored = verify("E4-1m12", Params(1, -1, 2, p=1.3, q=0.7).mirrored().mirrored(), f)
        assert rec.passed and mirrored.passed
        direct = direct_2d(Params(-1, 1, 2, p=0.7, q=1.3), f)
        assert complex(direct.value).real == pytest.approx(
            complex(rec.lhs.value).real, rel=1e-6
        )

    def test_record_serialization(self):
        rec = verify("K1-111", Params(1, 1, 1, p=1.0, q=1.0), TestIntegrand(1.0, 0.5, 0.0))
        doc = rec.to_json_dict()
        assert doc["rule_id"] == "K1-111"
        assert doc["pass"] is True
        assert set(doc["params"]) == {"n", "m", "nu", "a", "b", "c", "h", "j", "p", "q"}
        # numbers survive a JSON round trip exactly (shortest-repr floats)
        again = json.loads(json.dumps(doc))
        assert again["lhs"]["value"] == complex(rec.lhs.value).real
        row = rec.to_csv_row()
        assert row.count(",") == CSV_HEADER.count(",")


class TestDerivativeCheck:
    def test_residual_and_sign(self):
        f = TestIntegrand(1.0, 0.5, 0.0)
        rep = derivative_check_k7(Params(-1, 1, 1, p=1.0, q=1.0), f, step=1e-4)
        assert rep.matched_sign == -1
        assert rep.residual <= 1e-4
        assert rep.passed

    def test_sign_consistent_across_draws(self):
        rng = np.random.default_rng(3)
        signs = set()
        for _ in range(5):
            p = float(rng.uniform(0.5, 3.0))
            q = float(rng.uniform(0.5, 3.0))
            rep = derivative_check_k7(
                Params(-1, 1, 1, p=p, q=q), TestIntegrand(1.0, 0.5, 0.0)
            )
            assert rep.residual <= 1e-4
            signs.add(rep.matched_sign)
        assert signs == {-1}

    def test_second_order_step_halving(self):
        f = TestIntegrand(1.0, 0.5, 0.0)
        coarse = derivative_check_k7(Params(-1, 1, 1, p=1.0, q=1.0), f, step=2e-3)
        fine = derivative_check_k7(Params(-1, 1, 1, p=1.0, q=1.0), f, step=1e-3)
        assert coarse.residual / fine.residual == pytest.approx(4.0, rel=0.15)


class TestSweep:
    def test_small_sweep_passes(self):
        rep = run_sweep(["E1-pbm-corrected", "N4-122"], samples=2, seed=9)
        assert rep.all_passed
        assert len(rep.records) == 4
        assert all(r.seed == 9 for r in rep.records)

    def test_reports_are_reproducible(self):
        a = run_sweep(["K1-111"], samples=2, seed=7)
        b = run_sweep(["K1-111"], samples=2, seed=7)
        assert a.to_json() == b.to_json()
        assert a.to_csv() == b.to_csv()

    def test_jobs_do_not_change_bytes(self):
        a = run_sweep(["E1-pbm-corrected", "K1-111"], samples=2, seed=3)
        b = run_sweep(["E1-pbm-corrected", "K1-111"], samples=2, seed=3, jobs=2)
        assert a.to_json() == b.to_json()

    def test_different_seeds_differ(self):
        a = run_sweep(["K1-111"], samples=1, seed=1)
        b = run_sweep(["K1-111"], samples=1, seed=2)
        assert a.records[0].params != b.records[0].params

    def test_erratum_sweep_counts_failures(self):
        rep = run_sweep(["E1-uncorrected-pbm"], samples=2, seed=7)
        assert not rep.all_passed
        assert rep.n_flagged == 2
        assert rep.n_fail_trusted == 0

    def test_csv_shape(self):
        rep = run_sweep(["E1-pbm-corrected"], samples=1, seed=4)
        lines = rep.to_csv().strip().split("\n")
        assert lines[0] == CSV_HEADER
        assert len(lines) == 2
