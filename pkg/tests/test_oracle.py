"""Recurrence integrators: conservation laws, convergence to the closed
forms, and regime/argument gates."""

import numpy as np
import pytest

from panet.oracle import compare_closed_form, integrate_N, integrate_S
from panet.params import make_model_params
from panet.theory import c_exact, dnn_theory

P = make_model_params(2, 0.25, 0.3)


class TestSeedState:
    def test_checkpoint_at_seed(self):
        t = integrate_N(P, 3, d_max=10, record_at=[3])
        assert t.N[0][4] == 3  # doubled K3: three degree-4 vertices
        assert t.N[0].sum() == 3

    def test_d_max_must_hold_seed(self):
        with pytest.raises(ValueError, match="2m"):
            integrate_N(P, 100, d_max=3)

    def test_checkpoints_validated(self):
        with pytest.raises(ValueError, match="checkpoints"):
            integrate_N(P, 100, d_max=10, record_at=[200])


class TestIntegrateN:
    def test_conservation(self):
        t = integrate_N(P, 5000, d_max=200)
        n = t.n_values[-1]
        assert t.N[-1].sum() == pytest.approx(n, rel=1e-9)
        d = np.arange(201)
        assert (d * t.N[-1]).sum() == pytest.approx(2 * P.m * n, rel=1e-9)

    def test_converges_to_degree_coefficients(self):
        t = integrate_N(P, 20_000, d_max=300)
        n = t.n_values[-1]
        for d in range(2, 11):
            assert t.N[-1][d] / n == pytest.approx(c_exact(P, d), rel=5e-3)

    def test_supercritical_N_allowed(self):
        t = integrate_N(make_model_params(2, 0.6, 0.2), 2000, d_max=100)
        assert t.S is None
        assert np.isnan(t.W[-1])  # no finite-variance W estimate

    def test_A_equal_one_rejected(self):
        with pytest.raises(ValueError, match="A < 1"):
            integrate_N(make_model_params(2, 1.0, 0.0), 100, d_max=10)


class TestIntegrateS:
    def test_dnn_converges_to_theory(self):
        t = integrate_S(P, 20_000, d_max=300)
        rep = compare_closed_form(t)
        for d in range(2, 11):
            assert rep[d]["rel_err_S"] < 0.01
        # The integrated dnn matches the closed-form curve too.
        d = 3
        dnn = t.S[-1][d] / (t.N[-1][d] * d)
        assert dnn == pytest.approx(dnn_theory(P, d), rel=0.01)

    def test_gap_shrinks_with_n(self):
        t = integrate_S(P, 10_000, d_max=200, record_at=[1000, 10_000])
        errs = []
        for i in range(2):
            n = t.n_values[i]
            errs.append(abs(t.S[i][3] / n - 4.398545) / 4.398545)
        assert errs[1] < errs[0]

    def test_regime_gate(self):
        with pytest.raises(ValueError, match="subcritical"):
            integrate_S(make_model_params(2, 0.5, 0.2), 100, d_max=10)

    def test_compare_requires_matching_params(self):
        from panet.theory import build_theory_curve

        t = integrate_S(P, 500, d_max=50)
        other = build_theory_curve(make_model_params(2, 0.2, 0.3), np.arange(2, 51))
        with pytest.raises(ValueError, match="different parameters"):
            compare_closed_form(t, curve=other)
