"""Tests for monic polynomial evaluation, norms, and the Stieltjes procedure."""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import SWEEP_CONFIGS, get_measure, get_sequence
from opgf import (
    Family,
    JacobiSzegoSequence,
    NumericalBreakdownError,
    ParameterError,
    QuadratureRule,
    eval_monic,
    gauss_quadrature,
    norm_squared,
    stieltjes_from_quadrature,
)


def free_meixner_seq(a, b):
    return get_sequence(Family.FREE_MEIXNER, None, a, b)


class TestEvalMonic:
    def test_semicircle_by_hand(self):
        # alpha = 0, omega_1 = 1: P1(0.5) = 0.5, P2(0.5) = 0.25 - 1
        table = eval_monic(free_meixner_seq(0.0, 0.0), 2, 0.5)
        assert table.values[1] == pytest.approx(0.5, abs=0)
        assert table.values[2] == pytest.approx(-0.75, abs=0)

    @pytest.mark.parametrize("config", SWEEP_CONFIGS)
    def test_degree_zero_is_one(self, config):
        seq = get_sequence(*config)
        assert eval_monic(seq, 5, 0.37).values[0] == 1.0

    def test_sym1_lambda2_p2_at_zero(self):
        # alpha = 0 so P2(0) = -omega_1 = -1
        seq = get_sequence(Family.SYM1, 2.0, None, None)
        assert eval_monic(seq, 2, 0.0).values[2] == pytest.approx(-1.0, abs=1e-15)

    def test_rejects_nonfinite_x(self):
        seq = free_meixner_seq(0.0, 0.0)
        with pytest.raises(ParameterError):
            eval_monic(seq, 3, math.nan)
        with pytest.raises(ParameterError):
            eval_monic(seq, 3, math.inf)

    def test_rejects_negative_n_max(self):
        with pytest.raises(ParameterError):
            eval_monic(free_meixner_seq(0.0, 0.0), -1, 0.0)

    @pytest.mark.parametrize("config", SWEEP_CONFIGS[:8])
    def test_monic_leading_coefficient(self, config):
        # Fit the coefficients of P_n through n+1 samples: leading one is 1.
        seq = get_sequence(*config)
        for n in range(1, 5):
            xs = np.linspace(-1.0, 1.0, n + 1)
            ys = [eval_monic(seq, n, x).values[n] for x in xs]
            coeffs = np.polyfit(xs, ys, n)
            assert coeffs[0] == pytest.approx(1.0, rel=1e-10)

    @settings(max_examples=60, deadline=None)
    @given(
        x=st.floats(-2.4, 2.4),
        lam=st.sampled_from([0.6, 1.5, 2.0, 2.5]),
        family=st.sampled_from([Family.SYM1, Family.SYM2, Family.NONSYM_PLUS]),
    )
    def test_matches_coefficient_construction(self, x, lam, family):
        # Independent oracle: build the monic coefficient arrays by the same
        # recurrence in coefficient space, then evaluate with polyval.
        seq = get_sequence(family, lam, None, None)
        n_max = 12
        table = eval_monic(seq, n_max, x)
        prev = np.zeros(1)
        cur = np.ones(1)
        for n in range(n_max):
            shifted = np.concatenate([cur, [0.0]])  # multiply by x
            nxt = shifted.copy()
            nxt[1:] -= seq.alpha(n) * cur
            nxt[2:] -= seq.omega(n) * prev
            prev, cur = cur, nxt
            value = np.polyval(cur, x)
            # The oracle itself cancels catastrophically when the monomial
            # terms dwarf the value, so scale by its condition number.
            condition = float(np.polyval(np.abs(cur), abs(x)))
            assert abs(table.values[n + 1] - value) <= 1e-12 * max(1.0, condition)


class TestNormSquared:
    def test_empty_product(self):
        assert norm_squared(free_meixner_seq(0.0, 0.0), 0) == 1.0

    def test_free_meixner_tail(self):
        # omega = (1, 1, 1.5, 1.5, ...) for b = 0.5: ||P_3||^2 = 1 * 1.5 * 1.5
        seq = free_meixner_seq(0.0, 0.5)
        assert norm_squared(seq, 3) == pytest.approx(2.25)
        # quadrature oracle for the same quantity
        measure = get_measure(Family.FREE_MEIXNER, None, 0.0, 0.5)
        rule = gauss_quadrature(measure, 12)
        values = np.array([eval_monic(seq, 3, x).values[3] for x in rule.nodes])
        assert float(rule.weights @ values**2) == pytest.approx(2.25, rel=1e-12)

    def test_sym1_lambda2(self):
        # ||P_2||^2 = omega_1 omega_2 = 1.25; cross-checked by quadrature
        seq = get_sequence(Family.SYM1, 2.0, None, None)
        assert norm_squared(seq, 2) == pytest.approx(1.25)
        rule = gauss_quadrature(get_measure(Family.SYM1, 2.0, None, None), 12)
        values = np.array([eval_monic(seq, 2, x).values[2] for x in rule.nodes])
        assert float(rule.weights @ values**2) == pytest.approx(1.25, rel=1e-12)

    def test_rejects_negative_n(self):
        with pytest.raises(ParameterError):
            norm_squared(free_meixner_seq(0.0, 0.0), -1)


class TestSequenceInvariants:
    def test_omega0_convention_enforced(self):
        with pytest.raises(ParameterError):
            JacobiSzegoSequence(alpha=lambda n: 0.0, omega=lambda n: 2.0,
                                standardized=False)

    def test_standardized_flag_enforced(self):
        with pytest.raises(ParameterError):
            JacobiSzegoSequence(alpha=lambda n: 1.0, omega=lambda n: 1.0,
                                standardized=True)

    def test_from_tables_bounds(self):
        seq = JacobiSzegoSequence.from_tables([0.0, 0.5], [1.0, 1.0])
        assert seq.alpha(1) == 0.5
        with pytest.raises(ParameterError):
            seq.alpha(2)
        with pytest.raises(ParameterError):
            seq.omega(-1)

    @pytest.mark.parametrize("config", SWEEP_CONFIGS)
    def test_omega_positive(self, config):
        seq = get_sequence(*config)
        for n in range(1, 21):
            assert seq.omega(n) > 0.0


class TestStieltjes:
    def test_uniform_alphas_vanish(self):
        # Uniform on [-sqrt(3), sqrt(3)] is sym1 at lambda = 1/2.
        rule = gauss_quadrature(get_measure(Family.SYM1, 0.5, None, None), 20)
        seq = stieltjes_from_quadrature(rule, 6)
        for n in range(7):
            assert abs(seq.alpha(n)) <= 1e-10

    def test_sym1_lambda2_omega2(self):
        rule = gauss_quadrature(get_measure(Family.SYM1, 2.0, None, None), 20)
        seq = stieltjes_from_quadrature(rule, 6)
        assert seq.omega(2) == pytest.approx(1.25, abs=1e-10)

    def test_nonsym_plus_lambda2_alpha1(self):
        rule = gauss_quadrature(get_measure(Family.NONSYM_PLUS, 2.0, None, None), 20)
        seq = stieltjes_from_quadrature(rule, 6)
        assert seq.alpha(1) == pytest.approx(2.0 / math.sqrt(27.0), abs=1e-10)

    def test_too_few_nodes(self):
        rule = gauss_quadrature(get_measure(Family.SYM1, 2.0, None, None), 8)
        with pytest.raises(ParameterError):
            stieltjes_from_quadrature(rule, 4)

    def test_degree_cap(self):
        rule = gauss_quadrature(get_measure(Family.SYM1, 2.0, None, None), 30)
        with pytest.raises(ParameterError):
            stieltjes_from_quadrature(rule, 41)

    def test_breakdown_reports_failing_index(self):
        # 11 nodes but only 5 distinct values: P_5 vanishes on every node.
        base = np.array([-2.0, -1.0, 0.0, 1.0, 2.0])
        nodes = np.concatenate([base, base, base[:1]])
        weights = np.full(nodes.size, 1.0 / nodes.size)
        rule = QuadratureRule(nodes=nodes, weights=weights, order=5)
        with pytest.raises(NumericalBreakdownError) as excinfo:
            stieltjes_from_quadrature(rule, 5)
        assert excinfo.value.index == 5

    def test_orthogonality_of_recovered_sequence(self):
        # The recovered coefficients reproduce discretely orthogonal P_n.
        measure = get_measure(Family.NONSYM_MINUS, 1.5, None, None)
        rule = gauss_quadrature(measure, 20)
        seq = stieltjes_from_quadrature(rule, 6)
        tables = np.array([eval_monic(seq, 6, x).values for x in rule.nodes])
        for m in range(7):
            for n in range(m):
                inner = float(np.sum(rule.weights * tables[:, m] * tables[:, n]))
                bound = 1e-9 * math.sqrt(
                    norm_squared(seq, m) * norm_squared(seq, n)
                )
                assert abs(inner) <= bound

    @pytest.mark.parametrize("config", SWEEP_CONFIGS)
    def test_round_trip_matches_catalog(self, config):
        measure = get_measure(*config)
        catalog = get_sequence(*config)
        recovered = stieltjes_from_quadrature(gauss_quadrature(measure, 20), 8)
        for n in range(9):
            assert recovered.alpha(n) == pytest.approx(catalog.alpha(n), abs=1e-8)
            assert recovered.omega(n) == pytest.approx(catalog.omega(n), abs=1e-8)

    @pytest.mark.parametrize("config", SWEEP_CONFIGS[:10])
    def test_norm_identity_against_quadrature(self, config):
        measure = get_measure(*config)
        seq = get_sequence(*config)
        rule = gauss_quadrature(measure, 20)
        for n in range(9):
            values = np.array([eval_monic(seq, n, x).values[n] for x in rule.nodes])
            quad_norm = float(np.sum(rule.weights * values * values))
            assert quad_norm == pytest.approx(norm_squared(seq, n), rel=1e-8)
