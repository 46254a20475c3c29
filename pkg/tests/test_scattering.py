"""Tests for the transfer-matrix machinery and the sweep plumbing."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from susywell.errors import DegenerateMatch, EvanescentOverflow, SliceTooCoarse
from susywell.scattering import (
    ConstantSegment,
    FieldSegment,
    PiecewisePotential,
    PlaneBasisSegment,
    SWEEP_HEADER,
    _constant_propagator,
    plane_partner_sweep,
    square_barrier_transmission,
    sweep_csv,
    transfer_matrix,
    transmission_reflection,
)
from susywell.susy_core import Family, Partner, SuperpotentialSpec, partner_field

MATRIX_TOL = 1e-10
ORACLE_RTOL = 1e-8

# frozen closed-form values, evaluated by hand from the textbook expressions
T_TUNNEL_V4_A1_E1 = 0.0909668503958455
T_WELL_V5_A1_E2 = 0.9082214485068217
T_RESONANCE_V4_A1 = 0.5


def barrier(v0=4.0, width=1.0):
    return PiecewisePotential((0.0, width), (ConstantSegment(v0),))


class TestTransferMatrix:
    def test_empty_structure_is_identity(self):
        pot = PiecewisePotential((0.0, 2.0), (ConstantSegment(0.0),))
        m = transfer_matrix(pot, 3.7)
        assert np.max(np.abs(m - np.eye(2))) < MATRIX_TOL

    def test_zero_width_propagator_is_identity(self):
        # the container refuses degenerate breakpoints, but the segment
        # propagator itself degrades continuously to the identity
        m = _constant_propagator(4.0, 0.0, 1.0)
        assert np.max(np.abs(m - np.eye(2))) == 0.0

    def test_unimodular(self):
        for E in (0.5, 1.0, 7.3):
            m = transfer_matrix(barrier(), E)
            det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
            assert abs(det - 1.0) < MATRIX_TOL

    def test_composition(self):
        left = PiecewisePotential((0.0, 1.0), (ConstantSegment(2.0),))
        right = PiecewisePotential((1.0, 2.5), (ConstantSegment(-1.0),))
        both = PiecewisePotential((0.0, 1.0, 2.5),
                                  (ConstantSegment(2.0), ConstantSegment(-1.0)))
        E = 5.0
        combined = transfer_matrix(right, E) @ transfer_matrix(left, E)
        assert np.max(np.abs(combined - transfer_matrix(both, E))) < MATRIX_TOL

    def test_translation_only_shifts_phases(self):
        # |T| of a shifted copy of the structure is unchanged
        E = 2.0
        base = transmission_reflection(barrier(), E)
        moved = transmission_reflection(
            PiecewisePotential((10.0, 11.0), (ConstantSegment(4.0),)), E)
        assert moved.transmission == pytest.approx(base.transmission, abs=1e-12)
        assert moved.reflection == pytest.approx(base.reflection, abs=1e-12)

    def test_energy_below_asymptote_refused(self):
        with pytest.raises(ValueError):
            transfer_matrix(barrier(), -0.5)

    def test_ascending_breakpoints_enforced(self):
        with pytest.raises(ValueError):
            PiecewisePotential((0.0, 0.0), (ConstantSegment(1.0),))
        with pytest.raises(ValueError):
            PiecewisePotential((1.0, 0.5), (ConstantSegment(1.0),))

    def test_segment_count_enforced(self):
        with pytest.raises(ValueError):
            PiecewisePotential((0.0, 1.0, 2.0), (ConstantSegment(1.0),))

    def test_complex_asymptote_refused(self):
        with pytest.raises(ValueError):
            PiecewisePotential((0.0, 1.0), (ConstantSegment(1.0),),
                               asymptotic=1.0 + 1.0j)

    def test_evanescent_overflow_guard(self):
        wide = PiecewisePotential((0.0, 100.0), (ConstantSegment(1e8),))
        with pytest.raises(EvanescentOverflow):
            transfer_matrix(wide, 1.0)


class TestBarrierOracle:
    def test_free_space(self):
        pot = PiecewisePotential((0.0, 1.0), (ConstantSegment(0.0),))
        res = transmission_reflection(pot, 1.0)
        assert abs(res.r) < MATRIX_TOL
        assert abs(res.t - 1.0) < MATRIX_TOL
        assert abs(res.flux_defect) < MATRIX_TOL

    def test_tunneling_value(self):
        res = transmission_reflection(barrier(4.0, 1.0), 1.0)
        assert res.transmission == pytest.approx(T_TUNNEL_V4_A1_E1,
                                                 rel=ORACLE_RTOL)
        assert square_barrier_transmission(4.0, 1.0, 1.0) == pytest.approx(
            T_TUNNEL_V4_A1_E1, rel=1e-12)

    def test_well_value(self):
        res = transmission_reflection(
            PiecewisePotential((0.0, 1.0), (ConstantSegment(-5.0),)), 2.0)
        assert res.transmission == pytest.approx(T_WELL_V5_A1_E2, rel=ORACLE_RTOL)
        assert abs(res.flux_defect) < 1e-10

    def test_resonance_branch(self):
        # E = V0 goes through the sinc limit in both code paths
        res = transmission_reflection(barrier(4.0, 1.0), 4.0)
        assert res.transmission == pytest.approx(T_RESONANCE_V4_A1, abs=1e-12)
        assert square_barrier_transmission(4.0, 1.0, 4.0) == pytest.approx(
            T_RESONANCE_V4_A1, abs=1e-12)

    def test_resonance_is_continuous(self):
        eps = 1e-6
        below = square_barrier_transmission(4.0, 1.0, 4.0 - eps)
        above = square_barrier_transmission(4.0, 1.0, 4.0 + eps)
        assert below == pytest.approx(T_RESONANCE_V4_A1, abs=1e-5)
        assert above == pytest.approx(T_RESONANCE_V4_A1, abs=1e-5)

    def test_transparency_above_barrier(self):
        # sin(sqrt(E - V0) a) = 0 gives T = 1 exactly
        E = 4.0 + math.pi ** 2
        assert square_barrier_transmission(4.0, 1.0, E) == pytest.approx(1.0,
                                                                         abs=1e-12)
        res = transmission_reflection(barrier(4.0, 1.0), E)
        assert res.transmission == pytest.approx(1.0, abs=1e-10)

    def test_deep_tunneling_branch(self):
        # kappa*a = 310 and 299.9: one evaluation on each side of the sinh
        # overflow cutoff, still representable, and T(w) ~ exp(-2 kappa w)
        # so the two must sit on the same exponential
        v0 = 96101.0  # kappa = sqrt(v0 - 1) = 310 exactly
        w_hi, w_lo = 1.0, 299.9 / 310.0
        t_hi = square_barrier_transmission(v0, w_hi, 1.0)
        t_lo = square_barrier_transmission(v0, w_lo, 1.0)
        assert 0.0 < t_hi < 1e-250
        assert t_hi / t_lo == pytest.approx(math.exp(-2.0 * 310.0 * (w_hi - w_lo)),
                                            rel=1e-6)

    @pytest.mark.parametrize("mult", [0.1, 0.5, 2.0, 5.0, 10.0])
    def test_flux_and_oracle_sweep(self, mult):
        v0, width = 4.0, 1.0
        energy = mult * v0
        res = transmission_reflection(barrier(v0, width), energy)
        assert abs(res.flux_defect) < 1e-10
        ref = square_barrier_transmission(v0, width, energy)
        assert res.transmission == pytest.approx(ref, rel=ORACLE_RTOL)

    def test_two_segment_structure_conserves_flux(self):
        pot = PiecewisePotential((0.0, 1.0, 2.0),
                                 (ConstantSegment(3.0), ConstantSegment(-1.0)))
        for E in (0.4, 1.1, 6.0):
            res = transmission_reflection(pot, E)
            assert abs(res.flux_defect) < 1e-10

    def test_oracle_input_validation(self):
        with pytest.raises(ValueError):
            square_barrier_transmission(4.0, -1.0, 1.0)
        with pytest.raises(ValueError):
            square_barrier_transmission(4.0, 1.0, 0.0)


class TestFieldSegments:
    def test_thin_slices_match_exact_constant(self):
        const = transfer_matrix(barrier(2.5, 1.3), 1.0)

        def field(x):
            return np.full_like(np.asarray(x, dtype=float), 2.5, dtype=complex)

        sliced = transfer_matrix(
            PiecewisePotential((0.0, 1.3), (FieldSegment(field, 500),)), 1.0)
        assert np.max(np.abs(const - sliced)) < 1e-10

    def test_slice_convergence_second_order(self):
        spec = SuperpotentialSpec(Family.PLANE_RIGHT, 1.0, 1.0)
        field = partner_field(spec, Partner.V1)

        def t_at(n):
            pot = PiecewisePotential((0.0, 2.0), (FieldSegment(field, n),))
            return transmission_reflection(pot, 1.5).transmission

        t_fine = t_at(6400)
        e1 = abs(t_at(200) - t_fine)
        e2 = abs(t_at(400) - t_fine)
        e3 = abs(t_at(800) - t_fine)
        assert 3.0 < e1 / e2 < 5.0
        assert 3.0 < e2 / e3 < 5.5


class TestPlaneFamilySweep:
    def test_zero_coupling_reduces_to_constant_well(self):
        spec = SuperpotentialSpec(Family.PLANE_RIGHT, 1.0, 0.0)
        res = plane_partner_sweep(spec, Partner.V1, (0.0, 1.0), [1.0],
                                  slices=400)[0]
        ref = square_barrier_transmission(-1.0, 1.0, 1.0)
        assert res.transmission == pytest.approx(ref, rel=1e-6)

    def test_complex_window_recorded_and_stable(self):
        spec = SuperpotentialSpec(Family.PLANE_RIGHT, 1.0, 1.0)
        res = plane_partner_sweep(spec, Partner.V1, (0.0, 2 * math.pi), [1.0],
                                  slices=1000)[0]
        assert res.flux_defect != 0.0
        assert math.isfinite(res.flux_defect)
        again = plane_partner_sweep(spec, Partner.V1, (0.0, 2 * math.pi), [1.0],
                                    slices=2000)[0]
        assert res.transmission == pytest.approx(again.transmission, abs=2e-6)

    def test_left_right_equal_on_full_period_window(self):
        # V_L(x) = V_R(pi/k - x); a window spanning whole periods makes the
        # two restrictions differ by translation + mirror, so T must agree
        k = 1.0
        left = SuperpotentialSpec(Family.PLANE_LEFT, k, 1.0)
        right = SuperpotentialSpec(Family.PLANE_RIGHT, k, 1.0)
        window = (-math.pi / k, math.pi / k)
        for E in (0.5, 1.7):
            tl = plane_partner_sweep(left, Partner.V1, window, [E],
                                     slices=20000, max_doublings=0)[0]
            tr = plane_partner_sweep(right, Partner.V1, window, [E],
                                     slices=20000, max_doublings=0)[0]
            assert abs(tl.transmission - tr.transmission) < 1e-8

    def test_left_right_mirrored_windows_agree_exactly(self):
        # the sharper statement: mirroring the window as well makes the two
        # discretized problems identical slice by slice
        k = 1.0
        left = SuperpotentialSpec(Family.PLANE_LEFT, k, 1.0)
        right = SuperpotentialSpec(Family.PLANE_RIGHT, k, 1.0)
        a, b = 0.3, 2.2
        tl = plane_partner_sweep(left, Partner.V1, (a, b), [1.7],
                                 slices=500, max_doublings=0)[0]
        tr = plane_partner_sweep(right, Partner.V1,
                                 (math.pi / k - b, math.pi / k - a), [1.7],
                                 slices=500, max_doublings=0)[0]
        assert abs(tl.transmission - tr.transmission) < 1e-12

    def test_conjugate_matrix_relation(self):
        # V_L = conj(V_R) pointwise, so conjugating the ODE swaps the
        # plane-wave basis vectors: M_L = sx conj(M_R) sx
        sx = np.array([[0.0, 1.0], [1.0, 0.0]])
        right = partner_field(SuperpotentialSpec(Family.PLANE_RIGHT, 1.0, 1.0),
                              Partner.V1)
        left = partner_field(SuperpotentialSpec(Family.PLANE_LEFT, 1.0, 1.0),
                             Partner.V1)
        mr = transfer_matrix(
            PiecewisePotential((-1.0, 1.0), (FieldSegment(right, 3000),)), 0.5)
        ml = transfer_matrix(
            PiecewisePotential((-1.0, 1.0), (FieldSegment(left, 3000),)), 0.5)
        assert np.max(np.abs(ml - sx @ np.conj(mr) @ sx)) < 1e-12

    def test_requires_plane_family(self):
        spec = SuperpotentialSpec(Family.COTANGENT_WELL, 1.0, 1.0)
        with pytest.raises(ValueError):
            plane_partner_sweep(spec, Partner.V1, (0.0, 1.0), [1.0])

    def test_slice_too_coarse(self):
        spec = SuperpotentialSpec(Family.PLANE_RIGHT, 1.0, 1.0)
        with pytest.raises(SliceTooCoarse):
            plane_partner_sweep(spec, Partner.V1, (0.0, 2 * math.pi), [1.0],
                                slices=16, stabilize_tol=0.0, max_doublings=0)


class TestPlaneBasisSegments:
    def test_transparent_at_matching_energy(self):
        # q = 0 turns the basis into exact plane waves of the E = k^2 problem
        pot = PiecewisePotential((0.0, 2.0), (PlaneBasisSegment(1.0, 0.0),))
        m = transfer_matrix(pot, 1.0)
        assert np.max(np.abs(m - np.eye(2))) < 1e-12

    def test_composes_with_constant_segments(self):
        pot = PiecewisePotential(
            (0.0, 1.0, 2.0),
            (ConstantSegment(0.0), PlaneBasisSegment(1.0, 0.0)))
        res = transmission_reflection(pot, 1.0)
        assert res.transmission == pytest.approx(1.0, abs=1e-10)

    def test_degenerate_basis_detected(self):
        # k + q sin(kx) vanishes at the right edge for k=1, q=-1, x=pi/2
        pot = PiecewisePotential((0.0, math.pi / 2),
                                 (PlaneBasisSegment(1.0, -1.0),))
        with pytest.raises(DegenerateMatch):
            transfer_matrix(pot, 1.0)

    def test_invalid_wavenumber_refused(self):
        with pytest.raises(ValueError):
            PlaneBasisSegment(-1.0, 0.0)


class TestSweepSerialization:
    def test_header_and_shape(self):
        res = [transmission_reflection(barrier(), E) for E in (0.4, 2.0)]
        text = sweep_csv(res)
        lines = text.splitlines()
        assert lines[0] == ",".join(SWEEP_HEADER)
        assert len(lines) == 3
        assert text.endswith("\n")
        assert "\r" not in text

    def test_byte_determinism(self):
        res = [transmission_reflection(barrier(), E) for E in (0.4, 2.0)]
        assert sweep_csv(res) == sweep_csv(
            [transmission_reflection(barrier(), E) for E in (0.4, 2.0)])

    def test_roundtrip_values(self):
        res = [transmission_reflection(barrier(), 2.0)]
        row = sweep_csv(res).splitlines()[1].split(",")
        assert float(row[0]) == 2.0
        assert float(row[6]) == res[0].transmission
