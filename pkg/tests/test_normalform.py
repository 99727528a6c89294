import json

import numpy as np
import pytest

import hamsplit as hs
from hamsplit.errors import ResonanceError
from hamsplit.indices import MultiIndex, SignedIndex, is_action_class, omega_of
from hamsplit.models import NonlinearSpec, nls_model, paper_potential
from hamsplit.normalform import (_defect_hamiltonian, conjugated_map, flow_of,
                                 normalize, solve_homological, splitting_map,
                                 taylor_P, verify_order)
from hamsplit.poly import Polynomial

from conftest import random_state


class TestTaylorP:
    def test_matches_collocation_evaluation(self, nls1_mixed, rng):
        """Independent route: P evaluated through the FFT collocation sum vs
        the explicit Taylor coefficients."""
        P = taylor_P(nls1_mixed, 6)
        for _ in range(5):
            z = random_state(nls1_mixed.index_set, rng, size=0.6, real=False)
            assert P.evaluate(z) == pytest.approx(nls1_mixed.eval_P(z),
                                                  abs=1e-12)

    def test_matches_at_K2(self, rng):
        nl = NonlinearSpec.general({(3, 0): 0.4, (2, 2): 0.7})
        m = nls_model(2, paper_potential, nl)
        P = taylor_P(m, 5)
        for _ in range(5):
            z = random_state(m.index_set, rng, size=0.5, real=False)
            assert P.evaluate(z) == pytest.approx(m.eval_P(z), abs=1e-12)

    def test_momentum_selection_rule(self, nls1_mixed):
        P = taylor_P(nls1_mixed, 6)
        for j in P.coeffs:
            (mom,) = hs.momentum_of(j)
            assert mom % (2 * nls1_mixed.index_set.K) == 0

    def test_real_hamiltonian(self, nls1_mixed):
        P = taylor_P(nls1_mixed, 6)
        assert (P.conjugate_hamiltonian() - P).sup_norm() < 1e-14

    def test_large_K_rejected(self):
        m = nls_model(8, paper_potential, NonlinearSpec.cubic(1.0))
        with pytest.raises(ValueError):
            taylor_P(m, 4)


class TestSolveHomological:
    @pytest.fixture
    def model(self):
        return nls_model(1, paper_potential, NonlinearSpec.zero())

    def rand_rhs(self, model, ell, rng):
        signed = [SignedIndex(a, d) for a in model.index_set.modes
                  for d in (1, -1)]
        import itertools
        coeffs = {}
        for combo in itertools.combinations_with_replacement(signed, ell):
            coeffs[MultiIndex(combo)] = complex(rng.standard_normal(),
                                                rng.standard_normal())
        return Polynomial(ell, coeffs)

    @pytest.mark.parametrize("ell", [3, 4, 5])
    def test_residual_is_zero(self, model, rng, ell):
        """chi o phi_{H0}^h - chi + hZ = h rhs coefficientwise to 1e-12."""
        h = 0.3
        rhs = self.rand_rhs(model, ell, rng)
        chi, Z = solve_homological(ell, rhs, h, model, 1e-10)
        resid = (chi.compose_linear_flow(h, model) - chi + h * Z
                 - h * rhs)
        assert resid.sup_norm() < 1e-12

    def test_action_classes_go_to_Z(self, model, rng):
        rhs = self.rand_rhs(model, 4, rng)
        chi, Z = solve_homological(4, rhs, 0.3, model, 1e-10)
        assert all(is_action_class(j) for j in Z.coeffs)
        assert not any(is_action_class(j) for j in chi.coeffs)

    def test_half_rotation_worked_value(self, model):
        """h Omega = pi gives divisor e^{-i pi} - 1 = -2, so chi = -h/2 rhs."""
        j = MultiIndex.of((0, 1), (0, 1), (0, 1))
        om = omega_of(j, model)
        h = np.pi / om
        chi, _ = solve_homological(3, Polynomial.monomial(j, 1.0), h, model,
                                   1e-10)
        assert chi.coeffs[j] == pytest.approx(-h / 2, abs=1e-13)

    def test_resonance_error_when_h_omega_in_2pi(self, model):
        j = MultiIndex.of((0, 1), (0, 1), (0, 1))   # Omega = 3 omega_0
        h = 2 * np.pi / omega_of(j, model)
        with pytest.raises(ResonanceError) as err:
            solve_homological(3, Polynomial.monomial(j, 1.0), h, model, 1e-8)
        assert err.value.divisor < 1e-8

    def test_inhomogeneous_rhs_rejected(self, model):
        rhs = (Polynomial.monomial(MultiIndex.of((0, 1), (0, 1), (0, 1)), 1.0)
               + Polynomial.monomial(MultiIndex.of((0, 1), (0, -1)), 1.0))
        with pytest.raises(ValueError):
            solve_homological(3, rhs, 0.3, model, 1e-10)


class TestNormalize:
    def test_residual_at_every_degree(self, nls1_mixed):
        h = 0.3
        nf = normalize(nls1_mixed, 5, h)
        P = taylor_P(nls1_mixed, 5)
        W = _defect_hamiltonian(nf.chi, nf.Z, P, h, nls1_mixed, 5)
        for ell in range(3, 6):
            assert W.homogeneous_part(ell).sup_norm() < 1e-12

    def test_degree3_matches_direct_solution(self, nls1_mixed):
        """At lowest order the defect is h P_[3], so chi_3 must equal the
        homological solution with rhs = P_[3] (closed-form route)."""
        h = 0.3
        nf = normalize(nls1_mixed, 3, h)
        P3 = taylor_P(nls1_mixed, 3).homogeneous_part(3)
        chi_direct, Z_direct = solve_homological(3, P3, h, nls1_mixed, 1e-10)
        diff = nf.chi - chi_direct
        assert diff.sup_norm() < 1e-13
        assert (nf.Z - Z_direct).sup_norm() < 1e-13

    def test_Z_contains_only_action_classes(self, nls1_mixed):
        nf = normalize(nls1_mixed, 4, 0.3)
        assert all(is_action_class(j) for j in nf.Z.coeffs)

    def test_resonance_error_at_resonant_h(self, nls1_mixed):
        # make h Omega = 2 pi for the class xi_0^3 (Omega = 3 omega_0)
        j = MultiIndex.of((0, 1), (0, 1), (0, 1))
        h = 2 * np.pi / omega_of(j, nls1_mixed)
        with pytest.raises(ResonanceError):
            normalize(nls1_mixed, 3, h)

    def test_json_serialization(self, nls1_mixed):
        nf = normalize(nls1_mixed, 4, 0.3)
        data = json.loads(nf.to_json())
        assert data["r"] == 4 and data["K"] == 1
        assert len(data["chi"]) == len(nf.chi.coeffs)

    def test_large_model_rejected(self):
        m = nls_model(8, paper_potential, NonlinearSpec.cubic(1.0))
        with pytest.raises(ValueError):
            normalize(m, 3, 0.3)


class TestFlowOf:
    def test_inverse_flow(self, nls1_mixed, rng):
        nf = normalize(nls1_mixed, 3, 0.3)
        z = random_state(nls1_mixed.index_set, rng, size=0.05)
        w = flow_of(nf.chi, z, 1.0)
        back = flow_of(nf.chi, w, -1.0)
        resid = max(np.max(np.abs(back.xi - z.xi)),
                    np.max(np.abs(back.eta - z.eta)))
        assert resid <= 1e-10

    def test_quadratic_generator_is_rotation(self, rng):
        """Flow of omega I_0 rotates xi_0 by e^{-i omega}: closed form."""
        m = nls_model(1, paper_potential, NonlinearSpec.zero())
        om = 0.77
        gen = Polynomial(2, {MultiIndex.of((0, 1), (0, -1)): om})
        z = random_state(m.index_set, rng, size=0.3, real=False)
        out = flow_of(gen, z, 1.0)
        i0 = m.index_set.index_of((0,))
        assert out.xi[i0] == pytest.approx(np.exp(-1j * om) * z.xi[i0],
                                           abs=1e-11)


class TestVerifyOrder:
    H = 0.3

    def test_raw_slope_cubic(self, nls1_mixed):
        slope = verify_order(nls1_mixed, None, self.H,
                             [1e-2, 5e-3, 2.5e-3])
        assert slope == pytest.approx(3.0, abs=0.3)

    def test_r3_slope(self, nls1_mixed):
        nf = normalize(nls1_mixed, 3, self.H)
        slope = verify_order(nls1_mixed, nf, self.H, [1e-2, 5e-3, 2.5e-3])
        assert slope >= 3.5

    def test_r4_slope(self, nls1_mixed):
        nf = normalize(nls1_mixed, 4, self.H)
        slope = verify_order(nls1_mixed, nf, self.H, [1e-2, 5e-3, 2.5e-3])
        assert slope >= 4.5

    def test_conjugated_map_is_conjugate(self, nls1_mixed, rng):
        """tau o (conjugated map) o tau^{-1} equals the splitting map."""
        nf = normalize(nls1_mixed, 3, self.H)
        base = splitting_map(nls1_mixed, self.H)
        conj = conjugated_map(nls1_mixed, self.H, nf)
        z = random_state(nls1_mixed.index_set, rng, size=0.05)
        lhs = flow_of(nf.chi, conj(flow_of(nf.chi, z, -1.0)))
        rhs = base(z)
        assert np.max(np.abs(lhs.xi - rhs.xi)) < 1e-9
