import itertools

import numpy as np
import pytest

import hamsplit as hs
from hamsplit.errors import BudgetExceededError
from hamsplit.indices import MultiIndex, SignedIndex, is_action_class
from hamsplit.models import NonlinearSpec, nls_model, paper_potential
from hamsplit.resonance import (build_omega_classes, certify_hypothesis1,
                                find_resonant_h, iter_multiindices, scan_h,
                                small_divisor)


@pytest.fixture
def model2():
    return nls_model(2, paper_potential, NonlinearSpec.zero())


class TestSmallDivisor:
    def test_closed_form(self):
        for h, om in [(0.3, 1.7), (1.1, -4.2), (0.01, 100.0)]:
            assert small_divisor(h, om) == pytest.approx(
                abs(1 - np.exp(1j * h * om)), abs=1e-14)

    def test_zero_at_resonance(self):
        assert small_divisor(2 * np.pi / 3.0, 3.0) == pytest.approx(0.0,
                                                                    abs=1e-12)


class TestEnumeration:
    def test_matches_naive_full_enumeration(self, model2):
        """Oracle: enumerate all ordered tuples of Z_K^r, canonicalize,
        compare Omega multisets (r <= 3, K <= 2)."""
        for r in (2, 3):
            table = build_omega_classes(model2, r)
            signed = [SignedIndex(a, d) for a in model2.index_set.modes
                      for d in (1, -1)]
            naive = {}
            for tup in itertools.product(signed, repeat=r):
                j = MultiIndex(tup)
                if is_action_class(j):
                    continue
                naive[j] = hs.omega_of(j, model2)
            naive_omegas = sorted(set(round(v, 10) for v in naive.values()))
            ours = sorted(set(round(v, 10) for v in table.values))
            assert ours == naive_omegas

    def test_iter_count(self, model2):
        # combinations_with_replacement(8 signed indices, r=2) = C(9,2) = 36
        assert sum(1 for _ in iter_multiindices(model2, 2, 10 ** 6)) == 36

    def test_budget_enforced(self, model2):
        with pytest.raises(BudgetExceededError):
            list(iter_multiindices(model2, 3, budget=5))

    def test_budget_carries_partial_table(self, model2):
        with pytest.raises(BudgetExceededError) as err:
            build_omega_classes(model2, 3, budget=10)
        assert err.value.partial is not None
        assert not err.value.partial.complete


class TestZeroClasses:
    def test_symmetric_classes_have_zero_omega(self, model2):
        """((-a,+1),(a,-1)) is non-action with Omega = 0 for even
        frequencies: reported as an exact-zero class, not silently dropped."""
        table = build_omega_classes(model2, 2)
        zeros = table.zero_divisor_classes()
        assert len(zeros) >= 1
        for j in zeros:
            assert not is_action_class(j)
            assert hs.omega_of(j, model2) == pytest.approx(0.0, abs=1e-12)


class TestCertify:
    def test_zero_when_exact_resonance_present(self, model2):
        report = certify_hypothesis1(model2, 2, None, 0.3, 0.0)
        # symmetric zero-Omega classes force gamma* = 0 under the inclusive
        # reading; the exclusive reading is reported alongside
        assert report.gamma_star_min == pytest.approx(0.0, abs=1e-12)
        assert report.gamma_star_min_excluding_zero > 0
        assert report.n_zero_omega_classes >= 1

    def test_matches_brute_force(self, model2):
        h, r = 0.37, 3
        report = certify_hypothesis1(model2, r, None, h, 0.0)
        table = build_omega_classes(model2, r)
        brute = min(small_divisor(h, om) / h for om in table.values)
        assert report.gamma_star_min == pytest.approx(brute, rel=1e-12)

    def test_alpha_star_scales_constant(self, model2):
        a = certify_hypothesis1(model2, 2, None, 0.37, 0.0)
        b = certify_hypothesis1(model2, 2, None, 0.37, 1.0)
        assert b.gamma_star_min_excluding_zero == pytest.approx(
            2.0 * a.gamma_star_min_excluding_zero, rel=1e-12)

    def test_json_round_trips(self, model2):
        import json
        report = certify_hypothesis1(model2, 2, None, 0.37, 0.0)
        data = json.loads(report.to_json())
        assert data["r"] == 2 and data["h"] == 0.37


class TestFindResonantH:
    def test_value(self):
        m = nls_model(10, paper_potential, NonlinearSpec.zero())
        h = find_resonant_h(m, 0, 6)
        assert h == pytest.approx(2 * np.pi / (36 + 2 / 82 - 0.2), rel=1e-12)

    def test_returned_h_is_resonant(self):
        m = nls_model(10, paper_potential, NonlinearSpec.zero())
        h = find_resonant_h(m, 1, 7)
        om = m.omega_at(7) - m.omega_at(1)
        assert small_divisor(h, om) == pytest.approx(0.0, abs=1e-12)

    def test_equal_frequencies_raise(self):
        m = nls_model(4, lambda a: 0.0, NonlinearSpec.zero())
        with pytest.raises(ZeroDivisionError):
            find_resonant_h(m, 2, -2)


class TestScanH:
    def test_flagged_fraction_zero_at_gamma_zero(self, model2):
        rep = scan_h(model2, 3, None, 1.0, 0.0, 0.0, 200, seed=3)
        assert rep.flagged_fraction == 0.0

    def test_monotone_in_gamma_star(self, model2):
        fracs = [scan_h(model2, 3, None, 1.0, 0.0, g, 400, seed=3)
                 .flagged_fraction for g in (0.0, 0.02, 0.05, 0.1, 0.3)]
        assert all(a <= b for a, b in zip(fracs, fracs[1:]))
        assert fracs[-1] > 0

    def test_sample_floor(self, model2):
        with pytest.raises(ValueError):
            scan_h(model2, 3, None, 1.0, 0.0, 0.1, 50)

    def test_deterministic_given_seed(self, model2):
        a = scan_h(model2, 3, None, 1.0, 0.0, 0.05, 200, seed=7)
        b = scan_h(model2, 3, None, 1.0, 0.0, 0.05, 200, seed=7)
        np.testing.assert_array_equal(a.h_values, b.h_values)
        np.testing.assert_array_equal(a.flagged, b.flagged)

    def test_flagged_points_truly_violate(self, model2):
        rep = scan_h(model2, 3, None, 1.0, 0.0, 0.08, 400, seed=11)
        table = build_omega_classes(model2, 3)
        for h, fl in zip(rep.h_values, rep.flagged):
            brute = min(small_divisor(h, om) for om in table.values)
            assert fl == (brute < 0.08 * h)

    def test_csv_output(self, model2, tmp_path):
        rep = scan_h(model2, 2, None, 1.0, 0.0, 0.05, 150, seed=1)
        path = tmp_path / "scan.csv"
        rep.write_csv(path)
        lines = path.read_text().splitlines()
        assert lines[0] == "h,min_divisor,argmin_class,flagged"
        assert len(lines) == len(rep.h_values) + 1

    def test_flagged_intervals_cover_flags(self, model2):
        rep = scan_h(model2, 3, None, 1.0, 0.0, 0.15, 300, seed=5)
        for h, fl in zip(rep.h_values, rep.flagged):
            inside = any(lo <= h <= hi for lo, hi in rep.flagged_intervals)
            assert inside == bool(fl)
