import numpy as np
import pytest

from ahlfors.errors import AccuracyError, DegeneracyError, DomainError
from ahlfors.repdomain import ar_boundary, joukowsky, psi, slit_parameters
from ahlfors.szego import (
    ahlfors_map,
    branch_points,
    preimages,
    solve_szego,
    szego_zero,
    _quadratic_roots,
)

from conftest import annulus_domain, perturbed_annulus_domain


def szego_series_annulus(z, a, rho, nmax=200):
    """Independent oracle: Hardy-space series for the Szego kernel of a_rho."""
    out = np.zeros_like(np.asarray(z, dtype=complex))
    for n in range(-nmax, nmax + 1):
        out += (z * np.conj(a)) ** n / (2 * np.pi * (rho ** (2 * n + 1) + rho ** (-2 * n - 1)))
    return out


@pytest.fixture(scope="module")
def map_a1(annulus2):
    return ahlfors_map(annulus2, 1.0)


@pytest.fixture(scope="module")
def ar105():
    return ar_boundary(1.05, 256)


@pytest.fixture(scope="module")
def map_ar105_i(ar105):
    return ahlfors_map(ar105, 1j)


class TestSolveSzego:
    def test_matches_series_oracle(self, annulus2):
        sol = solve_szego(annulus2, 1.0)
        ref = szego_series_annulus(annulus2.grid.nodes, 1.0, 2.0)
        assert np.max(np.abs(sol.szego_boundary - ref)) < 1e-12

    def test_boundary_identity_moduli(self, annulus2):
        # conj(S) = (1/i) L T with |T| = 1 forces |S| = |L| nodewise
        sol = solve_szego(annulus2, 0.9 + 0.4j)
        assert np.max(np.abs(np.abs(sol.szego_boundary) - np.abs(sol.garabedian_boundary))) < 1e-14

    def test_base_point_outside_rejected(self, annulus2):
        with pytest.raises(DomainError):
            solve_szego(annulus2, 3.0)
        with pytest.raises(DomainError):
            solve_szego(annulus2, 0.1)


class TestAhlforsMap:
    def test_unimodular_on_boundary(self, map_a1):
        assert np.max(np.abs(np.abs(map_a1.boundary_values) - 1.0)) < 1e-8

    def test_vanishes_at_base_point(self, map_a1):
        assert abs(map_a1.evaluate(1.0)) < 1e-10

    def test_derivative_real_positive(self, map_a1):
        d = map_a1.derivative(1.0)
        assert d.real > 0
        assert abs(d.imag) < 1e-12 * d.real

    def test_second_zero(self, map_a1):
        assert abs(map_a1.evaluate(-1.0)) < 1e-6

    def test_two_to_one(self, map_a1):
        assert map_a1.winding() == 2

    def test_ratio_of_solution(self, map_a1):
        sol = map_a1.solution
        ratio = sol.szego_boundary / sol.garabedian_boundary
        # equal up to the (tiny) unimodular derivative correction
        phase = map_a1.boundary_values[0] / ratio[0]
        assert abs(abs(phase) - 1.0) < 1e-12
        assert np.max(np.abs(map_a1.boundary_values - phase * ratio)) < 1e-12

    def test_base_point_i_zero_at_minus_i(self, annulus2):
        amap = ahlfors_map(annulus2, 1j)
        assert abs(amap.evaluate(-1j)) < 1e-6

    def test_closed_form_identity_on_representative_domain(self, map_ar105_i, ar105):
        ref = joukowsky(ar105.grid.nodes) / 1.05
        assert np.max(np.abs(map_ar105_i.boundary_values - ref)) < 1e-6

    def test_perturbed_annulus_unimodular(self):
        dom = perturbed_annulus_domain(256)
        amap = ahlfors_map(dom, dom.reference_point)
        assert np.max(np.abs(np.abs(amap.boundary_values) - 1.0)) < 1e-6
        assert amap.winding() == 2
        assert abs(amap.evaluate(dom.reference_point)) < 1e-8


class TestSzegoZero:
    def test_real_base_point(self, annulus2):
        sol = solve_szego(annulus2, 1.0)
        assert abs(szego_zero(sol, annulus2.grid) + 1.0) < 1e-6

    def test_imaginary_base_point(self, annulus2):
        sol = solve_szego(annulus2, 1j)
        assert abs(szego_zero(sol, annulus2.grid) + 1j) < 1e-6

    def test_generic_base_point(self, annulus2):
        a = 0.8 + 0.3j
        sol = solve_szego(annulus2, a)
        assert abs(szego_zero(sol, annulus2.grid) - (-1.0 / np.conj(a))) < 1e-6


class TestBranchPoints:
    def test_annulus_real_base(self, map_a1):
        bp = branch_points(map_a1)
        got = sorted([bp.p1, bp.p2], key=lambda w: w.imag)
        assert abs(got[0] + 1j) < 1e-6
        assert abs(got[1] - 1j) < 1e-6

    def test_representative_domain(self):
        amap = ahlfors_map(ar_boundary(1.05, 384), 1j)
        bp = branch_points(amap)
        got = sorted([bp.p1, bp.p2], key=lambda w: w.real)
        assert abs(got[0] + 1.0) < 1e-6
        assert abs(got[1] - 1.0) < 1e-6

    def test_on_median_for_generic_base(self, annulus2):
        amap = ahlfors_map(annulus2, 0.8 + 0.3j)
        bp = branch_points(amap)
        assert abs(abs(bp.p1) - 1.0) < 1e-6
        assert abs(abs(bp.p2) - 1.0) < 1e-6

    def test_quadratic_recovery(self):
        # power sums s1 = 0, s2 = -2 give z^2 + 1 = 0
        r1, r2 = _quadratic_roots(0.0, -2.0)
        got = sorted([r1, r2], key=lambda w: w.imag)
        assert abs(got[0] + 1j) < 1e-14
        assert abs(got[1] - 1j) < 1e-14

    def test_degenerate_discriminant(self):
        with pytest.raises(DegeneracyError):
            _quadratic_roots(2.0, 2.0)  # double root at 1


class TestPreimages:
    def test_zero_level(self, map_a1):
        w1, w2 = preimages(map_a1, 0.0)
        got = sorted([w1, w2], key=lambda w: w.real)
        assert abs(got[0] + 1.0) < 1e-6
        assert abs(got[1] - 1.0) < 1e-6

    def test_zero_level_representative(self, map_ar105_i):
        w1, w2 = preimages(map_ar105_i, 0.0)
        got = sorted([w1, w2], key=lambda w: w.imag)
        assert abs(got[0] + 1j) < 1e-6
        assert abs(got[1] - 1j) < 1e-6

    def test_generic_level(self, map_a1):
        w1, w2 = preimages(map_a1, 0.3)
        assert abs(map_a1.evaluate(w1) - 0.3) < 1e-6
        assert abs(map_a1.evaluate(w2) - 0.3) < 1e-6

    def test_critical_value_rejected(self, map_a1):
        bp = branch_points(map_a1)
        tau = complex(map_a1.evaluate(bp.p1))
        with pytest.raises(DegeneracyError):
            preimages(map_a1, tau)

    def test_target_outside_disc(self, map_a1):
        with pytest.raises(DomainError):
            preimages(map_a1, 1.2)


class TestTransformationLaw:
    def test_pullback_through_psi(self, annulus2):
        model = slit_parameters(2.0)
        ar = ar_boundary(model.r, 384)
        w = 1.3 + 0.2j
        f_ann = ahlfors_map(annulus2, w)
        f_ar = ahlfors_map(ar, psi(w, model))
        t = np.linspace(0.3, 5.9, 7)
        zs = np.concatenate([0.8 * np.exp(1j * t), 1.5 * np.exp(1j * t)])
        lhs = f_ann.evaluate(zs)
        rhs = f_ar.evaluate(psi(zs, model))
        lam = lhs[0] / rhs[0]
        assert abs(abs(lam) - 1.0) < 1e-6
        assert np.max(np.abs(lhs - lam * rhs)) < 1e-5
