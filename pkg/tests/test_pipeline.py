import numpy as np
import pytest
from scipy.spatial import cKDTree

from ahlfors.errors import AccuracyError, DomainError
from ahlfors.geometry import Curve, build_domain, spectral_derivative
from ahlfors.pipeline import (
    boundary_residual,
    build_phi,
    defining_identity_residual,
    map_parameters,
    modulus,
    run_pipeline,
    select_base_point,
    trace_median,
)
from ahlfors.repdomain import ar_boundary, joukowsky, r_from_rho
from ahlfors.szego import ahlfors_map

from conftest import annulus_domain, perturbed_annulus_domain


@pytest.fixture(scope="module")
def annulus_run(annulus2):
    return run_pipeline(annulus2, seed_point=1.3, median_points=50)


@pytest.fixture(scope="module")
def identity_run():
    # A_1.05 with base point i: the unique normalized self-map is the identity
    dom = ar_boundary(1.05, 384)
    amap = ahlfors_map(dom, 1j)
    params = map_parameters(dom, 1j, amap)
    return dom, amap, params, build_phi(dom, params, amap)


class TestSelectBasePoint:
    def test_annulus_tie_break(self, annulus2):
        a = select_base_point(annulus2, 1.3)
        assert abs(a + 1j) < 1e-6  # lexicographically smaller of +-i

    def test_lands_on_median(self, annulus2):
        a = select_base_point(annulus2, 0.9 + 0.35j)
        assert abs(abs(a) - 1.0) < 1e-6

    def test_seed_outside_rejected(self, annulus2):
        with pytest.raises(DomainError):
            select_base_point(annulus2, 2.5)


class TestMapParameters:
    def test_identity_constants(self, identity_run):
        _, _, params, _ = identity_run
        assert abs(params.c - 1.05) < 1e-6
        assert abs(params.lam - 1.0) < 1e-6
        assert abs(params.r - 1.05) < 1e-6

    def test_annulus_r_matches_slit_construction(self, annulus_run):
        assert abs(annulus_run.params.r - r_from_rho(2.0)) < 1e-5

    def test_lambda_unimodular(self, annulus_run):
        assert abs(abs(annulus_run.params.lam) - 1.0) < 1e-8

    def test_critical_value_relations(self, annulus_run):
        pr = annulus_run.params
        f = annulus_run.ahlfors
        assert abs(pr.lam * f.evaluate(pr.p1) + 1.0 / pr.r) < 1e-8
        assert abs(pr.lam * f.evaluate(pr.p2) - 1.0 / pr.r) < 1e-8
        assert abs(f.evaluate(pr.p1) + f.evaluate(pr.p2)) < 1e-8

    def test_off_median_base_point_rejected(self, annulus2):
        with pytest.raises(AccuracyError):
            map_parameters(annulus2, 1.3)


class TestBuildPhi:
    def test_identity_on_boundary(self, identity_run):
        dom, _, _, phi = identity_run
        assert np.max(np.abs(phi.boundary_values - dom.grid.nodes)) < 1e-6

    def test_boundary_residual(self, annulus_run):
        assert annulus_run.boundary_residual < 1e-6

    def test_defining_identity_interior(self, annulus_run):
        assert annulus_run.identity_residual < 1e-6

    def test_phi_at_base_point_is_i(self, annulus_run):
        v = annulus_run.phi.evaluate(annulus_run.params.base_point)
        assert abs(v - 1j) < 1e-6

    def test_branch_point_images(self, annulus_run):
        phi = annulus_run.phi
        assert abs(phi.evaluate(phi.params.p1) + 1.0) < 1e-5
        assert abs(phi.evaluate(phi.params.p2) - 1.0) < 1e-5

    def test_interior_injectivity(self, annulus_run):
        pts = annulus_run.domain.interior_grid(32, 32, margin=0.08)
        w = annulus_run.phi.evaluate(pts)
        tree = cKDTree(np.c_[w.real, w.imag])
        d, _ = tree.query(np.c_[w.real, w.imag], k=2)
        assert d[:, 1].min() > 1e-5

    def test_boundary_correspondence(self, annulus_run):
        # each boundary curve maps injectively with winding 1 about interior
        # points of its image region
        phi = annulus_run.phi
        dom = annulus_run.domain
        n_o = dom.outer.n
        for sl, curve in ((slice(0, n_o), dom.outer), (slice(n_o, None), dom.inner)):
            vals = phi.boundary_values[sl]
            tree = cKDTree(np.c_[vals.real, vals.imag])
            d, _ = tree.query(np.c_[vals.real, vals.imag], k=2)
            assert d[:, 1].min() > 1e-8
        dvals = spectral_derivative(phi.boundary_values[:n_o])
        w = np.sum(dvals / (phi.boundary_values[:n_o] - 1j)) / (1j * n_o)
        assert abs(w - 1.0) < 1e-6
        dvals_i = spectral_derivative(phi.boundary_values[n_o:])
        w_about_zero = np.sum(dvals_i / phi.boundary_values[n_o:]) / (1j * dom.inner.n)
        assert abs(w_about_zero + 1.0) < 1e-6
        w_about_i = np.sum(dvals_i / (phi.boundary_values[n_o:] - 1j)) / (1j * dom.inner.n)
        assert abs(w_about_i) < 1e-6


class TestMedian:
    def test_annulus_median_is_unit_circle(self, annulus_run):
        pts = annulus_run.median.points
        assert pts.size == 2 + 2 * 50
        assert np.max(np.abs(np.abs(pts) - 1.0)) < 1e-5

    def test_endpoints_are_branch_points(self, annulus_run):
        pts = annulus_run.median.points
        pr = annulus_run.params
        assert pts[0] == pr.p1
        assert pts[51] == pr.p2

    def test_point_count_contract(self, annulus2):
        res = run_pipeline(annulus2, seed_point=1.3)
        med = trace_median(annulus2, res.params, 2, res.ahlfors)
        assert med.points.size == 6

    def test_values_on_segment(self, annulus_run):
        # f(median points) must lie on the segment through +-1/c
        f = annulus_run.ahlfors
        c = annulus_run.params.c
        vals = f.evaluate(annulus_run.median.points[1:51]) * c
        assert np.max(np.abs(vals.imag)) < 1e-6
        assert np.max(np.abs(vals.real)) < 1.0

    def test_representative_domain_median(self, identity_run):
        dom, amap, params, _ = identity_run
        med = trace_median(dom, params, 20, amap)
        assert np.max(np.abs(np.abs(med.points) - 1.0)) < 1e-5


class TestModulus:
    @pytest.mark.parametrize("rho", [1.5, 2.0, 3.0])
    def test_annulus_round_trip(self, rho):
        res = run_pipeline(annulus_domain(rho, 256))
        assert abs(res.modulus - rho**2) / rho**2 < 1e-4

    def test_representative_domain(self, identity_run):
        _, _, params, _ = identity_run
        rho = 1.750528830891618  # golden value of rho_from_r(1.05)
        assert abs(modulus(params) - rho**2) / rho**2 < 1e-6


class TestConformalInvariance:
    def test_moebius_image_same_r(self, annulus2, annulus_run):
        c0 = 0.2
        t_map = lambda z: (z - c0) / (1 - c0 * z)
        t_prime = lambda z: (1 - c0**2) / (1 - c0 * z) ** 2
        outer = Curve(
            t_map(annulus2.outer.samples),
            t_prime(annulus2.outer.samples) * annulus2.outer.derivatives,
            "outer",
        )
        inner = Curve(
            t_map(annulus2.inner.samples),
            t_prime(annulus2.inner.samples) * annulus2.inner.derivatives,
            "inner",
        )
        dom = build_domain(outer, inner, reference_point=t_map(1.25))
        res = run_pipeline(dom)
        assert abs(res.params.r - annulus_run.params.r) < 1e-5


class TestPerturbedAnnulus:
    def test_end_to_end_golden(self):
        res = run_pipeline(perturbed_annulus_domain(256), median_points=10)
        assert res.boundary_residual < 1e-5
        assert res.identity_residual < 1e-6
        # golden values locked on first verified run
        assert abs(res.params.r - 1.1205981084459427) < 1e-9
        assert abs(res.modulus - 3.999332795814325) < 1e-8
