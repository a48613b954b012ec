import numpy as np
import pytest

from ahlfors.geometry import Curve, build_domain


def annulus_domain(rho: float, n: int = 256):
    """The annulus 1/rho < |z| < rho with exact circle parametrizations."""
    outer = Curve.from_fourier([(1, rho)], n, "outer")
    inner = Curve.from_fourier([(-1, 1.0 / rho)], n, "inner")
    return build_domain(outer, inner, reference_point=0.5 * (rho + 1.0 / rho))


def perturbed_annulus_domain(n: int = 256):
    """Non-symmetric smooth test domain: outer 2e^{it}+0.1e^{2it}, inner 0.5e^{-it}."""
    outer = Curve.from_fourier([(1, 2.0), (2, 0.1)], n, "outer")
    inner = Curve.from_fourier([(-1, 0.5)], n, "inner")
    return build_domain(outer, inner)


@pytest.fixture(scope="session")
def annulus2():
    return annulus_domain(2.0, 256)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
