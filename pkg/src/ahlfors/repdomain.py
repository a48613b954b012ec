"""The representative domain A_r = {z : |z + 1/z| < 2r} and the model annulus.

Provides the Joukowsky map with both inverse branches, the classical
annulus-to-slit-disc map built from Jacobi sn, the normalized biholomorphism
psi from the annulus a_rho = {1/rho < |z| < rho} onto A_r, and the
correspondence between rho and r.

The slit map uses sn with the nome q = rho^-4; this is the unique choice
for which the double-reflection tower of the annulus (multiplicative period
rho^4, i.e. 4*log(rho) in the log coordinate) matches the lattice of sn,
and it is validated by the boundary-image checks in the test suite.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .elliptic import (
    cn_dn_from_nome,
    quarter_period_from_nome,
    sn_from_nome,
    theta2,
    theta3,
)
from .errors import BranchCutError, DomainError
from .geometry import Curve, TwoConnectedDomain, build_domain

_MEDIAN_TOL = 1e-12


def joukowsky(z):
    """J(z) = (z + 1/z)/2; two-to-one with J(1/z) = J(z)."""
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise DomainError("joukowsky map undefined at z = 0")
    out = 0.5 * (z + 1.0 / z)
    return out if out.ndim else complex(out)


def _sqrt_joukowsky(w):
    # sqrt(w^2 - 1) with branch cut exactly on [-1, 1] and ~ w at infinity
    w = np.asarray(w, dtype=complex)
    return np.sqrt(w - 1.0) * np.sqrt(w + 1.0)


def joukowsky_inverse(w, branch: str):
    """Inverse branch of the Joukowsky map.

    ``branch`` is "outer" (|result| >= 1, the outer boundary side of A_r) or
    "inner" (the reciprocal point).  Points strictly inside the slit (-1, 1)
    have no unambiguous branch and are rejected.
    """
    w_arr = np.asarray(w, dtype=complex)
    on_cut = (w_arr.imag == 0.0) & (np.abs(w_arr.real) < 1.0)
    if np.any(on_cut):
        raise BranchCutError(
            "joukowsky_inverse is ambiguous on the open slit (-1, 1); "
            "choose a side by perturbing off the real axis"
        )
    outer = w_arr + _sqrt_joukowsky(w_arr)
    if branch == "outer":
        out = outer
    elif branch == "inner":
        out = 1.0 / outer
    else:
        raise DomainError(f"branch must be 'outer' or 'inner', got {branch!r}")
    return out if np.ndim(w) else complex(out)


@dataclass(eq=False)
class AnnulusModel:
    """Everything psi needs about the annulus a_rho and its image A_r.

    ``nome`` is rho^-4; ``m`` is the sn parameter whose nome that is.  The
    slit half-length of the conformal image of {1/rho < |z| < 1} onto the
    unit disc minus [-L, L] is L = m^(1/4), and r = 1/L.  ``rotation`` is the
    source rotation angle that pins psi(i) = i.
    """

    rho: float
    nome: float
    m: float
    L_slit: float
    r: float
    rotation: float
    _K: float

    @property
    def modulus(self) -> float:
        return self.rho**2


def _modulus_from_nome(q: float) -> float:
    """Elliptic modulus k with nome q, using the dual nome when q is large."""
    if not 0.0 < q < 1.0:
        raise DomainError(f"nome must lie in (0,1), got {q}")
    if q <= 0.25:
        return float((theta2(0.0, q) / theta3(0.0, q)).real ** 2)
    qp = float(np.exp(np.pi**2 / np.log(q)))
    if qp < 1e-300:
        # degenerate (very thin) annulus: k = 1 to machine precision
        return 1.0
    kp = float((theta2(0.0, qp) / theta3(0.0, qp)).real ** 2)
    return float(np.sqrt((1.0 - kp) * (1.0 + kp)))


def r_from_rho(rho: float) -> float:
    """Radius parameter r of the representative domain of a_rho."""
    if rho <= 1.0:
        raise DomainError(f"annulus parameter rho must exceed 1, got {rho}")
    q = rho**-4.0
    if q <= 0.25:
        k = _modulus_from_nome(q)
        return float(1.0 / np.sqrt(k))
    # thin annulus: r - 1 is exponentially small; go through the dual nome
    # with log1p/expm1 so that r keeps full relative precision in r - 1
    qp = float(np.exp(np.pi**2 / np.log(q)))
    if qp < 1e-300:
        return 1.0
    kp = float((theta2(0.0, qp) / theta3(0.0, qp)).real ** 2)
    return float(np.exp(-0.25 * np.log1p(-kp * kp)))


def rho_from_r(r: float) -> float:
    """Invert r_from_rho by bracketed root-finding (r_from_rho is increasing)."""
    if r <= 1.0:
        raise DomainError(f"representative parameter r must exceed 1, got {r}")
    lo = 1.0 + 1e-14
    hi = max(4.0 * r, 1.5)
    while r_from_rho(hi) < r:
        hi *= 2.0
        if hi > 1e9:
            raise DomainError(f"no annulus parameter found for r = {r}")
    rho = brentq(lambda p: r_from_rho(p) - r, lo, hi, xtol=1e-14, rtol=8.9e-16)
    return float(rho)


def slit_parameters(rho: float) -> AnnulusModel:
    """Slit geometry and normalization data for the annulus a_rho.

    Computes the half-length L of the slit [-L, L] cut from the unit disc by
    the classical sn-based map of {1/rho < |z| < 1}, sets r = 1/L, and solves
    the one-parameter rotation condition psi(i) = i.
    """
    if rho <= 1.0:
        raise DomainError(f"annulus parameter rho must exceed 1, got {rho}")
    q = rho**-4.0
    k = _modulus_from_nome(q)
    L = float(np.sqrt(k))
    model = AnnulusModel(
        rho=float(rho),
        nome=float(q),
        m=float(k * k),
        L_slit=L,
        r=r_from_rho(rho),
        rotation=0.0,
        _K=quarter_period_from_nome(q),
    )
    model.rotation = _solve_rotation(model)
    return model


def _slit_map_argument(z, model: AnnulusModel):
    # u = K + (2iK/pi) * log z; a full turn in z shifts u by one real period
    kk = model._K
    return kk + (2j * kk / np.pi) * np.log(np.asarray(z, dtype=complex))


def _psi_unrotated(z, model: AnnulusModel):
    """Biholomorphism a_rho -> A_r before the rotation normalization.

    For |z| >= 1 this is the outer Joukowsky branch of sn(u); for |z| < 1 the
    inner branch, which coincides with the Schwarz reflection across the unit
    circle.  Points on the median (where sn lands on the slit) take the branch
    side selected by an outward radial perturbation.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    u = _slit_map_argument(z, model)
    nu = np.atleast_1d(sn_from_nome(u, model.nome, model._K))
    r_abs = np.abs(z)
    on_median = np.abs(r_abs - 1.0) < _MEDIAN_TOL
    out = np.empty_like(nu)

    off = ~on_median
    if np.any(off):
        w = nu[off]
        jo = w + _sqrt_joukowsky(w)
        out[off] = np.where(r_abs[off] > 1.0, jo, 1.0 / jo)
    if np.any(on_median):
        # on the median sn is real in [-1, 1]; the branch side is the sign of
        # Im sn under an outward radial step, i.e. sign of Re(sn')
        um = u[on_median]
        cn, dn = cn_dn_from_nome(um, model.nome, model._K)
        side = np.sign(np.real(np.atleast_1d(cn) * np.atleast_1d(dn)))
        x = np.clip(np.real(nu[on_median]), -1.0, 1.0)
        out[on_median] = x + 1j * side * np.sqrt(1.0 - x * x)
    return out


def _solve_rotation(model: AnnulusModel) -> float:
    """Angle alpha with psi0(e^{i(alpha + pi/2)}) = i, so psi(i) = i."""

    def offset(phi: float) -> float:
        val = _psi_unrotated(np.exp(1j * phi), model)[0]
        return float(np.angle(val * (-1j)))

    phis = np.linspace(0.0, 2.0 * np.pi, 257)
    vals = np.array([offset(p) for p in phis[:-1]])
    j = int(np.argmin(np.abs(vals)))
    lo, hi = phis[j] - phis[1], phis[j] + phis[1]
    if offset(lo) * offset(hi) > 0:
        # fall back to scanning for a clean sign change
        for jj in range(256):
            a, b = vals[jj], vals[(jj + 1) % 256]
            if a * b <= 0 and abs(a) + abs(b) < 1.0:
                lo, hi = phis[jj], phis[jj + 1]
                break
        else:
            raise DomainError("rotation normalization failed to bracket psi = i")
    phi_star = brentq(offset, lo, hi, xtol=1e-15)
    return float((phi_star - 0.5 * np.pi) % (2.0 * np.pi))


def psi(z, model: AnnulusModel):
    """The normalized biholomorphism a_rho -> A_r (psi(i) = i, outer to outer).

    Accepts scalars or arrays with 1/rho <= |z| <= rho.
    """
    z_arr = np.atleast_1d(np.asarray(z, dtype=complex))
    r_abs = np.abs(z_arr)
    if np.any(r_abs > model.rho * (1 + 1e-12)) or np.any(
        r_abs < (1 - 1e-12) / model.rho
    ):
        raise DomainError("psi argument outside the closed annulus")
    out = _psi_unrotated(z_arr * np.exp(1j * model.rotation), model)
    return out if np.ndim(z) else complex(out[0])


def psi_derivative(z, model: AnnulusModel, n_nodes: int = 32):
    """psi'(z) by a small-circle Cauchy integral (psi is holomorphic across
    the median, so only the distance to the annulus boundary limits the
    radius)."""
    z_arr = np.atleast_1d(np.asarray(z, dtype=complex))
    r_abs = np.abs(z_arr)
    dist = np.minimum(model.rho - r_abs, r_abs - 1.0 / model.rho)
    if np.any(dist <= 0):
        raise DomainError("psi_derivative needs interior points")
    radius = 0.4 * dist
    theta = 2.0 * np.pi * np.arange(n_nodes) / n_nodes
    ring = np.exp(1j * theta)
    pts = z_arr[:, None] + radius[:, None] * ring[None, :]
    vals = psi(pts.ravel(), model).reshape(pts.shape)
    # f'(z) = (1/2*pi*i) * integral f(w)/(w-z)^2 dw, trapezoid on the circle
    out = np.sum(vals / ring[None, :], axis=1) / (n_nodes * radius)
    return out if np.ndim(z) else complex(out[0])


def ar_boundary(r: float, n: int = 256) -> TwoConnectedDomain:
    """The representative domain A_r sampled as a two-connected domain.

    Outer component j_outer(r e^{i theta}), inner component the reciprocal
    points, with exact parametrization derivatives.
    """
    if r <= 1.0:
        raise DomainError(f"representative parameter r must exceed 1, got {r}")
    if n % 2 != 0:
        raise DomainError("node count must be even")
    theta = 2.0 * np.pi * np.arange(n) / n
    w = r * np.exp(1j * theta)
    root = _sqrt_joukowsky(w)
    outer_samples = w + root
    outer_deriv = (1.0 + w / root) * 1j * w
    inner_samples = 1.0 / outer_samples
    inner_deriv = -outer_deriv / outer_samples**2
    outer = Curve(outer_samples, outer_deriv, "outer")
    inner = Curve(inner_samples, inner_deriv, "inner")
    # z = r is the arithmetic midpoint of the real-axis boundary crossings
    return build_domain(outer, inner, reference_point=complex(r))
