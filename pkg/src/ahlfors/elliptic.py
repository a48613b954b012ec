"""Jacobi elliptic machinery: AGM, complete elliptic integrals, theta
functions with nome q, and the sn function for complex arguments.

sn is evaluated as a ratio of theta series, which stays uniformly accurate
for complex arguments as long as |Im u| stays within one lattice period.
The nome is computed from the parameter by the arithmetic-geometric mean.
"""

import numpy as np

from .errors import AccuracyError, DomainError

_THETA_TOL = 1e-16
_THETA_MAX_TERMS = 96


def agm(a: float, b: float) -> float:
    """Arithmetic-geometric mean of two positive reals."""
    if a <= 0 or b <= 0:
        raise DomainError("agm needs positive arguments")
    for _ in range(64):
        if abs(a - b) <= 4e-16 * abs(a):
            break
        a, b = 0.5 * (a + b), np.sqrt(a * b)
    return 0.5 * (a + b)


def complete_elliptic_k(m: float) -> float:
    """Complete elliptic integral K(m) with parameter m in (0, 1)."""
    if not 0.0 < m < 1.0:
        raise DomainError(f"parameter m must lie in (0,1), got {m}")
    return 0.5 * np.pi / agm(1.0, np.sqrt(1.0 - m))


def nome_from_parameter(m: float) -> float:
    """Nome q = exp(-pi K(1-m)/K(m))."""
    kk = complete_elliptic_k(m)
    kkp = complete_elliptic_k(1.0 - m)
    return float(np.exp(-np.pi * kkp / kk))


def parameter_from_nome(q: float) -> float:
    """Parameter m with nome q, via m = (theta2/theta3)^4 at v = 0."""
    if not 0.0 < q < 1.0:
        raise DomainError(f"nome must lie in (0,1), got {q}")
    t2 = theta2(0.0, q)
    t3 = theta3(0.0, q)
    return float((t2 / t3).real ** 4)


def _theta_sum(v, q, term, bound, start):
    """Sum theta-series terms until the uniform term bound is past its peak
    and below tolerance."""
    v = np.asarray(v, dtype=complex)
    total = np.zeros_like(v)
    im = float(np.max(np.abs(v.imag))) if v.size else 0.0
    # term bounds grow until n ~ im/log(1/q), then decay super-geometrically
    n_peak = int(np.ceil(im / max(np.log(1.0 / q), 1e-30)))
    for n in range(start, _THETA_MAX_TERMS):
        total = total + term(n, v)
        if n > n_peak and bound(n, q, im) < _THETA_TOL:
            return total
    raise AccuracyError(
        "theta series did not converge; argument too far from the real axis"
    )


def _bound_half(n, q, im):
    return 2.0 * q ** ((n + 0.5) ** 2) * np.exp((2 * n + 1) * im)


def _bound_whole(n, q, im):
    return 2.0 * q ** (n**2) * np.exp(2 * n * im)


def theta1(v, q: float):
    return _theta_sum(
        v,
        q,
        lambda n, vv: 2.0 * (-1.0) ** n * q ** ((n + 0.5) ** 2) * np.sin((2 * n + 1) * vv),
        _bound_half,
        start=0,
    )


def theta2(v, q: float):
    return _theta_sum(
        v,
        q,
        lambda n, vv: 2.0 * q ** ((n + 0.5) ** 2) * np.cos((2 * n + 1) * vv),
        _bound_half,
        start=0,
    )


def theta3(v, q: float):
    return 1.0 + _theta_sum(
        v, q, lambda n, vv: 2.0 * q ** (n**2) * np.cos(2 * n * vv), _bound_whole, start=1
    )


def theta4(v, q: float):
    return 1.0 + _theta_sum(
        v,
        q,
        lambda n, vv: 2.0 * (-1.0) ** n * q ** (n**2) * np.cos(2 * n * vv),
        _bound_whole,
        start=1,
    )


def quarter_period_from_nome(q: float) -> float:
    """K for the lattice with nome q, via K = (pi/2) theta3(0,q)^2."""
    if not 0.0 < q < 1.0:
        raise DomainError(f"nome must lie in (0,1), got {q}")
    return float(0.5 * np.pi * theta3(0.0, q).real ** 2)


def sn_from_nome(u, q: float, kk: float):
    """sn on the lattice with nome q and quarter period kk (complex u ok).

    Taking the nome directly keeps thin-annulus lattices representable even
    when the parameter m rounds to 1 in double precision.
    """
    v = np.asarray(u, dtype=complex) * (0.5 * np.pi / kk)
    # theta1/theta4 has period 2*pi in Re(v); reduce exactly
    shift = np.round(v.real / (2.0 * np.pi))
    v = v - 2.0 * np.pi * shift
    scale = theta3(0.0, q) / theta2(0.0, q)
    out = scale * theta1(v, q) / theta4(v, q)
    return out if np.ndim(u) else complex(out)


def cn_dn_from_nome(u, q: float, kk: float):
    """cn and dn companions of sn_from_nome."""
    v = np.asarray(u, dtype=complex) * (0.5 * np.pi / kk)
    shift = np.round(v.real / (2.0 * np.pi))
    v = v - 2.0 * np.pi * shift
    t2, t3, t4 = theta2(0.0, q), theta3(0.0, q), theta4(0.0, q)
    th4 = theta4(v, q)
    cn = (t4 / t2) * theta2(v, q) / th4
    dn = (t4 / t3) * theta3(v, q) / th4
    if np.ndim(u):
        return cn, dn
    return complex(cn), complex(dn)


def jacobi_sn(u, m: float):
    """Jacobi sn(u; m) for complex u (scalar or array), parameter m in (0,1).

    Evaluated as (theta3/theta2)(0) * theta1(v)/theta4(v) with v = pi*u/(2K).
    The real part of the argument is reduced by the real period; the
    imaginary part must stay within one lattice period.
    """
    if not 0.0 < m < 1.0:
        raise DomainError(f"parameter m must lie in (0,1), got {m}")
    return sn_from_nome(u, nome_from_parameter(m), complete_elliptic_k(m))


def jacobi_cn_dn(u, m: float):
    """cn and dn companions of sn (same conventions as jacobi_sn)."""
    if not 0.0 < m < 1.0:
        raise DomainError(f"parameter m must lie in (0,1), got {m}")
    return cn_dn_from_nome(u, nome_from_parameter(m), complete_elliptic_k(m))
