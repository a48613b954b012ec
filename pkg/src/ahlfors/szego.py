"""Szego and Garabedian boundary kernels and the Ahlfors map.

The Szego boundary values S(., a) solve the second-kind integral equation
(I + A) S = g_a, where A is the smooth skew-hermitian kernel built from the
difference between the Cauchy projection and its adjoint, and g_a is the
conjugated Cauchy kernel anchored at the base point:

    A(w, z) = (1/2*pi*i) [ conj(T(w))/conj(z - w) - T(z)/(z - w) ],
    g_a(w)  = conj( (1/2*pi*i) T(w)/(w - a) ).

The kernel has a removable singularity with value 0 on the diagonal (it
vanishes identically on a circle, where the Cauchy projection is already
orthogonal).  The Garabedian values follow pointwise from the boundary
identity conj(S(z,a)) = (1/i) L(z,a) T(z), and the Ahlfors map is the ratio
f_a = S/L: unimodular on the boundary, two-to-one onto the disc, f_a(a) = 0
with f_a'(a) > 0.

Zeros, branch points, and preimages are located through residue integrals
of boundary data only (power sums of the two target points, then the
quadratic formula via Newton's identities).
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    AccuracyError,
    ConvergenceError,
    DegeneracyError,
    DomainError,
)
from .geometry import (
    QuadratureGrid,
    TwoConnectedDomain,
    cauchy_transform,
    spectral_derivative,
    winding_count,
)

_SOLVE_RESIDUAL_TOL = 1e-10
_BOUNDARY_ZERO_TOL = 1e-8
_DISCRIMINANT_TOL = 1e-10


@dataclass(eq=False)
class SzegoSolution:
    """Boundary values of the Szego and Garabedian kernels at one base point."""

    base_point: complex
    szego_boundary: np.ndarray
    garabedian_boundary: np.ndarray
    domain: TwoConnectedDomain


@dataclass(eq=False)
class AhlforsMap:
    """Boundary values of the Ahlfors map f_a = S/L with evaluation helpers."""

    base_point: complex
    boundary_values: np.ndarray
    boundary_derivative_values: np.ndarray
    solution: SzegoSolution
    domain: TwoConnectedDomain

    @property
    def grid(self) -> QuadratureGrid:
        return self.domain.grid

    def evaluate(self, z):
        """Interior values via the normalized Cauchy integral (array ok)."""
        return cauchy_transform(self.boundary_values, self.grid, z)

    def derivative(self, z):
        """Interior derivative values via the Cauchy integral (array ok)."""
        return cauchy_transform(self.boundary_values, self.grid, z, derivative=1)

    def second_derivative(self, z):
        return cauchy_transform(self.boundary_values, self.grid, z, derivative=2)

    def winding(self) -> int:
        return winding_count(
            self.boundary_values, self.boundary_derivative_values, self.grid
        )


@dataclass(frozen=True)
class BranchPair:
    """The two simple zeros of f_a' (branch points on the median)."""

    p1: complex
    p2: complex


def dz_derivative(values, domain: TwoConnectedDomain) -> np.ndarray:
    """d/dz of boundary data, spectral in the parameter curve by curve."""
    values = np.asarray(values, dtype=complex)
    n_o = domain.outer.n
    out = np.empty_like(values)
    out[:n_o] = spectral_derivative(values[:n_o]) / domain.outer.derivatives
    out[n_o:] = spectral_derivative(values[n_o:]) / domain.inner.derivatives
    return out


def kerzman_stein_matrix(grid: QuadratureGrid) -> np.ndarray:
    """The smooth skew-hermitian kernel A(w_i, z_j) at the nodes (0 diagonal)."""
    z = grid.nodes
    t = grid.tangents
    diff = z[None, :] - z[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        a = (np.conj(t)[:, None] / np.conj(diff) - t[None, :] / diff) / (2j * np.pi)
    np.fill_diagonal(a, 0.0)
    return a


def solve_szego(domain: TwoConnectedDomain, a: complex) -> SzegoSolution:
    """Szego boundary values S(., a) by a dense Nystrom solve.

    Raises DomainError when a is not interior, ConvergenceError when the
    linear-system residual exceeds tolerance, and AccuracyError when the
    computed kernels violate their nonvanishing invariants.
    """
    a = complex(a)
    if not domain.contains(a):
        raise DomainError(f"base point {a} does not lie in the domain")
    grid = domain.grid
    amat = kerzman_stein_matrix(grid)
    system = np.eye(grid.nodes.size, dtype=complex) + amat * grid.ds_weights[None, :]
    rhs = np.conj(grid.tangents / (grid.nodes - a) / (2j * np.pi))
    szego = np.linalg.solve(system, rhs)
    residual = np.max(np.abs(system @ szego - rhs)) / np.max(np.abs(rhs))
    if residual > _SOLVE_RESIDUAL_TOL:
        raise ConvergenceError(
            f"Kerzman-Stein-Trummer solve residual {residual:.3e} exceeds "
            f"{_SOLVE_RESIDUAL_TOL:.1e}"
        )
    garabedian = 1j * np.conj(szego) * np.conj(grid.tangents)
    # the kernels may legitimately dip many orders of magnitude (their one
    # zero can sit near the boundary in conformal distance); only exact
    # zeros or non-finite values signal failure
    if not np.all(np.isfinite(szego)) or np.min(np.abs(szego)) == 0.0:
        raise AccuracyError("Szego boundary values vanished on the boundary")
    return SzegoSolution(a, szego, garabedian, domain)


def ahlfors_map(domain: TwoConnectedDomain, a: complex) -> AhlforsMap:
    """The Ahlfors map f_a = S/L with boundary derivative values.

    A final unimodular correction (measured by a derivative Cauchy integral
    at the base point) pins f_a'(a) real and positive exactly.
    """
    sol = solve_szego(domain, a)
    f = sol.szego_boundary / sol.garabedian_boundary
    deriv_at_a = cauchy_transform(f, domain.grid, sol.base_point, derivative=1)
    if abs(deriv_at_a) == 0.0:
        raise AccuracyError("Ahlfors map derivative vanished at the base point")
    f = f * (np.conj(deriv_at_a) / abs(deriv_at_a))
    fp = dz_derivative(f, domain)
    return AhlforsMap(sol.base_point, f, fp, sol, domain)


def _power_sums(numerator, denominator, amap: AhlforsMap, count_expected: int):
    """(s_0, s_1, s_2) of the points enclosed by numerator/denominator."""
    grid = amap.grid
    ratio = np.asarray(numerator, dtype=complex) / np.asarray(denominator, dtype=complex)
    sums = [
        grid.contour_integral(ratio * grid.nodes**n) / (2j * np.pi) for n in range(3)
    ]
    # guards against wrong counts (off by >= 1), not a precision assertion:
    # second derivatives of boundary data lose a factor N^2 of accuracy
    if abs(sums[0] - count_expected) > 1e-3:
        raise AccuracyError(
            f"residue count {sums[0]:.3e} does not round to {count_expected}; "
            "increase the node count"
        )
    return sums


def _quadratic_roots(s1: complex, s2: complex):
    """Roots of z^2 - s1 z + (s1^2 - s2)/2 via Newton's identities."""
    a_coef = s1
    b_coef = 0.5 * (s1 * s1 - s2)
    disc = a_coef * a_coef - 4.0 * b_coef
    scale = max(1.0, abs(a_coef) ** 2, abs(b_coef))
    if abs(disc) < _DISCRIMINANT_TOL * scale:
        raise DegeneracyError(
            "coincident roots in the quadratic recovery (discriminant "
            f"{abs(disc):.3e}); bad input or insufficient resolution"
        )
    root = np.sqrt(complex(disc))
    return 0.5 * (a_coef + root), 0.5 * (a_coef - root)


def szego_zero(solution: SzegoSolution, grid: QuadratureGrid) -> complex:
    """The one zero Z(a) of S(., a), from the logarithmic residue integral.

    Verifies that the Ahlfors map actually vanishes there (its zeros are the
    base point and Z(a)).
    """
    s = solution.szego_boundary
    sp = dz_derivative(s, solution.domain)
    z_a = grid.contour_integral(grid.nodes * sp / s) / (2j * np.pi)
    f = s / solution.garabedian_boundary
    f_at = cauchy_transform(f, grid, complex(z_a))
    if abs(f_at) > 1e-6:
        raise AccuracyError(
            f"|f(Z(a))| = {abs(f_at):.3e} at the computed Szego zero; "
            "residue integral inconsistent with the map"
        )
    return complex(z_a)


def _polish_critical_point(amap: AhlforsMap, z0: complex) -> complex:
    """Newton iteration on f' = 0 using interior Cauchy evaluations."""
    z = complex(z0)
    scale = float(np.max(np.abs(amap.grid.nodes)))
    for _ in range(30):
        fp = amap.derivative(z)
        fpp = amap.second_derivative(z)
        if abs(fpp) == 0.0:
            break
        step = fp / fpp
        z -= step
        if abs(step) < 1e-14 * scale:
            break
    return z


def _branch_seeds_from_residues(amap: AhlforsMap):
    fp = amap.boundary_derivative_values
    fpp = dz_derivative(fp, amap.domain)
    if np.min(np.abs(fp)) < _BOUNDARY_ZERO_TOL * np.max(np.abs(fp)):
        raise DegeneracyError("f' vanishes on the boundary; branch points ill-posed")
    _, s1, s2 = _power_sums(fpp, fp, amap, 2)
    return _quadratic_roots(s1, s2)


def _branch_seeds_from_grid(amap: AhlforsMap):
    # |f'| can span hundreds of orders of magnitude on thin domains, which
    # destroys the residue integrands; interior evaluations near the branch
    # points stay well conditioned, so seed a search from |f'| minima
    pts = amap.domain.interior_grid(24, 64, margin=0.05)
    vals = np.abs(amap.derivative(pts))
    order = np.argsort(vals)
    scale = float(np.max(np.abs(amap.grid.nodes)))
    p1 = _polish_critical_point(amap, pts[order[0]])
    for idx in order[1:]:
        if abs(pts[idx] - p1) < 0.1 * scale:
            continue
        p2 = _polish_critical_point(amap, pts[idx])
        if abs(p2 - p1) > 1e-6 * scale:
            return p1, p2
    raise DegeneracyError("could not locate two distinct critical points of f")


def branch_points(amap: AhlforsMap) -> BranchPair:
    """The two simple zeros of f_a' inside the domain.

    Power sums p1^n + p2^n come from residue integrals of f''/f' against
    z^n and the pair is recovered by the quadratic formula, then polished by
    Newton iterations on interior evaluations.  When the dynamic range of f'
    on the boundary overwhelms the residue integrals (very thin domains),
    the seeds come from a grid search over |f'| instead.
    """
    try:
        seeds = _branch_seeds_from_residues(amap)
    except (AccuracyError, DegeneracyError):
        # a genuine boundary zero of f' is impossible for an Ahlfors map
        # (Hopf lemma), so a tripped guard means dynamic range, not geometry
        seeds = _branch_seeds_from_grid(amap)
    p1, p2 = (_polish_critical_point(amap, s) for s in seeds)
    scale = float(np.max(np.abs(amap.grid.nodes)))
    if abs(p1 - p2) < 1e-6 * scale:
        raise DegeneracyError(
            f"branch points collapsed to {p1}; bad input or insufficient resolution"
        )
    for p in (p1, p2):
        if not amap.domain.contains(p):
            raise AccuracyError(f"computed branch point {p} is not interior")
        val = amap.derivative(p)
        if abs(val) > 1e-6 * max(1.0, float(np.max(np.abs(amap.boundary_derivative_values)))):
            raise AccuracyError(f"|f'| = {abs(val):.3e} at computed branch point {p}")
    if abs(p1 - amap.base_point) < 1e-8 or abs(p2 - amap.base_point) < 1e-8:
        raise AccuracyError("branch point collided with the base point")
    return BranchPair(complex(p1), complex(p2))


def preimages(amap: AhlforsMap, tau: complex):
    """The two solutions of f_a(w) = tau, by the same residue reduction."""
    tau = complex(tau)
    if abs(tau) >= 1.0:
        raise DomainError(f"target value must lie in the unit disc, got |tau| = {abs(tau)}")
    f = amap.boundary_values
    fp = amap.boundary_derivative_values
    shifted = f - tau
    if np.min(np.abs(shifted)) < _BOUNDARY_ZERO_TOL:
        raise DegeneracyError("f - tau vanishes on the boundary")
    _, s1, s2 = _power_sums(fp, shifted, amap, 2)
    w1, w2 = _quadratic_roots(s1, s2)
    return complex(w1), complex(w2)
