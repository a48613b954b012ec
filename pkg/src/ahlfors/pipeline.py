"""End-to-end construction of the conformal map onto the representative
domain A_r.

The pipeline: pick a seed point P, compute its Ahlfors map, move the base
point to one of that map's branch points (which lie on the median), compute
the Ahlfors map f there, read off the branch pair (p1, p2) and the constant
c = -1/f(p1) = r*lambda, and assemble Phi = J^{-1}(c f) from boundary values
(outer Joukowsky branch on the outer curve, inner branch on the inner one).
Interior values of Phi always come from the Cauchy integral of these
boundary values, never from pointwise branch tracking.

The labeling of p1 versus p2 is fixed so that Phi(a) = i, matching the
normalization of the representative map; the opposite labeling gives -Phi
(a legal map differing by the order-two automorphism).
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import AccuracyError, BranchCutError, DegeneracyError, DomainError
from .geometry import TwoConnectedDomain, cauchy_transform
from .repdomain import joukowsky, rho_from_r
from .szego import AhlforsMap, ahlfors_map, branch_points, preimages


@dataclass(eq=False)
class MapParameters:
    """The tuple fixing Phi = J^{-1}(c f_a): branch pair, c = r*lambda."""

    seed_point: complex
    base_point: complex
    p1: complex
    p2: complex
    c: complex
    r: float
    lam: complex

    def flipped(self) -> "MapParameters":
        """The opposite branch labeling (gives -Phi)."""
        return MapParameters(
            self.seed_point, self.base_point, self.p2, self.p1, -self.c, self.r, -self.lam
        )


@dataclass(eq=False)
class ConformalMapPhi:
    """Boundary values of Phi with Cauchy-integral interior evaluation."""

    params: MapParameters
    boundary_values: np.ndarray
    domain: TwoConnectedDomain
    ahlfors: AhlforsMap

    @property
    def grid(self):
        return self.domain.grid

    def evaluate(self, z):
        return cauchy_transform(self.boundary_values, self.grid, z)

    def derivative(self, z):
        return cauchy_transform(self.boundary_values, self.grid, z, derivative=1)


@dataclass(eq=False)
class MedianPolyline:
    """Ordered loop through the median: p1, first arc, p2, second arc."""

    points: np.ndarray
    tau_values: np.ndarray


def select_base_point(domain: TwoConnectedDomain, seed: complex) -> complex:
    """A point on the median: one branch point of the Ahlfors map at seed.

    Ties break lexicographically by (Re, Im), smaller first.
    """
    seed = complex(seed)
    if not domain.contains(seed):
        raise DomainError(f"seed point {seed} does not lie in the domain")
    amap = ahlfors_map(domain, seed)
    pair = branch_points(amap)
    scale = float(np.max(np.abs(domain.grid.nodes)))
    tol = 1e-8 * scale
    p, q = pair.p1, pair.p2
    if abs(p.real - q.real) > tol:
        return p if p.real < q.real else q
    return p if p.imag < q.imag else q


def _phi_boundary(domain: TwoConnectedDomain, c: complex, f_boundary) -> np.ndarray:
    """Boundary values of J^{-1}(c f): outer branch outside, inner inside."""
    w = c * np.asarray(f_boundary, dtype=complex)
    if np.min(np.abs(w)) < 1.0 - 1e-6:
        raise BranchCutError(
            "branch assignment failed: |c f| dipped inside the unit circle "
            "on the boundary"
        )
    # sqrt(w^2-1) with the cut on [-1,1]; |w| >= 1 keeps both branches clean
    root = np.sqrt(w - 1.0) * np.sqrt(w + 1.0)
    outer_vals = w + root
    n_o = domain.outer.n
    out = np.empty_like(w)
    out[:n_o] = outer_vals[:n_o]
    out[n_o:] = 1.0 / outer_vals[n_o:]
    return out


def map_parameters(
    domain: TwoConnectedDomain, a: complex, amap: AhlforsMap | None = None
) -> MapParameters:
    """Compute (p1, p2, c, r, lambda) for the base point a on the median.

    The branch labeling is pinned by requiring Phi(a) = i (evaluated through
    the Cauchy integral of candidate boundary values); exactly one labeling
    satisfies it, the other gives Phi(a) = -i.
    """
    a = complex(a)
    if amap is None:
        amap = ahlfors_map(domain, a)
    pair = branch_points(amap)
    f_p1, f_p2 = amap.evaluate(pair.p1), amap.evaluate(pair.p2)
    if abs(f_p1 + f_p2) > 1e-4 * max(1.0, abs(f_p1)):
        raise AccuracyError(
            "critical values are not opposite: the base point does not lie "
            "on the median (use select_base_point) or the resolution is too low"
        )
    p1, p2, f1 = pair.p1, pair.p2, f_p1
    if abs(f1) >= 1.0:
        raise AccuracyError(
            f"|f(p1)| = {abs(f1):.6f} >= 1; inconsistent critical value"
        )
    c = -1.0 / f1
    r = abs(c)
    if r <= 1.0:
        raise AccuracyError(f"computed r = {r:.6f} <= 1; inconsistent map data")
    params = MapParameters(a, a, p1, p2, complex(c), float(r), complex(c / r))
    phi_at_a = cauchy_transform(
        _phi_boundary(domain, params.c, amap.boundary_values), domain.grid, a
    )
    if phi_at_a.imag < 0:
        params = params.flipped()
        phi_at_a = -phi_at_a
    if abs(phi_at_a - 1j) > 1e-4:
        raise AccuracyError(
            f"Phi(a) = {phi_at_a} is not close to i; map construction inconsistent"
        )
    return params


def build_phi(
    domain: TwoConnectedDomain, params: MapParameters, amap: AhlforsMap | None = None
) -> ConformalMapPhi:
    """Assemble Phi from boundary values of the Ahlfors map at params.base_point."""
    if amap is None:
        amap = ahlfors_map(domain, params.base_point)
    vals = _phi_boundary(domain, params.c, amap.boundary_values)
    return ConformalMapPhi(params, vals, domain, amap)


def boundary_residual(phi: ConformalMapPhi) -> float:
    """max over nodes of | |J(Phi)| - r |."""
    jj = joukowsky(phi.boundary_values)
    return float(np.max(np.abs(np.abs(jj) - phi.params.r)))


def defining_identity_residual(phi: ConformalMapPhi, n_grid: int = 20) -> float:
    """max over an interior grid of |(1/r) J(Phi(z)) - lambda f(z)|."""
    pts = phi.domain.interior_grid(n_grid, n_grid, margin=0.1)
    lhs = joukowsky(phi.evaluate(pts)) / phi.params.r
    rhs = phi.params.lam * phi.ahlfors.evaluate(pts)
    return float(np.max(np.abs(lhs - rhs)))


def trace_median(
    domain: TwoConnectedDomain,
    params: MapParameters,
    n: int,
    amap: AhlforsMap | None = None,
) -> MedianPolyline:
    """The median as the preimage of the segment [-1/c, 1/c] under f.

    Sweeps n interior values of tau (Chebyshev-clustered toward the
    endpoints, where the two preimages merge into the branch points) and
    joins the two arcs through p1 and p2 into one ordered loop.
    """
    if n < 2:
        raise DomainError("median trace needs at least 2 sweep values")
    if amap is None:
        amap = ahlfors_map(domain, params.base_point)
    x = -np.cos(np.pi * np.arange(1, n + 1) / (n + 1))
    taus = x / params.c
    arc1: list[complex] = []
    arc2: list[complex] = []
    kept = []
    for tau in taus:
        pair = None
        for shrink in range(4):
            try:
                pair = preimages(amap, tau)
                break
            except DegeneracyError:
                tau *= 0.995
        if pair is None:
            warnings.warn(
                f"median sweep skipped a value near the branch points (tau ~ {tau:.3g})",
                stacklevel=2,
            )
            continue
        kept.append(tau)
        w1, w2 = pair
        if not arc1:
            if (w2.real, w2.imag) < (w1.real, w1.imag):
                w1, w2 = w2, w1
        elif abs(w1 - arc1[-1]) + abs(w2 - arc2[-1]) > abs(w2 - arc1[-1]) + abs(
            w1 - arc2[-1]
        ):
            w1, w2 = w2, w1
        arc1.append(w1)
        arc2.append(w2)
    points = np.array([params.p1, *arc1, params.p2, *reversed(arc2)], dtype=complex)
    return MedianPolyline(points, np.asarray(kept, dtype=complex))


def modulus(params: MapParameters) -> float:
    """The conformal modulus rho^2 of the domain, recovered from r."""
    return rho_from_r(params.r) ** 2


@dataclass(eq=False)
class PipelineResult:
    """Everything one run of the full mapping pipeline produces."""

    domain: TwoConnectedDomain
    ahlfors: AhlforsMap
    params: MapParameters
    phi: ConformalMapPhi
    median: MedianPolyline | None
    boundary_residual: float
    identity_residual: float

    @property
    def modulus(self) -> float:
        return modulus(self.params)


def run_pipeline(
    domain: TwoConnectedDomain,
    seed_point: complex | None = None,
    median_points: int = 0,
) -> PipelineResult:
    """Seed point -> base point -> map parameters -> Phi (-> median)."""
    seed = complex(seed_point) if seed_point is not None else domain.reference_point
    a = select_base_point(domain, seed)
    amap = ahlfors_map(domain, a)
    params = map_parameters(domain, a, amap)
    params.seed_point = seed
    phi = build_phi(domain, params, amap)
    median = trace_median(domain, params, median_points, amap) if median_points >= 2 else None
    return PipelineResult(
        domain=domain,
        ahlfors=amap,
        params=params,
        phi=phi,
        median=median,
        boundary_residual=boundary_residual(phi),
        identity_residual=defining_identity_residual(phi),
    )
