"""Boundary geometry of two-connected domains.

A domain is represented by two sampled smooth Jordan curves (outer
counterclockwise, inner clockwise) with equispaced parameters.  All
quadrature uses the periodic trapezoidal rule, which is spectrally
accurate for smooth curves, and differentiation along the boundary is
spectral (FFT).  Interior values of holomorphic functions come from the
Cauchy integral of their boundary values.
"""

import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    AccuracyError,
    DegeneracyError,
    DomainError,
    GeometryError,
    NearBoundaryError,
    ParseError,
)

MIN_NODES = 64


def _as_complex_array(values) -> np.ndarray:
    return np.asarray(values, dtype=complex)


def equispaced_parameters(n: int) -> np.ndarray:
    """Parameter values t_j = 2*pi*j/n, j = 0..n-1."""
    return 2.0 * np.pi * np.arange(n) / n


def spectral_derivative(values, order: int = 1) -> np.ndarray:
    """d^order/dt^order of the trigonometric interpolant at the nodes.

    ``values`` are samples of a 2*pi-periodic function at equispaced
    parameters.  Requires even length; the Nyquist mode is dropped from
    odd-order derivatives (standard convention for band-limited data).
    """
    values = _as_complex_array(values)
    n = values.size
    if n % 2 != 0:
        raise DomainError(f"spectral derivative requires even N, got {n}")
    k = np.fft.fftfreq(n, d=1.0 / n)
    mult = (1j * k) ** order
    if order % 2 == 1:
        mult[n // 2] = 0.0
    return np.fft.ifft(np.fft.fft(values) * mult)


def boundary_derivative(values) -> np.ndarray:
    """Parameter derivative of boundary values on one curve.

    Returns d/dt of the trigonometric interpolant; divide by z'(t) to
    obtain d/dz along the curve.
    """
    return spectral_derivative(values, order=1)


def _resample_periodic(samples, n: int) -> np.ndarray:
    """Resample equispaced periodic data through its trigonometric interpolant."""
    samples = _as_complex_array(samples)
    m = samples.size
    if n == m:
        return samples.copy()
    spec = np.fft.fft(samples)
    out = np.zeros(n, dtype=complex)
    if n > m:
        half = m // 2
        out[: half + 1] = spec[: half + 1]
        if half > 0:
            out[-(m - half - 1):] = spec[half + 1 :]
        if m % 2 == 0:
            # split the Nyquist coefficient symmetrically
            out[half] = 0.5 * spec[half]
            out[-half] += 0.5 * spec[half]
    else:
        # downsample: fold retained modes; aliased content beyond the new
        # Nyquist is truncated (data is assumed band-limited in practice)
        half = n // 2
        out[: half + 1] = spec[: half + 1]
        out[-(half - 1):] += spec[-(half - 1):] if half > 1 else 0.0
        if n % 2 == 0:
            out[half] = spec[half] + spec[m - half]
    return np.fft.ifft(out) * (n / m)


@dataclass(eq=False)
class Curve:
    """One sampled boundary curve.

    samples[j] = z(t_j) and derivatives[j] = z'(t_j) at t_j = 2*pi*j/N.
    ``orientation`` is "outer" (counterclockwise) or "inner" (clockwise).
    """

    samples: np.ndarray
    derivatives: np.ndarray
    orientation: str

    def __post_init__(self):
        self.samples = _as_complex_array(self.samples)
        self.derivatives = _as_complex_array(self.derivatives)
        n = self.samples.size
        if n % 2 != 0 or n < MIN_NODES:
            raise GeometryError(
                f"curve needs an even number of samples >= {MIN_NODES}, got {n}"
            )
        if self.derivatives.size != n:
            raise GeometryError("samples and derivatives must have equal length")
        if np.min(np.abs(self.derivatives)) <= 0.0:
            raise GeometryError("parametrization is singular: |z'(t)| vanishes")
        if self.orientation not in ("outer", "inner"):
            raise GeometryError(f"unknown orientation {self.orientation!r}")

    @property
    def n(self) -> int:
        return self.samples.size

    @property
    def t(self) -> np.ndarray:
        return equispaced_parameters(self.n)

    def reversed(self) -> "Curve":
        """The same geometric curve traced in the opposite direction."""
        idx = (-np.arange(self.n)) % self.n
        return Curve(self.samples[idx], -self.derivatives[idx], self.orientation)

    @classmethod
    def from_fourier(cls, coefficients, n: int, orientation: str) -> "Curve":
        """Curve z(t) = sum c_k exp(i k t) from a finite coefficient list.

        ``coefficients`` is an iterable of (k, c_k) pairs; derivatives are
        exact.
        """
        t = equispaced_parameters(n)
        z = np.zeros(n, dtype=complex)
        dz = np.zeros(n, dtype=complex)
        for k, c in coefficients:
            e = np.exp(1j * k * t)
            z += c * e
            dz += 1j * k * c * e
        return cls(z, dz, orientation)

    @classmethod
    def from_samples(cls, samples, n: int, orientation: str) -> "Curve":
        """Curve from raw equispaced samples, resampled spectrally to n points."""
        z = _resample_periodic(samples, n)
        dz = spectral_derivative(z)
        return cls(z, dz, orientation)


def curve_winding_number(curve: Curve, point: complex, tol: float = 1e-3) -> int:
    """Winding number of the sampled curve about ``point``."""
    w = np.sum(curve.derivatives / (curve.samples - point)) / (1j * curve.n)
    if abs(w - round(w.real)) > tol:
        raise GeometryError(
            f"winding integral did not converge to an integer (got {w:.3e}); "
            "the point may be too close to the curve or N too small"
        )
    return int(round(w.real))


@dataclass(eq=False)
class QuadratureGrid:
    """Concatenated quadrature data for both boundary curves.

    dz_weights implement the oriented contour integral (sum g * dz_weights
    approximates the integral of g dz); ds_weights the arc-length integral.
    arc_elements are the local node spacings |z'(t_j)| * 2*pi/N.
    """

    nodes: np.ndarray
    dz_weights: np.ndarray
    ds_weights: np.ndarray
    arc_elements: np.ndarray
    tangents: np.ndarray
    n_outer: int

    @property
    def outer(self) -> slice:
        return slice(0, self.n_outer)

    @property
    def inner(self) -> slice:
        return slice(self.n_outer, self.nodes.size)

    def contour_integral(self, values) -> complex:
        """Oriented integral of g dz over both curves."""
        return complex(np.sum(_as_complex_array(values) * self.dz_weights))


@dataclass(eq=False)
class TwoConnectedDomain:
    """Two nested smooth Jordan curves bounding a doubly connected region."""

    outer: Curve
    inner: Curve
    reference_point: complex

    @cached_property
    def grid(self) -> QuadratureGrid:
        nodes = np.concatenate([self.outer.samples, self.inner.samples])
        derivs = np.concatenate([self.outer.derivatives, self.inner.derivatives])
        h = np.concatenate(
            [
                np.full(self.outer.n, 2.0 * np.pi / self.outer.n),
                np.full(self.inner.n, 2.0 * np.pi / self.inner.n),
            ]
        )
        dz_w = derivs * h
        ds_w = np.abs(derivs) * h
        return QuadratureGrid(
            nodes=nodes,
            dz_weights=dz_w,
            ds_weights=ds_w,
            arc_elements=ds_w,
            tangents=derivs / np.abs(derivs),
            n_outer=self.outer.n,
        )

    def boundary_distance(self, z) -> np.ndarray:
        """Distance from z (scalar or array) to the nearest boundary node."""
        z = np.atleast_1d(_as_complex_array(z))
        return np.min(np.abs(z[:, None] - self.grid.nodes[None, :]), axis=1)

    def contains(self, z: complex) -> bool:
        """True when z lies strictly between the two curves."""
        try:
            wo = curve_winding_number(self.outer, z)
            wi = curve_winding_number(self.inner, z)
        except GeometryError:
            return False
        return wo == 1 and wi == 0

    def interior_grid(self, n_radial: int, n_angular: int, margin: float = 0.1):
        """Deterministic interior sample points in blended curve coordinates.

        Blends between the (counterclockwise) inner and outer curves; margin
        keeps the points away from both boundaries.
        """
        inner_ccw = self.inner.reversed().samples
        outer = self.outer.samples
        if inner_ccw.size != outer.size:
            m = max(inner_ccw.size, outer.size)
            inner_ccw = _resample_periodic(inner_ccw, m)
            outer = _resample_periodic(outer, m)
        s = np.linspace(margin, 1.0 - margin, n_radial)
        jj = np.linspace(0, outer.size, n_angular, endpoint=False).astype(int)
        pts = (1.0 - s[:, None]) * inner_ccw[jj][None, :] + s[:, None] * outer[jj][None, :]
        return pts.ravel()


def build_domain(outer: Curve, inner: Curve, reference_point=None) -> TwoConnectedDomain:
    """Validate (and if needed repair) orientations, nesting, reference point."""
    probe = inner.samples[0]
    w = curve_winding_number(outer, probe)
    if w == 0:
        raise GeometryError("nesting violated: inner curve is not enclosed by outer curve")
    if w == -1:
        outer = outer.reversed()
    elif w != 1:
        raise GeometryError(f"outer curve winds {w} times about the inner curve")
    wind_inner = [curve_winding_number(outer, p) for p in inner.samples[:: max(1, inner.n // 16)]]
    if any(x != 1 for x in wind_inner):
        raise GeometryError("nesting violated: inner samples not all enclosed by outer curve")

    hole_point = complex(np.mean(inner.samples))
    wh = curve_winding_number(inner, hole_point)
    if wh == 1:
        inner = inner.reversed()
    elif wh != -1:
        raise GeometryError(
            "inner curve orientation check failed: centroid winding is "
            f"{wh}, expected +-1"
        )

    if curve_winding_number(outer, hole_point) != 1:
        raise GeometryError("nesting violated: hole centroid not enclosed by outer curve")

    domain = TwoConnectedDomain(outer, inner, 0j)
    if reference_point is not None:
        ref = complex(reference_point)
        if not domain.contains(ref):
            raise GeometryError(f"reference point {ref} does not lie in the domain")
    else:
        ref = None
        inner_ccw = inner.reversed().samples
        for j in range(0, outer.n, max(1, outer.n // 8)):
            cand = 0.5 * (outer.samples[j] + inner_ccw[j % inner.n])
            if domain.contains(cand):
                ref = complex(cand)
                break
        if ref is None:
            raise GeometryError("could not derive an interior reference point")
    domain.reference_point = ref
    return domain


def _parse_curve(obj, nodes: int, orientation: str, name: str) -> Curve:
    if not isinstance(obj, dict):
        raise ParseError(f"field {name!r} must be an object")
    if "fourier" in obj:
        coeffs = []
        for k, entry in enumerate(obj["fourier"]):
            try:
                mode, re, im = entry
                coeffs.append((int(mode), complex(float(re), float(im))))
            except (TypeError, ValueError) as exc:
                raise ParseError(
                    f"field {name!r}: fourier entry {k} must be [n, re, im]: {exc}"
                ) from exc
        return Curve.from_fourier(coeffs, nodes, orientation)
    if "samples" in obj:
        try:
            pts = [complex(float(re), float(im)) for re, im in obj["samples"]]
        except (TypeError, ValueError) as exc:
            raise ParseError(f"field {name!r}: samples must be [re, im] pairs: {exc}") from exc
        if len(pts) < 4:
            raise ParseError(f"field {name!r}: need at least 4 samples")
        return Curve.from_samples(pts, nodes, orientation)
    raise ParseError(f"field {name!r} needs either 'fourier' or 'samples'")


def parse_domain_spec(file_content: str, nodes: int = 256) -> TwoConnectedDomain:
    """Parse the JSON domain-spec format into a validated domain.

    The format is an object {"outer": curve, "inner": curve,
    "reference_point": [re, im]} where each curve is either
    {"fourier": [[n, re, im], ...]} (coefficients of z(t) = sum c_n e^{int})
    or {"samples": [[re, im], ...]} (equispaced samples, resampled
    spectrally).  The reference point is optional and derived when absent.
    """
    try:
        data = json.loads(file_content)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ParseError("domain spec must be a JSON object")
    for key in ("outer", "inner"):
        if key not in data:
            raise ParseError(f"missing required field {key!r}")
    outer = _parse_curve(data["outer"], nodes, "outer", "outer")
    inner = _parse_curve(data["inner"], nodes, "inner", "inner")
    ref = None
    if "reference_point" in data and data["reference_point"] is not None:
        try:
            re, im = data["reference_point"]
            ref = complex(float(re), float(im))
        except (TypeError, ValueError) as exc:
            raise ParseError(f"field 'reference_point' must be [re, im]: {exc}") from exc
    return build_domain(outer, inner, ref)


def domain_to_spec(domain: TwoConnectedDomain) -> str:
    """Serialize a domain to the JSON domain-spec format (samples form)."""
    def curve_obj(c: Curve):
        return {"samples": [[float(z.real), float(z.imag)] for z in c.samples]}

    ref = domain.reference_point
    return json.dumps(
        {
            "outer": curve_obj(domain.outer),
            "inner": curve_obj(domain.inner),
            "reference_point": [float(ref.real), float(ref.imag)],
        }
    )


def cauchy_transform(boundary_values, grid: QuadratureGrid, z, derivative: int = 0) -> np.ndarray:
    """Normalized discrete Cauchy integral at interior points (array ok).

    Uses the normalization by the discrete Cauchy integral of 1, which keeps
    the evaluation accurate essentially up to the boundary (the leading
    quadrature errors of numerator and denominator cancel).  ``derivative``
    may be 0 or 1.
    """
    if derivative not in (0, 1, 2):
        raise DomainError("cauchy_transform supports derivative order 0, 1, or 2")
    values = _as_complex_array(boundary_values)
    zs = np.atleast_1d(_as_complex_array(z))
    out = np.empty(zs.shape, dtype=complex)
    # chunk to bound the (n_points x n_nodes) workspace
    chunk = max(1, int(2e6) // max(1, grid.nodes.size))
    for lo in range(0, zs.size, chunk):
        zz = zs[lo : lo + chunk]
        d = grid.nodes[None, :] - zz[:, None]
        c = grid.dz_weights[None, :] / d
        denom = np.sum(c, axis=1)
        num = np.sum(c * values[None, :], axis=1)
        if derivative == 0:
            out[lo : lo + chunk] = num / denom
            continue
        c2 = c / d
        dden = np.sum(c2, axis=1)
        dnum = np.sum(c2 * values[None, :], axis=1)
        if derivative == 1:
            out[lo : lo + chunk] = (dnum * denom - num * dden) / (denom * denom)
        else:
            c3 = c2 / d
            d2den = 2.0 * np.sum(c3, axis=1)
            d2num = 2.0 * np.sum(c3 * values[None, :], axis=1)
            out[lo : lo + chunk] = (
                d2num * denom * denom
                - num * d2den * denom
                - 2.0 * dnum * dden * denom
                + 2.0 * num * dden * dden
            ) / denom**3
    return out if np.ndim(z) else out[0]


def cauchy_eval(boundary_values, grid: QuadratureGrid, z: complex) -> complex:
    """Cauchy-integral value of a holomorphic function at one interior point.

    Refuses points closer to the boundary than twice the local node spacing;
    refine the discretization to evaluate nearer the boundary.
    """
    z = complex(z)
    dist = np.abs(grid.nodes - z)
    j = int(np.argmin(dist))
    guard = 2.0 * grid.arc_elements[j]
    if dist[j] < guard:
        raise NearBoundaryError(
            f"point {z} is {dist[j]:.3e} from the boundary; need >= {guard:.3e} "
            "(2x local node spacing) -- refine the discretization"
        )
    return complex(cauchy_transform(boundary_values, grid, z))


def winding_count(f_boundary, f_deriv_boundary, grid: QuadratureGrid, tol: float = 1e-8) -> int:
    """Number of zeros of f inside the domain by the argument principle.

    ``f_deriv_boundary`` holds df/dz at the nodes.  f must be zero-free on
    the boundary.
    """
    f = _as_complex_array(f_boundary)
    fp = _as_complex_array(f_deriv_boundary)
    scale = np.max(np.abs(f))
    if np.min(np.abs(f)) < tol * scale:
        raise DegeneracyError("argument principle needs f nonzero on the boundary")
    w = grid.contour_integral(fp / f) / (2j * np.pi)
    if abs(w - round(w.real)) > 1e-6:
        raise AccuracyError(
            f"winding integral {w:.6e} is not an integer to 1e-6; increase N"
        )
    return int(round(w.real))
