"""Built-in acceptance suite: nine property checks against analytic oracles.

Each check pins its tolerances here; `run_all` executes every check and
reports one pass/fail line per criterion.  Check 4 includes a documented
expected failure: the modulus of the rho = 1.1 annulus requires resolving
r - 1 ~ 2.3e-11 through boundary data whose far-side values carry an
irreducible relative noise of ~1e-6 in double precision, so the pipeline
cannot reach the stated 1e-4 relative tolerance there (see the analysis in
the repository notes); the check runs the computation faithfully and
reports the honest outcome.
"""

import time
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import AhlforsError
from .geometry import Curve, build_domain
from .kernels import (
    ahlfors_at_one,
    annulus_bergman,
    bergman_ar,
    bergman_omega,
    fit_constants,
    q_rational,
)
from .pipeline import run_pipeline, trace_median
from .repdomain import (
    ar_boundary,
    joukowsky,
    psi,
    r_from_rho,
    rho_from_r,
    slit_parameters,
)
from .szego import ahlfors_map, branch_points, szego_zero


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    elapsed: float


@lru_cache(maxsize=None)
def _annulus(rho: float, n: int):
    outer = Curve.from_fourier([(1, rho)], n, "outer")
    inner = Curve.from_fourier([(-1, 1.0 / rho)], n, "inner")
    return build_domain(outer, inner, reference_point=0.5 * (rho + 1.0 / rho))


@lru_cache(maxsize=None)
def _annulus_run(rho: float, n: int):
    return run_pipeline(_annulus(rho, n))


@lru_cache(maxsize=None)
def _perturbed_domain(n: int):
    outer = Curve.from_fourier([(1, 2.0), (2, 0.1)], n, "outer")
    inner = Curve.from_fourier([(-1, 0.5)], n, "inner")
    return build_domain(outer, inner)


def _sample_representative(r, n, seed):
    rng = np.random.default_rng(seed)
    s = rng.uniform(0.3, 0.97 * r, n)
    th = rng.uniform(0.15, np.pi - 0.15, n) + np.pi * rng.integers(0, 2, n)
    w = s * np.exp(1j * th)
    zo = w + np.sqrt(w - 1) * np.sqrt(w + 1)
    return np.where(rng.integers(0, 2, n).astype(bool), zo, 1.0 / zo)


def check_annulus_zeros_and_branch_points() -> CheckResult:
    """Criterion 1: zeros {1, -1} and branch points {i, -i} on a_2, a = 1."""
    t0 = time.perf_counter()
    dom = _annulus(2.0, 256)
    amap = ahlfors_map(dom, 1.0)
    errs = [abs(amap.evaluate(1.0)), abs(amap.evaluate(-1.0))]
    errs.append(abs(szego_zero(amap.solution, dom.grid) + 1.0))
    pair = branch_points(amap)
    got = sorted([pair.p1, pair.p2], key=lambda w: w.imag)
    errs += [abs(got[0] + 1j), abs(got[1] - 1j)]
    elapsed = time.perf_counter() - t0
    worst = max(errs)
    return CheckResult(
        "annulus zero/branch oracle",
        worst <= 1e-6 and elapsed < 10.0,
        f"worst deviation {worst:.2e} (tol 1e-6), runtime {elapsed:.2f}s (< 10s)",
        elapsed,
    )


def check_closed_form_ahlfors_map() -> CheckResult:
    """Criterion 2: Ahlfors map of A_1.05 at i equals J/1.05 on the boundary."""
    t0 = time.perf_counter()
    dom = ar_boundary(1.05, 384)
    amap = ahlfors_map(dom, 1j)
    err = float(np.max(np.abs(amap.boundary_values - joukowsky(dom.grid.nodes) / 1.05)))
    return CheckResult(
        "closed-form Ahlfors map on the representative domain",
        err <= 1e-6,
        f"max |f - J/r| = {err:.2e} (tol 1e-6)",
        time.perf_counter() - t0,
    )


def check_representative_fidelity() -> CheckResult:
    """Criterion 3: boundary and defining-identity residuals on a_rho."""
    t0 = time.perf_counter()
    details = []
    ok = True
    for rho in (1.5, 2.0, 3.0):
        res = _annulus_run(rho, 256)
        ok &= res.boundary_residual <= 1e-6 and res.identity_residual <= 1e-6
        details.append(
            f"rho={rho}: boundary {res.boundary_residual:.1e}, identity {res.identity_residual:.1e}"
        )
    return CheckResult(
        "representative-map fidelity",
        ok,
        "; ".join(details) + " (tol 1e-6)",
        time.perf_counter() - t0,
    )


def check_modulus_round_trip() -> CheckResult:
    """Criterion 4: pipeline modulus vs rho^2 and the rho <-> r round trip.

    The rho = 1.1 modulus clause is numerically unattainable in double
    precision (documented); it is still run and reported honestly.
    """
    t0 = time.perf_counter()
    details = []
    ok = True
    for rho, n in ((1.1, 512), (2.0, 256), (3.0, 256)):
        try:
            res = _annulus_run(rho, n)
            rel = abs(res.modulus - rho**2) / rho**2
            good = rel <= 1e-4
            details.append(f"rho={rho}: rel {rel:.1e}")
        except AhlforsError as exc:
            good = False
            details.append(f"rho={rho}: {type(exc).__name__}")
        if not good and rho == 1.1:
            details[-1] += (
                " [expected: r-1 ~ 2e-11 sits below the float64 noise floor "
                "of the boundary data]"
            )
        ok &= good
    trip = max(abs(rho_from_r(r_from_rho(rho)) - rho) for rho in (1.1, 2.0, 3.0))
    details.append(f"round trip {trip:.1e} (tol 1e-8)")
    ok &= trip <= 1e-8
    return CheckResult(
        "modulus round trip",
        ok,
        "; ".join(details) + " (tol 1e-4 relative)",
        time.perf_counter() - t0,
    )


def check_psi_normalization() -> CheckResult:
    """Criterion 5: psi(i) = i, psi(-i) = -i, psi(z) = -1/psi(-1/z)."""
    t0 = time.perf_counter()
    model = slit_parameters(2.0)
    e1 = abs(psi(1j, model) - 1j)
    e2 = abs(psi(-1j, model) + 1j)
    t = np.linspace(0.12, 2 * np.pi - 0.1, 16)
    z = np.concatenate([0.85 * np.exp(1j * t), 1.55 * np.exp(1j * t)])
    e3 = float(np.max(np.abs(psi(z, model) + 1.0 / psi(-1.0 / z, model))))
    ok = e1 <= 1e-12 and e2 <= 1e-8 and e3 <= 1e-8
    return CheckResult(
        "normalization of the annulus-to-representative map",
        ok,
        f"|psi(i)-i| = {e1:.1e} (tol 1e-12), |psi(-i)+i| = {e2:.1e} (tol 1e-8), "
        f"reciprocal identity {e3:.1e} (tol 1e-8)",
        time.perf_counter() - t0,
    )


def check_kernel_oracle() -> CheckResult:
    """Criterion 6: pulled-back kernel matches the annulus series; fit residual."""
    t0 = time.perf_counter()
    res = _annulus_run(2.0, 256)
    consts = fit_constants(res.params.r)
    dom = res.domain
    pts = dom.interior_grid(5, 5, margin=0.12)
    zz, ww = np.meshgrid(pts, pts)
    got = bergman_omega(dom, res.params, res.phi, consts, zz.ravel(), ww.ravel())
    ref = annulus_bergman(2.0, zz.ravel(), ww.ravel())
    rel = float(np.max(np.abs(got - ref) / np.abs(ref)))
    ok = rel <= 1e-4 and consts.residual <= 1e-6
    return CheckResult(
        "kernel oracle equivalence",
        ok,
        f"5x5-grid max rel {rel:.2e} (tol 1e-4), fit residual {consts.residual:.2e} (tol 1e-6)",
        time.perf_counter() - t0,
    )


def check_q_function() -> CheckResult:
    """Criterion 7: rational-kernel consistency and substitution identities."""
    t0 = time.perf_counter()
    r = 1.05
    consts = fit_constants(r)
    z = _sample_representative(r, 20, 21)
    w = _sample_representative(r, 20, 22)
    fi = lambda u: joukowsky(u) / r
    fip = lambda u: (1.0 - 1.0 / u**2) / (2.0 * r)
    got = (
        fip(z)
        * q_rational(r, consts, fi(z), ahlfors_at_one(r, z), np.conj(fi(w)), np.conj(ahlfors_at_one(r, w)))
        * np.conj(fip(w))
    )
    ref = bergman_ar(r, consts, z, w)
    rel = float(np.max(np.abs(got - ref) / np.abs(ref)))
    zz = _sample_representative(r, 40, 23)
    k = 1.0 / r**2
    root = np.sqrt(1.0 - (k * joukowsky(zz)) ** 2)
    id1 = float(np.max(np.abs((zz**2 - 1) / (2 * zz) - r * ahlfors_at_one(r, zz) * np.sqrt(1 - fi(zz) ** 2 / r**2))))
    id2 = float(np.max(np.abs(zz * root * fip(zz) - ahlfors_at_one(r, zz) * (1 - fi(zz) ** 2 / r**2))))
    ok = rel <= 1e-6 and id1 <= 1e-10 and id2 <= 1e-10
    return CheckResult(
        "rational-kernel consistency",
        ok,
        f"kernel match {rel:.2e} (tol 1e-6), identities {id1:.1e}/{id2:.1e} (tol 1e-10)",
        time.perf_counter() - t0,
    )


def check_median() -> CheckResult:
    """Criterion 8: traced median of a_2 lies on the unit circle."""
    t0 = time.perf_counter()
    res = _annulus_run(2.0, 256)
    med = trace_median(res.domain, res.params, 50, res.ahlfors)
    dev = float(np.max(np.abs(np.abs(med.points) - 1.0)))
    e_ends = max(
        abs(med.points[0] - res.params.p1), abs(med.points[51] - res.params.p2)
    )
    ok = dev <= 1e-5 and e_ends <= 1e-6 and med.points.size == 102
    return CheckResult(
        "median trace",
        ok,
        f"max | |w| - 1 | = {dev:.2e} over 50 sweep values (tol 1e-5), "
        f"endpoint mismatch {e_ends:.1e} (tol 1e-6)",
        time.perf_counter() - t0,
    )


def check_perturbed_regression() -> CheckResult:
    """Criterion 9: non-symmetric domain end to end, with locked golden values."""
    t0 = time.perf_counter()
    dom = _perturbed_domain(256)
    res = run_pipeline(dom)
    consts = fit_constants(res.params.r)
    gi, go = dom.inner.reversed(), dom.outer
    x_gl, w_gl = np.polynomial.legendre.leggauss(48)
    sgrid = (x_gl + 1) / 2
    pts = (1 - sgrid)[:, None] * gi.samples[None, :] + sgrid[:, None] * go.samples[None, :]
    dw_ds = np.broadcast_to((go.samples - gi.samples)[None, :], pts.shape)
    dw_dt = (1 - sgrid)[:, None] * gi.derivatives[None, :] + sgrid[:, None] * go.derivatives[None, :]
    area = ((w_gl / 2)[:, None] * np.ones(go.n)[None, :] * 2 * np.pi / go.n) * np.imag(
        np.conj(dw_ds) * dw_dt
    )
    z0 = 1.3 + 0.3j
    kvals = bergman_omega(dom, res.params, res.phi, consts, np.full(pts.size, z0), pts.ravel())
    reproduce = abs(np.sum(kvals * pts.ravel() * area.ravel()) - z0)
    golden_r = 1.1205981084459427
    golden_modulus = 3.999332795814325
    ok = (
        res.boundary_residual <= 1e-5
        and reproduce <= 1e-3
        and abs(res.params.r - golden_r) <= 1e-9
        and abs(res.modulus - golden_modulus) <= 1e-8
    )
    return CheckResult(
        "non-symmetric regression",
        ok,
        f"boundary residual {res.boundary_residual:.1e} (tol 1e-5), reproducing "
        f"residual {reproduce:.1e} (tol 1e-3), r drift {abs(res.params.r - golden_r):.1e}",
        time.perf_counter() - t0,
    )


ALL_CHECKS = [
    ("1", check_annulus_zeros_and_branch_points),
    ("2", check_closed_form_ahlfors_map),
    ("3", check_representative_fidelity),
    ("4", check_modulus_round_trip),
    ("5", check_psi_normalization),
    ("6", check_kernel_oracle),
    ("7", check_q_function),
    ("8", check_median),
    ("9", check_perturbed_regression),
]


def run_all(printer=print) -> list[CheckResult]:
    results = []
    for num, fn in ALL_CHECKS:
        try:
            result = fn()
        except AhlforsError as exc:
            result = CheckResult(fn.__doc__.splitlines()[0], False, f"raised {exc}", 0.0)
        results.append(result)
        status = "ok  " if result.passed else "FAIL"
        printer(f"[{status}] criterion {num}: {result.name} -- {result.detail} [{result.elapsed:.2f}s]")
    total = sum(r.elapsed for r in results)
    printer(f"{sum(r.passed for r in results)}/{len(results)} checks passed in {total:.1f}s")
    return results
