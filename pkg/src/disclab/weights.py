"""Radial weights, derived weights, reproducing kernels and Bloch bounds.

A radial weight ``w`` on the disc carries three derived weights::

    what(r)   = int_r^1 w(s) ds                 (tail integral)
    wtilde(r) = 2 int_r^1 w(s) s ds             (tail moment)
    wstar(r)  = int_r^1 log(s/r) w(s) s ds      (logarithmic tail)

and the moments ``w_x = int_0^1 r^x w(r) dr``.  The weighted Bergman space
A^2_w has reproducing kernels ``B_z(u) = sum (u conj(z))^n / (2 w_{2n+1})``;
differentiating the kernel in u lands in the A^2_wtilde kernel through the
exact moment identity ``wtilde_{2n+1} (n+1) = w_{2n+3}``, and the
Green-type identity ``<f, g>_{A^2_w} = 4 <f', g'>_{A^2_wstar} + f(0)
conj(g(0))`` holds for normalized weights (``2 w_1 = 1``).

The module also computes the kernel-based Bloch quantity

    X(A) = sup_z (1-|z|^2) int |int_0^z conj(B_zeta'(u)) A(zeta) dzeta|
                              wstar(u)/(1-|u|^2) dm(u)

whose smallness bounds the Bloch norm of every solution of f'' + A f = 0 by
``(|f(0)| sup (1-|z|^2) |int_0^z A| + |f'(0)|) / (1 - 4 X(A))``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import betainc, betaln

from .grids import QuadratureGrid
from .norms import NormEstimate, bloch_norm, growth_norm
from .ode import ODEProblem, solve_series
from .series import AccuracyWarning, PowerSeries, sample_circle

__all__ = [
    "RadialWeight",
    "BoundNotApplicableError",
    "regularity_constants",
    "kernel_eval",
    "kernel_derivative_residual",
    "moment_identity_gap",
    "bergman_inner",
    "green_identity_residual",
    "green_boundary_residual",
    "pointwise_growth_margin",
    "bloch_kernel_quantity",
    "bloch_solution_bound",
    "BlochBoundReport",
]


class BoundNotApplicableError(ValueError):
    """The smallness hypothesis of a bound fails at grid resolution."""


def _beta(a: float, b: float) -> float:
    return float(np.exp(betaln(a, b)))


class RadialWeight:
    """A radial weight with cached moments.

    Two families: ``standard(alpha)`` for ``scale * (1 - r^2)^alpha`` (the
    textbook normalization ``scale = alpha + 1`` makes it a probability
    weight with ``w_1 = 1/2``), and ``tabulated`` for an arbitrary
    nonnegative profile given as a callable of r, integrated numerically on
    dyadic Gauss panels.
    """

    def __init__(self, kind: str, alpha: float = 0.0, scale: float = 1.0, profile=None):
        if kind not in ("standard", "tabulated"):
            raise ValueError("kind must be 'standard' or 'tabulated'")
        if kind == "standard" and alpha <= -1:
            raise ValueError("standard weights need alpha > -1")
        self.kind = kind
        self.alpha = float(alpha)
        self.scale = float(scale)
        self.profile = profile
        self._odd_moments: np.ndarray | None = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def standard(cls, alpha: float) -> "RadialWeight":
        return cls("standard", alpha=alpha, scale=alpha + 1.0)

    @classmethod
    def tabulated(cls, profile) -> "RadialWeight":
        return cls("tabulated", profile=profile)

    # -- basic queries -------------------------------------------------------

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        if self.kind == "standard":
            return self.scale * (1.0 - r * r) ** self.alpha
        return np.asarray(self.profile(r), dtype=float)

    @property
    def normalized(self) -> bool:
        return abs(2.0 * self.moment(1) - 1.0) <= 1e-10

    def __repr__(self):
        if self.kind == "standard":
            return f"RadialWeight.standard(alpha={self.alpha:g}, scale={self.scale:g})"
        return "RadialWeight.tabulated(...)"

    # -- quadrature backend for the tabulated family -------------------------

    _gauss = leggauss(32)

    def _int_tail(self, fn, r: float) -> float:
        """``int_r^1 fn(s) ds`` on panels refined geometrically toward both
        endpoints (the integrands here can carry 1/s factors near r and
        ``(1-s)^alpha`` behaviour near 1)."""
        x, w = self._gauss
        mid = (r + 1.0) / 2.0
        edges = [r]
        e = max(r, 2.0**-40)
        if r == 0.0:
            edges.append(e)
        while e < mid:
            e = min(2.0 * e, mid)
            edges.append(e)
        gap = 1.0 - mid
        while gap > 1e-12:
            gap /= 2.0
            edges.append(1.0 - gap)
        total = 0.0
        for lo, hi in zip(edges[:-1], edges[1:]):
            if hi <= lo:
                continue
            s = (hi - lo) / 2 * x + (hi + lo) / 2
            total += (hi - lo) / 2 * float(np.sum(w * fn(s)))
        return total

    # -- moments and derived weights -----------------------------------------

    def moment(self, x: float) -> float:
        """``w_x = int_0^1 r^x w(r) dr``."""
        if self.kind == "standard":
            return self.scale * 0.5 * _beta((x + 1.0) / 2.0, self.alpha + 1.0)
        return self._int_tail(lambda s: s**x * self(s), 0.0)

    def odd_moments(self, nmax: int) -> np.ndarray:
        """Cached array ``[w_1, w_3, ..., w_{2 nmax + 1}]``."""
        if self._odd_moments is None or self._odd_moments.size <= nmax:
            self._odd_moments = np.array(
                [self.moment(2 * n + 1) for n in range(nmax + 1)]
            )
        return self._odd_moments[: nmax + 1]

    def what(self, r: float) -> float:
        """Tail integral ``int_r^1 w(s) ds``."""
        if self.kind == "standard":
            # (scale/2) * int_{r^2}^1 u^{-1/2} (1-u)^alpha du
            full = _beta(0.5, self.alpha + 1.0)
            frac = betainc(0.5, self.alpha + 1.0, r * r)
            return self.scale * 0.5 * full * float(1.0 - frac)
        return self._int_tail(self, r)

    def wtilde(self, r: float) -> float:
        """``2 int_r^1 w(s) s ds``."""
        if self.kind == "standard":
            return self.scale * (1.0 - r * r) ** (self.alpha + 1.0) / (self.alpha + 1.0)
        return self._int_tail(lambda s: 2.0 * s * self(s), r)

    def wstar(self, r: float) -> float:
        """``int_r^1 log(s/r) w(s) s ds``.  For the standard family this is
        computed from the integration-by-parts identity
        ``wstar(r) = (1/2) int_r^1 wtilde(s)/s ds``."""
        if r <= 0.0:
            raise ValueError("wstar is logarithmically singular at 0")
        if self.kind == "standard":
            c = self.scale / (self.alpha + 1.0)
            return 0.5 * self._int_tail(
                lambda s: c * (1.0 - s * s) ** (self.alpha + 1.0) / s, r
            )
        return self._int_tail(lambda s: np.log(s / r) * self(s) * s, r)

    def tilde(self) -> "RadialWeight":
        """The weight whose kernel is the derivative of this one's."""
        if self.kind == "standard":
            return RadialWeight(
                "standard", alpha=self.alpha + 1.0, scale=self.scale / (self.alpha + 1.0)
            )
        return RadialWeight.tabulated(
            lambda r: np.array([self.wtilde(float(ri)) for ri in np.atleast_1d(np.asarray(r, float))])
        )


def weight_from_spec(spec: str) -> RadialWeight:
    """Parse CLI weight strings: ``standard:alpha=A`` or ``table:<path>``
    (a two-column text file of radius/value samples, linearly interpolated)."""
    name, _, rest = spec.partition(":")
    if name == "standard":
        alpha = 0.0
        for item in rest.split(","):
            k, _, v = item.partition("=")
            if k.strip() == "alpha":
                alpha = float(v)
        return RadialWeight.standard(alpha)
    if name == "table":
        data = np.loadtxt(rest)
        rs, vs = data[:, 0], data[:, 1]
        return RadialWeight.tabulated(lambda r: np.interp(np.asarray(r, float), rs, vs))
    raise ValueError(f"unknown weight spec {spec!r}")


# ---------------------------------------------------------------------------
# regularity fit
# ---------------------------------------------------------------------------

def regularity_constants(w: RadialWeight, radii=None) -> tuple[float, float, float]:
    """Tightest exponents (and constant) of the two-sided power bounds

        C^-1 ((1-r)/(1-t))^alpha what(t) <= what(r)
            <= C ((1-r)/(1-t))^beta what(t),   0 <= r <= t < 1.

    The exponents are the extreme two-point slopes of ``log what`` against
    ``log(1-r)`` over well-separated radius pairs (``1-t <= (1-r)/4``, so
    short-range corrections do not pollute them); ``C`` is then the largest
    multiplicative defect of the bounds with those exponents over all
    pairs.  Raises if the tail integral vanishes at a node.
    """
    if radii is None:
        radii = np.concatenate([np.linspace(0.0, 0.9, 10), 1.0 - np.geomspace(0.1, 1e-4, 12)])
    radii = np.sort(np.asarray(radii, dtype=float))
    tails = np.array([w.what(float(r)) for r in radii])
    if np.any(tails <= 0.0):
        raise ValueError("weight tail integral vanishes on the sample radii")
    slopes = []
    pairs = []
    for i in range(radii.size):
        for j in range(i + 1, radii.size):
            r, t = radii[i], radii[j]
            denom = np.log((1.0 - r) / (1.0 - t))
            if denom < 1e-12:
                continue
            pairs.append((i, j, denom))
            if (1.0 - t) <= (1.0 - r) / 4.0:
                slopes.append(float(np.log(tails[i] / tails[j]) / denom))
    if not slopes:
        raise ValueError("need at least one well-separated radius pair")
    alpha_est, beta_est = min(slopes), max(slopes)
    c_est = 1.0
    for i, j, denom in pairs:
        ratio = np.log(tails[i] / tails[j])
        c_est = max(c_est, float(np.exp(ratio - beta_est * denom)))
        c_est = max(c_est, float(np.exp(alpha_est * denom - ratio)))
    return alpha_est, beta_est, c_est


# ---------------------------------------------------------------------------
# reproducing kernels
# ---------------------------------------------------------------------------

def kernel_eval(w: RadialWeight, zeta: complex, u: complex, order: int) -> complex:
    """Truncated reproducing kernel ``sum_{n<=order} (u conj(zeta))^n / (2 w_{2n+1})``."""
    x = complex(u) * np.conj(complex(zeta))
    if abs(x) >= 1.0:
        raise ValueError("kernel evaluation requires |u zeta| < 1")
    inv = 0.5 / w.odd_moments(order)
    return complex(np.polynomial.polynomial.polyval(x, inv))


def kernel_derivative_residual(w: RadialWeight, zeta: complex, u: complex, order: int) -> float:
    """|d/du of the truncated kernel - conj(zeta) * tilde-kernel|.

    Both sides are evaluated from their own moment computations; the
    discrepancy reflects only moment quadrature error (it vanishes exactly
    through the identity ``wtilde_{2n+1} (n+1) = w_{2n+3}``).
    """
    x = complex(u) * np.conj(complex(zeta))
    inv = 0.5 / w.odd_moments(order)
    dcoef = inv[1:] * np.arange(1, order + 1)
    lhs = np.conj(complex(zeta)) * np.polynomial.polynomial.polyval(x, dcoef)
    rhs = np.conj(complex(zeta)) * kernel_eval(w.tilde(), zeta, u, order - 1)
    return float(abs(lhs - rhs))


def moment_identity_gap(w: RadialWeight, nmax: int = 64) -> float:
    """max over n <= nmax of the relative defect in
    ``wtilde_{2n+1} (n+1) = w_{2n+3}``."""
    wt = w.tilde()
    worst = 0.0
    for n in range(nmax + 1):
        lhs = wt.moment(2 * n + 1) * (n + 1)
        rhs = w.moment(2 * n + 3)
        worst = max(worst, abs(lhs - rhs) / abs(rhs))
    return worst


# ---------------------------------------------------------------------------
# inner products and Green-type identities
# ---------------------------------------------------------------------------

def bergman_inner(f: PowerSeries, g: PowerSeries, w: RadialWeight, grid=None) -> complex:
    """``<f, g>_{A^2_w} = 2 sum f_k conj(g_k) w_{2k+1}`` (angular
    orthogonality makes the reduction exact; the moments carry the grid
    dependence for tabulated weights)."""
    n = min(f.order, g.order)
    mom = w.odd_moments(n)
    return complex(2.0 * np.sum(f.coeffs[: n + 1] * np.conj(g.coeffs[: n + 1]) * mom))


def green_identity_residual(
    f: PowerSeries, g: PowerSeries, w: RadialWeight, grid: QuadratureGrid
) -> float:
    """Residual of ``<f,g>_{A^2_w} = 4 <f',g'>_{A^2_wstar} + f(0) conj(g(0))``
    with the left side from exact moments and the right side by radial
    quadrature of the angular-exact pairing against ``wstar``; tends to 0
    under radial refinement for any normalized radial weight."""
    if not w.normalized:
        raise ValueError("the Green-type identity requires a normalized weight")
    lhs = bergman_inner(f, g, w)
    df, dg = f.derivative(), g.derivative()
    n = min(df.order, dg.order)
    pair = df.coeffs[: n + 1] * np.conj(dg.coeffs[: n + 1])
    r = grid.radii
    powers = r[:, None] ** (2 * np.arange(n + 1))[None, :]
    ring = powers @ pair
    wstar_vals = np.array([w.wstar(float(ri)) for ri in r])
    rhs = np.sum(grid.weights * 2.0 * r * wstar_vals * ring)
    return float(abs(lhs - 4.0 * rhs - f.coeffs[0] * np.conj(g.coeffs[0])))


def green_boundary_residual(f: PowerSeries, g: PowerSeries, grid: QuadratureGrid) -> float:
    """Residual of the boundary pairing identity
    ``(1/2pi) int f conj(g) dt = 2 int f' conj(g') log(1/|u|) dm + f(0) conj(g(0))``
    (the H^2 pairing is the exact coefficient sum)."""
    n = min(f.order, g.order)
    lhs = np.sum(f.coeffs[: n + 1] * np.conj(g.coeffs[: n + 1]))
    df, dg = f.derivative(), g.derivative()
    m = min(df.order, dg.order)
    pair = df.coeffs[: m + 1] * np.conj(dg.coeffs[: m + 1])
    r = grid.radii
    ring = (r[:, None] ** (2 * np.arange(m + 1))[None, :]) @ pair
    rhs = np.sum(grid.weights * 2.0 * r * np.log(1.0 / r) * ring)
    return float(abs(lhs - 2.0 * rhs - f.coeffs[0] * np.conj(g.coeffs[0])))


# ---------------------------------------------------------------------------
# pointwise growth bound
# ---------------------------------------------------------------------------

def pointwise_growth_margin(
    f: PowerSeries,
    w: RadialWeight,
    p: float,
    grid: QuadratureGrid,
    C: float = 4.0,
) -> float:
    """Sanity margin ``min [ C ||f||_{A^p_w} / (what(z)(1-|z|))^{1/p} - |f(z)| ]``
    over the outer annulus ``1/2 <= |z| <= r_max``; nonnegative margins mean
    the calibrated pointwise growth bound holds on the grid."""
    if p == 2:
        norm = float(np.sqrt(np.real(bergman_inner(f, f, w))))
    else:
        dens = np.abs(grid.sample(f)) ** p * w(grid.radii)[:, None]
        norm = grid.integrate(dens) ** (1.0 / p)
    radii = grid.sup_radii[(grid.sup_radii >= 0.5) & (grid.sup_radii <= grid.r_max)]
    margin = np.inf
    for r in radii:
        ring = float(np.max(np.abs(sample_circle(f, float(r), grid.angular))))
        bound = C * norm / (w.what(float(r)) * (1.0 - float(r))) ** (1.0 / p)
        margin = min(margin, bound - ring)
    return float(margin)


# ---------------------------------------------------------------------------
# kernel-based Bloch quantity and the solution bound
# ---------------------------------------------------------------------------

def _u_rule(grid: QuadratureGrid, angles: int):
    """Coarser polar rule for the kernel integral's u variable."""
    sub = QuadratureGrid(
        r_max=grid.r_max,
        nodes_per_panel=4,
        angular=angles,
        inner_depth=12,
        outer_depth=18,
        a_radii=(0.0,),
        a_angles=1,
    )
    return sub.radii, sub.weights, sub.thetas


def bloch_kernel_quantity(
    A: PowerSeries,
    w: RadialWeight,
    grid: QuadratureGrid,
    r: float | None = None,
    kernel_order: int | None = None,
    z_radii: int = 16,
    z_angles: int = 16,
    u_angles: int = 96,
    _radial_weight=None,
) -> NormEstimate:
    """Grid estimate of the kernel Bloch quantity ``X(A)`` (or its r-slice
    when ``r`` is given, i.e. with ``A(r zeta)`` in the path integral).

    The path integral collapses to the separable form
    ``sum_n n/(2 w_{2n+1}) conj(u)^{n-1} P_n(z)`` with
    ``P_n(z) = int_0^z zeta^n A(zeta) dzeta``, so the u-integral is an
    angular mean of polynomial magnitudes per u-radius.  ``_radial_weight``
    replaces the default radial factor ``wstar(u)/(1-|u|^2)`` (used by
    consistency tests, e.g. with ``wtilde``).
    """
    coeffs = A.coeffs.copy()
    if r is not None:
        coeffs = coeffs * float(r) ** np.arange(coeffs.size)
    nk = kernel_order if kernel_order is not None else min(max(A.order, 16), 128)
    mom = w.odd_moments(nk)

    # z sweep set: geometrically boundary-refined radii x equal angles
    zr = np.sort(np.unique(np.concatenate(
        [[0.3, 0.6], 1.0 - np.geomspace(0.5, 1.0 - grid.r_max, max(z_radii - 2, 4))]
    )))
    zth = np.exp(2j * np.pi * np.arange(z_angles) / z_angles)
    zset = (zr[:, None] * zth[None, :]).ravel()

    # P_n(z) for n = 1..nk
    m = np.arange(coeffs.size)
    P = np.empty((nk, zset.size), dtype=complex)
    for n in range(1, nk + 1):
        prim = coeffs / (m + n + 1)
        P[n - 1] = np.polynomial.polynomial.polyval(zset, prim) * zset ** (n + 1)
    scale = np.arange(1, nk + 1) / (2.0 * mom[1 : nk + 1])
    Q = P * scale[:, None]  # row n-1: coefficient of v^{n-1} per z

    ur, uw, uth = _u_rule(grid, u_angles)
    if _radial_weight is None:
        radial = np.array([w.wstar(float(s)) for s in ur]) / (1.0 - ur**2)
    else:
        radial = np.asarray(_radial_weight(ur), dtype=float)

    acc = np.zeros(zset.size)
    phases = np.exp(1j * uth)
    term_means = np.zeros(nk)  # for the tail diagnostic
    for s, ws, rad in zip(ur, uw, radial):
        vand = (s * phases)[None, :] ** np.arange(nk)[:, None]
        vals = np.abs(Q.T @ vand)  # (z, angles)
        acc += ws * 2.0 * s * rad * vals.mean(axis=1)
        term_means += ws * 2.0 * s * rad * s ** np.arange(nk)
    est = (1.0 - np.abs(zset) ** 2) * acc
    value = float(np.max(est))

    # geometric tail extrapolation from the last terms
    tail_terms = np.abs(Q[-8:]).max(axis=1) * term_means[-8:]
    if np.all(tail_terms[:-1] > 0):
        q = float(np.clip(np.median(tail_terms[1:] / tail_terms[:-1]), 0.0, 0.999))
        tail = float(tail_terms[-1] * q / (1.0 - q))
        if value > 0 and tail > 0.01 * value:
            warnings.warn(
                "bloch_kernel_quantity: kernel truncation tail above 1% of the value",
                AccuracyWarning,
                stacklevel=2,
            )

    coarse_idx = np.arange(0, zset.size, 2)
    coarse = float(np.max(est[coarse_idx]))
    inner = float(np.max(est[np.abs(zset) <= 0.9]))
    flag = bool(value > 2.0 * inner + 1e-300)
    return NormEstimate(value, coarse, flag)


@dataclass(frozen=True)
class BlochBoundReport:
    x_quantity: float
    predicted_bound: float
    actual_bloch_norm: float


def bloch_solution_bound(
    A: PowerSeries,
    w: RadialWeight,
    grid: QuadratureGrid,
    initial_values: tuple[complex, complex] = (1.0, 0.0),
    order: int | None = None,
    **kernel_kwargs,
) -> BlochBoundReport:
    """Check the Bloch solution bound against an actually solved series.

    Requires the kernel quantity below 1/4; otherwise raises
    :class:`BoundNotApplicableError`.
    """
    x = bloch_kernel_quantity(A, w, grid, **kernel_kwargs).value
    if x >= 0.25:
        raise BoundNotApplicableError(
            f"kernel quantity {x:.4f} is not below 1/4; bound not applicable"
        )
    prim_norm = growth_norm(A.antiderivative(0.0), 1.0, grid).value
    f0, f1 = (complex(v) for v in initial_values)
    predicted = (abs(f0) * prim_norm + abs(f1)) / (1.0 - 4.0 * x)
    N = A.order if order is None else order
    zero = PowerSeries(np.zeros(N + 1, dtype=complex))
    problem = ODEProblem(2, (A.truncate(N) if A.order > N else A.pad(N), zero), (f0, f1), N)
    f = solve_series(problem)
    actual = bloch_norm(f, grid).value
    return BlochBoundReport(x, predicted, actual)
