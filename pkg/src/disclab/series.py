"""Truncated power series on the unit disc.

A :class:`PowerSeries` stores the Taylor coefficients ``c_0 .. c_N`` of an
analytic function and is the universal function representation in this
package: ODE solutions, equation coefficients and test functions are all
truncated series.  The truncation order ``N`` is part of the value; binary
operations truncate to the smaller operand order, so no coefficient is ever
fabricated beyond what both operands determine.

Instances are immutable after construction (the coefficient array is
write-locked), every operation is pure, and values can therefore be shared
freely between threads.
"""

from __future__ import annotations

import warnings

import numpy as np

__all__ = [
    "AccuracyWarning",
    "PowerSeries",
    "sample_circle",
    "compose_moebius",
    "compose_series",
    "exp_series",
    "log_series",
    "pow_series",
    "reciprocal_series",
    "geometric_series",
    "binomial_series",
    "artanh_series",
]

# Magnitudes below this are flushed to exact zero to avoid subnormal drag.
_FLUSH = 1e-300


class AccuracyWarning(UserWarning):
    """Numerical-accuracy diagnostic: loss of significance or overflow."""


class PowerSeries:
    """Taylor polynomial ``c_0 + c_1 z + ... + c_N z**N`` viewed as a
    truncated expansion of an analytic function on ``|z| < 1``.

    Coefficients are stored as a read-only complex128 array; ``order`` is
    ``N``.  Construction rejects non-finite coefficients.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs):
        arr = np.atleast_1d(np.asarray(coeffs, dtype=complex)).copy()
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("coefficients must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(arr)):
            raise ValueError("coefficients must be finite")
        arr[np.abs(arr) < _FLUSH] = 0.0
        arr.setflags(write=False)
        self._c = arr

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def order(self) -> int:
        return self._c.size - 1

    def __repr__(self) -> str:
        head = ", ".join(f"{c:.6g}" for c in self._c[:3])
        tail = ", ..." if self.order > 2 else ""
        return f"PowerSeries(order={self.order}, [{head}{tail}])"

    # -- evaluation ---------------------------------------------------------

    def __call__(self, z):
        """Evaluate by Horner's scheme at points with ``|z| < 1``."""
        zs = np.asarray(z, dtype=complex)
        if np.any(np.abs(zs) >= 1.0):
            raise ValueError("power-series evaluation requires |z| < 1")
        vals = np.polynomial.polynomial.polyval(zs, self._c)
        return complex(vals) if np.isscalar(z) or zs.ndim == 0 else vals

    # -- calculus -----------------------------------------------------------

    def derivative(self, n: int = 1) -> "PowerSeries":
        """n-th derivative; order drops by one per differentiation
        (a constant keeps order 0)."""
        c = self._c
        for _ in range(n):
            if c.size == 1:
                c = np.zeros(1, dtype=complex)
                continue
            c = c[1:] * np.arange(1, c.size)
        return PowerSeries(c)

    def antiderivative(self, c0: complex = 0.0) -> "PowerSeries":
        """Primitive vanishing at 0 up to the constant term ``c0``;
        order grows by one."""
        out = np.empty(self._c.size + 1, dtype=complex)
        out[0] = c0
        out[1:] = self._c / np.arange(1, self._c.size + 1)
        return PowerSeries(out)

    # -- ring operations (all truncate to the smaller order) ----------------

    def _binary(self, other, op):
        n = min(self.order, other.order) + 1
        return PowerSeries(op(self._c[:n], other._c[:n]))

    def __add__(self, other):
        if isinstance(other, PowerSeries):
            return self._binary(other, np.add)
        c = self._c.copy()
        c[0] += other
        return PowerSeries(c)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, PowerSeries):
            return self._binary(other, np.subtract)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return PowerSeries(-self._c)

    def __mul__(self, other):
        if isinstance(other, PowerSeries):
            n = min(self.order, other.order) + 1
            return PowerSeries(np.convolve(self._c[:n], other._c[:n])[:n])
        return PowerSeries(self._c * other)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return PowerSeries(self._c / scalar)

    # -- order management ---------------------------------------------------

    def pad(self, order: int) -> "PowerSeries":
        """Extend with exact zeros; use when the polynomial is known exactly
        so products may keep their full degree."""
        if order < self.order:
            raise ValueError("pad target below current order")
        out = np.zeros(order + 1, dtype=complex)
        out[: self._c.size] = self._c
        return PowerSeries(out)

    def truncate(self, order: int) -> "PowerSeries":
        if order >= self.order:
            return self
        return PowerSeries(self._c[: order + 1])


def zero_series(order: int = 0) -> PowerSeries:
    return PowerSeries(np.zeros(order + 1, dtype=complex))


def dilate(f: PowerSeries, r: float) -> PowerSeries:
    """The dilated function ``f_r(z) = f(r z)`` (coefficients scaled by r**n)."""
    if not (0.0 < r <= 1.0):
        raise ValueError("dilation radius must lie in (0, 1]")
    return PowerSeries(f.coeffs * r ** np.arange(f.order + 1))


# ---------------------------------------------------------------------------
# circle sampling and Fourier coefficient recovery
# ---------------------------------------------------------------------------

def sample_circle(f: PowerSeries, r: float, M: int) -> np.ndarray:
    """Values ``f(r * exp(2*pi*i*j/M))`` for ``j = 0..M-1``.

    Computed by folding the scaled coefficients modulo ``M`` and one inverse
    FFT, which is exact for the stored polynomial.  ``r = 1`` is allowed: a
    truncated series is a polynomial, continuous on the closed disc, and the
    boundary circle is where Hardy-space means live.
    """
    if not (0.0 < r <= 1.0):
        raise ValueError("sampling radius must lie in (0, 1]")
    if M < 1:
        raise ValueError("need at least one node")
    scaled = f.coeffs * r ** np.arange(f.order + 1)
    folded = np.zeros(M, dtype=complex)
    np.add.at(folded, np.arange(f.order + 1) % M, scaled)
    return M * np.fft.ifft(folded)


def _circle_coeffs(values: np.ndarray, rho: float, order: int) -> np.ndarray:
    """Taylor coefficients 0..order from samples on the circle ``|w| = rho``."""
    M = values.size
    raw = np.fft.fft(values)[: order + 1] / M
    return raw / rho ** np.arange(order + 1)


def compose_moebius(
    f: PowerSeries,
    a: complex,
    out_order: int | None = None,
    samples: int | None = None,
    rho: float = 0.95,
    tail_tol: float = 1e-8,
) -> PowerSeries:
    """Taylor coefficients of ``f((a - z)/(1 - conj(a) z))``.

    The composition is sampled on the circle ``|z| = rho`` (whose Moebius
    image always stays inside the disc) and inverted by FFT with radius
    unscaling.  ``rho`` close to 1 keeps the ``rho**-n`` unscaling benign;
    aliasing decays like ``(|a| * rho)**samples``.

    Emits :class:`AccuracyWarning` when the trailing recovered coefficients
    exceed ``tail_tol`` relative to the coefficient scale, which indicates
    the output order is too small for the decay of the composed series.
    """
    a = complex(a)
    if abs(a) >= 1.0:
        raise ValueError("Moebius centre must satisfy |a| < 1")
    order = f.order if out_order is None else int(out_order)
    if a == 0:
        # phi_0(z) = -z: exact alternating sign flip.
        g = f.pad(order) if order > f.order else f.truncate(order)
        signs = np.where(np.arange(order + 1) % 2 == 0, 1.0, -1.0)
        return PowerSeries(g.coeffs * signs)
    M = samples if samples is not None else max(2 * order + 2, 1024)
    w = rho * np.exp(2j * np.pi * np.arange(M) / M)
    z = (a - w) / (1.0 - np.conj(a) * w)
    coeffs = _circle_coeffs(f(z), rho, order)
    scale = np.max(np.abs(coeffs)) + 1.0
    ntail = max(3, order // 16)
    if order >= 8 and np.max(np.abs(coeffs[-ntail:])) > tail_tol * scale:
        warnings.warn(
            "compose_moebius: trailing coefficients have not decayed; "
            "increase out_order or samples",
            AccuracyWarning,
            stacklevel=2,
        )
    return PowerSeries(coeffs)


# ---------------------------------------------------------------------------
# series transcendentals (coefficient recurrences, O(N^2))
# ---------------------------------------------------------------------------

def compose_series(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    """Composition ``f(g(z))`` for ``g(0) = 0``, truncated to g's order."""
    if abs(g.coeffs[0]) > 1e-14:
        raise ValueError("inner series must vanish at 0")
    n = g.order
    gc = g.coeffs.copy()
    gc[0] = 0.0
    acc = np.zeros(n + 1, dtype=complex)
    acc[0] = f.coeffs[f.order]
    for k in range(f.order - 1, -1, -1):
        acc = np.convolve(acc, gc)[: n + 1]
        acc[0] += f.coeffs[k]
    return PowerSeries(acc)


def exp_series(f: PowerSeries) -> PowerSeries:
    """exp of a series, via e' = f' e."""
    n = f.order
    fc = f.coeffs
    out = np.zeros(n + 1, dtype=complex)
    out[0] = np.exp(fc[0])
    j = np.arange(1, n + 1)
    for m in range(1, n + 1):
        out[m] = np.dot(j[:m] * fc[1 : m + 1], out[m - 1 :: -1][:m]) / m
    return PowerSeries(out)


def log_series(f: PowerSeries) -> PowerSeries:
    """Principal logarithm of a series with nonzero constant term."""
    fc = f.coeffs
    if fc[0] == 0:
        raise ValueError("log requires a nonzero constant term")
    n = f.order
    out = np.zeros(n + 1, dtype=complex)
    out[0] = np.log(fc[0])
    for m in range(1, n + 1):
        s = fc[m]
        if m > 1:
            j = np.arange(1, m)
            s -= np.dot(j / m * out[1:m], fc[m - 1 : 0 : -1])
        out[m] = s / fc[0]
    return PowerSeries(out)


def pow_series(f: PowerSeries, beta: complex) -> PowerSeries:
    """Principal power ``f**beta`` of a series with nonzero constant term."""
    return exp_series(log_series(f) * beta)


def reciprocal_series(f: PowerSeries) -> PowerSeries:
    """1/f for a series with nonzero constant term."""
    fc = f.coeffs
    if fc[0] == 0:
        raise ValueError("reciprocal requires a nonzero constant term")
    n = f.order
    out = np.zeros(n + 1, dtype=complex)
    out[0] = 1.0 / fc[0]
    for m in range(1, n + 1):
        out[m] = -np.dot(fc[1 : m + 1], out[m - 1 :: -1][:m]) / fc[0]
    return PowerSeries(out)


def geometric_series(c: complex, order: int) -> PowerSeries:
    """1/(1 - c z) truncated."""
    return PowerSeries(np.asarray(c, dtype=complex) ** np.arange(order + 1))


def binomial_series(k: int, c: complex, order: int) -> PowerSeries:
    """(1 - c z)**(-k) truncated: coefficients C(n+k-1, n) c**n."""
    n = np.arange(order + 1)
    coef = np.ones(order + 1, dtype=complex)
    for i in range(1, k):
        coef *= (n + i) / i
    return PowerSeries(coef * np.asarray(c, dtype=complex) ** n)


def artanh_series(order: int) -> PowerSeries:
    """artanh z = z + z^3/3 + z^5/5 + ... truncated."""
    c = np.zeros(order + 1, dtype=complex)
    c[1::2] = 1.0 / np.arange(1, order + 1, 2)
    return PowerSeries(c)
