"""
Zeroth-order Bessel and Hankel functions of complex argument.

All functions accept scalars or arrays and return complex values of the
same shape.  The principal branch is used throughout, with the cut along the
negative real axis; points on the cut take the value approached from above.

Evaluation methods:

* ascending power series for ``|z| <= SERIES_RADIUS``
* Hankel asymptotic expansions for larger ``|z|``, reduced to the right half
  plane with the analytic continuation formulas so that both expansions are
  used only where they are uniformly valid
* inside the series disc, a Hankel function that is exponentially small
  (H0^(2) deep in the lower half plane, H0^(1) in the upper) is taken from
  the integral representation of K0 instead of the cancelling J0 -/+ jY0.
"""

import numpy as np

from .errors import RangeError, SingularityError

SERIES_RADIUS = 12.0
MAX_ABS = 1.0e4
MAX_IMAG = 50.0

_EULER_GAMMA = np.longdouble("0.577215664901532860606512090082402431")
_LN2 = np.longdouble("0.693147180559945309417232121458176568")
_TWO_OVER_PI = np.longdouble("0.636619772367581343075535053490057448")
_SERIES_TERMS = 64
_ASYMPTOTIC_TERMS = 40
# worst truncation error of the asymptotic sums at |z| = SERIES_RADIUS is ~5e-12
_ASYMPTOTIC_BOUND = 1e-10
_K0_REAL_MIN = 3.0
_EXTENDED_RADIUS = 4.0
_K0_STEP = 0.025


def _prepare(z, allow_zero=True):
    z = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(z)):
        raise RangeError("argument must be finite")
    if z.size:
        big = np.abs(z) > MAX_ABS
        if np.any(big):
            raise RangeError(
                f"|z| = {np.abs(z[big]).max():.6g} exceeds working range |z| <= {MAX_ABS:g}"
            )
        tall = np.abs(z.imag) > MAX_IMAG
        if np.any(tall):
            raise RangeError(
                f"|Im z| = {np.abs(z.imag[tall]).max():.6g} exceeds working range "
                f"|Im z| <= {MAX_IMAG:g}"
            )
        if not allow_zero and np.any(z == 0):
            raise SingularityError("Y0 and H0 are singular at z = 0", point=0j)
    return z


def _series_terms(radius):
    """Number of series terms until (r/2)^(2k) H_k / (k!)^2 drops below 1e-22."""
    q = 0.25 * radius * radius
    term = 1.0
    for k in range(1, _SERIES_TERMS):
        term *= q / (k * k)
        if term * (1.0 + np.log(k)) < 1e-22:
            return k + 1
    return _SERIES_TERMS


def _series_sum(z, dtype):
    n_terms = _series_terms(np.abs(z).max())
    z = z.astype(dtype)
    q = -0.25 * z * z
    term = np.ones_like(z)
    j0 = np.ones_like(z)
    s = np.zeros_like(z)
    real = np.longdouble if dtype is np.clongdouble else float
    harmonic = real(0)
    for k in range(1, n_terms):
        term = term * q / (k * k)
        harmonic += real(1) / k
        j0 = j0 + term
        s = s + harmonic * term
    # log(z) - log 2 rather than log(z/2), which underflows for subnormal z;
    # z = 0 only reaches here from J0, whose caller discards y0
    with np.errstate(divide="ignore", invalid="ignore"):
        y0 = real(_TWO_OVER_PI) * ((np.log(z) - real(_LN2) + real(_EULER_GAMMA)) * j0 - s)
    return j0.astype(complex), y0.astype(complex)


def _series(z):
    """J0 and Y0 from the ascending series.

    The alternating terms grow to ~1e3 times the result near |z| = 12 on the
    real axis, so beyond _EXTENDED_RADIUS the sums run in extended precision.
    """
    j0 = np.empty_like(z)
    y0 = np.empty_like(z)
    wide = np.abs(z) > _EXTENDED_RADIUS
    for mask, dtype in ((~wide, complex), (wide, np.clongdouble)):
        if mask.any():
            j0[mask], y0[mask] = _series_sum(z[mask], dtype)
    return j0, y0


def _hankel_asymptotic(z):
    """Asymptotic H0^(1) and H0^(2) for Re z >= 0, |z| > SERIES_RADIUS."""
    inv = 1.0 / z
    total1 = np.ones_like(z)
    total2 = np.ones_like(z)
    a = np.ones(z.shape, dtype=float)
    power = np.ones_like(z)
    last = np.full(z.shape, np.inf)
    active = np.ones(z.shape, dtype=bool)
    err = np.zeros(z.shape)
    for k in range(1, _ASYMPTOTIC_TERMS):
        a = a * (-(2 * k - 1) ** 2) / (8.0 * k)
        power = power * inv
        term = a * power
        mag = np.abs(term)
        # stop at the smallest term: the expansion is asymptotic, not convergent
        active &= mag < last
        err = np.where(active, mag, err)
        total1 = total1 + np.where(active, term * (1j) ** k, 0)
        total2 = total2 + np.where(active, term * (-1j) ** k, 0)
        active &= mag > 1e-17
        last = mag
        if not active.any():
            break
    if np.any(err > _ASYMPTOTIC_BOUND):
        raise RangeError("asymptotic expansion error bound exceeded; argument too small")
    amp = np.sqrt(2.0 / (np.pi * z))
    # z - pi/4 would round at large |z|; keep the constant phase separate
    rot = np.exp(0.25j * np.pi)
    return (
        amp * np.exp(1j * z) / rot * total1,
        amp * np.exp(-1j * z) * rot * total2,
    )


def _large(z):
    """H0^(1), H0^(2) on the principal branch for |z| > SERIES_RADIUS."""
    h1 = np.empty_like(z)
    h2 = np.empty_like(z)
    right = z.real >= 0
    if right.any():
        h1[right], h2[right] = _hankel_asymptotic(z[right])
    left = ~right
    if left.any():
        zl = z[left]
        w1, w2 = _hankel_asymptotic(-zl)
        upper = zl.imag >= 0
        # z = w e^{+j pi}: H1(z) = -H2(w); z = w e^{-j pi}: H2(z) = -H1(w)
        h1[left] = np.where(upper, -w2, 2 * w1 + w2)
        h2[left] = np.where(upper, w1 + 2 * w2, -w1)
    return h1, h2


def _k0_integral(x):
    """K0(x) for Re x >= _K0_REAL_MIN, |x| <= SERIES_RADIUS.

    Trapezoid rule on K0(x) = int_0^inf exp(-x cosh t) dt, which converges
    geometrically because the integrand is analytic in a strip around the
    real t axis of half-width pi/2 - |arg x|.
    """
    x = x[:, None]
    stop = np.arccosh(1.0 + 46.0 / _K0_REAL_MIN)
    t = np.arange(0.0, stop + _K0_STEP, _K0_STEP)
    weights = np.full(t.shape, _K0_STEP)
    weights[0] *= 0.5
    return (np.exp(-x * np.cosh(t)) * weights).sum(axis=1)


def _evaluate(z):
    """Return (J0, Y0, H0^(1), H0^(2)) for a flat complex array."""
    j = np.empty_like(z)
    y = np.empty_like(z)
    h1 = np.empty_like(z)
    h2 = np.empty_like(z)
    small = np.abs(z) <= SERIES_RADIUS
    if small.any():
        zs = z[small]
        js, ys = _series(zs)
        h1s = js + 1j * ys
        h2s = js - 1j * ys
        # J0 -/+ jY0 cancels where the Hankel function is exponentially small
        low = zs.imag < -_K0_REAL_MIN
        if low.any():
            h2s[low] = (2j / np.pi) * _k0_integral(1j * zs[low])
        high = zs.imag > _K0_REAL_MIN
        if high.any():
            h1s[high] = np.conj((2j / np.pi) * _k0_integral(1j * np.conj(zs[high])))
        j[small], y[small], h1[small], h2[small] = js, ys, h1s, h2s
    if (~small).any():
        a, b = _large(z[~small])
        h1[~small] = a
        h2[~small] = b
        j[~small] = 0.5 * (a + b)
        y[~small] = (a - b) / 2j
    return j, y, h1, h2


def _call(z, index, allow_zero):
    z = _prepare(z, allow_zero=allow_zero)
    if index == 0 and z.size:
        flat = np.atleast_1d(z).ravel()
        out = np.empty_like(flat)
        small = np.abs(flat) <= SERIES_RADIUS
        out[small] = _series(flat[small])[0]
        big = ~small
        if big.any():
            zl = flat[big]
            # J0 is even; evaluate in the right half plane
            zl = np.where(zl.real < 0, -zl, zl)
            a, b = _hankel_asymptotic(zl)
            out[big] = 0.5 * (a + b)
    else:
        out = _evaluate(np.atleast_1d(z).ravel())[index]
    out = out.reshape(z.shape)
    return out[()] if z.ndim == 0 else out


def bessel_j0(z):
    """Bessel function of the first kind, order zero."""
    return _call(z, 0, True)


def bessel_y0(z):
    """
    Bessel function of the second kind, order zero (principal branch).

    Raises
    ------
    SingularityError
        If any element of ``z`` is zero.
    """
    return _call(z, 1, False)


def hankel1_0(z):
    """Hankel function of the first kind, order zero: J0(z) + j Y0(z)."""
    return _call(z, 2, False)


def hankel2_0(z):
    """Hankel function of the second kind, order zero: J0(z) - j Y0(z)."""
    return _call(z, 3, False)


def j0_h2_product(z):
    """J0(z) * H0^(2)(z), the kernel of the slot spectral function."""
    z = _prepare(z, allow_zero=False)
    j, _, _, h2 = _evaluate(np.atleast_1d(z).ravel())
    out = (j * h2).reshape(z.shape)
    return out[()] if z.ndim == 0 else out
