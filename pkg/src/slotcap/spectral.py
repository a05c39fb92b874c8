"""
Spectral-domain model of an infinite connected slot.

The slot of width ``w_s`` lies along x in a perfectly conducting plane and is
fed by a current ``I0`` across the slot.  In the spectral domain the slot
voltage is ``V(kx) = I0 W(kx) / D(kx)`` with

    D(kx) = 1 / (2 k0 zeta0) * sum_i (k_i^2 - kx^2) J0(w_s s_i / 4) H0^(2)(w_s s_i / 4),
    s_i = sqrt(k_i^2 - kx^2),  Im s_i <= 0,

summed over the two half-spaces on either side of the plane (both free space
unless a dielectric backing is given).  ``W`` is the spectrum of the feed:
``sinc(kx gap / 2)`` for a gap of finite width, 1 for a delta feed.

The voltage profile is the inverse Fourier transform of ``V``.  The
integration path is deformed off the real axis around the branch points at
``+-k_i``: it passes above ``+k_i`` and below ``-k_i`` (the only choice that
stays on the proper sheet ``Im s_i <= 0``), follows the real axis for
``|kx| >= 2 max k_i`` up to ``k_max``, and beyond ``k_max`` is closed
vertically into the complex plane, where the exponential factors decay.  The
result does not depend on ``k_max`` or on the detour depth.
"""

import functools
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, RangeError, SingularityError
from .specfun import j0_h2_product

C0 = 299792458.0
ZETA0 = 376.730313668

_GL_ORDER = 16
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(_GL_ORDER)
# e^-46 ~ 1e-20: where a decaying tail integral is cut
_TAIL_DECADES = 46.0
_LAGUERRE_ORDER = 40
_MAX_GROWTH = 2.0


@dataclass(frozen=True)
class ArrayGeometry:
    """
    Connected slot array geometry.

    Parameters
    ----------
    slot_width : float
        Slot width w_s in meters.
    feed_pitch : float
        Distance d_x between adjacent feeds in meters.
    element_count : int
        Number of feeds N.
    feed_gap : float, optional
        Width of the feed gap in meters; 0 selects an ideal delta feed.
        Defaults to ``slot_width``.
    """

    slot_width: float
    feed_pitch: float
    element_count: int
    feed_gap: float = None

    def __post_init__(self):
        if not self.slot_width > 0:
            raise RangeError(f"slot_width must be positive, got {self.slot_width}")
        if not self.feed_pitch > 0:
            raise RangeError(f"feed_pitch must be positive, got {self.feed_pitch}")
        if int(self.element_count) != self.element_count or self.element_count < 1:
            raise RangeError(f"element_count must be a positive integer, got {self.element_count}")
        object.__setattr__(self, "element_count", int(self.element_count))
        if self.feed_gap is None:
            object.__setattr__(self, "feed_gap", float(self.slot_width))
        if not self.feed_gap >= 0:
            raise RangeError(f"feed_gap must be non-negative, got {self.feed_gap}")

    @property
    def slot_length(self):
        """Slot length with edge ports at x = 0 and x = L."""
        return (self.element_count + 1) * self.feed_pitch

    def check_wavelength(self, frequency):
        """Require w_s <= lambda/10; warn above lambda/20."""
        wavelength = C0 / frequency
        if self.slot_width > wavelength / 10:
            raise RangeError(
                f"slot width {self.slot_width:g} m exceeds lambda/10 = {wavelength / 10:g} m "
                f"at {frequency:g} Hz; the narrow-slot model does not apply"
            )
        if self.slot_width > wavelength / 20:
            warnings.warn(
                f"slot width {self.slot_width:g} m exceeds lambda/20 at {frequency:g} Hz",
                stacklevel=3,
            )


@dataclass(frozen=True)
class MediumSpec:
    """Half-spaces on either side of the slotted plane."""

    kind: str = "free_space"
    eps_r: float = 1.0

    def __post_init__(self):
        if self.kind not in ("free_space", "half_space"):
            raise RangeError(f"unknown medium kind {self.kind!r}")
        if not self.eps_r >= 1:
            raise RangeError(f"eps_r must be >= 1, got {self.eps_r}")

    @classmethod
    def free_space(cls):
        return cls("free_space", 1.0)

    @classmethod
    def half_space(cls, eps_r):
        return cls("half_space", float(eps_r))

    @property
    def permittivities(self):
        """Relative permittivity of the two half-spaces (air first)."""
        if self.kind == "free_space":
            return (1.0, 1.0)
        return (1.0, float(self.eps_r))


@dataclass(frozen=True)
class SpectralContext:
    """
    Frequency and quadrature settings for one spectral evaluation.

    ``detour`` is the depth of the contour detour as a fraction of k0.  It is
    capped at 2/x for the largest requested offset x, which keeps the growth
    of the oscillatory factor above the real axis below e^2.  ``k_max`` is
    where the near-real path hands over to the vertical tail closures
    (defaults to 60 k0) and ``n_quad`` the minimum number of quadrature nodes
    on the near-real path.  Successive refinements must agree to ``rtol``;
    up to ``max_refinements`` halvings of every panel are tried.
    """

    frequency: float
    detour: float = 0.05
    k_max: float = None
    n_quad: int = 2048
    rtol: float = 1e-6
    max_refinements: int = 3
    k0: float = field(init=False)
    zeta0: float = field(init=False, default=ZETA0)

    def __post_init__(self):
        if not self.frequency > 0:
            raise RangeError(f"frequency must be positive, got {self.frequency}")
        k0 = 2 * math.pi * self.frequency / C0
        object.__setattr__(self, "k0", k0)
        if self.k_max is None:
            object.__setattr__(self, "k_max", 60.0 * k0)
        if not 0 < self.detour <= 0.5:
            raise RangeError(f"detour must lie in (0, 0.5], got {self.detour}")
        if self.k_max < 20 * k0 * (1 - 1e-12):
            raise RangeError(f"k_max must be at least 20 k0, got {self.k_max / k0:g} k0")
        if self.n_quad < 512:
            raise RangeError(f"n_quad must be at least 512, got {self.n_quad}")
        if not self.rtol > 0:
            raise RangeError(f"rtol must be positive, got {self.rtol}")
        if self.max_refinements < 1:
            raise RangeError(f"max_refinements must be at least 1, got {self.max_refinements}")


def _proper_root(k_sq, kx):
    """sqrt(k^2 - kx^2) on the sheet Im s <= 0."""
    s = np.sqrt(k_sq - kx * kx)
    return np.where(s.imag > 0, -s, s)


def spectral_function(kx, ctx, medium, slot_width):
    """
    Slot spectral function D(kx).

    Parameters
    ----------
    kx : complex or array_like
        Spectral variable along the slot, rad/m.
    ctx : SpectralContext
    medium : MediumSpec
    slot_width : float
        Slot width w_s in meters.

    Returns
    -------
    complex or ndarray
        D(kx) in Siemens.

    Raises
    ------
    SingularityError
        If ``kx`` is within 1e-12 (relative) of a branch point ``+-k_i``.
    """
    kx = np.asarray(kx, dtype=complex)
    k0 = ctx.k0
    total = np.zeros(kx.shape, dtype=complex)
    eps = medium.permittivities
    for eps_r in sorted(set(eps)):
        k = k0 * math.sqrt(eps_r)
        near = np.minimum(np.abs(kx - k), np.abs(kx + k)) <= 1e-12 * k
        if np.any(near):
            raise SingularityError(
                f"kx too close to the branch point +-{k:.12g} rad/m", point=k
            )
        s = _proper_root(k * k, kx)
        assert np.all(s.imag <= 0)
        term = (k * k - kx * kx) * j0_h2_product(0.25 * slot_width * s)
        total = total + eps.count(eps_r) * term
    out = total / (2 * k0 * ctx.zeta0)
    return out[()] if out.ndim == 0 else out


class _Contour:
    """Near-real integration path for t in [0, k_max] (right half only)."""

    def __init__(self, ctx, medium, reach=0.0):
        k0 = ctx.k0
        self.branch_points = sorted({k0 * math.sqrt(e) for e in medium.permittivities})
        self.extent = 2.0 * self.branch_points[-1]
        # above the real axis cos(kx x) grows like exp(depth x); bound it
        self.depth = ctx.detour * k0
        if reach > 0:
            self.depth = min(self.depth, _MAX_GROWTH / reach)
        self.k_max = max(ctx.k_max, self.extent)
        # clearance of the path above each branch point
        self.clearance = [self.depth * math.sin(math.pi * k / self.extent) for k in self.branch_points]

    def point(self, t):
        inside = t < self.extent
        bump = self.depth * np.sin(np.pi * np.minimum(t, self.extent) / self.extent)
        return t + 1j * np.where(inside, bump, 0.0)

    def derivative(self, t):
        inside = t < self.extent
        slope = self.depth * np.pi / self.extent * np.cos(np.pi * np.minimum(t, self.extent) / self.extent)
        return 1.0 + 1j * np.where(inside, slope, 0.0)

    def panels(self, h_max):
        """Panels graded toward the branch points, no wider than ``h_max``."""
        edges = sorted({0.0, self.extent, self.k_max, *self.branch_points})
        out = []
        stack = [(a, b) for a, b in zip(edges[:-1], edges[1:]) if b > a][::-1]
        while stack:
            a, b = stack.pop()
            width = b - a
            limit = h_max
            for k, gap in zip(self.branch_points, self.clearance):
                dist = 0.0 if a <= k <= b else min(abs(a - k), abs(b - k))
                limit = min(limit, max(dist, gap))
            if width <= limit:
                out.append((a, b))
            else:
                mid = 0.5 * (a + b)
                stack.append((mid, b))
                stack.append((a, mid))
        return np.array(out)


@functools.lru_cache(maxsize=None)
def _laguerre(n):
    return np.polynomial.laguerre.laggauss(n)


def _split(panels, times):
    for _ in range(times):
        mid = 0.5 * (panels[:, 0] + panels[:, 1])
        panels = np.stack(
            [np.stack([panels[:, 0], mid], 1), np.stack([mid, panels[:, 1]], 1)], 1
        ).reshape(-1, 2)
    return panels


def _gauss_nodes(panels):
    half = 0.5 * (panels[:, 1] - panels[:, 0])
    mid = 0.5 * (panels[:, 1] + panels[:, 0])
    t = (mid[:, None] + half[:, None] * _GL_NODES).ravel()
    w = (half[:, None] * _GL_WEIGHTS).ravel()
    return t, w


class SlotIntegrator:
    """
    Inverse-transform engine for one (frequency, geometry, medium) triple.

    The reciprocal spectral function is independent of the observation
    point, so all requested offsets share one set of spectral samples.
    """

    def __init__(self, ctx, geom, medium):
        geom.check_wavelength(ctx.frequency)
        self.ctx = ctx
        self.geom = geom
        self.medium = medium
        self.k_max = _Contour(ctx, medium).k_max
        scales = [4.0 / geom.slot_width]
        if geom.feed_gap > 0:
            scales.append(4.0 / geom.feed_gap)
        # smoothness scale of the spectrum away from the branch points
        self.smooth = min(scales)

    def _inverse_d(self, kx):
        return 1.0 / spectral_function(kx, self.ctx, self.medium, self.geom.slot_width)

    def _window(self, kx):
        gap = self.geom.feed_gap
        if gap == 0:
            return np.ones_like(kx)
        arg = 0.5 * gap * kx
        safe = np.where(arg == 0, 1.0, arg)
        return np.where(arg == 0, 1.0, np.sin(safe) / safe)

    def _tail_kernel(self, kx):
        gap = self.geom.feed_gap
        if gap == 0:
            return self._inverse_d(kx)
        return self._inverse_d(kx) / (1j * kx * gap)

    def _near_real(self, x, level):
        c = _Contour(self.ctx, self.medium, x.max(initial=0.0))
        scale = max(x.max(initial=0.0), self.geom.feed_gap, 1e-300)
        h_max = min(2 * math.pi / scale, self.smooth)
        panels = c.panels(h_max)
        while panels.shape[0] * _GL_ORDER < self.ctx.n_quad:
            panels = _split(panels, 1)
        panels = _split(panels, level)
        t, w = _gauss_nodes(panels)
        kx = c.point(t)
        g = self._inverse_d(kx) * self._window(kx) * c.derivative(t) * w
        # even integrand: the full line is twice the right half with cos(kx x)
        bent = t < c.extent
        phase = np.outer(x, kx[bent])
        body = np.cos(phase) @ g[bent] + np.cos(np.outer(x, t[~bent])) @ g[~bent]
        return 2.0 * body, t.size

    def _tail(self, offset, level):
        """int_{K}^{inf} h(k) exp(-j k offset) dk by vertical closure."""
        k = self.k_max
        sigma = 1.0 if offset > 0 else -1.0
        rate = abs(offset)
        scale = min(k, self.smooth)
        if rate * scale >= 8.0 * _LAGUERRE_ORDER:
            # kernel is nearly polynomial over the e-folding length
            u, w = _laguerre(_LAGUERRE_ORDER * (level + 1))
            t = u / rate
            w = w / rate
            decay = 1.0
        else:
            stop = _TAIL_DECADES / rate
            edges = [0.0]
            while edges[-1] < stop:
                here = edges[-1]
                edges.append(here + min(0.5 * (k + here), 4.0 / rate, self.smooth))
            panels = _split(np.column_stack([edges[:-1], edges[1:]]), level)
            t, w = _gauss_nodes(panels)
            decay = np.exp(-rate * t)
        kx = k - 1j * sigma * t
        integral = np.sum(self._tail_kernel(kx) * decay * w)
        return np.exp(-1j * k * offset) * (-1j * sigma) * integral

    def _tails(self, x, level):
        gap = self.geom.feed_gap
        if gap == 0:
            terms = ((1.0, 1.0, 0.0), (1.0, -1.0, 0.0))
        else:
            half = 0.5 * gap
            terms = ((1.0, 1.0, -half), (1.0, -1.0, -half), (-1.0, 1.0, half), (-1.0, -1.0, half))
        out = np.zeros(x.shape, dtype=complex)
        for i, xi in enumerate(x):
            for coef, sign, shift in terms:
                offset = sign * xi + shift
                if offset == 0 or abs(offset) < 1e-9 * max(gap, xi):
                    raise RangeError(
                        f"offset {xi:g} m coincides with a feed-gap edge; "
                        "the tail closure needs |x| != gap/2"
                    )
                out[i] += coef * self._tail(offset, level)
        return out

    def _estimate(self, x, level):
        body, nodes = self._near_real(x, level)
        return (body + self._tails(x, level)) / (2 * math.pi), nodes

    def voltages(self, x):
        """Slot voltage per unit feed current at offsets ``x`` (meters)."""
        x = np.abs(np.atleast_1d(np.asarray(x, dtype=float)))
        if self.geom.feed_gap == 0 and np.any(x == 0):
            raise SingularityError(
                "the self term diverges for an ideal delta feed (feed_gap = 0, x = 0)",
                point=0.0,
            )
        coarse, _ = self._estimate(x, 0)
        for level in range(1, self.ctx.max_refinements + 1):
            fine, _ = self._estimate(x, level)
            err = np.abs(fine - coarse)
            if np.all(err <= self.ctx.rtol * np.abs(fine)):
                return fine
            coarse = fine
        raise ConvergenceError(
            f"slot voltage quadrature did not converge to rtol={self.ctx.rtol:g} "
            f"at f={self.ctx.frequency:g} Hz (worst relative change "
            f"{np.max(err / np.abs(fine)):.3g})",
            estimates=(coarse, fine),
        )


def voltage_profile(x, I0, ctx, geom, medium):
    """
    Voltage across an infinite slot at distance ``x`` from a feed.

    Parameters
    ----------
    x : float or array_like
        Observation offsets in meters.
    I0 : complex
        Feed current in Amperes.
    ctx : SpectralContext
    geom : ArrayGeometry
        Supplies the slot width and the feed gap.
    medium : MediumSpec

    Returns
    -------
    complex or ndarray
        Voltage in Volts, same shape as ``x``.

    Raises
    ------
    SingularityError
        For ``x = 0`` with an ideal delta feed.
    ConvergenceError
        If successive quadrature refinements disagree by more than
        ``ctx.rtol``.
    """
    shape = np.shape(x)
    v = SlotIntegrator(ctx, geom, medium).voltages(np.ravel(x))
    v = I0 * v.reshape(shape)
    return v[()] if v.ndim == 0 else v


def infinite_array_impedance(ctx, geom, medium, include_edge_ports=False):
    """
    Impedance matrix of N equally spaced feeds on an infinite slot.

    With ``include_edge_ports`` two extra ports are placed at x = 0 and
    x = L, one pitch outside the outermost feeds, giving an (N+2)x(N+2)
    matrix whose first and last ports are the edge ports.

    Returns
    -------
    ndarray
        Complex symmetric Toeplitz matrix in Ohms.
    """
    m = geom.element_count + (2 if include_edge_ports else 0)
    v = SlotIntegrator(ctx, geom, medium).voltages(geom.feed_pitch * np.arange(m))
    idx = np.arange(m)
    return v[np.abs(idx[:, None] - idx[None, :])]
