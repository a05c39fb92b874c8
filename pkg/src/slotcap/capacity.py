"""
Waterfilling capacity over a frequency band.

Power is poured jointly over every eigen-subchannel at every frequency
sample under a single band-wide budget, so one water level serves the
whole grid.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import noise_covariance, resistance, scattering_draw
from .errors import ConvergenceError, LinearAlgebraError, RangeError
from .network import checked_inv, checked_solve, psd_sqrt

RANK_TOL = 1e-12


@dataclass(frozen=True)
class FrequencyGrid:
    """Sample frequencies (Hz) with quadrature weights (Hz) for band integrals."""

    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        points = np.atleast_1d(np.asarray(self.points, dtype=float))
        weights = np.atleast_1d(np.asarray(self.weights, dtype=float))
        if points.shape != weights.shape:
            raise RangeError("points and weights must have the same length")
        if np.any(np.diff(points) <= 0):
            raise RangeError("frequency points must be strictly increasing")
        if np.any(weights <= 0):
            raise RangeError("quadrature weights must be positive")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def trapezoid(cls, points):
        points = np.asarray(points, dtype=float)
        if points.size < 2:
            raise RangeError("a trapezoid grid needs at least two points")
        h = np.diff(points)
        w = np.zeros_like(points)
        w[:-1] += 0.5 * h
        w[1:] += 0.5 * h
        return cls(points, w)

    @classmethod
    def log_spaced(cls, f_min, f_max, n):
        if not 0 < f_min < f_max:
            raise RangeError(f"need 0 < f_min < f_max, got {f_min}, {f_max}")
        return cls.trapezoid(np.geomspace(f_min, f_max, int(n)))

    def __len__(self):
        return self.points.size


def eigen_snr(h, r_n, rank_tol=RANK_TOL):
    """
    Non-zero eigenvalues of H^H R_n^-1 H, descending.

    Whitens with the Cholesky factor of R_n and takes squared singular
    values, which keeps the result real and non-negative.
    """
    h = np.atleast_2d(np.asarray(h, dtype=complex))
    r_n = np.atleast_2d(np.asarray(r_n, dtype=complex))
    try:
        chol = np.linalg.cholesky(0.5 * (r_n + r_n.conj().T))
    except np.linalg.LinAlgError as exc:
        raise LinearAlgebraError("noise covariance is not positive definite") from exc
    g = checked_solve(chol, h, "Cholesky factor of R_n")
    nu = np.linalg.svd(g, compute_uv=False) ** 2
    if nu.size == 0 or nu[0] == 0:
        return nu[:0]
    return nu[nu > rank_tol * nu[0]]


@dataclass
class WaterfillResult:
    """Joint waterfilling solution on one frequency grid."""

    grid: FrequencyGrid
    eigenvalues: list
    allocation: list
    water_level: float
    spectral_efficiency: np.ndarray
    capacity: float

    @property
    def active_subchannels(self):
        return np.array([int(np.count_nonzero(p > 0)) for p in self.allocation])

    @property
    def total_power(self):
        return math.fsum(w * math.fsum(p) for w, p in zip(self.grid.weights, self.allocation))


def _poured(c, d, w):
    return np.sum(w * np.maximum(0.0, c - d))


def _gaps(nu, ref):
    """1/nu - 1/ref without cancellation; infinite for nu <= 0."""
    safe = np.where(nu > 0, nu, 1.0)
    return np.where(nu > 0, (ref - nu) / (ref * safe), np.inf)


def waterfill(grid, eigensets, power):
    """
    Optimal power allocation under a total band power budget.

    Parameters
    ----------
    grid : FrequencyGrid
    eigensets : sequence of ndarray
        Eigenvalues of H^H R_n^-1 H at each grid point.
    power : float
        Total budget: sum over subchannels of the weighted integral of the
        per-subchannel allocation.

    Returns
    -------
    WaterfillResult
        ``water_level`` is B; active subchannels receive 1/B - 1/nu.
    """
    if not power > 0:
        raise RangeError(f"power must be positive, got {power}")
    if len(eigensets) != len(grid):
        raise RangeError("one eigenvalue set per frequency point is required")
    eigensets = [np.asarray(e, dtype=float) for e in eigensets]
    nu = np.concatenate(eigensets)
    w = np.concatenate([np.full(e.size, wk) for e, wk in zip(eigensets, grid.weights)])
    keep = nu > 0
    nu, w = nu[keep], w[keep]
    if nu.size == 0:
        raise RangeError("no positive eigenvalue anywhere on the grid")

    # The water level is 1/nu_max + c.  Working with c and the gaps
    # d = 1/nu - 1/nu_max >= 0 keeps the allocation c - d accurate when
    # the SNR is low and 1/B sits barely above 1/nu.
    best = np.argmax(nu)
    ref = nu[best]
    d = _gaps(nu, ref)
    # pouring into the best subchannel alone already exceeds the budget at hi
    lo, hi = 0.0, 2.0 * power / w[best]
    if not _poured(hi, d, w) >= power:
        raise ConvergenceError(f"waterfilling bracket [{lo}, {hi}] does not contain the budget")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _poured(mid, d, w) < power:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * hi:
            break
    # exact c for the active set, re-checked until the set is stable
    c = hi
    for _ in range(8):
        active = d < c
        exact = (power + math.fsum(w[active] * d[active])) / math.fsum(w[active])
        if np.array_equal(d < exact, active):
            c = exact
            break
        c = exact
    level = 1.0 / ref + c

    allocation = [np.maximum(0.0, c - _gaps(e, ref)) for e in eigensets]
    # log1p keeps full relative accuracy at low SNR
    se = np.array([math.fsum(np.log1p(p * e)) / math.log(2.0) for p, e in zip(allocation, eigensets)])
    capacity = math.fsum(grid.weights * se)
    return WaterfillResult(grid, eigensets, allocation, 1.0 / level, se, capacity)


@dataclass
class CapacityReport:
    """Monte Carlo summary of waterfilling capacity on one grid."""

    grid: FrequencyGrid
    mean_spectral_efficiency: np.ndarray
    stderr_spectral_efficiency: np.ndarray
    mean_water_level: float
    mean_active_subchannels: np.ndarray
    capacities: np.ndarray
    realizations: list

    @property
    def mean_capacity(self):
        return math.fsum(self.capacities) / self.capacities.size

    @property
    def stderr_capacity(self):
        return _stderr(self.capacities[:, None])[0]


def _stderr(samples):
    n = samples.shape[0]
    if n < 2:
        return np.zeros(samples.shape[1:])
    return samples.std(axis=0, ddof=1) / math.sqrt(n)


def _link_factors(z_t, z_r, z_s, z_l, frequency, link):
    """Left and right factors with H = left @ F @ right, and R_n."""
    tx = psd_sqrt(resistance(z_t)) @ checked_inv(z_t + z_s, "Z_T + Z_S")
    rx = link.pathloss(frequency) * z_l @ checked_solve(z_r + z_l, psd_sqrt(resistance(z_r)), "Z_R + Z_L")
    return rx, tx, noise_covariance(z_r, z_l, link)


def monte_carlo_capacity(
    grid,
    z_t,
    z_r,
    link,
    power,
    n_realizations,
    base_seed,
    z_s=None,
    z_l=None,
    common_scattering=False,
    workers=1,
):
    """
    Average waterfilling capacity over rich-scattering realizations.

    Parameters
    ----------
    grid : FrequencyGrid
    z_t, z_r : ndarray, shape (M, N_t, N_t) and (M, N_r, N_r)
        Transmit and receive array impedances at each grid point.
    link : LinkConfig
    power : float
    n_realizations : int
    base_seed : int
        Key of the counter-based generator; realization r at frequency index
        m always uses the draw keyed by (base_seed, m, r).
    z_s, z_l : ndarray, optional
        Source and load networks, shape (M, N, N).  Default to 50 Ohm sources
        and a per-port conjugate match at the receiver.
    common_scattering : bool
        Reuse the frequency-index-0 draw at every frequency.
    workers : int
        Threads used over realizations; results do not depend on it.
    """
    if n_realizations < 1:
        raise RangeError("n_realizations must be at least 1")
    z_t = np.asarray(z_t, dtype=complex)
    z_r = np.asarray(z_r, dtype=complex)
    m, n_t = z_t.shape[0], z_t.shape[1]
    n_r = z_r.shape[1]
    if z_s is None:
        z_s = np.broadcast_to(50.0 * np.eye(n_t), z_t.shape)
    if z_l is None:
        z_l = np.array([np.diag(np.diag(z).conj()) for z in z_r])
    factors = [_link_factors(z_t[i], z_r[i], z_s[i], z_l[i], grid.points[i], link) for i in range(m)]
    whitened = []
    for rx, tx, r_n in factors:
        try:
            chol = np.linalg.cholesky(r_n)
        except np.linalg.LinAlgError as exc:
            raise LinearAlgebraError("noise covariance is not positive definite") from exc
        whitened.append((checked_solve(chol, rx, "Cholesky factor of R_n"), tx))

    def one(r):
        eig = []
        for i, (left, right) in enumerate(whitened):
            f = scattering_draw((n_r, n_t), base_seed, 0 if common_scattering else i, r)
            nu = np.linalg.svd(left @ f @ right, compute_uv=False) ** 2
            eig.append(nu[nu > RANK_TOL * nu[0]] if nu.size and nu[0] > 0 else nu[:0])
        return waterfill(grid, eig, power)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(one, range(n_realizations)))
    else:
        runs = [one(r) for r in range(n_realizations)]

    se = np.array([run.spectral_efficiency for run in runs])
    active = np.array([run.active_subchannels for run in runs], dtype=float)
    return CapacityReport(
        grid=grid,
        mean_spectral_efficiency=se.mean(axis=0),
        stderr_spectral_efficiency=_stderr(se),
        mean_water_level=math.fsum(run.water_level for run in runs) / len(runs),
        mean_active_subchannels=active.mean(axis=0),
        capacities=np.array([run.capacity for run in runs]),
        realizations=runs,
    )
