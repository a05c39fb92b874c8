"""
Physically consistent MIMO channel and noise model.

The link is a cascade of linear multiports: source network, transmit array,
propagation, receive array, load network.  Propagation is modeled as rich
scattering, an i.i.d. complex Gaussian matrix between the square roots of
the two arrays' radiation resistances.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import PassivityError, RangeError
from .network import checked_inv, checked_solve, psd_sqrt
from .spectral import C0

K_B = 1.380649e-23


@dataclass(frozen=True)
class LinkConfig:
    """
    Propagation and receiver-noise parameters.

    With ``frequency_flat_pathloss`` the path-loss factor is evaluated at
    ``f_ref`` instead of the carrier frequency.
    """

    distance: float = 18.0
    pathloss_exponent: float = 3.5
    frequency_flat_pathloss: bool = True
    f_ref: float = 5e8
    temperature: float = 290.0
    noise_figure: float = 2.0
    lna_input_resistance: float = 50.0
    c: float = C0
    k_b: float = K_B

    def __post_init__(self):
        for name in ("distance", "pathloss_exponent", "temperature", "lna_input_resistance", "f_ref"):
            if not getattr(self, name) > 0:
                raise RangeError(f"{name} must be positive, got {getattr(self, name)}")
        if not self.noise_figure >= 1:
            raise RangeError(f"noise_figure must be >= 1, got {self.noise_figure}")

    def pathloss(self, frequency):
        """Amplitude factor c / (2 pi f d^(alpha/2))."""
        f = self.f_ref if self.frequency_flat_pathloss else frequency
        return self.c / (2 * math.pi * f * self.distance ** (0.5 * self.pathloss_exponent))


def resistance(z):
    """Hermitian part of an impedance matrix (Re{Z} for reciprocal Z)."""
    z = np.asarray(z, dtype=complex)
    return 0.5 * (z + z.conj().T)


def scattering_draw(shape, seed, freq_index=0, realization_index=0):
    """
    i.i.d. CN(0, 1) matrix keyed by (seed, frequency index, realization index).

    Uses the Philox counter-based generator: the seed is the cipher key and
    the two indices occupy the high words of the counter, so every draw is
    reproducible on its own, independent of evaluation order.
    """
    if not 0 <= seed < 2**64:
        raise RangeError(f"seed must be a 64-bit unsigned integer, got {seed}")
    counter = [0, 0, int(freq_index), int(realization_index)]
    rng = np.random.Generator(np.random.Philox(key=int(seed), counter=counter))
    re, im = rng.standard_normal((2, *shape))
    return (re + 1j * im) / math.sqrt(2.0)


def sample_coupling(z_t, z_r, frequency, cfg, seed, freq_index=0, realization_index=0):
    """
    Rich-scattering transfer impedance Z_RT = s Re{Z_R}^1/2 F Re{Z_T}^1/2.

    Returns
    -------
    ndarray
        N_r x N_t complex matrix in Ohms.
    """
    z_t = np.atleast_2d(z_t)
    z_r = np.atleast_2d(z_r)
    f = scattering_draw((z_r.shape[0], z_t.shape[0]), seed, freq_index, realization_index)
    return cfg.pathloss(frequency) * psd_sqrt(resistance(z_r)) @ f @ psd_sqrt(resistance(z_t))


def assemble_channel(z_t, z_r, z_s, z_l, z_rt):
    """Voltage gain H = Z_L (Z_R + Z_L)^-1 Z_RT (Z_T + Z_S)^-1."""
    z_t, z_r, z_s, z_l, z_rt = (np.atleast_2d(np.asarray(m, dtype=complex)) for m in (z_t, z_r, z_s, z_l, z_rt))
    rx = z_l @ checked_solve(z_r + z_l, z_rt, "Z_R + Z_L")
    return rx @ checked_inv(z_t + z_s, "Z_T + Z_S")


def noise_covariance(z_r, z_l, cfg):
    """
    Noise covariance at the loads, V^2/Hz.

    Extrinsic antenna noise filtered by the receive divider plus intrinsic
    LNA noise ``4 k T (N_f - 1) R_in`` on every port.
    """
    z_r = np.atleast_2d(np.asarray(z_r, dtype=complex))
    z_l = np.atleast_2d(np.asarray(z_l, dtype=complex))
    divider = z_l @ checked_inv(z_r + z_l, "Z_R + Z_L")
    kt4 = 4 * cfg.k_b * cfg.temperature
    r = kt4 * divider @ resistance(z_r) @ divider.conj().T
    r = r + kt4 * (cfg.noise_figure - 1) * cfg.lna_input_resistance * np.eye(z_r.shape[0])
    return 0.5 * (r + r.conj().T)


def conjugate_match_load(z_r):
    """Per-port conjugate-match load, ignoring mutual coupling."""
    d = np.diag(np.atleast_2d(z_r))
    if np.any(d.real <= 0):
        raise PassivityError(f"port resistances must be positive for a conjugate match, got {d.real}")
    return np.diag(d.conj())
