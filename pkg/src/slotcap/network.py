"""
Multiport impedance-matrix algebra.

Port reduction of the edge-port-augmented slot matrix to a finite slot,
Hermitian PSD square roots for the rich-scattering coupling, and the Chu
equivalent-circuit array used as a wideband reference.
"""

from dataclasses import dataclass

import numpy as np

from .errors import LinearAlgebraError, PassivityError, RangeError
from .spectral import C0, ZETA0

COND_LIMIT = 1e12
CLAMP = 1e-10


def checked_solve(a, b, what="matrix"):
    """Solve ``a x = b`` with LU pivoting, refusing ill-conditioned systems."""
    a = np.asarray(a, dtype=complex)
    cond = np.linalg.cond(a)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise LinearAlgebraError(f"{what} is singular or ill-conditioned (cond = {cond:.3g})", condition=cond)
    return np.linalg.solve(a, b)


def checked_inv(a, what="matrix"):
    a = np.asarray(a, dtype=complex)
    return checked_solve(a, np.eye(a.shape[0], dtype=complex), what)


@dataclass(frozen=True)
class Short:
    pass


@dataclass(frozen=True)
class Open:
    resistance: float = 1e5

    def __post_init__(self):
        if not self.resistance > 0:
            raise RangeError(f"open-circuit resistance must be positive, got {self.resistance}")


@dataclass(frozen=True)
class Impedance:
    value: complex


def load_matrix(loads):
    """Diagonal load impedance matrix from a sequence of Short/Open/Impedance."""
    diag = []
    for load in loads:
        if isinstance(load, Short):
            diag.append(0.0)
        elif isinstance(load, Open):
            diag.append(load.resistance)
        elif isinstance(load, Impedance):
            diag.append(load.value)
        else:
            raise TypeError(f"unknown termination {load!r}")
    return np.diag(np.asarray(diag, dtype=complex))


def _interior(n, edge_ports):
    edges = {int(p) % n for p in edge_ports}
    if len(edges) != len(tuple(edge_ports)):
        raise ValueError(f"duplicate edge ports {edge_ports}")
    return np.array([i for i in range(n) if i not in edges])


def truncate_by_termination(z_inf, edge_ports=(0, -1), r_open=1e5):
    """
    Finite-slot impedance by loading the edge ports.

    The edge ports are shorted and every other port is loaded with
    ``r_open`` standing in for an open circuit.  Returns the interior block
    of ``Z_L (Z + Z_L)^-1 Z``.
    """
    z_inf = np.asarray(z_inf, dtype=complex)
    n = z_inf.shape[0]
    interior = _interior(n, edge_ports)
    loads = [Open(r_open)] * n
    for p in edge_ports:
        loads[int(p) % n] = Short()
    z_l = load_matrix(loads)
    loaded = z_l @ checked_solve(z_inf + z_l, z_inf, "Z + Z_L")
    return loaded[np.ix_(interior, interior)]


def truncate_by_admittance(z_inf, edge_ports=(0, -1)):
    """
    Finite-slot impedance with the edge ports exactly short-circuited.

    Inverts to the admittance matrix, deletes the edge rows and columns and
    inverts back.
    """
    z_inf = np.asarray(z_inf, dtype=complex)
    interior = _interior(z_inf.shape[0], edge_ports)
    y = checked_inv(z_inf, "Z")
    return checked_inv(y[np.ix_(interior, interior)], "interior admittance block")


def psd_sqrt(a):
    """
    Hermitian PSD square root.

    Eigenvalues down to ``-1e-10 * ||a||`` are clamped to zero; anything more
    negative is reported as a passivity violation.
    """
    a = np.asarray(a, dtype=complex)
    norm = np.linalg.norm(a, 2)
    if np.linalg.norm(a - a.conj().T) > 1e-10 * max(norm, np.finfo(float).tiny):
        raise ValueError("matrix is not Hermitian")
    a = 0.5 * (a + a.conj().T)
    w, u = np.linalg.eigh(a)
    if w.size and w.min() < -CLAMP * norm:
        raise PassivityError(
            f"eigenvalue {w.min():.6g} below clamp threshold {-CLAMP * norm:.3g}; "
            "resistance matrix is not passive"
        )
    root = np.sqrt(np.clip(w, 0.0, None))
    return (u * root) @ u.conj().T


def chu_impedance(frequency, radius):
    """First-order Chu TM1 equivalent-circuit impedance."""
    ka = 2 * np.pi * np.asarray(frequency, dtype=float) * radius / C0
    return ZETA0 * (1.0 / (1j * ka) + 1j * ka / (1.0 + 1j * ka))


def chu_array_impedance(frequency, radius, count):
    """Uncoupled array of ``count`` Chu antennas of enclosing radius ``radius``."""
    if not frequency > 0:
        raise RangeError(f"frequency must be positive, got {frequency}")
    if not radius > 0:
        raise RangeError(f"radius must be positive, got {radius}")
    return chu_impedance(frequency, radius) * np.eye(int(count), dtype=complex)
